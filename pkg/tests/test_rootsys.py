"""Tests for Cartan types, root systems and Dynkin graphs."""

import numpy as np
import pytest

from app.errors import InvalidInputError
from app.rootsys import (
    build_root_system,
    classify_component,
    format_subset,
    parse_cartan_type,
    parse_subset,
    positive_root_count,
    weyl_group_order,
)


def test_parse_cartan_type():
    ct = parse_cartan_type(" b_4 ")
    assert (ct.family, ct.rank) == ("B", 4)
    assert str(parse_cartan_type("e7")) == "E7"


@pytest.mark.parametrize("text", ["C2", "D3", "E5", "F3", "G3", "A0", "H3", "A", "7"])
def test_parse_cartan_type_rejects(text):
    with pytest.raises(InvalidInputError):
        parse_cartan_type(text)


def test_parse_subset():
    assert parse_subset("s1, 3", 4) == frozenset({1, 3})
    assert parse_subset("", 4) == frozenset()
    assert parse_subset("-", 4) == frozenset()
    assert format_subset({3, 1}) == "s1,s3"
    with pytest.raises(InvalidInputError):
        parse_subset("s5", 4)
    with pytest.raises(InvalidInputError):
        parse_subset("t1", 4)


@pytest.mark.parametrize(
    "type_text, order, positive",
    [
        ("A1", 2, 1),
        ("A3", 24, 6),
        ("B3", 48, 9),
        ("C3", 48, 9),
        ("D4", 192, 12),
        ("G2", 12, 6),
        ("F4", 1152, 24),
        ("E6", 51840, 36),
        ("E7", 2903040, 63),
        ("E8", 696729600, 120),
    ],
)
def test_root_counts(type_text, order, positive):
    """The reflection closure finds every root."""
    rs = build_root_system(type_text)
    assert weyl_group_order(rs.cartan_type) == order
    assert positive_root_count(rs.cartan_type) == positive
    assert rs.num_positive_roots == positive
    assert rs.num_roots == 2 * positive


def test_positive_roots_sorted_by_height(b3, g2):
    """Simple roots first, the highest root last."""
    assert b3.positive_roots[:3].sum(axis=1).tolist() == [1, 1, 1]
    assert b3.positive_roots[-1].tolist() == [1, 2, 2]
    assert g2.positive_roots[-1].tolist() == [3, 2]
    assert build_root_system("C3").positive_roots[-1].tolist() == [2, 2, 1]
    heights = [b3.height(r) for r in b3.positive_roots]
    assert heights == sorted(heights)


def test_cartan_conventions(b3):
    """B_n has alpha_n short, so its row carries the -2."""
    assert b3.cartan_matrix.tolist() == [[2, -1, 0], [-1, 2, -1], [0, -2, 2]]
    assert build_root_system("C3").cartan_matrix.tolist() == [[2, -1, 0], [-1, 2, -2], [0, -1, 2]]
    assert build_root_system("G2").cartan_matrix.tolist() == [[2, -3], [-1, 2]]


def test_reflections_are_involutions(b3):
    """s_i(alpha_i) = -alpha_i and s_i^2 = 1."""
    for i in b3.nodes:
        r = b3.reflections[i - 1]
        assert (r @ r == np.eye(3, dtype=int)).all()
        assert b3.reflect(i, b3.simple_roots[i - 1]).tolist() == (-b3.simple_roots[i - 1]).tolist()


def test_is_root(b3):
    assert b3.is_root((1, 2, 2))
    assert b3.is_root((0, -1, -2))
    assert not b3.is_root((2, 1, 0))


def test_dynkin_edges():
    assert build_root_system("B3").dynkin.edges == [(1, 2, 1), (2, 3, 2)]
    assert build_root_system("G2").dynkin.edges == [(1, 2, 3)]
    assert build_root_system("D4").dynkin.edges == [(1, 2, 1), (2, 3, 1), (2, 4, 1)]
    assert build_root_system("E6").dynkin.edges == [(1, 2, 1), (2, 3, 1), (3, 4, 1), (3, 6, 1), (4, 5, 1)]
    assert build_root_system("E8").dynkin.neighbors(5) == [4, 6, 8]


def test_commutes(a3):
    assert a3.dynkin.commutes(1, 3)
    assert not a3.dynkin.commutes(1, 2)
    assert a3.dynkin.commutes(2, 2)


def test_components():
    """Components of J with their induced type and end nodes."""
    comps = build_root_system("A5").components({1, 2, 4})
    assert [c.nodes for c in comps] == [(1, 2), (4,)]
    assert [str(c.cartan_type) for c in comps] == ["A2", "A1"]
    assert comps[0].ends == (1, 2)

    (middle,) = build_root_system("D5").components({3, 4, 5})
    assert str(middle.cartan_type) == "A3"
    assert middle.ends == (4, 5)
    assert middle.is_type_a

    (double,) = build_root_system("B3").components({2, 3})
    assert str(double.cartan_type) == "B2"
    assert not double.simply_laced
    assert not double.is_type_a

    assert build_root_system("A3").components(()) == []


@pytest.mark.parametrize(
    "type_text, J, expected, shape",
    [
        ("B4", {2, 3, 4}, "B3", "path"),
        ("C4", {2, 3, 4}, "C3", "path"),
        ("F4", {2, 3}, "B2", "path"),
        ("F4", {1, 2, 3, 4}, "F4", "path"),
        ("G2", {1, 2}, "G2", "path"),
        ("E6", {1, 2, 3, 4, 5, 6}, "E6", "branching"),
        ("E7", {3, 4, 5, 7}, "D4", "branching"),
        ("E8", {2, 3, 4, 5, 6, 7, 8}, "E7", "branching"),
        ("E8", {3, 4, 5, 6, 7, 8}, "E6", "branching"),
        ("D6", {2, 3, 4, 5, 6}, "D5", "branching"),
    ],
)
def test_component_types(type_text, J, expected, shape):
    (comp,) = build_root_system(type_text).components(J)
    assert str(comp.cartan_type) == expected
    assert comp.shape == shape


def test_classify_whole_diagram():
    ct, shape = classify_component(build_root_system("D4").cartan_matrix)
    assert (str(ct), shape) == ("D4", "branching")


def test_components_reject_foreign_nodes(a3):
    with pytest.raises(InvalidInputError):
        a3.components({4})
    with pytest.raises(InvalidInputError):
        a3.check_subset({0, 1})


def test_parabolic_order(a3):
    assert a3.parabolic_order({1, 2}) == 6
    assert a3.parabolic_order({1, 3}) == 4
    assert build_root_system("E7").parabolic_order({1, 2, 3, 4, 5, 6}) == 5040


def test_root_systems_are_cached():
    assert build_root_system("A3") is build_root_system(parse_cartan_type("a3"))
