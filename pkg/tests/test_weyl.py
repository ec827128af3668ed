"""Tests for Weyl group elements, parabolic quotients and the Bruhat order."""

import time
from itertools import combinations

import numpy as np
import pytest

from app.errors import EnumerationCapError, InvalidInputError
from app.rootsys import build_root_system
from app.weyl import (
    WeylElt,
    batch_lengths,
    batch_min_coset_reps,
    bruhat_leq,
    enumerate_parabolic_subgroup,
    enumerate_W,
    enumerate_WJ,
    format_word,
    from_word,
    identity,
    is_min_coset_rep,
    length_histogram,
    lower_interval,
    min_coset_rep,
    parse_word,
    quotient_size,
    simple_reflection,
)


def test_a3_length_histogram(a3):
    """S_4 has length distribution 1, 3, 5, 6, 5, 3, 1."""
    W = enumerate_W(a3)
    assert len(W) == 24
    assert length_histogram(W) == [1, 3, 5, 6, 5, 3, 1]
    assert enumerate_WJ(a3).length_poly().coefficients() == [1, 3, 5, 6, 5, 3, 1]


@pytest.mark.parametrize("type_text, order", [("B3", 48), ("C3", 48), ("D4", 192), ("G2", 12), ("F4", 1152)])
def test_group_orders(type_text, order):
    rs = build_root_system(type_text)
    W = enumerate_W(rs)
    assert len(W) == order
    assert len(set(W)) == order
    assert W[-1].length == rs.num_positive_roots


def test_longest_element_negates_positive_roots(b3):
    w0 = enumerate_WJ(b3).longest
    assert ((w0.matrix @ b3.positive_matrix) < 0).any(axis=0).all()
    assert w0.right_descents() == frozenset(b3.nodes)


def test_words(a2):
    w = from_word(a2, "s1.s2.s1")
    assert w.length == 3
    assert w == from_word(a2, (2, 1, 2))
    assert from_word(a2, "s1.s1").is_identity
    assert identity(a2).word_str() == "1"
    assert format_word((2, 1)) == "s2.s1"
    assert parse_word("2.1", 2) == (2, 1)
    assert parse_word("1", 2) == ()


def test_bad_words_rejected(a2):
    with pytest.raises(InvalidInputError):
        parse_word("s3", 2)
    with pytest.raises(InvalidInputError):
        from_word(a2, (1, 3))
    with pytest.raises(InvalidInputError):
        simple_reflection(a2, 0)


def test_reduced_words_rebuild_the_element(b3):
    """Every element is the product of its reduced word, whose length is l(w)."""
    for w in enumerate_W(b3):
        word = w.reduced_word()
        assert len(word) == w.length
        assert from_word(b3, word) == w


def test_length_from_inversions(b3):
    """Fresh length computation matches the length tracked through times_simple."""
    for w in enumerate_W(b3):
        for i in b3.nodes:
            ws = w.times_simple(i)
            fresh = WeylElt(b3, ws.matrix)
            assert ws.length == fresh.length
            assert (fresh.length < w.length) == w.is_right_descent(i)


def test_inverse_and_products(b3):
    W = enumerate_W(b3)
    e = identity(b3)
    for w in W[::5]:
        assert (w * w.inverse()) == e
        assert w.inverse().length == w.length
    u, v = W[7], W[30]
    assert (u * v).matrix.tolist() == (u.matrix @ v.matrix).tolist()


def test_apply(a2):
    s1 = simple_reflection(a2, 1)
    assert s1.apply((1, 0)).tolist() == [-1, 0]
    assert s1.apply((0, 1)).tolist() == [1, 1]
    assert s1.images == [[-1, 0], [1, 1]]


def test_quotient_of_a3():
    """W^J for J = {s1, s2} in A_3 is a chain of four elements."""
    a3 = build_root_system("A3")
    quotient = enumerate_WJ(a3, {1, 2})
    assert len(quotient) == 4
    assert quotient.histogram == [1, 1, 1, 1]
    assert quotient.longest.word_str() == "s1.s2.s3"


@pytest.mark.parametrize(
    "type_text, J, size",
    [("B3", {1, 2}, 8), ("D4", {1}, 96), ("E6", {1, 2, 3, 4, 5}, 72), ("E7", {1, 2, 3, 4, 5, 6}, 576)],
)
def test_quotient_sizes(type_text, J, size):
    rs = build_root_system(type_text)
    quotient = enumerate_WJ(rs, J)
    assert len(quotient) == size == quotient_size(rs, J)
    assert all(is_min_coset_rep(w, J) for w in quotient)


def test_quotient_lookup(a3):
    quotient = enumerate_WJ(a3, {1})
    assert from_word(a3, "s1.s2") in quotient
    assert from_word(a3, "s2.s1") not in quotient
    assert quotient.index[quotient.elements[5]] == 5


def test_min_coset_rep(b3):
    """Every w lies above a unique element of W^J in its coset."""
    J = {1, 3}
    quotient = enumerate_WJ(b3, J)
    for w in enumerate_W(b3):
        rep = min_coset_rep(w, J)
        assert rep in quotient
        assert rep.length <= w.length
        assert (rep.inverse() * w) in set(enumerate_parabolic_subgroup(b3, J))


def test_batched_helpers_match_single_elements(b3):
    W = enumerate_W(b3)
    stack = np.stack([w.matrix for w in W])
    assert batch_lengths(b3, stack).tolist() == [w.length for w in W]
    projected = batch_min_coset_reps(b3, stack, {2})
    assert [WeylElt(b3, m) for m in projected] == [min_coset_rep(w, {2}) for w in W]


def test_parabolic_subgroup(a3):
    assert len(enumerate_parabolic_subgroup(a3, {1, 3})) == 4
    assert length_histogram(enumerate_parabolic_subgroup(a3, {1, 2})) == [1, 2, 2, 1]
    assert enumerate_parabolic_subgroup(a3, ()) == [identity(a3)]


def test_bruhat_order(a2):
    w0 = from_word(a2, "s1.s2.s1")
    s1, s2 = simple_reflection(a2, 1), simple_reflection(a2, 2)
    assert bruhat_leq(s1, w0)
    assert bruhat_leq(identity(a2), s2)
    assert not bruhat_leq(s1, s2)
    assert not bruhat_leq(w0, s1)
    assert bruhat_leq(s1, from_word(a2, "s2.s1"))
    assert not bruhat_leq(from_word(a2, "s1.s2"), from_word(a2, "s2.s1"))


def test_lower_interval_of_longest_element(a3):
    w0 = enumerate_W(a3)[-1]
    assert len(lower_interval(w0)) == 24
    assert len(lower_interval(from_word(a3, "s1.s2.s1"))) == 6


def test_enumeration_cap(caps):
    caps(max_elements=100)
    b4 = build_root_system("B4")
    with pytest.raises(EnumerationCapError) as exc:
        enumerate_W(b4)
    assert exc.value.requested == 384
    assert exc.value.cap == 100
    assert len(enumerate_WJ(b4, {1, 2, 3})) == 16


def test_bruhat_cap(caps):
    caps(max_bruhat_group=10)
    a3 = build_root_system("A3")
    with pytest.raises(EnumerationCapError):
        bruhat_leq(identity(a3), simple_reflection(a3, 1))


@pytest.mark.perf
def test_e6_enumeration_time():
    e6 = build_root_system("E6")
    started = time.perf_counter()
    W = enumerate_W(e6)
    histogram = length_histogram(W)
    assert time.perf_counter() - started < 5
    assert len(W) == 51840
    assert len(histogram) == 37
    assert sum(histogram) == 51840


@pytest.mark.perf
def test_e7_quotient_time():
    e7 = build_root_system("E7")
    started = time.perf_counter()
    quotient = enumerate_WJ(e7, {1, 2, 3, 4, 5, 6})
    assert time.perf_counter() - started < 1
    assert len(quotient) == 576


# types small enough for exhaustive pairwise checks
PAIRWISE_TYPES = ["A2", "A3", "B2", "B3", "G2"]


def _proper_subsets(rs):
    return [frozenset(J) for k in range(rs.rank) for J in combinations(rs.nodes, k)]


def test_quotient_of_a2(a2):
    """W^J for J = {s2} is {1, s1, s2 s1}, with longest element s2 s1."""
    quotient = enumerate_WJ(a2, {2})
    assert {w.word_str() for w in quotient} == {"1", "s1", "s2.s1"}
    assert quotient.histogram == [1, 1, 1]
    assert quotient.longest == from_word(a2, "s2.s1")
    assert min_coset_rep(from_word(a2, "s1.s2.s1"), {2}) == from_word(a2, "s2.s1")
    assert min_coset_rep(from_word(a2, "s1.s2"), {2}) == from_word(a2, "s1")
    assert min_coset_rep(from_word(a2, "s1"), {2}) == from_word(a2, "s1")


@pytest.mark.parametrize("type_text", PAIRWISE_TYPES)
def test_length_is_subadditive_with_parity(type_text):
    rs = build_root_system(type_text)
    W = enumerate_W(rs)
    for u in W:
        for v in W:
            length = (u * v).length
            assert length <= u.length + v.length
            assert (u.length + v.length - length) % 2 == 0


@pytest.mark.parametrize("type_text", PAIRWISE_TYPES + ["C3", "D4", "F4"])
def test_quotients_are_the_minimal_coset_representatives(type_text):
    """W^J is exactly the set of projections of W, and its length polynomial is palindromic."""
    rs = build_root_system(type_text)
    W = enumerate_W(rs)
    for J in _proper_subsets(rs):
        quotient = enumerate_WJ(rs, J)
        assert set(quotient) == {min_coset_rep(w, J) for w in W}
        assert quotient.length_poly().is_palindromic()
        longest_in_J = enumerate_parabolic_subgroup(rs, J)[-1]
        assert quotient.longest.length == rs.num_positive_roots - longest_in_J.length


@pytest.mark.parametrize("type_text", ["A2", "A3", "B2", "G2"])
def test_bruhat_is_a_graded_partial_order(type_text):
    rs = build_root_system(type_text)
    W = enumerate_W(rs)
    leq = {(u, v): bruhat_leq(u, v) for u in W for v in W}
    for u in W:
        assert leq[u, u]
        for v in W:
            if leq[u, v] and leq[v, u]:
                assert u == v
            if leq[u, v] and u != v:
                assert u.length < v.length
            if leq[u, v]:
                assert all(leq[u, x] for x in W if leq[v, x])
