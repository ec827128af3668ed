"""Tests for the closed-form polynomial emitters."""

import time

import pytest

from app.errors import EnumerationCapError, InvalidInputError, NotSmoothError
from app.hpoly import (
    ascent_set,
    compute_embedding,
    eulerian,
    hpoly_from_cells,
    length_poly,
    permutahedron_f_vector,
    permutahedron_h,
    poly_report,
    rank2_h,
    rank2_n,
    simple_embedding_h,
    toric_poincare,
    wonderful_h,
)
from app.models import EmbeddingSpec
from app.poly import IntPoly
from app.rootsys import build_root_system
from app.smooth import enumerate_smooth_subsets
from app.weyl import enumerate_WJ

t = IntPoly.monomial(1)

# every type of rank <= 5
RANK_FIVE_TYPES = ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "B5", "C3", "C4", "C5", "D4", "D5", "F4", "G2"]


def _product(factors):
    total = IntPoly.one()
    for f in factors:
        total = total * f
    return total


def _h(report):
    return IntPoly.from_payload(report.h)


def _factor(report, k):
    return IntPoly.from_payload(report.factors[k])


def test_length_poly_of_flag_variety(a3):
    assert length_poly(a3) == IntPoly.from_coefficients([1, 3, 5, 6, 5, 3, 1])
    assert length_poly(a3, {1, 2}) == 1 + t + t**2 + t**3


def test_eulerian():
    assert eulerian(1) == 1
    assert eulerian(2) == 1 + t
    assert eulerian(4) == 1 + 11 * t + 11 * t**2 + t**3
    assert eulerian(6)(1) == 720


@pytest.mark.parametrize("n", range(1, 9))
def test_eulerian_equals_permutahedron_h(n):
    """Each face (sigma, A) contributes (t - 1)^|A|, and these sum to t^a(sigma)."""
    assert eulerian(n) == permutahedron_h(n)


def test_permutahedron_f_vector():
    """The hexagon and the truncated octahedron."""
    assert permutahedron_f_vector(3) == [6, 6, 1]
    assert permutahedron_f_vector(4) == [24, 36, 14, 1]


def test_permutation_caps(caps):
    caps(max_permutation_n=5, max_permutahedron_n=4)
    with pytest.raises(EnumerationCapError):
        eulerian(6)
    with pytest.raises(EnumerationCapError):
        permutahedron_h(5)
    with pytest.raises(InvalidInputError):
        eulerian(0)


def test_monoid_cells():
    """The seven B x B-orbits of M_2 sum to t^4."""
    cells = [(2, 1), (2, 2), (1, 1), (1, 1), (1, 0), (1, 2), (0, 0)]
    assert hpoly_from_cells(cells) == t**4


def test_wonderful_a2():
    """PGL_3: [1 + 2t^2 + 2t^3 + t^5][1 + 2t + 2t^2 + t^3]."""
    a2 = build_root_system("A2")
    report = wonderful_h(a2)
    assert _factor(report, 0) == 1 + 2 * t**2 + 2 * t**3 + t**5
    assert _factor(report, 1) == 1 + 2 * t + 2 * t**2 + t**3
    assert _h(report) == _product([_factor(report, 0), _factor(report, 1)])
    assert _h(report) == _h(simple_embedding_h(a2, ()))
    assert _h(report) == _h(rank2_h("I", 3, 1))
    assert report.euler_characteristic == 36
    assert report.dimension == 8
    assert IntPoly.from_payload(report.poincare) == _h(report).substitute_square()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_projective_space_family(n):
    """J = {s2, ..., sn} in A_n gives 1 + t + ... + t^((n+1)^2 - 1)."""
    rs = build_root_system(f"A{n}")
    report = simple_embedding_h(rs, range(2, n + 1))
    assert _h(report) == IntPoly.geometric(0, (n + 1) ** 2 - 1)
    assert report.warnings == []


@pytest.mark.parametrize("l", [2, 3, 4])
def test_type_b_family(l):
    """J = {s1, ..., s(l-1)} in B_l: prod (1 + t^(k+l)) * prod (1 + t^k), toric part (1 + t^2)^l."""
    rs = build_root_system(f"B{l}")
    J = range(1, l)
    report = simple_embedding_h(rs, J)
    assert _factor(report, 0) == _product(1 + t ** (k + l) for k in range(1, l + 1))
    assert _factor(report, 1) == _product(1 + t**k for k in range(1, l + 1))
    assert toric_poincare(rs, J) == (1 + t**2) ** l


@pytest.mark.parametrize("n", [3, 4, 5])
def test_toric_type_a_family(n):
    """J = {s3, ..., sn}: t^(2n) + (n + 2)(t^(2(n-1)) + ... + t^2) + 1."""
    rs = build_root_system(f"A{n}")
    expected = t ** (2 * n) + (n + 2) * IntPoly.geometric(1, n - 1).substitute_square() + 1
    assert toric_poincare(rs, range(3, n + 1)) == expected


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_toric_permutahedral_variety(n):
    """J empty in A_(n-1): the Eulerian polynomial at t^2."""
    rs = build_root_system(f"A{n - 1}")
    assert toric_poincare(rs, ()) == eulerian(n).substitute_square()


@pytest.mark.parametrize("n", [3, 4])
def test_two_projective_factors_family(n):
    """J = {s3, ..., sn} in A_n, exponents n - p + n(n - q) + [p < q] over W^J = {a_p b_q}."""
    rs = build_root_system(f"A{n}")
    report = simple_embedding_h(rs, range(3, n + 1))
    first = IntPoly.from_exponents(
        [n - p + n * (n - q) + 1 for q in range(1, n + 1) for p in range(q)]
        + [n - p + n * (n - q) for q in range(1, n + 1) for p in range(q, n + 1)]
    )
    second = sum((i * (t ** (i - 1) + t ** (2 * n - i)) for i in range(1, n + 1)), IntPoly.zero())
    assert _factor(report, 0) == first
    assert _factor(report, 1) == second
    assert _h(report) == first * second


@pytest.mark.parametrize("type_text", RANK_FIVE_TYPES)
def test_structural_invariants(type_text):
    """Palindromic, degree |roots| + |S|, H(1) = |W^J|^2 for every smooth J."""
    rs = build_root_system(type_text)
    for J in enumerate_smooth_subsets(rs):
        report = simple_embedding_h(rs, J)
        size = len(enumerate_WJ(rs, J))
        assert report.palindromic
        assert report.dimension == rs.num_roots + rs.rank
        assert report.euler_characteristic == size**2
        assert report.warnings == []
        assert not _h(report).has_negative_coefficient()
        assert _factor(report, 0).is_palindromic()
        assert _factor(report, 1) == length_poly(rs, J)
        assert toric_poincare(rs, J)(1) == size


def test_not_smooth_rejected(a3):
    with pytest.raises(NotSmoothError) as exc:
        simple_embedding_h(a3, {2})
    assert exc.value.verdict is not None
    assert not exc.value.verdict.smooth
    with pytest.raises(NotSmoothError):
        toric_poincare(a3, {1, 3})


@pytest.mark.parametrize("case", ["I", "II", "III"])
@pytest.mark.parametrize("N", [3, 4, 6])
def test_rank_two_degree(case, N):
    for k in range(1 if case == "I" else 0, 6):
        report = rank2_h(case, N, k)
        assert report.dimension == 2 * N + 2
        assert report.palindromic
        assert report.warnings == []
        assert report.parameters == {"N": N, "k": k}


def test_rank_two_n():
    assert [rank2_n(x) for x in ("A2", "B2", "C2", "G2")] == [3, 4, 4, 6]
    assert rank2_n(build_root_system("G2").cartan_type) == 6
    with pytest.raises(InvalidInputError):
        rank2_n("A3")


@pytest.mark.parametrize("case, N, k", [("IV", 3, 1), ("I", 5, 1), ("I", 3, 0), ("II", 4, -1)])
def test_rank_two_rejects(case, N, k):
    with pytest.raises(InvalidInputError):
        rank2_h(case, N, k)


def test_compute_embedding():
    simple = compute_embedding(EmbeddingSpec(kind="simple", cartan_type="A2", J=["s2"]))
    assert _h(simple) == IntPoly.geometric(0, 8)
    wonderful = compute_embedding(EmbeddingSpec(kind="wonderful", cartan_type="A2"))
    rank2 = compute_embedding(EmbeddingSpec(kind="rank2", case="I", n_long=3, k=1))
    assert _h(wonderful) == _h(rank2)
    with pytest.raises(InvalidInputError):
        compute_embedding(EmbeddingSpec(kind="rank2", case="I", n_long=3))
    with pytest.raises(InvalidInputError):
        compute_embedding(EmbeddingSpec(kind="wonderful"))
    with pytest.raises(InvalidInputError):
        compute_embedding(EmbeddingSpec(kind="toroidal", cartan_type="A2"))


def test_poly_report():
    report = poly_report("eulerian", eulerian(3), parameters={"n": 3}, poincare=True)
    assert IntPoly.from_payload(report.poly) == 1 + 4 * t**2 + t**4
    assert report.poincare
    assert report.value_at_one == 6
    assert report.degree == 4


@pytest.mark.perf
def test_d5_simple_embeddings_time():
    d5 = build_root_system("D5")
    started = time.perf_counter()
    reports = [simple_embedding_h(d5, J) for J in enumerate_smooth_subsets(d5)]
    assert time.perf_counter() - started < 10
    assert len(reports) == 7
    assert all(r.dimension == 45 for r in reports)


def test_ascent_sets():
    assert ascent_set((1, 2, 3, 4)) == {1, 2, 3}
    assert ascent_set((1, 3, 2, 4)) == {1, 3}
    assert ascent_set((4, 3, 2, 1)) == frozenset()
