"""Closed-form polynomial emitters: length, Eulerian, toric, simple, wonderful and rank-two H-polynomials.

Every H-polynomial comes back as an ``HPolyReport`` carrying its factors, its Poincare form
H(t^2), the Euler characteristic H(1) and the dimension deg H.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from itertools import permutations
from math import comb
from typing import Optional

from app.config import get_settings
from app.descent import build_descent_system, nu_stats
from app.errors import EnumerationCapError, InvalidInputError, NotSmoothError
from app.models import CartanType, EmbeddingSpec, HPolyReport, PolyReport
from app.poly import IntPoly, orbit_term
from app.rootsys import (
    RootSystem,
    Subset,
    build_root_system,
    format_subset,
    parse_subset,
    split_cartan_type,
    subset_names,
)
from app.smooth import is_combinatorially_smooth
from app.weyl import enumerate_W, enumerate_WJ

logger = logging.getLogger(__name__)

RANK2_CASES = ("I", "II", "III")
RANK2_N = {"A": 3, "B": 4, "C": 4, "G": 6}


# -- length and permutation statistics


def length_poly(rs: RootSystem, J: Iterable[int] = ()) -> IntPoly:
    """Sum over W^J of t^l(w); P_W for J empty."""
    return enumerate_WJ(rs, J).length_poly()


def ascent_set(sigma: Sequence[int]) -> frozenset[int]:
    """Positions i with sigma(i) < sigma(i+1), 1-based."""
    return frozenset(i + 1 for i in range(len(sigma) - 1) if sigma[i] < sigma[i + 1])


def _check_permutation_n(n: int, cap: int, setting: str) -> None:
    if n < 1:
        raise InvalidInputError(f"n must be a positive integer, got {n}.")
    if n > cap:
        raise EnumerationCapError(f"permutations of {n} letters", n, cap, setting)


def eulerian(n: int) -> IntPoly:
    """Sum over S_n of t^a(sigma), a = number of ascents.

    Built by inserting n into permutations of n - 1 letters: the insertion keeps the
    ascent count in a(sigma) + 1 slots and raises it by one in the other n - 1 - a(sigma).
    """
    _check_permutation_n(n, get_settings().max_permutation_n, "HPOLY_MAX_PERMUTATION_N")
    counts = [1]
    for m in range(2, n + 1):
        grown = [0] * m
        for a, c in enumerate(counts):
            grown[a] += (a + 1) * c
            grown[a + 1] += (m - 1 - a) * c
        counts = grown
    return IntPoly.from_coefficients(counts)


def _ascent_counts(n: int) -> Counter[int]:
    return Counter(len(ascent_set(sigma)) for sigma in permutations(range(1, n + 1)))


def permutahedron_h(n: int) -> IntPoly:
    """h-polynomial from the faces {(sigma, A) : A a subset of A(sigma)}, each contributing (t - 1)^|A|."""
    _check_permutation_n(n, get_settings().max_permutahedron_n, "HPOLY_MAX_PERMUTAHEDRON_N")
    h = IntPoly.zero()
    for a, count in sorted(_ascent_counts(n).items()):
        for d in range(a + 1):
            h = h + count * comb(a, d) * orbit_term(d, 0)
    return h


def permutahedron_f_vector(n: int) -> list[int]:
    """Number of faces of the permutahedron by dimension: f_d = sum over sigma of C(a(sigma), d)."""
    _check_permutation_n(n, get_settings().max_permutahedron_n, "HPOLY_MAX_PERMUTAHEDRON_N")
    counts = _ascent_counts(n)
    return [sum(c * comb(a, d) for a, c in counts.items()) for d in range(n)]


# -- toric varieties X(J)


def _require_smooth(rs: RootSystem, J: Subset) -> None:
    verdict = is_combinatorially_smooth(rs, J)
    if not verdict.smooth:
        reasons = "; ".join(v.message for v in verdict.violations)
        raise NotSmoothError(
            f"J={{{format_subset(J)}}} is not combinatorially smooth in {rs.cartan_type}: {reasons}", verdict
        )


def toric_poincare(rs: RootSystem, J: Iterable[int]) -> IntPoly:
    """Sum over W^J of t^(2 nu_plain(w))."""
    J = rs.check_subset(J)
    _require_smooth(rs, J)
    poset = nu_stats(build_descent_system(rs, J))
    return IntPoly.from_exponents(2 * nu for nu in poset.nu_plain)


# -- H-polynomials


def _hpoly_report(
    kind: str,
    formula: str,
    factors: list[IntPoly],
    cartan_type: Optional[CartanType] = None,
    J: Iterable[int] = (),
    parameters: Optional[dict[str, int]] = None,
) -> HPolyReport:
    h = IntPoly.one()
    for f in factors:
        h = h * f
    warnings = []
    if h.has_negative_coefficient():
        warnings.append(f"H has a negative coefficient: {h}")
        logger.warning(f"{formula}: negative coefficient in {h}")
    return HPolyReport(
        kind=kind,
        formula=formula,
        cartan_type=None if cartan_type is None else str(cartan_type),
        J=subset_names(J),
        parameters=parameters or {},
        h=h.to_payload(),
        poincare=h.substitute_square().to_payload(),
        factors=[f.to_payload() for f in factors],
        euler_characteristic=h.evaluate(1),
        dimension=h.degree,
        palindromic=h.is_palindromic(),
        warnings=warnings,
    )


def simple_embedding_h(rs: RootSystem, J: Iterable[int]) -> HPolyReport:
    """(sum over W^J of t^(l(w0) - l(w) + nu(w))) * (sum over W^J of t^l(v)), nu weighted by delta."""
    J = rs.check_subset(J)
    _require_smooth(rs, J)
    ds = build_descent_system(rs, J)
    poset = nu_stats(ds)
    quotient = ds.quotient
    top = quotient.max_length
    first = IntPoly.from_exponents(top - w.length + poset.weighted(w) for w in quotient.elements)
    second = quotient.length_poly()
    report = _hpoly_report("simple", "simple_embedding", [first, second], rs.cartan_type, J)

    expected_degree = rs.num_roots + rs.rank
    if report.dimension != expected_degree:
        report.warnings.append(f"degree {report.dimension} differs from |roots| + |S| = {expected_degree}")
    if report.euler_characteristic != len(quotient) ** 2:
        report.warnings.append(f"H(1) = {report.euler_characteristic} differs from |W^J|^2 = {len(quotient) ** 2}")
    for message in report.warnings:
        logger.warning(f"{rs.cartan_type}, J={{{format_subset(J)}}}: {message}")
    return report


def wonderful_h(rs: RootSystem) -> HPolyReport:
    """(sum over W of t^(l(w0) - l(u) + |I_u|)) * P_W, I_u the right ascents of u."""
    elements = enumerate_W(rs)
    top = elements[-1].length
    first = IntPoly.from_exponents(top - u.length + len(u.right_ascents()) for u in elements)
    second = IntPoly.from_exponents(v.length for v in elements)
    return _hpoly_report("wonderful", "wonderful", [first, second], rs.cartan_type)


def rank2_n(ct: CartanType | str) -> int:
    """N = l(w0) for a rank-two type, read off the root system."""
    family, rank = (ct.family.upper(), ct.rank) if isinstance(ct, CartanType) else split_cartan_type(ct)
    if rank != 2 or family not in RANK2_N:
        raise InvalidInputError(f"Rank-two formulas need type A2, B2, C2 or G2; got {family}{rank}.")
    # C2 is B2 with the nodes swapped
    return build_root_system(CartanType(family="B" if family == "C" else family, rank=2)).num_positive_roots


def rank2_h(case: str, N: int, k: int) -> HPolyReport:
    """H-polynomials of the rank-two embeddings; case I/II/III by the closed G x G-orbits."""
    case = case.upper()
    if case not in RANK2_CASES:
        raise InvalidInputError(f"Unknown rank-two case {case!r}; expected one of I, II, III.")
    if N not in RANK2_N.values():
        raise InvalidInputError(f"N must be 3 (A2), 4 (B2/C2) or 6 (G2); got {N}.")
    minimum = 1 if case == "I" else 0
    if k < minimum:
        raise InvalidInputError(f"k must be >= {minimum} in case {case}; got {k}.")

    t = IntPoly.monomial(1)
    flag = IntPoly.geometric(0, N - 1)
    match case:
        case "I":
            first = (
                1 + (k - 1) * t + IntPoly.geometric(2, N, 2 * k) + (k - 1) * t ** (N + 1) + t ** (N + 2)
            )
            second = (1 + t) * flag
        case "II":
            first = (
                t ** (N + 3)
                + k * t ** (N + 2)
                + 3 * k * t ** (N + 1)
                + IntPoly.geometric(3, N, 4 * k + 1)
                + 3 * k * t**2
                + k * t
                + 1
            )
            second = flag
        case _:
            first = (
                t ** (N + 3)
                + k * t ** (N + 2)
                + (3 * k + 1) * t ** (N + 1)
                + IntPoly.geometric(3, N, 4 * k + 2)
                + (3 * k + 1) * t**2
                + k * t
                + 1
            )
            second = flag
    return _hpoly_report("rank2", f"rank2_case_{case}", [first, second], parameters={"N": N, "k": k})


def hpoly_from_cells(cells: Iterable[tuple[int, int]]) -> IntPoly:
    """Sum of (t - 1)^a t^b over the cells."""
    total = IntPoly.zero()
    for a, b in cells:
        total = total + orbit_term(a, b)
    return total


def compute_embedding(spec: EmbeddingSpec) -> HPolyReport:
    match spec.kind:
        case "simple":
            rs = _root_system_of(spec)
            return simple_embedding_h(rs, parse_subset(",".join(spec.J), rs.rank))
        case "wonderful":
            return wonderful_h(_root_system_of(spec))
        case "rank2":
            if spec.case is None or spec.n_long is None or spec.k is None:
                raise InvalidInputError("A rank-two embedding needs case, n_long and k.")
            return rank2_h(spec.case, spec.n_long, spec.k)
    raise InvalidInputError(f"Unknown embedding kind {spec.kind!r}; expected simple, wonderful or rank2.")


def _root_system_of(spec: EmbeddingSpec) -> RootSystem:
    if spec.cartan_type is None:
        raise InvalidInputError(f"A {spec.kind} embedding needs a Cartan type.")
    return build_root_system(spec.cartan_type)


def poly_report(
    formula: str,
    poly: IntPoly,
    cartan_type: Optional[CartanType] = None,
    J: Iterable[int] = (),
    parameters: Optional[dict[str, int]] = None,
    poincare: bool = False,
) -> PolyReport:
    """Report of a single polynomial; with poincare=True the polynomial is reported at t^2."""
    if poincare:
        poly = poly.substitute_square()
    return PolyReport(
        formula=formula,
        cartan_type=None if cartan_type is None else str(cartan_type),
        J=subset_names(J),
        parameters=parameters or {},
        poly=poly.to_payload(),
        poincare=poincare,
        value_at_one=poly.evaluate(1),
        degree=poly.degree,
    )
