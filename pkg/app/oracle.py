"""Brute-force B x B orbit counts in M_n(F_q), independent of the Weyl group machinery.

Orbits of rook matrices under (u, v) . x = u x v, u and v invertible upper triangular, are
materialized over small prime fields; each orbit size is fitted to (q - 1)^a q^b and the terms
(t - 1)^a t^b are summed into the H-polynomial of M_n.
"""

import logging
import time
from collections.abc import Iterable, Sequence
from itertools import combinations, permutations, product
from math import comb, factorial, isqrt
from typing import Optional

import numpy as np

from app.config import get_settings
from app.errors import EnumerationCapError, InvalidInputError, OrbitFitError, PartitionCheckError
from app.hpoly import hpoly_from_cells
from app.models import OracleReport, OrbitRow
from app.poly import IntPoly, orbit_term

logger = logging.getLogger(__name__)

MAX_REP_N = 4
DEFAULT_QS = (2, 3)

# names of the seven representatives of M_2
M2_LABELS = {
    ((1, 0), (0, 1)): "1",
    ((0, 1), (1, 0)): "s",
    ((1, 0), (0, 0)): "e",
    ((0, 0), (0, 1)): "f",
    ((0, 1), (0, 0)): "n",
    ((0, 0), (1, 0)): "m",
    ((0, 0), (0, 0)): "0",
}


class RookMatrix:
    """0/1 matrix with at most one 1 in each row and column."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise InvalidInputError(f"A rook matrix must be square; got rows of lengths {[len(r) for r in rows]}.")
        if any(x not in (0, 1) for row in rows for x in row):
            raise InvalidInputError("Rook matrix entries must be 0 or 1.")
        if any(sum(row) > 1 for row in rows) or any(sum(col) > 1 for col in zip(*rows)):
            raise InvalidInputError("A rook matrix has at most one 1 in each row and column.")
        self.n = n
        self.entries = rows

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[tuple[int, int]]) -> "RookMatrix":
        """1-based (row, column) positions of the ones."""
        grid = [[0] * n for _ in range(n)]
        for i, j in positions:
            grid[i - 1][j - 1] = 1
        return cls(grid)

    @property
    def rank(self) -> int:
        return sum(sum(row) for row in self.entries)

    @property
    def positions(self) -> list[tuple[int, int]]:
        return [(i + 1, j + 1) for i, row in enumerate(self.entries) for j, x in enumerate(row) if x]

    @property
    def label(self) -> str:
        if self.n == 2:
            return M2_LABELS[self.entries]
        return "".join(f"({i},{j})" for i, j in self.positions) or "0"

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RookMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"RookMatrix({self.label})"


def rook_count(n: int) -> int:
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


def enumerate_reps(n: int) -> list[RookMatrix]:
    """All rook matrices of size n, by rank and then lexicographically."""
    if not 1 <= n <= MAX_REP_N:
        raise InvalidInputError(f"Rook matrices are enumerated for 1 <= n <= {MAX_REP_N}; got {n}.")
    reps = []
    for k in range(n + 1):
        for rows in combinations(range(1, n + 1), k):
            for cols in permutations(range(1, n + 1), k):
                reps.append(RookMatrix.from_positions(n, zip(rows, cols)))
    return sorted(reps, key=lambda x: (x.rank, x.entries))


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, isqrt(q) + 1))


def _check_scale(n: int, q: int) -> None:
    if not _is_prime(q):
        raise InvalidInputError(f"q must be a prime; got {q}.")
    settings = get_settings()
    if n > settings.oracle_max_n:
        raise EnumerationCapError(f"orbits in M_{n}", n, settings.oracle_max_n, "HPOLY_ORACLE_MAX_N")
    if q > settings.oracle_max_q:
        raise EnumerationCapError(f"orbits over F_{q}", q, settings.oracle_max_q, "HPOLY_ORACLE_MAX_Q")


def borel_group(n: int, q: int) -> np.ndarray:
    """Invertible upper-triangular n x n matrices over F_q, shape ((q-1)^n q^(n(n-1)/2), n, n)."""
    if not _is_prime(q):
        raise InvalidInputError(f"q must be a prime; got {q}.")
    diagonal = list(product(range(1, q), repeat=n))
    above = [(i, j) for i in range(n) for j in range(i + 1, n)]
    strict = list(product(range(q), repeat=len(above)))
    group = np.zeros((len(diagonal) * len(strict), n, n), dtype=np.int64)
    k = 0
    for d in diagonal:
        for s in strict:
            group[k][np.diag_indices(n)] = d
            for (i, j), x in zip(above, s):
                group[k, i, j] = x
            k += 1
    return group


def _encode(matrices: np.ndarray, q: int) -> np.ndarray:
    """Integer code of each matrix, entries read as base-q digits."""
    n = matrices.shape[-1]
    powers = q ** np.arange(n * n, dtype=np.int64)
    return (matrices.reshape(*matrices.shape[:-2], n * n) * powers).sum(axis=-1)


def orbit_codes(x: RookMatrix, q: int, group: Optional[np.ndarray] = None) -> np.ndarray:
    """Sorted distinct codes of {u x v : u, v in B(F_q)}."""
    _check_scale(x.n, q)
    if group is None:
        group = borel_group(x.n, q)
    left = (group @ x.to_array()) % q
    products = np.einsum("aij,bjk->abik", left, group) % q
    return np.unique(_encode(products, q))


def orbit_size(x: RookMatrix, q: int) -> int:
    return len(orbit_codes(x, q))


def fit_ab(sizes: dict[int, int]) -> tuple[int, int]:
    """The unique (a, b) >= 0 with (q - 1)^a q^b = sizes[q] for every measured q."""
    if len(sizes) < 2:
        raise InvalidInputError(f"Fitting (a, b) needs sizes at two or more values of q; got {sorted(sizes)}.")
    bound = max(sizes.values()).bit_length() + 1
    fits = [
        (a, b)
        for a in range(bound)
        for b in range(bound)
        if all((q - 1) ** a * q**b == size for q, size in sizes.items())
    ]
    if len(fits) != 1:
        logger.error(f"No unique (a, b) for orbit sizes {sizes}: {fits}")
        raise OrbitFitError(f"Orbit sizes {sizes} are not (q - 1)^a q^b for a unique (a, b); candidates {fits}.")
    return fits[0]


class OrbitProfile:
    """Measured orbit sizes of one representative and the fitted exponents."""

    def __init__(self, rep: RookMatrix, sizes: dict[int, int]):
        self.rep = rep
        self.sizes = dict(sorted(sizes.items()))
        self.a, self.b = fit_ab(self.sizes)

    @property
    def dimension(self) -> int:
        return self.a + self.b

    def term(self) -> IntPoly:
        return orbit_term(self.a, self.b)

    def to_row(self) -> OrbitRow:
        return OrbitRow(
            label=self.rep.label,
            rep=self.rep.to_list(),
            rank=self.rep.rank,
            sizes={str(q): s for q, s in self.sizes.items()},
            a=self.a,
            b=self.b,
            term=self.term().to_payload(),
        )


def orbit_profiles(n: int, qs: Sequence[int] = DEFAULT_QS) -> list[OrbitProfile]:
    """Profiles of every representative; checks that the orbits partition M_n(F_q) for each q."""
    qs = sorted(set(qs))
    for q in qs:
        _check_scale(n, q)
    reps = enumerate_reps(n)
    sizes: dict[RookMatrix, dict[int, int]] = {x: {} for x in reps}
    for q in qs:
        started = time.perf_counter()
        group = borel_group(n, q)
        total = q ** (n * n)
        covered = np.zeros(total, dtype=bool)
        for x in reps:
            codes = orbit_codes(x, q, group)
            if covered[codes].any():
                raise PartitionCheckError(f"The orbit of {x.label} over F_{q} meets an earlier orbit.")
            covered[codes] = True
            sizes[x][q] = len(codes)
        if not covered.all():
            missing = int((~covered).sum())
            raise PartitionCheckError(f"{missing} of the {total} matrices in M_{n}(F_{q}) lie in no orbit.")
        logger.info(f"M_{n}(F_{q}): {len(reps)} orbits cover {total} matrices in {time.perf_counter() - started:.3f}s")
    return [OrbitProfile(x, sizes[x]) for x in reps]


def monoid_h(n: int, qs: Sequence[int] = DEFAULT_QS) -> IntPoly:
    return hpoly_from_cells((p.a, p.b) for p in orbit_profiles(n, qs))


def oracle_report(n: int, qs: Sequence[int] = DEFAULT_QS) -> OracleReport:
    profiles = orbit_profiles(n, qs)
    qs = sorted(set(qs))
    totals = {str(q): sum(p.sizes[q] for p in profiles) for q in qs}
    h = hpoly_from_cells((p.a, p.b) for p in profiles)
    return OracleReport(n=n, qs=qs, rows=[p.to_row() for p in profiles], totals=totals, h=h.to_payload())
