"""Weyl group elements as integer matrices on the root lattice, and their enumeration.

An element w is stored as the n x n matrix whose j-th column is w(alpha_j). Products are
matrix products, w * s_i is ``M @ R_i``, and l(w s_i) > l(w) exactly when column i of M is
a positive root.
"""

import logging
import re
import time
from collections import Counter
from collections.abc import Iterable, Sequence
from functools import lru_cache
from typing import Optional

import numpy as np

from app.config import get_settings
from app.errors import EnumerationCapError, HPolyError, InvalidInputError
from app.models import ElementPayload
from app.poly import IntPoly
from app.rootsys import RootSystem, Subset, format_subset, weyl_group_order

logger = logging.getLogger(__name__)

# root coordinates stay within +-6 for every finite type
_BATCH_DTYPE = np.int8

_WORD_PATTERN = re.compile(r"^[sS]?(\d+)$")


class WeylElt:
    """Immutable Weyl group element; equality and hashing by the images of the simple roots."""

    __slots__ = ("rs", "matrix", "_key", "_length")

    def __init__(self, rs: RootSystem, matrix: np.ndarray, length: Optional[int] = None):
        self.rs = rs
        m = np.array(matrix, dtype=np.int64).reshape(rs.rank, rs.rank)
        m.setflags(write=False)
        self.matrix = m
        self._key = (str(rs.cartan_type), m.tobytes())
        self._length = length

    # -- identity

    @property
    def key(self) -> bytes:
        return self._key[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElt):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    # -- length and descents

    @property
    def length(self) -> int:
        if self._length is None:
            self._length = int(((self.matrix @ self.rs.positive_matrix) < 0).any(axis=0).sum())
        return self._length

    @property
    def is_identity(self) -> bool:
        return self.length == 0

    @property
    def images(self) -> list[list[int]]:
        """w(alpha_1), ..., w(alpha_n) in the simple-root basis."""
        return [[int(x) for x in col] for col in self.matrix.T]

    def is_right_descent(self, i: int) -> bool:
        """l(w s_i) < l(w)."""
        return bool((self.matrix[:, i - 1] < 0).any())

    def right_descents(self) -> frozenset[int]:
        return frozenset(i for i in self.rs.nodes if self.is_right_descent(i))

    def right_ascents(self) -> frozenset[int]:
        return frozenset(i for i in self.rs.nodes if not self.is_right_descent(i))

    # -- arithmetic

    def times_simple(self, i: int) -> "WeylElt":
        """w * s_i, with its length known from the sign of w(alpha_i)."""
        length = None
        if self._length is not None:
            length = self._length - 1 if self.is_right_descent(i) else self._length + 1
        return WeylElt(self.rs, self.matrix @ self.rs.reflections[i - 1], length)

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return multiply(self, other)

    def inverse(self) -> "WeylElt":
        return from_word(self.rs, tuple(reversed(self.reduced_word())))

    def apply(self, root: Iterable[int]) -> np.ndarray:
        return self.matrix @ np.asarray(list(root), dtype=np.int64)

    def reduced_word(self) -> tuple[int, ...]:
        """Reduced word read left to right; strips the smallest right descent each step."""
        word: list[int] = []
        w = self
        while not w.is_identity:
            i = min(w.right_descents())
            word.append(i)
            w = w.times_simple(i)
        return tuple(reversed(word))

    def word_str(self) -> str:
        return format_word(self.reduced_word())

    def to_payload(self) -> ElementPayload:
        return ElementPayload(word=self.word_str(), images=self.images, length=self.length)

    def __repr__(self) -> str:
        return f"WeylElt({self.rs.cartan_type}, {self.word_str()})"


def format_word(word: Sequence[int]) -> str:
    return ".".join(f"s{i}" for i in word) if word else "1"


def parse_word(text: str, rank: int) -> tuple[int, ...]:
    """Parse "s2.s1" (or "2.1"); "1" and "" are the empty word."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    word = []
    for token in text.replace(",", ".").split("."):
        m = _WORD_PATTERN.match(token.strip())
        if m is None or not 1 <= int(m.group(1)) <= rank:
            raise InvalidInputError(f"Bad letter {token!r} in word {text!r}; letters are s1..s{rank}.")
        word.append(int(m.group(1)))
    return tuple(word)


def identity(rs: RootSystem) -> WeylElt:
    return WeylElt(rs, np.eye(rs.rank, dtype=np.int64), 0)


def simple_reflection(rs: RootSystem, i: int) -> WeylElt:
    if not 1 <= i <= rs.rank:
        raise InvalidInputError(f"No simple reflection s{i} in {rs.cartan_type}; valid nodes are s1..s{rs.rank}.")
    return WeylElt(rs, rs.reflections[i - 1], 1)


def from_word(rs: RootSystem, word: Sequence[int] | str) -> WeylElt:
    """s_{w1} s_{w2} ... s_{wk}; the word need not be reduced."""
    if isinstance(word, str):
        word = parse_word(word, rs.rank)
    m = np.eye(rs.rank, dtype=np.int64)
    for i in word:
        if not 1 <= i <= rs.rank:
            raise InvalidInputError(f"No simple reflection s{i} in {rs.cartan_type}; valid nodes are s1..s{rs.rank}.")
        m = m @ rs.reflections[i - 1]
    return WeylElt(rs, m)


def multiply(u: WeylElt, v: WeylElt) -> WeylElt:
    if u.rs is not v.rs and u.rs.cartan_type != v.rs.cartan_type:
        raise InvalidInputError(f"Cannot multiply elements of {u.rs.cartan_type} and {v.rs.cartan_type}.")
    return WeylElt(u.rs, u.matrix @ v.matrix)


# -- batched helpers on stacks of shape (m, n, n)


def batch_lengths(rs: RootSystem, stack: np.ndarray) -> np.ndarray:
    if len(stack) == 0:
        return np.zeros(0, dtype=np.int64)
    images = stack.astype(np.int64) @ rs.positive_matrix
    return (images < 0).any(axis=1).sum(axis=1)


def batch_min_coset_reps(rs: RootSystem, stack: np.ndarray, J: Iterable[int]) -> np.ndarray:
    """Project every w in the stack to the minimal representative of w W_J."""
    stack = stack.astype(np.int64, copy=True)
    J = sorted(J)
    changed = True
    while changed:
        changed = False
        for j in J:
            mask = (stack[:, :, j - 1] < 0).any(axis=1)
            if mask.any():
                stack[mask] = stack[mask] @ rs.reflections[j - 1]
                changed = True
    return stack


def stack_of(elements: Sequence[WeylElt]) -> np.ndarray:
    if not elements:
        return np.zeros((0, 0, 0), dtype=np.int64)
    return np.stack([w.matrix for w in elements])


# -- enumeration


def _check_cap(what: str, size: int) -> None:
    cap = get_settings().max_elements
    if size > cap:
        logger.warning(f"Enumeration of {what} refused: {size} > {cap}")
        raise EnumerationCapError(what, size, cap)


def _fresh_rows(candidates: np.ndarray, previous: np.ndarray) -> np.ndarray:
    """Distinct rows of candidates that are not rows of previous, sorted."""
    rows = np.unique(candidates, axis=0)
    if len(previous) == 0:
        return rows
    both = np.concatenate([previous, rows])
    _, inverse, counts = np.unique(both, axis=0, return_inverse=True, return_counts=True)
    seen_once = counts[inverse.reshape(-1)[len(previous) :]] == 1
    return rows[seen_once]


def _layered_closure(
    rs: RootSystem, generators: Sequence[int], keep_positive: Sequence[int]
) -> list[np.ndarray]:
    """Breadth-first closure of the identity under left multiplication by the generators.

    Layer k holds the elements of length k, lexicographically sorted; only elements sending
    every alpha_j (j in keep_positive) to a positive root are retained. W^J is closed under
    deleting the first letter of a reduced word, so every element of length k + 1 is s_i w
    for some retained w of length k.
    """
    n = rs.rank
    reflections = [r.astype(_BATCH_DTYPE) for r in rs.reflections]
    layer = np.eye(n, dtype=_BATCH_DTYPE)[np.newaxis]
    previous = np.zeros((0, n * n), dtype=_BATCH_DTYPE)
    layers = [layer]
    while generators:
        candidates = np.concatenate([reflections[i - 1] @ layer for i in generators])
        # s_i w has length l(w) - 1 exactly when it already sits in the previous layer
        flat = _fresh_rows(candidates.reshape(len(candidates), n * n), previous)
        grown = flat.reshape(len(flat), n, n)
        for j in keep_positive:
            grown = grown[(grown[:, :, j - 1] >= 0).all(axis=1)]
        if len(grown) == 0:
            break
        previous = layer.reshape(len(layer), n * n)
        layer = grown
        layers.append(layer)
        logger.debug(f"{rs.cartan_type}: layer {len(layers) - 1} has {len(layer)} element(s)")
    return layers


class ParabolicQuotient:
    """W^J: minimal coset representatives of W_J in W, grouped by length."""

    def __init__(self, rs: RootSystem, J: Subset, layers: list[np.ndarray]):
        self.rs = rs
        self.J = J
        self.elements: list[WeylElt] = [
            WeylElt(rs, m, length) for length, layer in enumerate(layers) for m in layer
        ]
        self.stack = stack_of(self.elements)
        self.histogram = [len(layer) for layer in layers]
        self.longest = self.elements[-1]
        self._index: Optional[dict[WeylElt, int]] = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w: object) -> bool:
        return isinstance(w, WeylElt) and w in self.index

    @property
    def index(self) -> dict[WeylElt, int]:
        if self._index is None:
            self._index = {w: k for k, w in enumerate(self.elements)}
        return self._index

    @property
    def max_length(self) -> int:
        return len(self.histogram) - 1

    def length_poly(self) -> IntPoly:
        return IntPoly.from_coefficients(self.histogram)

    def __repr__(self) -> str:
        return f"ParabolicQuotient({self.rs.cartan_type}, J={{{format_subset(self.J)}}}, size={len(self)})"


def quotient_size(rs: RootSystem, J: Iterable[int]) -> int:
    """|W| / |W_J| in closed form."""
    return weyl_group_order(rs.cartan_type) // rs.parabolic_order(J)


def enumerate_WJ(rs: RootSystem, J: Iterable[int] = ()) -> ParabolicQuotient:
    J = rs.check_subset(J)
    what = f"W^J of {rs.cartan_type} with J={{{format_subset(J)}}}"
    expected = quotient_size(rs, J)
    _check_cap(what, expected)
    started = time.perf_counter()
    layers = _layered_closure(rs, rs.nodes, sorted(J))
    quotient = ParabolicQuotient(rs, J, layers)
    if len(quotient) != expected:
        raise HPolyError(f"Enumerated {len(quotient)} element(s) of {what}, expected {expected}.")
    logger.info(f"Enumerated {len(quotient)} element(s) of {what} in {time.perf_counter() - started:.3f}s")
    return quotient


def enumerate_W(rs: RootSystem) -> list[WeylElt]:
    """Every element of W, grouped by length."""
    return enumerate_WJ(rs, ()).elements


def enumerate_parabolic_subgroup(rs: RootSystem, J: Iterable[int]) -> list[WeylElt]:
    """W_J, grouped by length."""
    J = rs.check_subset(J)
    what = f"W_J of {rs.cartan_type} with J={{{format_subset(J)}}}"
    _check_cap(what, rs.parabolic_order(J))
    layers = _layered_closure(rs, sorted(J), ())
    return [WeylElt(rs, m, length) for length, layer in enumerate(layers) for m in layer]


def length_histogram(elements: Iterable[WeylElt]) -> list[int]:
    counts = Counter(w.length for w in elements)
    return [counts.get(k, 0) for k in range(max(counts, default=-1) + 1)]


def is_min_coset_rep(w: WeylElt, J: Iterable[int]) -> bool:
    return not any(w.is_right_descent(j) for j in J)


def min_coset_rep(w: WeylElt, J: Iterable[int]) -> WeylElt:
    """The unique element of w W_J sending every alpha_j (j in J) to a positive root."""
    J = sorted(J)
    while True:
        j = next((j for j in J if w.is_right_descent(j)), None)
        if j is None:
            return w
        w = w.times_simple(j)


# -- Bruhat order


def _check_bruhat_scale(rs: RootSystem) -> None:
    order = weyl_group_order(rs.cartan_type)
    cap = get_settings().max_bruhat_group
    if order > cap:
        raise EnumerationCapError(f"Bruhat intervals of {rs.cartan_type}", order, cap, "HPOLY_MAX_BRUHAT_GROUP")


@lru_cache(maxsize=8192)
def lower_interval(v: WeylElt) -> frozenset[WeylElt]:
    """[1, v] by the subword property: [1, v] = [1, vs] u [1, vs]s for a right descent s of v."""
    if v.is_identity:
        return frozenset({v})
    i = min(v.right_descents())
    below = lower_interval(v.times_simple(i))
    return below | frozenset(x.times_simple(i) for x in below)


def bruhat_leq(u: WeylElt, v: WeylElt) -> bool:
    """u <= v in the Bruhat order. Only for small groups."""
    _check_bruhat_scale(v.rs)
    if u.length > v.length:
        return False
    if u.length == v.length:
        return u == v
    return u in lower_interval(v)
