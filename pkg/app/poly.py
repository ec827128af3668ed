"""Exact sparse integer polynomials in one and two variables.

Coefficients are Python integers, so nothing ever overflows. Values are immutable;
zero coefficients are never stored.
"""

import logging
from collections.abc import Iterable, Mapping
from math import comb
from typing import Union

from app.errors import InvalidInputError
from app.models import Poly2Payload, PolyPayload

logger = logging.getLogger(__name__)

ZERO_DEGREE = -1

Scalar = int


def _clean(terms: Mapping) -> dict:
    return {e: c for e, c in sorted(terms.items()) if c != 0}


class IntPoly:
    """Polynomial in t with integer coefficients, stored as {exponent: coefficient}."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        terms = terms or {}
        for e in terms:
            if e < 0:
                raise InvalidInputError(f"Negative exponent {e} in polynomial.")
        self._terms: dict[int, int] = _clean(terms)

    # -- construction

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls()

    @classmethod
    def one(cls) -> "IntPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "IntPoly":
        return cls({exponent: coefficient})

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[int]) -> "IntPoly":
        """Dense ascending coefficient list, e.g. [1, 11, 11, 1]."""
        return cls(dict(enumerate(coefficients)))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "IntPoly":
        """Generating function: one t^e per listed exponent."""
        terms: dict[int, int] = {}
        for e in exponents:
            terms[e] = terms.get(e, 0) + 1
        return cls(terms)

    @classmethod
    def geometric(cls, start: int, stop: int, coefficient: int = 1) -> "IntPoly":
        """coefficient * (t^start + ... + t^stop); zero when stop < start."""
        return cls({e: coefficient for e in range(start, stop + 1)})

    # -- accessors

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max(self._terms) if self._terms else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def coefficients(self) -> list[int]:
        """Dense ascending coefficients; [] for the zero polynomial."""
        return [self._terms.get(e, 0) for e in range(self.degree + 1)]

    # -- ring operations

    def _coerce(self, other: Union["IntPoly", int]) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly({0: other})
        return NotImplemented

    def __add__(self, other: Union["IntPoly", int]) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return IntPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["IntPoly", int]) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> "IntPoly":
        return IntPoly({0: other}) - self

    def __mul__(self, other: Union["IntPoly", int]) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return IntPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        if k < 0:
            raise InvalidInputError(f"Negative power {k} of a polynomial.")
        result = IntPoly.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = IntPoly({0: other})
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        # constants compare equal to ints, so they must hash like them
        if set(self._terms) <= {0}:
            return hash(self._terms.get(0, 0))
        return hash(tuple(self._terms.items()))

    # -- transforms

    def evaluate(self, value: int) -> int:
        result = 0
        for c in reversed(self.coefficients()):
            result = result * value + c
        return result

    __call__ = evaluate

    def substitute_power(self, k: int) -> "IntPoly":
        """t -> t^k."""
        if k < 1:
            raise InvalidInputError(f"Substitution t -> t^{k} needs k >= 1.")
        return IntPoly({e * k: c for e, c in self._terms.items()})

    def substitute_square(self) -> "IntPoly":
        return self.substitute_power(2)

    def is_palindromic(self) -> bool:
        d = self.degree
        return all(self._terms.get(d - e, 0) == c for e, c in self._terms.items())

    def has_negative_coefficient(self) -> bool:
        return any(c < 0 for c in self._terms.values())

    # -- formatting

    def to_plain(self, var: str = "t") -> str:
        return self._render(var, latex=False)

    def to_latex(self, var: str = "t") -> str:
        return self._render(var, latex=True)

    def _render(self, var: str, latex: bool) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for e, c in self._terms.items():
            if e == 0:
                body = str(abs(c))
            else:
                power = var if e == 1 else (f"{var}^{{{e}}}" if latex and e > 9 else f"{var}^{e}")
                body = power if abs(c) == 1 else f"{abs(c)}{power}"
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_plain()

    def __repr__(self) -> str:
        return f"IntPoly({self.to_plain()!r})"

    # -- serialization

    def to_payload(self, var: str = "t") -> PolyPayload:
        return PolyPayload(var=var, coeffs={str(e): c for e, c in self._terms.items()})

    @classmethod
    def from_payload(cls, payload: PolyPayload) -> "IntPoly":
        try:
            return cls({int(e): c for e, c in payload.coeffs.items()})
        except ValueError as e:
            logger.error(f"Malformed polynomial payload: {e}")
            raise InvalidInputError(f"Malformed polynomial payload: {e}") from e


def orbit_term(a: int, b: int) -> IntPoly:
    """(t - 1)^a t^b, expanded."""
    if a < 0 or b < 0:
        raise InvalidInputError(f"Orbit exponents must be nonnegative, got ({a}, {b}).")
    return IntPoly({b + i: comb(a, i) * (-1) ** (a - i) for i in range(a + 1)})


def substitute_square(p: IntPoly) -> IntPoly:
    return p.substitute_square()


def is_palindromic(p: IntPoly) -> bool:
    return p.is_palindromic()


def evaluate(p: IntPoly, value: int) -> int:
    return p.evaluate(value)


class IntPoly2:
    """Polynomial in t1, t2 with integer coefficients, stored as {(e1, e2): coefficient}."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        terms = terms or {}
        for e1, e2 in terms:
            if e1 < 0 or e2 < 0:
                raise InvalidInputError(f"Negative exponent ({e1}, {e2}) in polynomial.")
        self._terms: dict[tuple[int, int], int] = _clean(terms)

    @classmethod
    def from_exponents(cls, exponents: Iterable[tuple[int, int]]) -> "IntPoly2":
        terms: dict[tuple[int, int], int] = {}
        for pair in exponents:
            terms[pair] = terms.get(pair, 0) + 1
        return cls(terms)

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def coefficient(self, e1: int, e2: int) -> int:
        return self._terms.get((e1, e2), 0)

    def __add__(self, other: "IntPoly2") -> "IntPoly2":
        terms = dict(self._terms)
        for key, c in other._terms.items():
            terms[key] = terms.get(key, 0) + c
        return IntPoly2(terms)

    def __mul__(self, other: "IntPoly2") -> "IntPoly2":
        terms: dict[tuple[int, int], int] = {}
        for (a1, a2), c1 in self._terms.items():
            for (b1, b2), c2 in other._terms.items():
                key = (a1 + b1, a2 + b2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return IntPoly2(terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntPoly2):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def evaluate(self, t1: int, t2: int) -> int:
        return sum(c * t1**e1 * t2**e2 for (e1, e2), c in self._terms.items())

    def specialize(self, power1: int, power2: int) -> IntPoly:
        """t1 -> t^power1, t2 -> t^power2."""
        if power1 < 0 or power2 < 0:
            raise InvalidInputError(f"Specialization powers must be nonnegative, got ({power1}, {power2}).")
        terms: dict[int, int] = {}
        for (e1, e2), c in self._terms.items():
            e = e1 * power1 + e2 * power2
            terms[e] = terms.get(e, 0) + c
        return IntPoly(terms)

    def to_plain(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (e1, e2), c in self._terms.items():
            factors = [f"t{i}" if e == 1 else f"t{i}^{e}" for i, e in ((1, e1), (2, e2)) if e]
            body = "*".join(factors)
            if not body:
                body = str(c)
            elif c != 1:
                body = f"{c}*{body}"
            pieces.append(body)
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"IntPoly2({self.to_plain()!r})"

    def to_payload(self) -> Poly2Payload:
        return Poly2Payload(coeffs={f"{e1},{e2}": c for (e1, e2), c in self._terms.items()})

    @classmethod
    def from_payload(cls, payload: Poly2Payload) -> "IntPoly2":
        try:
            terms = {}
            for key, c in payload.coeffs.items():
                e1, e2 = key.split(",")
                terms[(int(e1), int(e2))] = c
        except ValueError as e:
            logger.error(f"Malformed two-variable payload: {e}")
            raise InvalidInputError(f"Malformed two-variable payload: {e}") from e
        return cls(terms)


def specialize(p2: IntPoly2, power1: int, power2: int) -> IntPoly:
    return p2.specialize(power1, power2)
