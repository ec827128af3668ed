"""Descent systems (W^J, S^J) and the ascent statistics on W^J."""

import logging
import time
from enum import Enum
from typing import Optional

import numpy as np

from app.errors import DeltaUndefinedError, HPolyError, InvalidInputError
from app.models import AugmentedEntry, DescentReport
from app.poly import IntPoly, IntPoly2
from app.rootsys import RootSystem, Subset, format_subset, node_name, subset_names
from app.smooth import is_combinatorially_smooth
from app.weyl import (
    ParabolicQuotient,
    WeylElt,
    batch_lengths,
    batch_min_coset_reps,
    enumerate_parabolic_subgroup,
    enumerate_WJ,
    min_coset_rep,
    stack_of,
)

logger = logging.getLogger(__name__)


class AscentKind(str, Enum):
    ASCENT = "ascent"
    DESCENT = "descent"


def compute_delta(rs: RootSystem, J: Subset) -> dict[int, Optional[int]]:
    """delta(s) = |C_s| + 1 for s outside J; 1 when s commutes with J, None when C_s is not unique."""
    comps = rs.components(J)
    delta: dict[int, Optional[int]] = {}
    for s in rs.nodes:
        if s in J:
            continue
        attached = [c for c in comps if any(rs.dynkin.bond(s, t) for t in c.nodes)]
        match len(attached):
            case 0:
                delta[s] = 1
            case 1:
                delta[s] = len(attached[0]) + 1
            case _:
                delta[s] = None
    return delta


class DescentSystem:
    """S^J split into the classes S^J_s, s outside J. Immutable after build."""

    def __init__(
        self,
        rs: RootSystem,
        J: Subset,
        quotient: ParabolicQuotient,
        classes: dict[int, list[WeylElt]],
        delta: dict[int, Optional[int]],
    ):
        self.rs = rs
        self.J = J
        self.quotient = quotient
        self.classes = classes
        self.delta = delta
        self.outside = sorted(classes)
        self.members: list[tuple[int, WeylElt]] = [(s, r) for s in self.outside for r in classes[s]]
        self.class_of = {r: s for s, r in self.members}

    @property
    def delta_defined(self) -> bool:
        return all(d is not None for d in self.delta.values())

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"DescentSystem({self.rs.cartan_type}, J={{{format_subset(self.J)}}}, |S^J|={len(self)})"


def build_descent_system(rs: RootSystem, J: Subset, strict: bool = True) -> DescentSystem:
    """Classes S^J_s = {min_coset_rep(u s, J) : u in W_J}.

    With strict=True an undefined delta(s) raises DeltaUndefinedError; otherwise it is recorded as None.
    """
    J = rs.check_subset(J)
    if len(J) == rs.rank:
        raise InvalidInputError(f"J must be a proper subset of S; got all of s1..s{rs.rank}.")
    delta = compute_delta(rs, J)
    undefined = [s for s, d in delta.items() if d is None]
    if undefined and strict:
        names = ", ".join(node_name(s) for s in undefined)
        raise DeltaUndefinedError(
            f"delta is undefined for {names}: attached to two or more components of J={{{format_subset(J)}}}; "
            "J is not combinatorially smooth (see smooth-check)."
        )

    started = time.perf_counter()
    quotient = enumerate_WJ(rs, J)
    parabolic = stack_of(enumerate_parabolic_subgroup(rs, J))
    # |S^J_s| = delta(s) holds when J is combinatorially smooth
    sized = is_combinatorially_smooth(rs, J).smooth
    classes: dict[int, list[WeylElt]] = {}
    seen: set[WeylElt] = set()
    for s in sorted(delta):
        reps = batch_min_coset_reps(rs, parabolic @ rs.reflections[s - 1], J)
        n = rs.rank
        distinct = np.unique(reps.reshape(len(reps), n * n), axis=0)
        members = [WeylElt(rs, m) for m in distinct]
        positions = sorted(quotient.index[r] for r in members)
        classes[s] = [quotient.elements[k] for k in positions]
        if sized and len(classes[s]) != delta[s]:
            raise HPolyError(
                f"|S^J_{node_name(s)}| = {len(classes[s])} but delta = {delta[s]} for J={{{format_subset(J)}}}."
            )
        if seen.intersection(classes[s]):
            raise HPolyError(f"Classes of S^J overlap at {node_name(s)} for J={{{format_subset(J)}}}.")
        seen.update(classes[s])

    ds = DescentSystem(rs, J, quotient, classes, delta)
    logger.info(
        f"Descent system of {rs.cartan_type}, J={{{format_subset(J)}}}: |W^J|={len(quotient)}, "
        f"|S^J|={len(ds)} in {time.perf_counter() - started:.3f}s"
    )
    return ds


def _check_members(ds: DescentSystem, w: WeylElt, r: WeylElt) -> None:
    if w not in ds.quotient:
        raise InvalidInputError(f"{w.word_str()} is not a minimal coset representative for J={{{format_subset(ds.J)}}}.")
    if r not in ds.class_of:
        raise InvalidInputError(f"{r.word_str()} is not in S^J for J={{{format_subset(ds.J)}}}.")


def ascent_descent(ds: DescentSystem, w: WeylElt, r: WeylElt) -> AscentKind:
    """Descent iff the representative of w r W_J is shorter than w."""
    _check_members(ds, w, r)
    if min_coset_rep(w * r, ds.J).length < w.length:
        return AscentKind.DESCENT
    return AscentKind.ASCENT


class AugmentedPoset:
    """nu_s, nu_plain and nu_weighted tabulated over W^J (in quotient order)."""

    def __init__(self, ds: DescentSystem, ascents: np.ndarray):
        self.ds = ds
        # ascents[k, m]: member m of S^J is an ascent of element k of W^J
        self.ascents = ascents
        self.nu: dict[int, list[int]] = {}
        col = 0
        for s in ds.outside:
            width = len(ds.classes[s])
            self.nu[s] = [int(x) for x in ascents[:, col : col + width].sum(axis=1)]
            col += width
        size = len(ds.quotient)
        self.nu_plain = [sum(self.nu[s][k] for s in ds.outside) for k in range(size)]
        self.nu_weighted: Optional[list[int]] = None
        if ds.delta_defined:
            self.nu_weighted = [sum(ds.delta[s] * self.nu[s][k] for s in ds.outside) for k in range(size)]

    def _position(self, w: WeylElt) -> int:
        try:
            return self.ds.quotient.index[w]
        except KeyError as e:
            raise InvalidInputError(f"{w.word_str()} is not in W^J for J={{{format_subset(self.ds.J)}}}.") from e

    def nu_s(self, w: WeylElt, s: int) -> int:
        if s not in self.nu:
            raise InvalidInputError(f"{node_name(s)} is in J; nu_s is defined for s outside J.")
        return self.nu[s][self._position(w)]

    def plain(self, w: WeylElt) -> int:
        return self.nu_plain[self._position(w)]

    def weighted(self, w: WeylElt) -> int:
        if self.nu_weighted is None:
            raise DeltaUndefinedError(
                f"Weighted nu needs delta(s) for every s outside J={{{format_subset(self.ds.J)}}}."
            )
        return self.nu_weighted[self._position(w)]

    def ascent_set(self, w: WeylElt) -> list[WeylElt]:
        row = self.ascents[self._position(w)]
        return [r for (_, r), up in zip(self.ds.members, row) if up]

    def descent_set(self, w: WeylElt) -> list[WeylElt]:
        row = self.ascents[self._position(w)]
        return [r for (_, r), up in zip(self.ds.members, row) if not up]

    def plain_poly(self) -> IntPoly:
        return IntPoly.from_exponents(self.nu_plain)


def nu_stats(ds: DescentSystem) -> AugmentedPoset:
    quotient = ds.quotient
    lengths = batch_lengths(ds.rs, quotient.stack)
    ascents = np.zeros((len(quotient), len(ds)), dtype=bool)
    for m, (_, r) in enumerate(ds.members):
        projected = batch_min_coset_reps(ds.rs, quotient.stack @ r.matrix, ds.J)
        ascents[:, m] = ~(batch_lengths(ds.rs, projected) < lengths)
    return AugmentedPoset(ds, ascents)


def two_variable_euler(ds: DescentSystem, poset: Optional[AugmentedPoset] = None) -> IntPoly2:
    """Sum over W^J of t1^nu_s(w) t2^nu_s'(w) for S minus J = {s, s'}."""
    if len(ds.outside) != 2:
        raise InvalidInputError(
            f"The two-variable polynomial needs |S \\ J| = 2; J={{{format_subset(ds.J)}}} leaves {len(ds.outside)}."
        )
    poset = poset or nu_stats(ds)
    first, second = ds.outside
    return IntPoly2.from_exponents(zip(poset.nu[first], poset.nu[second]))


def describe(ds: DescentSystem, poset: AugmentedPoset) -> DescentReport:
    """JSON dump of the augmented poset."""
    entries = []
    for k, w in enumerate(ds.quotient.elements):
        entries.append(
            AugmentedEntry(
                element=w.to_payload(),
                nu={node_name(s): poset.nu[s][k] for s in ds.outside},
                nu_plain=poset.nu_plain[k],
                nu_weighted=None if poset.nu_weighted is None else poset.nu_weighted[k],
                ascents=[r.word_str() for r in poset.ascent_set(w)],
            )
        )
    euler = two_variable_euler(ds, poset).to_payload() if len(ds.outside) == 2 else None
    return DescentReport(
        cartan_type=str(ds.rs.cartan_type),
        J=subset_names(ds.J),
        classes={node_name(s): [r.word_str() for r in ds.classes[s]] for s in ds.outside},
        delta={node_name(s): d for s, d in ds.delta.items()},
        entries=entries,
        two_variable_euler=euler,
    )
