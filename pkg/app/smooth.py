"""Combinatorially smooth subsets J of S and the published type-by-type classification."""

import logging
from itertools import combinations

from app.models import (
    CartanType,
    ClassificationComparison,
    SmoothListReport,
    SmoothnessVerdict,
    SmoothSubsetRow,
    Violation,
)
from app.rootsys import RootSystem, Subset, node_name, subset_names
from app.weyl import quotient_size

logger = logging.getLogger(__name__)

# lists whose comparison is reported, not enforced
INFORMATIVE_TYPES = {("E", 7), ("E", 8)}


def is_combinatorially_smooth(rs: RootSystem, J: Subset) -> SmoothnessVerdict:
    """Dynkin-graph test for simplicity of the W-orbit polytope with stabilizer W_J.

    (a) every s outside J adjacent to J has a unique neighbour t in J, and the component of t
        is a simply-laced path with t at an end;
    (b) every component of J has exactly one attached node outside J.
    """
    J = rs.check_subset(J)
    comps = rs.components(J)
    component_of = {t: c for c in comps for t in c.nodes}
    violations: list[Violation] = []

    for s in rs.nodes:
        if s in J:
            continue
        touching = [t for t in rs.dynkin.neighbors(s) if t in J]
        if not touching:
            continue
        if len(touching) > 1:
            violations.append(
                Violation(
                    kind="multiple_neighbours",
                    node=node_name(s),
                    component=subset_names(touching),
                    message=f"{node_name(s)} does not commute with {len(touching)} nodes of J: "
                    f"{', '.join(subset_names(touching))}.",
                )
            )
            continue
        t = touching[0]
        comp = component_of[t]
        if not comp.is_type_a:
            violations.append(
                Violation(
                    kind="component_not_type_a",
                    node=node_name(s),
                    component=subset_names(comp.nodes),
                    message=f"The component of {node_name(t)} attached to {node_name(s)} has type "
                    f"{comp.cartan_type}, not a simply-laced chain.",
                )
            )
        elif t not in comp.ends:
            violations.append(
                Violation(
                    kind="attached_not_at_end",
                    node=node_name(s),
                    component=subset_names(comp.nodes),
                    message=f"{node_name(s)} is attached to {node_name(t)}, which is not an end node of its component.",
                )
            )

    for comp in comps:
        attached = sorted({s for t in comp.nodes for s in rs.dynkin.neighbors(t) if s not in J})
        if len(attached) != 1:
            violations.append(
                Violation(
                    kind="attached_count",
                    node=None,
                    component=subset_names(comp.nodes),
                    message=f"Component {{{', '.join(subset_names(comp.nodes))}}} has {len(attached)} attached "
                    f"node(s) outside J; exactly one is required.",
                )
            )

    return SmoothnessVerdict(
        cartan_type=str(rs.cartan_type), J=subset_names(J), smooth=not violations, violations=violations
    )


def _canonical(J: Subset) -> tuple[int, tuple[int, ...]]:
    return len(J), tuple(sorted(J))


def enumerate_smooth_subsets(rs: RootSystem) -> list[Subset]:
    """All proper smooth J, sorted by size and then lexicographically."""
    found = []
    for size in range(rs.rank):
        for J in combinations(rs.nodes, size):
            if is_combinatorially_smooth(rs, frozenset(J)).smooth:
                found.append(frozenset(J))
    logger.info(f"{rs.cartan_type}: {len(found)} combinatorially smooth subset(s)")
    return sorted(found, key=_canonical)


def _chain(start: int, stop: int) -> set[int]:
    return set(range(start, stop + 1))


def _items(ct: CartanType) -> list[tuple[str, list[set[int]]]]:
    n = ct.rank
    match (ct.family, n):
        case ("A", 1):
            return [("a", [set()])]
        case ("A", _):
            return [
                ("a", [set()]),
                ("b", [_chain(1, i) for i in range(1, n)]),
                ("c", [_chain(j, n) for j in range(2, n + 1)]),
                ("d", [_chain(1, i) | _chain(j, n) for i in range(1, n + 1) for j in range(i + 3, n + 1)]),
            ]
        case ("B", 2):
            return [("a", [set()]), ("b", [{1}]), ("c", [{2}])]
        case ("B", _) | ("C", _):
            return [
                ("a", [set()]),
                ("b", [_chain(1, i) for i in range(1, n)]),
                ("c", [{n}]),
                ("d", [_chain(1, i) | {n} for i in range(1, n - 2)]),
            ]
        case ("D", _):
            return [
                ("a", [set()]),
                ("b", [_chain(1, i) for i in range(1, n - 2)]),
                ("c", [{n - 1}]),
                ("d", [{n}]),
                ("e", [_chain(1, i) | {n - 1} for i in range(1, n - 3)]),
                ("f", [_chain(1, i) | {n} for i in range(1, n - 3)]),
            ]
        case ("E", 6):
            return [
                ("a", [set()]),
                ("b", [{1}, {1, 2}]),
                ("c", [{5}, {4, 5}]),
                ("d", [{6}]),
                ("e", [{1, 5}, {1, 2, 5}, {1, 4, 5}]),
                ("f", [{1, 6}]),
                ("g", [{5, 6}]),
                ("h", [{1, 5, 6}]),
            ]
        case ("E", 7):
            return [
                ("a", [set()]),
                ("b", [{1}, {1, 2}, {1, 2, 3}]),
                ("c", [{6}, {5, 6}]),
                ("d", [{7}]),
                ("e", [{1, 6}, {1, 2, 6}, {1, 2, 3, 6}, {1, 5, 6}, {1, 2, 5, 6}]),
                ("f", [{6, 7}]),
                ("g", [{1, 7}, {1, 2, 7}]),
                ("h", [{1, 6, 7}, {1, 2, 6, 7}]),
            ]
        case ("E", 8):
            return [
                ("a", [set()]),
                ("b", [{1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4}]),
                ("c", [{7}, {6, 7}]),
                ("d", [{8}]),
                (
                    "e",
                    [
                        {1, 7},
                        {1, 2, 7},
                        {1, 2, 3, 7},
                        {1, 2, 3, 4, 7},
                        {1, 6, 7},
                        {1, 2, 6, 7},
                        {1, 2, 3, 6, 7},
                        # printed as is; it fails the criterion
                        {1, 2, 5, 6},
                    ],
                ),
                ("f", [{7, 8}]),
                ("g", [{1, 8}, {1, 2, 8}, {1, 2, 3, 8}]),
                ("h", [{1, 7, 8}, {1, 2, 7, 8}]),
            ]
        case ("F", 4):
            return [("a", [set()]), ("b", [{1}, {1, 2}]), ("c", [{4}, {3, 4}]), ("d", [{1, 4}])]
        case ("G", 2):
            return [("a", [set()]), ("b", [{1}]), ("c", [{2}])]
    return []


def classification_table(ct: CartanType) -> list[tuple[str, Subset]]:
    """The published list for the type, instantiated at its rank, as (item, J) pairs."""
    return [(item, frozenset(J)) for item, subsets in _items(ct) for J in subsets]


def table_item(ct: CartanType, J: Subset) -> str | None:
    return next((item for item, K in classification_table(ct) if K == J), None)


def compare_with_table(rs: RootSystem) -> ClassificationComparison:
    ct = rs.cartan_type
    table = {J for _, J in classification_table(ct)}
    found = set(enumerate_smooth_subsets(rs))
    only_table = sorted(table - found, key=_canonical)
    only_found = sorted(found - table, key=_canonical)
    informative = (ct.family, ct.rank) in INFORMATIVE_TYPES
    if only_table or only_found:
        log = logger.info if informative else logger.warning
        log(
            f"{ct}: classification differs from the table "
            f"(only in table: {[subset_names(J) for J in only_table]}, "
            f"only in classifier: {[subset_names(J) for J in only_found]})"
        )
    return ClassificationComparison(
        cartan_type=str(ct),
        only_in_table=[subset_names(J) for J in only_table],
        only_in_classifier=[subset_names(J) for J in only_found],
        matches=not only_table and not only_found,
        informative=informative,
    )


def smooth_list_report(rs: RootSystem) -> SmoothListReport:
    table = classification_table(rs.cartan_type)
    items = {J: item for item, J in table}
    rows = []
    for J in enumerate_smooth_subsets(rs):
        rows.append(
            SmoothSubsetRow(
                J=subset_names(J),
                item=items.get(J),
                components=[str(c.cartan_type) for c in rs.components(J)],
                quotient_size=quotient_size(rs, J),
                in_table=J in items,
            )
        )
    return SmoothListReport(cartan_type=str(rs.cartan_type), subsets=rows, comparison=compare_with_table(rs))
