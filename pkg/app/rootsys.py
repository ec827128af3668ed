"""Root systems, Cartan matrices and Dynkin graphs of the finite crystallographic types.

Roots are integer vectors in the basis of simple roots. Node numbering:

* A, B, C, F4, G2: the usual path numbering, end nodes s1 and sn.
* Dn: path s1 ... s(n-1) with sn attached to s(n-2); end nodes s1, s(n-1), sn.
* En: path s1 ... s(n-1) (the A(n-1) subdiagram) with sn attached to s(n-3);
  so s3-s6 in E6, s4-s7 in E7, s5-s8 in E8.

Cartan entries are A[i][j] = <alpha_i^vee, alpha_j>, so s_i(v) = v - (A[i] . v) alpha_i.
"""

import logging
import re
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import networkx as nx
import numpy as np

from app.errors import InvalidInputError, HPolyError
from app.models import CartanType, ComponentPayload

logger = logging.getLogger(__name__)

Subset = frozenset[int]

EXCEPTIONAL_ORDERS = {("E", 6): 51_840, ("E", 7): 2_903_040, ("E", 8): 696_729_600, ("F", 4): 1_152, ("G", 2): 12}
EXCEPTIONAL_POSITIVE_ROOTS = {("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6}

_TYPE_PATTERN = re.compile(r"^\s*([A-Ga-g])\s*_?\s*(\d+)\s*$")
_NODE_PATTERN = re.compile(r"^[sS]?(\d+)$")


def make_cartan_type(family: str, rank: int) -> CartanType:
    family = family.upper()
    match family:
        case "A":
            ok = rank >= 1
        case "B":
            ok = rank >= 2
        case "C":
            ok = rank >= 3
        case "D":
            ok = rank >= 4
        case "E":
            ok = rank in (6, 7, 8)
        case "F":
            ok = rank == 4
        case "G":
            ok = rank == 2
        case _:
            raise InvalidInputError(f"Unknown Cartan family {family!r}; expected one of A, B, C, D, E, F, G.")
    if not ok:
        raise InvalidInputError(
            f"Rank {rank} is not admissible for type {family}: "
            "A n>=1, B n>=2, C n>=3, D n>=4, E n in {6,7,8}, F n=4, G n=2."
        )
    return CartanType(family=family, rank=rank)


def split_cartan_type(text: str) -> tuple[str, int]:
    """("E", 7) from "E7", without checking the rank."""
    m = _TYPE_PATTERN.match(text)
    if m is None:
        raise InvalidInputError(f"Cannot parse Cartan type {text!r}; expected e.g. 'A5' or 'E7'.")
    return m.group(1).upper(), int(m.group(2))


def parse_cartan_type(text: str) -> CartanType:
    """Parse "A5", "e7", "B_4"."""
    return make_cartan_type(*split_cartan_type(text))


def node_name(i: int) -> str:
    return f"s{i}"


def subset_names(J: Iterable[int]) -> list[str]:
    return [node_name(i) for i in sorted(J)]


def format_subset(J: Iterable[int]) -> str:
    return ",".join(subset_names(J))


def parse_subset(text: str | None, rank: int) -> Subset:
    """Parse "s1,s3,s4" into {1, 3, 4}; the empty string is the empty subset."""
    if text is None or text.strip() in ("", "-", "empty"):
        return frozenset()
    nodes = set()
    for token in text.split(","):
        token = token.strip()
        m = _NODE_PATTERN.match(token)
        if m is None or not 1 <= int(m.group(1)) <= rank:
            raise InvalidInputError(f"Unknown node {token!r}; valid nodes are s1..s{rank}.")
        nodes.add(int(m.group(1)))
    return frozenset(nodes)


# -- Cartan matrices, one builder per family


def _path(n: int) -> np.ndarray:
    a = 2 * np.eye(n, dtype=np.int64)
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = -1
    return a


def _cartan_a(n: int) -> np.ndarray:
    return _path(n)


def _cartan_b(n: int) -> np.ndarray:
    # alpha_n short
    a = _path(n)
    a[n - 1, n - 2] = -2
    return a


def _cartan_c(n: int) -> np.ndarray:
    # alpha_n long
    a = _path(n)
    a[n - 2, n - 1] = -2
    return a


def _cartan_d(n: int) -> np.ndarray:
    a = _path(n)
    a[n - 2, n - 1] = a[n - 1, n - 2] = 0
    a[n - 3, n - 1] = a[n - 1, n - 3] = -1
    return a


def _cartan_e(n: int) -> np.ndarray:
    a = _path(n)
    a[n - 2, n - 1] = a[n - 1, n - 2] = 0
    a[n - 4, n - 1] = a[n - 1, n - 4] = -1
    return a


def _cartan_f4() -> np.ndarray:
    # alpha_1, alpha_2 long; alpha_3, alpha_4 short
    a = _path(4)
    a[2, 1] = -2
    return a


def _cartan_g2() -> np.ndarray:
    # alpha_1 short, alpha_2 long
    a = _path(2)
    a[0, 1] = -3
    return a


def cartan_matrix(ct: CartanType) -> np.ndarray:
    match ct.family:
        case "A":
            return _cartan_a(ct.rank)
        case "B":
            return _cartan_b(ct.rank)
        case "C":
            return _cartan_c(ct.rank)
        case "D":
            return _cartan_d(ct.rank)
        case "E":
            return _cartan_e(ct.rank)
        case "F":
            return _cartan_f4()
        case "G":
            return _cartan_g2()
    raise InvalidInputError(f"Unknown Cartan family {ct.family!r}.")


def weyl_group_order(ct: CartanType) -> int:
    n = ct.rank
    match ct.family:
        case "A":
            return factorial(n + 1)
        case "B" | "C":
            return 2**n * factorial(n)
        case "D":
            return 2 ** (n - 1) * factorial(n)
    return EXCEPTIONAL_ORDERS[(ct.family, n)]


def positive_root_count(ct: CartanType) -> int:
    n = ct.rank
    match ct.family:
        case "A":
            return n * (n + 1) // 2
        case "B" | "C":
            return n * n
        case "D":
            return n * (n - 1)
    return EXCEPTIONAL_POSITIVE_ROOTS[(ct.family, n)]


# -- Dynkin graph


@dataclass(frozen=True)
class Component:
    """A connected component of J with its induced type."""

    nodes: tuple[int, ...]
    cartan_type: CartanType
    shape: str
    simply_laced: bool
    ends: tuple[int, ...]

    @property
    def is_type_a(self) -> bool:
        return self.shape == "path" and self.simply_laced

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node: object) -> bool:
        return node in self.nodes

    def to_payload(self) -> ComponentPayload:
        return ComponentPayload(
            nodes=subset_names(self.nodes),
            cartan_type=str(self.cartan_type),
            shape=self.shape,
            simply_laced=self.simply_laced,
        )


class DynkinGraph:
    """Nodes 1..n; an edge carries its bond multiplicity A[i][j] * A[j][i]."""

    def __init__(self, cartan: np.ndarray):
        self.cartan = cartan
        self.graph = nx.Graph()
        n = len(cartan)
        self.graph.add_nodes_from(range(1, n + 1))
        for i in range(n):
            for j in range(i + 1, n):
                if cartan[i, j] != 0:
                    self.graph.add_edge(i + 1, j + 1, bond=int(cartan[i, j] * cartan[j, i]))

    @property
    def nodes(self) -> list[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return sorted((min(i, j), max(i, j), d["bond"]) for i, j, d in self.graph.edges(data=True))

    def bond(self, i: int, j: int) -> int:
        data = self.graph.get_edge_data(i, j)
        return 0 if data is None else data["bond"]

    def neighbors(self, i: int) -> list[int]:
        return sorted(self.graph.neighbors(i))

    def commutes(self, i: int, j: int) -> bool:
        return i == j or not self.graph.has_edge(i, j)

    def components(self, J: Iterable[int]) -> list[Component]:
        J = frozenset(J)
        missing = J - set(self.graph.nodes)
        if missing:
            raise InvalidInputError(
                f"Nodes {format_subset(missing)} are not in S; valid nodes are s1..s{len(self.cartan)}."
            )
        result = []
        for nodes in nx.connected_components(self.graph.subgraph(J)):
            result.append(self._component(tuple(sorted(nodes))))
        return sorted(result, key=lambda c: c.nodes)

    def _component(self, nodes: tuple[int, ...]) -> Component:
        sub = self.graph.subgraph(nodes)
        idx = [i - 1 for i in nodes]
        cartan = self.cartan[np.ix_(idx, idx)]
        ct, shape = classify_component(cartan)
        simply_laced = all(d["bond"] == 1 for _, _, d in sub.edges(data=True))
        ends = tuple(sorted(v for v in nodes if sub.degree(v) <= 1))
        return Component(nodes=nodes, cartan_type=ct, shape=shape, simply_laced=simply_laced, ends=ends)


def components(g: DynkinGraph, J: Iterable[int]) -> list[Component]:
    return g.components(J)


def _arm_length(adjacency: dict[int, list[int]], center: int, start: int) -> int:
    length, prev, cur = 1, center, start
    while True:
        onward = [v for v in adjacency[cur] if v != prev]
        if not onward:
            return length
        prev, cur = cur, onward[0]
        length += 1


def classify_component(cartan: np.ndarray) -> tuple[CartanType, str]:
    """Cartan type and shape ("path" or "branching") of a connected Cartan matrix."""
    m = len(cartan)
    adjacency = {i: [j for j in range(m) if j != i and cartan[i, j] != 0] for i in range(m)}
    if m == 1:
        return CartanType(family="A", rank=1), "path"
    degrees = {i: len(v) for i, v in adjacency.items()}

    if max(degrees.values()) <= 2:
        start = next(i for i in range(m) if degrees[i] == 1)
        path = [start]
        while len(path) < m:
            path.append(next(v for v in adjacency[path[-1]] if v not in path))
        bonds = [int(cartan[path[k], path[k + 1]] * cartan[path[k + 1], path[k]]) for k in range(m - 1)]
        if all(b == 1 for b in bonds):
            return CartanType(family="A", rank=m), "path"
        if 3 in bonds:
            return CartanType(family="G", rank=2), "path"
        k = bonds.index(2)
        if m == 2:
            return CartanType(family="B", rank=2), "path"
        if m == 4 and k == 1:
            return CartanType(family="F", rank=4), "path"
        terminal, other = (path[-1], path[-2]) if k == m - 2 else (path[0], path[1])
        # the short root's row carries the -2
        family = "B" if cartan[terminal, other] == -2 else "C"
        return CartanType(family=family, rank=m), "path"

    center = next(i for i in range(m) if degrees[i] == 3)
    arms = sorted(_arm_length(adjacency, center, v) for v in adjacency[center])
    match arms:
        case [1, 1, c]:
            return CartanType(family="D", rank=c + 3), "branching"
        case [1, 2, 2]:
            return CartanType(family="E", rank=6), "branching"
        case [1, 2, 3]:
            return CartanType(family="E", rank=7), "branching"
        case [1, 2, 4]:
            return CartanType(family="E", rank=8), "branching"
    raise HPolyError(f"Cartan matrix with branch arms {arms} is not of finite type.")


# -- root systems


def _root_closure(reflections: tuple[np.ndarray, ...], rank: int) -> list[tuple[int, ...]]:
    simple = [tuple(int(x) for x in row) for row in np.eye(rank, dtype=np.int64)]
    seen = set(simple)
    frontier = [np.array(v, dtype=np.int64) for v in simple]
    while frontier:
        grown = []
        for v in frontier:
            for r in reflections:
                image = r @ v
                key = tuple(int(x) for x in image)
                if key not in seen:
                    seen.add(key)
                    grown.append(image)
        frontier = grown
    return sorted(seen)


class RootSystem:
    """Root data of one crystallographic type. Immutable after construction."""

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type
        self.cartan_matrix = cartan_matrix(cartan_type)
        self.cartan_matrix.setflags(write=False)
        n = cartan_type.rank
        self.rank = n
        self.simple_roots = np.eye(n, dtype=np.int64)
        self.simple_roots.setflags(write=False)

        reflections = []
        for i in range(n):
            r = np.eye(n, dtype=np.int64) - np.outer(self.simple_roots[i], self.cartan_matrix[i])
            r.setflags(write=False)
            reflections.append(r)
        self.reflections: tuple[np.ndarray, ...] = tuple(reflections)

        roots = _root_closure(self.reflections, n)
        positive = [r for r in roots if all(c >= 0 for c in r)]
        if any(not (all(c >= 0 for c in r) or all(c <= 0 for c in r)) for r in roots):
            raise HPolyError(f"Root closure of {cartan_type} produced a root of mixed sign.")
        if len(positive) != positive_root_count(cartan_type) or 2 * len(positive) != len(roots):
            raise HPolyError(
                f"Root closure of {cartan_type} found {len(positive)} positive roots, "
                f"expected {positive_root_count(cartan_type)}."
            )
        positive.sort(key=lambda r: (sum(r), r))
        self.positive_roots = np.array(positive, dtype=np.int64)
        self.positive_roots.setflags(write=False)
        # columns are positive roots, for vectorized sign tests
        self.positive_matrix = np.ascontiguousarray(self.positive_roots.T)
        self.positive_matrix.setflags(write=False)
        self._root_keys = frozenset(roots)

        self.dynkin = DynkinGraph(self.cartan_matrix)
        logger.debug(f"Built root system {cartan_type} with {len(positive)} positive roots")

    @property
    def nodes(self) -> list[int]:
        return list(range(1, self.rank + 1))

    @property
    def num_positive_roots(self) -> int:
        return len(self.positive_roots)

    @property
    def num_roots(self) -> int:
        return 2 * len(self.positive_roots)

    def is_root(self, v: Iterable[int]) -> bool:
        return tuple(int(x) for x in v) in self._root_keys

    def reflect(self, i: int, v: np.ndarray) -> np.ndarray:
        return self.reflections[i - 1] @ v

    def height(self, root: Iterable[int]) -> int:
        return int(sum(root))

    def check_subset(self, J: Iterable[int]) -> Subset:
        J = frozenset(J)
        bad = [i for i in J if not 1 <= i <= self.rank]
        if bad:
            raise InvalidInputError(
                f"Nodes {', '.join(node_name(i) for i in sorted(bad))} are not in S = s1..s{self.rank} "
                f"of {self.cartan_type}."
            )
        return J

    def components(self, J: Iterable[int]) -> list[Component]:
        return self.dynkin.components(self.check_subset(J))

    def parabolic_order(self, J: Iterable[int]) -> int:
        """|W_J|, the product of the orders of the components of J."""
        order = 1
        for c in self.components(J):
            order *= weyl_group_order(c.cartan_type)
        return order

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type})"


@lru_cache(maxsize=None)
def _cached_root_system(family: str, rank: int) -> RootSystem:
    return RootSystem(make_cartan_type(family, rank))


def build_root_system(ct: CartanType | str) -> RootSystem:
    if isinstance(ct, str):
        ct = parse_cartan_type(ct)
    return _cached_root_system(*_validated(ct))


def _validated(ct: CartanType) -> tuple[str, int]:
    checked = make_cartan_type(ct.family, ct.rank)
    return checked.family, checked.rank
