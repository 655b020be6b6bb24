"""ADE types, their Gram matrices, and recognition of ADE configurations
from intersection graphs of (-2)-curves."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple

from .exactnum import RatMatrix, is_negative_definite


class NotADE(ValueError):
    """The graph is not a disjoint union of ADE diagrams."""


class ParseError(ValueError):
    pass


_FAMILY_ORDER = {"E": 0, "D": 1, "A": 2}


@dataclass(frozen=True, order=False)
class DynkinComponent:
    family: str  # 'A', 'D' or 'E'
    rank: int

    def __post_init__(self):
        if self.family not in ("A", "D", "E"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "A" and self.rank < 1:
            raise ValueError("A_n needs n >= 1")
        if self.family == "D" and self.rank < 4:
            raise ValueError("D_n needs n >= 4")
        if self.family == "E" and self.rank not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")

    # canonical order: descending rank, then E before D before A
    def sort_key(self):
        return (-self.rank, _FAMILY_ORDER[self.family])

    def __lt__(self, other: "DynkinComponent") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class DynkinType:
    """Multiset of ADE components in canonical order.  The empty type
    stands for a smooth surface."""

    components: Tuple[DynkinComponent, ...]

    @staticmethod
    def of(*components: DynkinComponent) -> "DynkinType":
        return DynkinType(tuple(sorted(components, key=DynkinComponent.sort_key)))

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __add__(self, other: "DynkinType") -> "DynkinType":
        return DynkinType.of(*(self.components + other.components))

    def __str__(self) -> str:
        return format_dynkin(self)


EMPTY_TYPE = DynkinType(())


def A(n: int) -> DynkinComponent:
    return DynkinComponent("A", n)


def D(n: int) -> DynkinComponent:
    return DynkinComponent("D", n)


def E(n: int) -> DynkinComponent:
    return DynkinComponent("E", n)


def _component_edges(comp: DynkinComponent) -> List[Tuple[int, int]]:
    """Edges of the Dynkin diagram on vertices 0..rank-1.

    A_n: path 0-1-...-(n-1).
    D_n: path 0-...-(n-3) with leaves n-2, n-1 both attached to n-3.
    E_n: path 0-...-(n-2) with vertex n-1 attached to vertex 2
         (arm lengths 1, 2, n-3 around the branch vertex).
    """
    n = comp.rank
    if comp.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if comp.family == "D":
        edges = [(i, i + 1) for i in range(n - 3)]
        edges += [(n - 3, n - 2), (n - 3, n - 1)]
        return edges
    edges = [(i, i + 1) for i in range(n - 2)]
    edges.append((2, n - 1))
    return edges


def gram_matrix(t: DynkinType) -> RatMatrix:
    """Block-diagonal negated Cartan matrix: -2 on the diagonal, 1 for
    each diagram edge."""
    n = t.rank
    entries = [[0] * n for _ in range(n)]
    offset = 0
    for comp in t.components:
        for i in range(comp.rank):
            entries[offset + i][offset + i] = -2
        for i, j in _component_edges(comp):
            entries[offset + i][offset + j] = 1
            entries[offset + j][offset + i] = 1
        offset += comp.rank
    return RatMatrix(entries) if n else RatMatrix.identity(0)


def classify_ade_graph(
    vertices: Iterable[Hashable], edges: Iterable[Tuple[Hashable, Hashable]]
) -> DynkinType:
    """Classify a simple graph (unit edge weights) as a disjoint union of
    ADE diagrams; raise NotADE otherwise, naming the offending component."""
    verts = list(vertices)
    adj: Dict[Hashable, List[Hashable]] = {v: [] for v in verts}
    for u, v in edges:
        if u == v:
            raise NotADE(f"loop at {u!r}")
        if u not in adj or v not in adj:
            raise NotADE(f"edge ({u!r}, {v!r}) mentions unknown vertex")
        adj[u].append(v)
        adj[v].append(u)

    seen = set()
    comps: List[DynkinComponent] = []
    for start in verts:
        if start in seen:
            continue
        comp = _flood(start, adj)
        seen.update(comp)
        comps.append(_classify_component(comp, adj))
    return DynkinType.of(*comps)


def _flood(start, adj):
    comp = [start]
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                comp.append(w)
                stack.append(w)
    return comp


def _classify_component(comp, adj) -> DynkinComponent:
    n = len(comp)
    edge_count = sum(len(adj[v]) for v in comp) // 2
    label = "{" + ",".join(sorted(map(str, comp))) + "}"
    if edge_count != n - 1:
        raise NotADE(f"component {label} contains a cycle")
    degrees = {v: len(adj[v]) for v in comp}
    if any(d >= 4 for d in degrees.values()):
        raise NotADE(f"component {label} has a vertex of degree >= 4")
    branch = [v for v, d in degrees.items() if d == 3]
    if not branch:
        return A(n)  # simple path (or isolated vertex)
    if len(branch) > 1:
        raise NotADE(f"component {label} has two branch vertices")
    center = branch[0]
    # walk each arm away from the unique branch vertex
    arms = []
    for first in adj[center]:
        length = 1
        prev, cur = center, first
        while degrees[cur] == 2:
            nxt = next(w for w in adj[cur] if w != prev)
            prev, cur = cur, nxt
            length += 1
        arms.append(length)
    arms.sort()
    # arm lengths (1,1,k) -> D_{k+3}; D_4 is the star with arms (1,1,1)
    if arms[0] == 1 and arms[1] == 1:
        return D(arms[2] + 3)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return E(arms[2] + 4)
    raise NotADE(f"component {label} has arm lengths {tuple(arms)}")


_LABEL_RE = re.compile(r"(\d*)([ADE])_?(\d+)")


def parse_dynkin(label: str) -> DynkinType:
    """Parse labels like '2A_1+D_6', '3A2+A1' or '' (empty type)."""
    s = label.replace(" ", "")
    if not s or s == "0":
        return EMPTY_TYPE
    comps: List[DynkinComponent] = []
    pos = 0
    for i, part in enumerate(s.split("+")):
        m = _LABEL_RE.fullmatch(part)
        if m is None:
            raise ParseError(f"bad component {part!r} at position {pos}")
        count = int(m.group(1)) if m.group(1) else 1
        if count < 1:
            raise ParseError(f"bad multiplicity in {part!r} at position {pos}")
        try:
            comp = DynkinComponent(m.group(2), int(m.group(3)))
        except ValueError as exc:
            raise ParseError(f"{exc} (at position {pos})") from exc
        comps.extend([comp] * count)
        pos += len(part) + 1
    return DynkinType.of(*comps)


def format_dynkin(t: DynkinType) -> str:
    """Canonical label: components in canonical order, equal components
    collapsed to a count prefix; '' for the empty type."""
    if t.is_empty:
        return ""
    parts = []
    i = 0
    comps = t.components
    while i < len(comps):
        j = i
        while j < len(comps) and comps[j] == comps[i]:
            j += 1
        count = j - i
        prefix = str(count) if count > 1 else ""
        parts.append(f"{prefix}{comps[i]}")
        i = j
    return "+".join(parts)


def gram_is_valid(t: DynkinType) -> bool:
    g = gram_matrix(t)
    return t.is_empty or is_negative_definite(g)
