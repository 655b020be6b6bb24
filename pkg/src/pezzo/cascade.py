"""Seed catalogs of extremal and rank-one rational elliptic surfaces,
and the exhaustive blow-down classifier.

Starting from each seed surface Y, the classifier blows down the zero
section to reach K^2 = 1, then breadth-first blows down every nice
exceptional curve of every frontier graph, recording the boundary
Dynkin type at each node.  Deduplication of results happens on the
triple (Picard number of the contraction, K^2, Dynkin type); distinct
configurations realizing the same triple are kept as witnesses.
"""

from __future__ import annotations

import functools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .dynkin import DynkinType, format_dynkin, parse_dynkin
from .exactnum import RatMatrix, rational
from .mordell import (
    FiberConfiguration,
    MWStructure,
    SectionSolution,
    shioda_tate_rank,
    solve_sections,
)
from .surface import Curve, CurveGraph, from_elliptic_surface


class UnknownTable(ValueError):
    pass


def _data_dir() -> str:
    override = os.environ.get("PEZZO_DATA_DIR")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data")


def _load_json(name: str):
    with open(os.path.join(_data_dir(), name), "r", encoding="utf-8") as fh:
        return json.load(fh)


@dataclass(frozen=True)
class SeedSurface:
    number: int
    config: FiberConfiguration
    mw: MWStructure
    multiplicity: str  # "1", "2", "infinite" or "unknown"

    @property
    def rank(self) -> int:
        return self.mw.rank


def _parse_mw(entry: dict) -> MWStructure:
    torsion = tuple(entry.get("torsion", []))
    height = entry.get("height")
    if height is None:
        return MWStructure.rank_zero(torsion)
    return MWStructure.rank_one(rational(height), torsion)


def seed_catalog(rank: int) -> List[SeedSurface]:
    if rank not in (0, 1):
        raise ValueError("catalogs exist for Mordell-Weil rank 0 and 1 only")
    raw = _load_json("extremal.json" if rank == 0 else "rank_one.json")
    seeds = []
    for entry in raw:
        config = FiberConfiguration.parse(entry["config"])
        mw = _parse_mw(entry["mw"])
        if shioda_tate_rank(config) != mw.rank:
            raise ValueError(f"catalog entry {entry['number']} has inconsistent rank")
        seeds.append(
            SeedSurface(
                entry["number"], config, mw, entry.get("multiplicity", "unknown")
            )
        )
    return seeds


@dataclass(frozen=True)
class CascadeNode:
    seed: Optional[int]  # catalog number, None for the standalone node
    graph: CurveGraph
    parent_key: Optional[str]
    blown: Optional[str]

    @property
    def k2(self) -> int:
        return self.graph.k_squared

    @property
    def dynkin(self) -> DynkinType:
        return self.graph.boundary_dynkin()

    @property
    def picard_v(self) -> int:
        return self.graph.picard_of_contraction()

    @property
    def key(self) -> str:
        seed = self.seed if self.seed is not None else 0
        return f"s{seed}:" + "+".join(self.graph.history)


@dataclass
class Classification:
    nodes: List[CascadeNode] = field(default_factory=list)
    # (picard_v, k2) -> {formatted type -> [node keys]}
    types: Dict[Tuple[int, int], Dict[str, List[str]]] = field(default_factory=dict)
    # per-seed transition edges (seed, k2_parent, parent type, child type)
    edges: Set[Tuple[int, int, str, str]] = field(default_factory=set)

    def record(self, node: CascadeNode):
        self.nodes.append(node)
        t = format_dynkin(node.dynkin)
        bucket = self.types.setdefault((node.picard_v, node.k2), {})
        bucket.setdefault(t, []).append(node.key)

    def type_set(
        self, picard_v: int, k2: Optional[int] = None, nonempty: bool = True
    ) -> Set[str]:
        out: Set[str] = set()
        for (p, k), bucket in self.types.items():
            if p != picard_v:
                continue
            if k2 is not None and k != k2:
                continue
            out.update(bucket)
        if nonempty:
            out.discard("")
        return out

    def node_by_key(self, key: str) -> CascadeNode:
        for n in self.nodes:
            if n.key == key:
                return n
        raise KeyError(key)


def build_surface(seed: SeedSurface, solution: Optional[SectionSolution] = None) -> CurveGraph:
    if solution is None:
        solution = solve_sections(seed.config, seed.mw)
    return from_elliptic_surface(seed.config, solution)


def classify(
    seeds: Iterable[SeedSurface],
    solutions: Optional[Dict[int, SectionSolution]] = None,
    include_quadric_cone: bool = False,
) -> Classification:
    """Blow down O on every seed, then exhaust NEC blow-downs.

    include_quadric_cone adds the one Picard-one surface that no elliptic
    cascade reaches: the quadric cone, whose minimal resolution carries a
    single (-2)-curve and K^2 = 8.
    """
    result = Classification()
    for seed in seeds:
        sol = solutions.get(seed.number) if solutions else None
        y = build_surface(seed, sol)
        u1 = y.blow_down("O")
        node = CascadeNode(seed.number, u1, None, "O")
        result.record(node)
        frontier = [node]
        seen_graphs = {_graph_signature(u1)}
        while frontier:
            nxt = []
            for parent in frontier:
                for nec in parent.graph.nec_list():
                    child_graph = parent.graph.blow_down(nec)
                    child = CascadeNode(seed.number, child_graph, parent.key, nec)
                    result.edges.add(
                        (
                            seed.number,
                            parent.k2,
                            format_dynkin(parent.dynkin),
                            format_dynkin(child.dynkin),
                        )
                    )
                    sig = _graph_signature(child_graph)
                    if sig in seen_graphs:
                        continue
                    seen_graphs.add(sig)
                    result.record(child)
                    nxt.append(child)
            frontier = nxt
    if include_quadric_cone:
        cone = CurveGraph({"S": Curve(-2, "boundary")}, {}, 8)
        result.record(CascadeNode(None, cone, None, None))
    return result


def _graph_signature(g: CurveGraph) -> tuple:
    return (
        g.k_squared,
        tuple(sorted((n, c.self_int) for n, c in g.curves.items())),
        tuple(sorted((tuple(sorted(p)), w) for p, w in g.weights.items())),
    )


def relatively_minimal_types(
    classification: Classification, picard_v: int, k2: Optional[int] = None
) -> Set[str]:
    out: Set[str] = set()
    for node in classification.nodes:
        if node.picard_v != picard_v:
            continue
        if k2 is not None and node.k2 != k2:
            continue
        t = format_dynkin(node.dynkin)
        if not t:
            continue
        if node.graph.is_relatively_minimal():
            out.add(t)
    return out


# ---------------------------------------------------------------------------
# table rendering


def _annotations() -> dict:
    return _load_json("annotations.json")


def _sort_types(labels: Iterable[str]) -> List[str]:
    def key(label: str):
        t = parse_dynkin(label)
        return (-t.rank, [c.sort_key() for c in t.components])

    return sorted(labels, key=key)


@functools.lru_cache(maxsize=1)
def _full_classifications():
    rank0 = classify(seed_catalog(0), include_quadric_cone=True)
    rank1 = classify(seed_catalog(1))
    return rank0, rank1


def render_table(name: str) -> str:
    """Plain-text reproduction of a classification table.  Isomorphism
    class counts (the m columns) come from catalog annotations, never
    from computation, and are marked as reference data."""
    name = name.upper().replace(" ", "")
    renderers = {
        "T1.1": _render_t11,
        "T1.2": _render_t12,
        "T1.3": _render_t13,
        "T4.1": _render_t41,
        "T4.2": _render_t42,
        "T4.3": lambda: _render_transitions("T4.3", 1),
        "T4.4": lambda: _render_transitions("T4.4", 2),
        "T4.5": lambda: _render_transitions("T4.5", 3),
        "T5.1": _render_t51,
        "T5.3": _render_t53,
        "T5.4": _render_t54,
        "T5.5": _render_t55,
        "A3": _render_a3,
    }
    if name not in renderers:
        raise UnknownTable(name)
    return renderers[name]()


def _m_table(title: str, labels: List[str], m_map: Dict[str, str]) -> str:
    lines = [title, "type | m [reference]", "-" * 28]
    for label in labels:
        lines.append(f"{label} | {m_map.get(label, '?')}")
    return "\n".join(lines)


def _render_t11() -> str:
    rank0, _ = _full_classifications()
    labels = _sort_types(rank0.type_set(1))
    return _m_table(
        "Picard number one singularity types",
        labels,
        _annotations()["T1.1"],
    )


def _render_t12() -> str:
    _, rank1 = _full_classifications()
    labels = _sort_types(rank1.type_set(2))
    return "\n".join(["Picard number two singularity types"] + labels)


def _render_t13() -> str:
    _, rank1 = _full_classifications()
    labels = _sort_types(relatively_minimal_types(rank1, 2))
    return _m_table(
        "Picard number two relatively minimal singularity types",
        labels,
        _annotations()["T1.3"],
    )


def _render_t41() -> str:
    lines = ["Extremal seeds: U1 boundary type and NEC count"]
    for seed in seed_catalog(0):
        u1 = build_surface(seed).blow_down("O")
        t = format_dynkin(u1.boundary_dynkin())
        lines.append(f"{seed.number} | {seed.config} | {t} | n={len(u1.nec_list())}")
    return "\n".join(lines)


def _render_t42() -> str:
    rank0, _ = _full_classifications()
    labels = _sort_types(rank0.type_set(1, k2=1))
    return _m_table(
        "Picard number one, K^2=1 types", labels, _annotations()["T4.2"]
    )


def _render_transitions(title: str, k2_parent: int) -> str:
    rank0, _ = _full_classifications()
    lines = [f"{title}: blow-down transitions at K^2={k2_parent} -> {k2_parent + 1}"]
    rows = sorted(
        (seed, parent, child)
        for seed, k2, parent, child in rank0.edges
        if k2 == k2_parent
    )
    for seed, parent, child in rows:
        lines.append(f"seed {seed}: {parent} -> {child}")
    return "\n".join(lines)


def _render_t51() -> str:
    _, rank1 = _full_classifications()
    labels = _sort_types(rank1.type_set(2, k2=1))
    return "\n".join(["Picard number two, K^2=1 types"] + labels)


def _render_t53() -> str:
    _, rank1 = _full_classifications()
    labels = _sort_types(relatively_minimal_types(rank1, 2, k2=1))
    return _m_table(
        "Picard two relatively minimal, K^2=1", labels, _annotations()["T5.3"]
    )


def _render_t54() -> str:
    _, rank1 = _full_classifications()
    labels = _sort_types(relatively_minimal_types(rank1, 2, k2=2))
    return _m_table(
        "Picard two relatively minimal, K^2=2", labels, _annotations()["T5.4"]
    )


def _render_t55() -> str:
    _, rank1 = _full_classifications()
    lines = ["Picard number two types at K^2 >= 3"]
    for k2 in range(3, 9):
        labels = _sort_types(rank1.type_set(2, k2=k2))
        if labels:
            lines.append(f"{k2} | " + ", ".join(labels))
    return "\n".join(lines)


def _render_a3() -> str:
    _, rank1 = _full_classifications()
    lines = ["Rank-one cascade transitions (seed, K^2, parent -> child)"]
    for seed, k2, parent, child in sorted(rank1.edges):
        lines.append(f"seed {seed} | K^2={k2}: {parent or 'smooth'} -> {child or 'smooth'}")
    return "\n".join(lines)
