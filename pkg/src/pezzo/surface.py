"""Weighted intersection graphs of negative curves on a smooth rational
surface, with exact blow-down transforms.

A CurveGraph tracks every curve of negative self-intersection that we
care about (fiber components, the zero section, and the sections meeting
it nowhere), the pairwise intersection numbers, and the running value of
K^2.  Blowing down a (-1)-curve E updates self-intersections by the
square of the incidence with E and cross terms by the product, then
drops curves whose self-intersection has become non-negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .dynkin import DynkinType, NotADE, classify_ade_graph
from .mordell import FiberConfiguration, SectionSolution


class NotMinusOne(ValueError):
    """Blow-down target is not a (-1)-curve."""


class UnknownCurve(KeyError):
    pass


@dataclass(frozen=True)
class Curve:
    self_int: int
    role: str  # "fiber", "zero-section", "section", "boundary"


class CurveGraph:
    """Immutable weighted graph of negative curves plus K^2."""

    __slots__ = ("curves", "weights", "k_squared", "history", "dropped")

    def __init__(
        self,
        curves: Dict[str, Curve],
        weights: Dict[FrozenSet[str], int],
        k_squared: int,
        history: Tuple[str, ...] = (),
        dropped: Tuple[Tuple[str, int], ...] = (),
    ):
        object.__setattr__(self, "curves", dict(curves))
        object.__setattr__(
            self, "weights", {k: v for k, v in weights.items() if v}
        )
        object.__setattr__(self, "k_squared", k_squared)
        object.__setattr__(self, "history", tuple(history))
        object.__setattr__(self, "dropped", tuple(dropped))
        for pair in self.weights:
            for name in pair:
                if name not in self.curves:
                    raise UnknownCurve(name)

    def __setattr__(self, name, value):
        raise AttributeError("CurveGraph is immutable")

    def weight(self, a: str, b: str) -> int:
        if a not in self.curves or b not in self.curves:
            raise UnknownCurve(f"{a!r} or {b!r}")
        if a == b:
            return self.curves[a].self_int
        return self.weights.get(frozenset((a, b)), 0)

    def neighbors(self, a: str) -> List[Tuple[str, int]]:
        out = []
        for pair, w in self.weights.items():
            if a in pair:
                (b,) = pair - {a} if len(pair) == 2 else (a,)
                out.append((b, w))
        return sorted(out)

    def curves_with_self_int(self, s: int) -> List[str]:
        return sorted(n for n, c in self.curves.items() if c.self_int == s)

    @property
    def minus_two_curves(self) -> List[str]:
        return self.curves_with_self_int(-2)

    @property
    def minus_one_curves(self) -> List[str]:
        return self.curves_with_self_int(-1)

    def blow_down(self, name: str) -> "CurveGraph":
        """Contract the (-1)-curve `name`; curves pushed to
        self-intersection >= 0 leave the graph (they are no longer
        negative curves on the blown-down surface)."""
        if name not in self.curves:
            raise UnknownCurve(name)
        if self.curves[name].self_int != -1:
            raise NotMinusOne(f"{name} has self-intersection {self.curves[name].self_int}")
        incidence = {n: self.weight(name, n) for n in self.curves if n != name}
        new_curves: Dict[str, Curve] = {}
        dropped = list(self.dropped)
        for n, c in self.curves.items():
            if n == name:
                continue
            s = c.self_int + incidence[n] ** 2
            if s >= 0:
                dropped.append((n, s))
            else:
                new_curves[n] = Curve(s, c.role)
        new_weights: Dict[FrozenSet[str], int] = {}
        names = list(new_curves)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                w = self.weight(a, b) + incidence[a] * incidence[b]
                if w:
                    new_weights[frozenset((a, b))] = w
        return CurveGraph(
            new_curves,
            new_weights,
            self.k_squared + 1,
            self.history + (name,),
            tuple(dropped),
        )

    # ---- invariants of the contracted surface ----

    def boundary_dynkin(self) -> DynkinType:
        """ADE type of the (-2)-locus; raises NotADE when two (-2)-curves
        meet doubly or the graph is otherwise not a disjoint union of
        ADE diagrams."""
        verts = self.minus_two_curves
        edges = []
        for i, a in enumerate(verts):
            for b in verts[i + 1 :]:
                w = self.weight(a, b)
                if w > 1:
                    raise NotADE(f"(-2)-curves {a} and {b} meet with multiplicity {w}")
                if w == 1:
                    edges.append((a, b))
        return classify_ade_graph(verts, edges)

    def picard_of_contraction(self) -> int:
        """Picard number of the surface obtained by contracting the
        entire (-2)-locus: rho(smooth surface) minus the number of
        contracted curves."""
        return (10 - self.k_squared) - len(self.minus_two_curves)

    def nec_list(self) -> List[str]:
        """(-1)-curves whose total intersection with the (-2)-locus is
        exactly one (blowing such a curve down keeps the contraction's
        Picard number constant)."""
        boundary = set(self.minus_two_curves)
        out = []
        for e in self.minus_one_curves:
            total = sum(self.weight(e, c) for c in boundary)
            if total == 1:
                out.append(e)
        return out

    def relative_minimality_witness(self) -> Optional[str]:
        """A (-1)-curve witnessing non-minimality relative to the
        (-2)-locus, if any.

        The surface is not relatively minimal exactly when some
        (-1)-curve E is, inside the subgraph spanned by E and the
        (-2)-curves, either isolated or the end of a component that is a
        simple chain.  Such a chain contracts step by step without ever
        touching the rest of the boundary.
        """
        boundary = self.minus_two_curves
        for e in self.minus_one_curves:
            verts = [e] + boundary
            adj: Dict[str, List[str]] = {v: [] for v in verts}
            multi = set()
            for i, a in enumerate(verts):
                for b in verts[i + 1 :]:
                    w = self.weight(a, b)
                    if w >= 1:
                        adj[a].append(b)
                        adj[b].append(a)
                    if w > 1:
                        # a double edge never occurs in a simple chain
                        multi.update((a, b))
            comp = _component(e, adj)
            if multi.intersection(comp):
                continue
            if _is_chain_with_end(comp, adj, e):
                return e
        return None

    def is_relatively_minimal(self) -> bool:
        return self.relative_minimality_witness() is None

    # ---- serialization ----

    def to_json(self) -> dict:
        return {
            "k_squared": self.k_squared,
            "history": list(self.history),
            "curves": {
                n: {"self_int": c.self_int, "role": c.role}
                for n, c in sorted(self.curves.items())
            },
            "weights": sorted(
                [sorted(pair) + [w] for pair, w in self.weights.items()]
            ),
            "dropped": [list(d) for d in self.dropped],
        }

    def to_dot(self) -> str:
        """Graphviz rendering: boxes for (-1)-curves, circles for
        (-2)-curves, edge labels for multiplicities above one."""
        lines = ["graph curves {", "  node [fontsize=10];"]
        for n, c in sorted(self.curves.items()):
            shape = "box" if c.self_int == -1 else "circle"
            lines.append(
                f'  "{n}" [label="{n}\\n({c.self_int})", shape={shape}];'
            )
        for pair, w in sorted(self.weights.items(), key=lambda kv: sorted(kv[0])):
            a, b = sorted(pair)
            label = f' [label="{w}"]' if w > 1 else ""
            lines.append(f'  "{a}" -- "{b}"{label};')
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        try:
            boundary = str(self.boundary_dynkin()) or "smooth"
        except NotADE:
            boundary = "non-ADE"
        return (
            f"CurveGraph(k^2={self.k_squared}, {len(self.curves)} curves, "
            f"boundary={boundary})"
        )


def _component(start: str, adj: Dict[str, List[str]]) -> List[str]:
    seen = {start}
    stack = [start]
    out = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                out.append(w)
                stack.append(w)
    return out


def _is_chain_with_end(comp: List[str], adj: Dict[str, List[str]], e: str) -> bool:
    degrees = {v: len([w for w in adj[v] if w in comp]) for v in comp}
    if len(comp) == 1:
        return True
    edge_count = sum(degrees.values()) // 2
    if edge_count != len(comp) - 1:
        return False  # contains a cycle
    if any(d > 2 for d in degrees.values()):
        return False
    return degrees[e] == 1


def from_elliptic_surface(
    config: FiberConfiguration, solution: SectionSolution
) -> CurveGraph:
    """Negative curves on a rational elliptic surface: all components of
    the reducible fibers, the zero section O, and every section disjoint
    from O found by the solver.  K^2 = 0."""
    from .kodaira import component_data

    curves: Dict[str, Curve] = {}
    weights: Dict[FrozenSet[str], int] = {}
    reducible = config.reducible
    for label, kind in reducible:
        data = component_data(kind)
        for i in range(data.count):
            curves[f"{label}.{i}"] = Curve(-2, "fiber")
        for i, j, w in data.edges:
            weights[frozenset((f"{label}.{i}", f"{label}.{j}"))] = w

    curves["O"] = Curve(-1, "zero-section")
    for label, _ in reducible:
        weights[frozenset(("O", f"{label}.0"))] = 1

    for rec in solution.records:
        name = rec.name()
        curves[name] = Curve(-1, "section")
        for (label, _), comp in zip(reducible, rec.assignment):
            weights[frozenset((name, f"{label}.{comp}"))] = 1
        if rec.po:
            weights[frozenset((name, "O"))] = rec.po
    if solution.intersections:
        for (a, b), w in solution.intersections.items():
            if w:
                weights[frozenset((a, b))] = w

    return CurveGraph(curves, weights, 0)


def graph_from_json(data: dict) -> CurveGraph:
    """Inverse of CurveGraph.to_json."""
    curves = {
        n: Curve(c["self_int"], c.get("role", "curve"))
        for n, c in data["curves"].items()
    }
    weights = {
        frozenset((a, b)): w for a, b, w in data.get("weights", [])
    }
    return CurveGraph(
        curves,
        weights,
        data["k_squared"],
        tuple(data.get("history", ())),
        tuple((n, s) for n, s in data.get("dropped", ())),
    )
