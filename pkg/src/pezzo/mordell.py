"""Shioda-Tate rank computation, the explicit height pairing, and a
constraint solver enumerating sections with their fiber-component
assignments.

The solver treats the per-fiber component assignment as a group
homomorphism from the Mordell-Weil group into the product of the
component groups of the reducible fibers.  A candidate homomorphism is
kept only if every group element in a verification window admits a
consistent non-negative integer P.O and all pairwise intersection
numbers come out as non-negative integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .dynkin import DynkinType, EMPTY_TYPE
from .exactnum import RatMatrix, format_rational, rational
from .kodaira import (
    ComponentGroup,
    FiberKind,
    component_group,
    euler_number,
    local_contribution,
    parse_fiber,
    root_lattice_of,
)

CHI = 1  # Euler characteristic of the structure sheaf, rational elliptic surface


class NegativeRank(ValueError):
    pass


class AssignmentMismatch(ValueError):
    pass


class NonIntegralIntersection(ValueError):
    pass


class NoAssignment(ValueError):
    pass


@dataclass(frozen=True)
class FiberConfiguration:
    """Singular fibers of a rational elliptic surface over P^1."""

    fibers: Tuple[Tuple[str, FiberKind], ...]

    def __post_init__(self):
        if not self.fibers:
            raise ValueError("need at least one singular fiber")
        total = sum(euler_number(k) for _, k in self.fibers)
        if total != 12:
            raise ValueError(f"Euler numbers sum to {total}, expected 12")

    @staticmethod
    def of(*kinds: FiberKind) -> "FiberConfiguration":
        return FiberConfiguration(
            tuple((f"f{i + 1}", k) for i, k in enumerate(kinds))
        )

    @staticmethod
    def parse(text: str) -> "FiberConfiguration":
        """Parse e.g. 'I3*,II,I1' or '2I4,I2,2I1' (multiplicity prefixes)."""
        kinds: List[FiberKind] = []
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            count = 1
            # a leading digit run is a multiplicity only if an 'I'..'IV' follows
            i = 0
            while i < len(part) and part[i].isdigit():
                i += 1
            if i and i < len(part) and part[i] == "I":
                count = int(part[:i])
                part = part[i:]
            kinds.extend([parse_fiber(part)] * count)
        return FiberConfiguration.of(*kinds)

    @property
    def reducible(self) -> Tuple[Tuple[str, FiberKind], ...]:
        return tuple((lbl, k) for lbl, k in self.fibers if k.is_reducible)

    def __str__(self) -> str:
        return ",".join(str(k) for _, k in self.fibers)


def trivial_lattice(config: FiberConfiguration) -> Tuple[DynkinType, int]:
    """Root part of the trivial lattice and its total rank (zero section,
    fiber class and the non-zero fiber components)."""
    t = EMPTY_TYPE
    for _, k in config.reducible:
        t = t + root_lattice_of(k)
    return t, 2 + t.rank


def shioda_tate_rank(config: FiberConfiguration) -> int:
    rank = 8 - trivial_lattice(config)[0].rank
    if rank < 0:
        raise NegativeRank(f"configuration {config} is over-full")
    return rank


@dataclass(frozen=True)
class MWStructure:
    """Free Gram matrix (possibly 0x0) plus torsion invariants, e.g. (2, 2)."""

    free_gram: RatMatrix
    torsion: Tuple[int, ...] = ()

    @property
    def rank(self) -> int:
        return self.free_gram.rows

    @staticmethod
    def rank_zero(torsion: Tuple[int, ...] = ()) -> "MWStructure":
        return MWStructure(RatMatrix.identity(0), torsion)

    @staticmethod
    def rank_one(height, torsion: Tuple[int, ...] = ()) -> "MWStructure":
        return MWStructure(RatMatrix([[rational(height)]]), torsion)

    def torsion_elements(self) -> List[Tuple[int, ...]]:
        out = [()]
        for m in self.torsion:
            out = [e + (i,) for e in out for i in range(m)]
        return out

    def pairing(self, x: "GroupElement", y: "GroupElement") -> Fraction:
        g = self.free_gram
        return sum(
            (x.coords[i] * y.coords[j] * g[i, j] for i in range(g.rows) for j in range(g.rows)),
            Fraction(0),
        )


@dataclass(frozen=True)
class GroupElement:
    """Element of MW: integer coordinates over the free generators plus a
    torsion element."""

    coords: Tuple[int, ...]
    torsion: Tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coords) and not any(self.torsion)

    def name(self) -> str:
        parts = []
        if any(self.coords):
            if len(self.coords) == 1:
                parts.append(f"P{self.coords[0]}")
            else:
                parts.append("P(" + ",".join(map(str, self.coords)) + ")")
        if any(self.torsion):
            parts.append("Q" + "".join(map(str, self.torsion)))
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class SectionRecord:
    element: GroupElement
    assignment: Tuple[int, ...]  # simple-component index per reducible fiber
    po: int
    height: Fraction

    def name(self) -> str:
        return self.element.name()

    def to_json(self, config: FiberConfiguration) -> dict:
        labels = [lbl for lbl, _ in config.reducible]
        return {
            "name": self.name(),
            "coords": list(self.element.coords),
            "torsion": list(self.element.torsion),
            "assignment": dict(zip(labels, self.assignment)),
            "po": self.po,
            "height": format_rational(self.height),
        }


def height_pair(
    P: SectionRecord,
    Q: SectionRecord,
    pq: int,
    config: FiberConfiguration,
) -> Fraction:
    """chi + (PO) + (QO) - (PQ) - sum of local contributions; for P = Q
    pass pq = -1 sentinel?  Callers use same-record identity instead."""
    reducible = config.reducible
    for rec in (P, Q):
        if len(rec.assignment) != len(reducible):
            raise AssignmentMismatch("assignment length does not match configuration")
    contr = sum(
        (
            local_contribution(kind, i, j)
            for (_, kind), i, j in zip(reducible, P.assignment, Q.assignment)
        ),
        Fraction(0),
    )
    if P is Q or (P.element == Q.element and P.assignment == Q.assignment):
        return 2 * CHI + 2 * P.po - contr
    return CHI + P.po + Q.po - pq - contr


def pairing_to_intersection(
    P: SectionRecord,
    Q: SectionRecord,
    hpq: Fraction,
    config: FiberConfiguration,
) -> int:
    """Solve the height formula for the intersection number (PQ)."""
    if P.element == Q.element:
        raise AssignmentMismatch("(PQ) is only defined for distinct elements")
    reducible = config.reducible
    contr = sum(
        (
            local_contribution(kind, i, j)
            for (_, kind), i, j in zip(reducible, P.assignment, Q.assignment)
        ),
        Fraction(0),
    )
    pq = CHI + P.po + Q.po - hpq - contr
    if pq.denominator != 1 or pq < 0:
        raise NonIntegralIntersection(
            f"({P.name()} {Q.name()}) = {pq} is not a non-negative integer"
        )
    return int(pq)


# ---------------------------------------------------------------------------
# section solver


@dataclass(frozen=True)
class SectionSolution:
    """One consistent specialization homomorphism and the sections it
    yields (filtered to P.O = 0 unless po_max was raised)."""

    records: Tuple[SectionRecord, ...]
    intersections: Dict[Tuple[str, str], int] = field(hash=False, compare=False, default=None)

    def record_named(self, name: str) -> SectionRecord:
        for r in self.records:
            if r.name() == name:
                return r
        raise KeyError(name)


def _groups(config: FiberConfiguration) -> List[Tuple[FiberKind, ComponentGroup]]:
    return [(k, component_group(k)) for _, k in config.reducible]


def _hom_images(
    groups: List[Tuple[FiberKind, ComponentGroup]], order: int
) -> Iterable[Tuple[Tuple[int, ...], ...]]:
    """All tuples of local group elements killed by `order` (0 = any order)."""
    per_fiber = []
    for _, grp in groups:
        elts = []
        for e in grp.elements():
            if order == 0 or grp.scale(order, e) == tuple(0 for _ in grp.moduli):
                elts.append(e)
        per_fiber.append(elts)
    return itertools.product(*per_fiber)


def _contr_sum(groups, images_p, images_q) -> Fraction:
    total = Fraction(0)
    for (kind, grp), ep, eq in zip(groups, images_p, images_q):
        i = grp.component_of(ep)
        j = grp.component_of(eq)
        total += local_contribution(kind, min(i, j), max(i, j))
    return total


def _apply_hom(groups, free_images, torsion_images, element: GroupElement):
    out = []
    for fi, (kind, grp) in enumerate(groups):
        acc = tuple(0 for _ in grp.moduli)
        for c, img in zip(element.coords, free_images):
            acc = grp.add(acc, grp.scale(c, img[fi]))
        for t, img in zip(element.torsion, torsion_images):
            acc = grp.add(acc, grp.scale(t, img[fi]))
        out.append(acc)
    return tuple(out)


def _element_order_in_product(groups, images) -> int:
    order = 1
    for (_, grp), e in zip(groups, images):
        k = 1
        acc = e
        zero = tuple(0 for _ in grp.moduli)
        while acc != zero:
            acc = grp.add(acc, e)
            k += 1
        order = order * k // gcd(order, k)
    return order


def coordinate_window(mw: MWStructure, height_cap: Fraction) -> int:
    """Largest |n| with n^2 * <P,P> <= height_cap for the rank-one free
    part (0 for rank zero)."""
    if mw.rank == 0:
        return 0
    if mw.rank > 1:
        raise NotImplementedError("catalog surfaces have Mordell-Weil rank <= 1")
    g = mw.free_gram[0, 0]
    if g <= 0:
        raise ValueError("free Gram must be positive definite")
    bound = height_cap / g
    return isqrt(bound.numerator // bound.denominator)


def solve_sections(
    config: FiberConfiguration,
    mw: MWStructure,
    height_bound: Fraction = Fraction(2),
    coord_window: Optional[int] = None,
    po_max: int = 0,
    all_solutions: bool = False,
):
    """Enumerate sections disjoint from the zero section (po = 0 by
    default) together with their component assignments.

    Returns the canonical SectionSolution, or every consistent solution
    when all_solutions is set.
    """
    if mw.rank != shioda_tate_rank(config):
        raise NoAssignment(
            f"Mordell-Weil rank {mw.rank} inconsistent with configuration {config}"
        )
    groups = _groups(config)
    height_cap = rational(height_bound) + 2 * po_max
    window = coord_window if coord_window is not None else coordinate_window(mw, height_cap)

    torsion_elts = mw.torsion_elements()
    free_image_choices = list(_hom_images(groups, 0)) if mw.rank else [()]
    torsion_image_choices = [list(_hom_images(groups, m)) for m in mw.torsion]

    solutions = []
    seen_outputs = set()
    for free_imgs in (
        itertools.product(free_image_choices, repeat=mw.rank) if mw.rank else [()]
    ):
        for tors_imgs in itertools.product(*torsion_image_choices):
            sol = _check_hom(
                config, mw, groups, free_imgs, tors_imgs, window, torsion_elts, po_max
            )
            if sol is None:
                continue
            key = tuple(sorted((r.element.coords, r.element.torsion, r.assignment) for r in sol.records))
            if key in seen_outputs:
                continue
            seen_outputs.add(key)
            solutions.append(sol)
            if not all_solutions:
                return sol
    if not solutions:
        raise NoAssignment(f"no consistent assignment for {config} with the given MW structure")
    return solutions


def _po_of(mw, groups, free_imgs, tors_imgs, element: GroupElement):
    h = mw.pairing(element, element)
    images = _apply_hom(groups, free_imgs, tors_imgs, element)
    contr = _contr_sum(groups, images, images)
    po2 = h - 2 * CHI + contr
    if po2.denominator != 1 or po2 < 0 or po2.numerator % 2:
        return None
    return int(po2) // 2


def _check_hom(config, mw, groups, free_imgs, tors_imgs, window, torsion_elts, po_max):
    # verification window: the assignment of n*P is periodic in n with the
    # order of the image, and n^2 * g mod 2Z is periodic with 2*den(g);
    # checking lcm of both windows covers every element of MW exactly.
    if mw.rank:
        g = mw.free_gram[0, 0]
        img_order = _element_order_in_product(groups, free_imgs[0])
        period = _lcm(img_order, 2 * g.denominator)
        check_window = max(window, period)
    else:
        check_window = 0

    elements = []
    for n in range(-check_window, check_window + 1):
        coords = (n,) if mw.rank else ()
        for t in torsion_elts:
            elem = GroupElement(coords, t)
            if elem.is_zero:
                continue
            elements.append(elem)

    records = []
    info = {}
    for elem in elements:
        po = _po_of(mw, groups, free_imgs, tors_imgs, elem)
        if po is None:
            return None
        images = _apply_hom(groups, free_imgs, tors_imgs, elem)
        info[elem] = (po, images)
        inside = all(abs(c) <= window for c in elem.coords)
        if inside and po <= po_max:
            assignment = tuple(
                grp.component_of(e) for (_, grp), e in zip(groups, images)
            )
            records.append(
                SectionRecord(elem, assignment, po, mw.pairing(elem, elem))
            )

    # pairwise intersection numbers must be non-negative integers
    inters = {}
    items = list(info.items())
    for a in range(len(items)):
        ea, (poa, ia) = items[a]
        for b in range(a + 1, len(items)):
            eb, (pob, ib) = items[b]
            h = mw.pairing(ea, eb)
            contr = _contr_sum(groups, ia, ib)
            pq = CHI + poa + pob - h - contr
            if pq.denominator != 1 or pq < 0:
                return None
            if poa == 0 and pob == 0:
                inters[(ea.name(), eb.name())] = int(pq)

    records.sort(key=lambda r: (r.height, r.element.coords, r.element.torsion))
    recs = tuple(records)
    pair_map = {
        (a, b): v
        for (a, b), v in inters.items()
        if any(r.name() == a for r in recs) and any(r.name() == b for r in recs)
    }
    return SectionSolution(recs, pair_map)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
