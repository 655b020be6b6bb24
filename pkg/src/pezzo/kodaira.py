"""Kodaira singular-fiber types: component structure, dual graphs,
multiplicities, component groups, local height contributions, Euler
numbers and the vanishing-order table."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .dynkin import A, D, DynkinType, E
from .exactnum import RatMatrix, invert_matrix


class Irreducible(ValueError):
    """The fiber has a single component."""


class BadComponentIndex(ValueError):
    pass


class NonMinimal(ValueError):
    pass


class InconsistentOrders(ValueError):
    pass


@dataclass(frozen=True)
class FiberKind:
    """Tag 'I' carries n >= 1; 'I*' carries n >= 0; the six exceptional
    kinds (II, III, IV, II*, III*, IV*) carry no index."""

    tag: str
    n: int = 0

    def __post_init__(self):
        if self.tag == "I":
            if self.n < 1:
                raise ValueError("I_n needs n >= 1")
        elif self.tag == "I*":
            if self.n < 0:
                raise ValueError("I_n* needs n >= 0")
        elif self.tag in ("II", "III", "IV", "II*", "III*", "IV*"):
            if self.n != 0:
                raise ValueError(f"{self.tag} carries no index")
        else:
            raise ValueError(f"unknown fiber tag {self.tag!r}")

    @property
    def is_reducible(self) -> bool:
        return self.num_components > 1

    @property
    def num_components(self) -> int:
        if self.tag == "I":
            return self.n
        if self.tag == "I*":
            return self.n + 5
        return {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}[self.tag]

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag


def I(n: int) -> FiberKind:
    return FiberKind("I", n)


def Istar(n: int) -> FiberKind:
    return FiberKind("I*", n)


II = FiberKind("II")
III = FiberKind("III")
IV = FiberKind("IV")
IIstar = FiberKind("II*")
IIIstar = FiberKind("III*")
IVstar = FiberKind("IV*")


def parse_fiber(label: str) -> FiberKind:
    s = label.strip().replace("_", "")
    if s in ("II", "III", "IV", "II*", "III*", "IV*"):
        return FiberKind(s)
    if s.startswith("I"):
        body = s[1:]
        if body.endswith("*"):
            return Istar(int(body[:-1]))
        return I(int(body))
    raise ValueError(f"unknown fiber label {label!r}")


@dataclass(frozen=True)
class FiberComponents:
    """Components of a fiber: index 0 meets the zero section and has
    multiplicity 1.  Edges carry intersection multiplicities."""

    multiplicities: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (i, j, weight)
    simple: Tuple[int, ...]  # indices of multiplicity-1 components

    @property
    def count(self) -> int:
        return len(self.multiplicities)

    def full_gram(self) -> RatMatrix:
        n = self.count
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = -2
        for i, j, w in self.edges:
            m[i][j] += w
            m[j][i] += w
        return RatMatrix(m)

    def reduced_gram(self) -> RatMatrix:
        """Gram matrix of components 1..m-1 (zero component removed)."""
        return self.full_gram().submatrix(range(1, self.count))


@lru_cache(maxsize=None)
def component_data(k: FiberKind) -> FiberComponents:
    if k.tag == "I":
        n = k.n
        if n == 1:
            return FiberComponents((1,), (), (0,))
        if n == 2:
            return FiberComponents((1, 1), ((0, 1, 2),), (0, 1))
        edges = tuple((i, (i + 1) % n, 1) for i in range(n))
        return FiberComponents((1,) * n, edges, tuple(range(n)))
    if k.tag == "II":
        return FiberComponents((1,), (), (0,))
    if k.tag == "III":
        return FiberComponents((1, 1), ((0, 1, 2),), (0, 1))
    if k.tag == "IV":
        return FiberComponents((1, 1, 1), ((0, 1, 1), (0, 2, 1), (1, 2, 1)), (0, 1, 2))
    if k.tag == "I*":
        # leaves 0,1 at the near end, 2,3 at the far end; central chain
        # of n+1 multiplicity-2 components carries indices 4..4+n
        n = k.n
        mult = (1, 1, 1, 1) + (2,) * (n + 1)
        near, far = 4, 4 + n
        edges = [(0, near, 1), (1, near, 1), (2, far, 1), (3, far, 1)]
        edges += [(4 + i, 5 + i, 1) for i in range(n)]
        return FiberComponents(mult, tuple(edges), (0, 1, 2, 3))
    if k.tag == "IV*":
        # affine E6: tips 0,1,2 (mult 1), middles 3,4,5 (mult 2), center 6 (mult 3)
        mult = (1, 1, 1, 2, 2, 2, 3)
        edges = ((0, 3, 1), (1, 4, 1), (2, 5, 1), (3, 6, 1), (4, 6, 1), (5, 6, 1))
        return FiberComponents(mult, edges, (0, 1, 2))
    if k.tag == "III*":
        # affine E7 chain 0-2-3-4-5-6-1 (mult 1,2,3,4,3,2,1) with 7 (mult 2) on 4
        mult = (1, 1, 2, 3, 4, 3, 2, 2)
        edges = ((0, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 1, 1), (4, 7, 1))
        return FiberComponents(mult, edges, (0, 1))
    # II*: affine E8 chain with multiplicities (1,2,3,4,5,6,4,2) and a
    # multiplicity-3 component attached to the multiplicity-6 one
    mult = (1, 2, 3, 4, 5, 6, 4, 2, 3)
    edges = ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1), (5, 8, 1))
    return FiberComponents(mult, edges, (0,))


def root_lattice_of(k: FiberKind) -> DynkinType:
    if not k.is_reducible:
        raise Irreducible(f"{k} is irreducible")
    if k.tag == "I":
        return DynkinType.of(A(k.n - 1))
    if k.tag == "III":
        return DynkinType.of(A(1))
    if k.tag == "IV":
        return DynkinType.of(A(2))
    if k.tag == "I*":
        return DynkinType.of(D(k.n + 4))
    return DynkinType.of(E({"IV*": 6, "III*": 7, "II*": 8}[k.tag]))


def euler_number(k: FiberKind) -> int:
    if k.tag == "I":
        return k.n
    if k.tag == "I*":
        return k.n + 6
    return {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}[k.tag]


@lru_cache(maxsize=None)
def _neg_inverse_reduced_gram(k: FiberKind) -> RatMatrix:
    inv = invert_matrix(component_data(k).reduced_gram())
    return RatMatrix([[-x for x in inv.row(i)] for i in range(inv.rows)])


def local_contribution(k: FiberKind, i: int, j: int) -> Fraction:
    """(-A^-1)_{i,j} over the nonzero components, by exact inversion;
    zero when either index is the zero component."""
    data = component_data(k)
    for idx in (i, j):
        if idx not in data.simple:
            raise BadComponentIndex(f"{idx} is not a simple component of {k}")
    if i == 0 or j == 0:
        return Fraction(0)
    m = _neg_inverse_reduced_gram(k)
    return m[i - 1, j - 1]


@dataclass(frozen=True)
class ComponentGroup:
    """Component group of the fiber as a product of cyclic factors, with
    the bijection simple component index <-> group element."""

    moduli: Tuple[int, ...]
    simple_map: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def element_of(self, comp_index: int) -> Tuple[int, ...]:
        for idx, elt in self.simple_map:
            if idx == comp_index:
                return elt
        raise BadComponentIndex(f"{comp_index} has no group element")

    def component_of(self, elt: Tuple[int, ...]) -> Optional[int]:
        for idx, e in self.simple_map:
            if e == elt:
                return idx
        return None

    @property
    def order(self) -> int:
        out = 1
        for m in self.moduli:
            out *= m
        return out

    def elements(self) -> List[Tuple[int, ...]]:
        out = [()]
        for m in self.moduli:
            out = [e + (i,) for e in out for i in range(m)]
        return out

    def add(self, x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def scale(self, n: int, x: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple((n * a) % m for a, m in zip(x, self.moduli))


@lru_cache(maxsize=None)
def component_group(k: FiberKind) -> ComponentGroup:
    if k.tag == "I":
        if k.n == 1:
            return ComponentGroup((), ((0, ()),))
        return ComponentGroup((k.n,), tuple((i, (i,)) for i in range(k.n)))
    if k.tag == "II":
        return ComponentGroup((), ((0, ()),))
    if k.tag == "III":
        return ComponentGroup((2,), ((0, (0,)), (1, (1,))))
    if k.tag == "IV":
        return ComponentGroup((3,), ((0, (0,)), (1, (1,)), (2, (2,))))
    if k.tag == "I*":
        if k.n % 2 == 1:
            # Z/4: near leaf 1 -> 2, far leaves 2,3 -> 1,3
            return ComponentGroup((4,), ((0, (0,)), (1, (2,)), (2, (1,)), (3, (3,))))
        return ComponentGroup(
            (2, 2), ((0, (0, 0)), (1, (1, 0)), (2, (0, 1)), (3, (1, 1)))
        )
    if k.tag == "IV*":
        return ComponentGroup((3,), ((0, (0,)), (1, (1,)), (2, (2,))))
    if k.tag == "III*":
        return ComponentGroup((2,), ((0, (0,)), (1, (1,))))
    return ComponentGroup((), ((0, ()),))  # II*


def fiber_from_orders(v2: int, v3: int, vd: int) -> Optional[FiberKind]:
    """Kodaira/Tate table on the vanishing orders of (g2, g3, Delta);
    None for a smooth fiber."""
    if vd < 0:
        raise InconsistentOrders("negative order of Delta")
    if min(3 * v2, 2 * v3) >= 12:
        raise NonMinimal(f"orders ({v2}, {v3}, {vd}) are not minimal")
    if vd == 0:
        return None
    if v2 == 0 and v3 == 0:
        return I(vd)
    if v2 >= 1 and v3 == 1 and vd == 2:
        return II
    if v2 == 1 and v3 >= 2 and vd == 3:
        return III
    if v2 >= 2 and v3 == 2 and vd == 4:
        return IV
    if vd >= 6 and v2 >= 2 and v3 >= 3 and (v2 == 2 or v3 == 3 or vd == 6):
        return Istar(vd - 6)
    if v2 >= 3 and v3 == 4 and vd == 8:
        return IVstar
    if v2 == 3 and v3 >= 5 and vd == 9:
        return IIIstar
    if v2 >= 4 and v3 == 5 and vd == 10:
        return IIstar
    raise InconsistentOrders(f"no fiber type for orders ({v2}, {v3}, {vd})")
