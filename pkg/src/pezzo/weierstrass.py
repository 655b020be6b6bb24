"""Homogeneous binary forms over Q(w), discriminants, J-invariants, and
fiber-type inference from vanishing orders at the roots of the
discriminant.

Forms live on P^1 with coordinates (X : Y).  Root finding factors the
discriminant exactly over Q(w); an irreducible residual factor of degree
d is reported as d conjugate points sharing one vanishing-order profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from .exactnum import OMEGA, QONE, QZERO, QuadElem, rational
from .kodaira import FiberKind, NonMinimal, euler_number, fiber_from_orders


class ZeroForm(ValueError):
    pass


class ZeroDiscriminant(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class FormParseError(ValueError):
    pass


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form sum c_k X^k Y^(degree-k) with c_k in Q(w)."""

    degree: int
    coefficients: Tuple[QuadElem, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.degree + 1:
            raise ValueError("coefficient count must be degree + 1")

    @staticmethod
    def of(degree: int, coeffs) -> "BinaryForm":
        out = []
        for c in coeffs:
            out.append(c if isinstance(c, QuadElem) else QuadElem.of(rational(c)))
        return BinaryForm(degree, tuple(out))

    @staticmethod
    def zero(degree: int) -> "BinaryForm":
        return BinaryForm(degree, (QZERO,) * (degree + 1))

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.coefficients)

    def coefficient(self, k: int) -> QuadElem:
        return self.coefficients[k]

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add forms of different degrees")
        return BinaryForm(
            self.degree,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(-c for c in self.coefficients))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        d = self.degree + other.degree
        out = [QZERO] * (d + 1)
        for i, a in enumerate(self.coefficients):
            if not a:
                continue
            for j, b in enumerate(other.coefficients):
                if b:
                    out[i + j] = out[i + j] + a * b
        return BinaryForm(d, tuple(out))

    def scale(self, c) -> "BinaryForm":
        c = c if isinstance(c, QuadElem) else QuadElem.of(rational(c))
        return BinaryForm(self.degree, tuple(c * x for x in self.coefficients))

    def __pow__(self, n: int) -> "BinaryForm":
        out = BinaryForm.of(0, [1])
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, x: QuadElem, y: QuadElem) -> QuadElem:
        acc = QZERO
        for k, c in enumerate(self.coefficients):
            acc = acc + c * x**k * y ** (self.degree - k)
        return acc

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = []
            if k:
                mono.append(f"X^{k}" if k > 1 else "X")
            if k < self.degree:
                j = self.degree - k
                mono.append(f"Y^{j}" if j > 1 else "Y")
            body = "*".join(mono) if mono else "1"
            parts.append(f"({c})*{body}")
        return " + ".join(parts) if parts else "0"


X = BinaryForm.of(1, [0, 1])
Y = BinaryForm.of(1, [1, 0])


def discriminant(g2: BinaryForm, g3: BinaryForm, scaled: bool = False) -> BinaryForm:
    """Delta = g2^3 - 27 g3^2, a form of degree 12.  With scaled=True the
    inputs are (G2, G3) with G3^2 = 27 g3^2 already folded in, so
    Delta = G2^3 - G3^2."""
    if g2.degree != 4 or g3.degree != 6:
        raise DegreeMismatch("expected degrees (4, 6)")
    factor = 1 if scaled else 27
    delta = g2**3 - (g3 * g3).scale(factor)
    if delta.is_zero:
        raise ZeroDiscriminant("g2^3 equals 27*g3^2")
    return delta


def vanishing_order(f: BinaryForm, point: Tuple[QuadElem, QuadElem]) -> int:
    """Largest k with (bX - aY)^k dividing f at the point (a : b)."""
    if f.is_zero:
        raise ZeroForm("vanishing order of the zero form")
    a, b = point
    if not a and not b:
        raise ValueError("(0 : 0) is not a point of the projective line")
    order = 0
    current = f
    while current.degree >= 1:
        quotient = _divide_linear(current, a, b)
        if quotient is None:
            break
        current = quotient
        order += 1
    return order


def _divide_linear(f: BinaryForm, a: QuadElem, b: QuadElem) -> Optional[BinaryForm]:
    """Exact division of f by bX - aY, or None."""
    d = f.degree
    c = f.coefficients
    if not a:
        # divisor is b*X: need c_0 = 0
        if c[0]:
            return None
        binv = b.inverse()
        return BinaryForm(d - 1, tuple(binv * c[k + 1] for k in range(d)))
    ainv = a.inverse()
    g = [QZERO] * d
    prev = QZERO
    for k in range(d):
        g[k] = (b * prev - c[k]) * ainv
        prev = g[k]
    if c[d] != b * g[d - 1]:
        return None
    return BinaryForm(d - 1, tuple(g))


# ---------------------------------------------------------------------------
# exact factorization over Q(w) via sympy


_SQ = sympy.sqrt(-3)
_X, _W = sympy.symbols("x w")


def _to_sympy(q: QuadElem):
    # w = (-1 + sqrt(-3)) / 2
    return sympy.Rational(q.a.numerator, q.a.denominator) + sympy.Rational(
        q.b.numerator, q.b.denominator
    ) * (sympy.Rational(-1, 2) + _SQ / 2)


def _from_sympy(expr) -> QuadElem:
    # invert: p + q*sqrt(-3) = (p + q) + 2q * w
    s = sympy.expand(sympy.sympify(expr))
    conj = sympy.conjugate(s)
    p = sympy.simplify((s + conj) / 2)
    q = sympy.simplify((s - conj) / (2 * _SQ))
    if not (p.is_rational and q.is_rational):
        raise ValueError(f"{expr} is not in Q(w)")
    pf = Fraction(int(p.p), int(p.q))
    qf = Fraction(int(q.p), int(q.q))
    return QuadElem(pf + qf, 2 * qf)


def _dehomogenize(f: BinaryForm):
    """f as a sympy polynomial in x = X/Y, plus the order at (1 : 0)."""
    top = max(k for k, c in enumerate(f.coefficients) if c)
    expr = sum(_to_sympy(c) * _X**k for k, c in enumerate(f.coefficients) if c)
    return sympy.Poly(expr, _X, extension=_SQ), f.degree - top


def _multiplicity(poly, factor) -> int:
    count = 0
    while poly.degree() >= factor.degree():
        quo, rem = sympy.div(poly, factor)
        if not rem.is_zero:
            break
        poly = quo
        count += 1
    return count


@dataclass(frozen=True)
class FiberPoint:
    """A root of the discriminant: either a Q(w)-rational point or a
    group of conjugate points sharing an irreducible minimal polynomial."""

    label: str
    count: int
    kind: Optional[FiberKind]
    orders: Tuple[int, int, int]


def fiber_configuration_of(
    g2: BinaryForm, g3: BinaryForm, scaled: bool = False
) -> List[FiberPoint]:
    """Singular fibers of the elliptic surface with Weierstrass data
    (g2, g3): factor Delta over Q(w) and classify each root by the
    vanishing orders of g2, g3 and Delta."""
    delta = discriminant(g2, g3, scaled=scaled)
    d_poly, d_inf = _dehomogenize(delta)
    out: List[FiberPoint] = []

    if d_inf:
        orders = (
            vanishing_order(g2, (QONE, QZERO)),
            vanishing_order(g3, (QONE, QZERO)),
            d_inf,
        )
        out.append(FiberPoint("(1:0)", 1, fiber_from_orders(*orders), orders))

    _, factors = d_poly.factor_list()
    for factor, mult in sorted(factors, key=lambda fm: str(fm[0])):
        if factor.degree() == 1:
            coeffs = factor.all_coeffs()
            root = -sympy.together(coeffs[1] / coeffs[0])
            a = _from_sympy(root)
            orders = (
                vanishing_order(g2, (a, QONE)),
                vanishing_order(g3, (a, QONE)),
                mult,
            )
            out.append(
                FiberPoint(f"({a}:1)", 1, fiber_from_orders(*orders), orders)
            )
        else:
            g2_poly, _ = _dehomogenize(g2)
            g3_poly, _ = _dehomogenize(g3)
            orders = (
                _multiplicity(g2_poly, factor),
                _multiplicity(g3_poly, factor),
                mult,
            )
            kind = fiber_from_orders(*orders)
            out.append(
                FiberPoint(
                    f"conjugate roots of {factor.as_expr()}",
                    factor.degree(),
                    kind,
                    orders,
                )
            )

    total = sum(p.count * p.orders[2] for p in out)
    assert total == 12, f"orders of Delta sum to {total}"
    return out


def fiber_multiset(points: List[FiberPoint]) -> List[str]:
    out: List[str] = []
    for p in points:
        if p.kind is not None:
            out.extend([str(p.kind)] * p.count)
    return sorted(out)


@dataclass(frozen=True)
class JInvariant:
    numerator: BinaryForm  # g2^3
    denominator: BinaryForm  # Delta
    is_constant: bool


def j_invariant(g2: BinaryForm, g3: BinaryForm, scaled: bool = False) -> JInvariant:
    delta = discriminant(g2, g3, scaled=scaled)
    num = g2**3
    return JInvariant(num, delta, _proportional(num, delta))


def _proportional(f: BinaryForm, g: BinaryForm) -> bool:
    if f.is_zero or g.is_zero:
        return True
    if f.degree != g.degree:
        return False
    pairs = list(zip(f.coefficients, g.coefficients))
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if pairs[i][0] * pairs[j][1] != pairs[j][0] * pairs[i][1]:
                return False
    return True


# ---------------------------------------------------------------------------
# the unique surface with fibers (I4, I2, I2, I2, I2)


@dataclass(frozen=True)
class ScaledModel:
    """Weierstrass data in the rescaled convention Delta = G2^3 - G3^2."""

    G2: BinaryForm
    G3: BinaryForm
    H1: BinaryForm
    H2: BinaryForm
    delta_bar: BinaryForm


def quintic_fiber_model() -> ScaledModel:
    """The rank-one surface with singular fibers (I4, 4 I2), written via
    the factorization G2^3 = (G3 - dbar)(G3 + dbar) into coprime cubes
    H1^3, H2^3 over Q(w)."""
    w = OMEGA
    inv = (QONE - w).inverse()  # equals (2 + w) / 3
    h1 = BinaryForm(2, (QONE, -QONE, w)).scale(inv)
    h2 = BinaryForm(2, (w, -w, QONE)).scale(inv)
    # dbar = -1/2 (Y^2 - XY - X^2) X^2 Y (X - Y)
    quad = BinaryForm.of(2, [1, -1, -1])
    dbar = (quad * X * X * Y * (X - Y)).scale(Fraction(-1, 2))
    g2 = h1 * h2
    g3 = h1**3 + dbar
    return ScaledModel(g2, g3, h1, h2, dbar)


# ---------------------------------------------------------------------------
# parsing


def parse_form(text: str, degree: Optional[int] = None) -> BinaryForm:
    """Parse a homogeneous polynomial in X, Y with rational coefficients
    and the symbol w for the cube root of unity."""
    sx, sy = sympy.symbols("X Y")
    try:
        expr = sympy.sympify(
            text, locals={"X": sx, "Y": sy, "w": _W}, rational=True
        )
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise FormParseError(f"cannot parse {text!r}: {exc}") from exc
    expr = sympy.expand(expr.subs(_W, sympy.Rational(-1, 2) + _SQ / 2))
    poly = sympy.Poly(expr, sx, sy, extension=_SQ) if expr != 0 else None
    if poly is None:
        if degree is None:
            raise FormParseError("degree of the zero form is ambiguous")
        return BinaryForm.zero(degree)
    degrees = {i + j for (i, j), _ in poly.terms()}
    if len(degrees) != 1:
        raise FormParseError(f"{text!r} is not homogeneous")
    (d,) = degrees
    if degree is not None and d != degree:
        raise FormParseError(f"expected degree {degree}, got {d}")
    coeffs = [QZERO] * (d + 1)
    for (i, _), coeff in poly.terms():
        coeffs[i] = _from_sympy(coeff.as_expr() if hasattr(coeff, "as_expr") else coeff)
    return BinaryForm(d, tuple(coeffs))
