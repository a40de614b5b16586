"""The two model discrete Painleve maps on P^1 x P^1 in (f, g) coordinates.

Each half-step is a product equation that is linear in its unknown once
denominators are cleared.  We write every such equation bihomogeneously:
a coordinate ``p`` is a pair ``(p0, p1)`` with ``p = p0 / p1``, so infinity
is ``(1, 0)``.  The equation then reads ``c0 * X0 + c1 * X1 = 0`` for the
unknown ``X = X0 / X1``.

At a finite point the pair ``(c0, c1)`` is just evaluated.  When an input
sits at infinity its pair is taken as ``(1, t)`` in the chart variable ``t``,
and the coefficients become polynomials in ``t``.  Both coefficients share
a power of ``t`` that comes from the line at infinity itself.  We strip
that power, then set ``t = 0``.  The stripped power is the generic
vanishing order along the line, estimated from several sample positions
on it and the actual one.  If both stripped coefficients are zero, the
input is an indeterminate point of that half-map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BasePoint, DegenerateParameter
from .exactalg import INF, rat

INFINITY = INF


def _coord(value):
    return INFINITY if value is INFINITY else rat(value)


@dataclass(frozen=True)
class FGPoint:
    """A point of P^1 x P^1; each coordinate is a Rat or INFINITY."""

    f: object
    g: object

    def __post_init__(self):
        object.__setattr__(self, "f", _coord(self.f))
        object.__setattr__(self, "g", _coord(self.g))

    def __iter__(self):
        return iter((self.f, self.g))

    def is_finite(self) -> bool:
        return self.f is not INFINITY and self.g is not INFINITY


@dataclass(frozen=True)
class ParamsA2:
    b: tuple

    def __post_init__(self):
        if len(self.b) != 8:
            raise ValueError("ParamsA2 needs exactly eight parameters b1..b8")
        object.__setattr__(self, "b", tuple(rat(v) for v in self.b))

    @property
    def delta(self) -> Fraction:
        return sum(self.b, Fraction(0))

    def bi(self, i: int) -> Fraction:
        """1-based access, matching the usual b1..b8 labels."""
        return self.b[i - 1]

    def evolved(self) -> "ParamsA2":
        d = self.delta
        b = self.b
        return ParamsA2(b[:4] + (b[4] + d, b[5] + d, b[6] - d, b[7] - d))


@dataclass(frozen=True)
class ParamsA1:
    b0: Fraction
    b: tuple

    def __post_init__(self):
        if len(self.b) != 8:
            raise ValueError("ParamsA1 needs exactly eight parameters b1..b8")
        object.__setattr__(self, "b0", rat(self.b0))
        object.__setattr__(self, "b", tuple(rat(v) for v in self.b))

    @property
    def delta(self) -> Fraction:
        return sum(self.b, Fraction(0))

    def bi(self, i: int) -> Fraction:
        return self.b[i - 1]

    def evolved(self) -> "ParamsA1":
        return ParamsA1(self.b0 - self.delta, self.b)

    def reverted(self) -> "ParamsA1":
        return ParamsA1(self.b0 + self.delta, self.b)


# ---------------------------------------------------------------------------
# Polynomials in the chart variable t (coefficient lists, lowest degree first)


class _TPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [rat(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @staticmethod
    def lift(v) -> "_TPoly":
        return v if isinstance(v, _TPoly) else _TPoly([v])

    def __add__(self, other):
        other = _TPoly.lift(other)
        n = max(len(self.c), len(other.c))
        a = self.c + [0] * (n - len(self.c))
        b = other.c + [0] * (n - len(other.c))
        return _TPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return _TPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-_TPoly.lift(other))

    def __rsub__(self, other):
        return _TPoly.lift(other) - self

    def __mul__(self, other):
        other = _TPoly.lift(other)
        if not self.c or not other.c:
            return _TPoly([])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return _TPoly(out)

    __rmul__ = __mul__

    def order(self) -> float:
        for k, v in enumerate(self.c):
            if v != 0:
                return k
        return float("inf")

    def coefficient(self, k: int) -> Fraction:
        return self.c[k] if k < len(self.c) else Fraction(0)


_T = _TPoly([0, 1])
# Sample positions on a line at infinity used to read off its generic vanishing order.
_LINE_SAMPLES = (Fraction(7919, 13), Fraction(-104729, 31), Fraction(1299709, 277))


def _pair(value):
    return (Fraction(1), _T) if value is INFINITY else (_TPoly.lift(value), Fraction(1))


# A half-map builder takes homogeneous pairs of its known inputs and returns
# (c0, c1) with c0 * X0 + c1 * X1 = 0 the cleared, bihomogeneous equation.
Builder = Callable[..., tuple]


def _coefficients_at(builder: Builder, inputs: Sequence) -> tuple[Fraction, Fraction]:
    """Evaluate the cleared coefficients at ``inputs`` after removing boundary factors."""
    c0, c1 = (_TPoly.lift(c) for c in builder(*[_pair(v) for v in inputs]))
    infinite = [k for k, v in enumerate(inputs) if v is INFINITY]
    if not infinite:
        return c0.coefficient(0), c1.coefficient(0)
    finite = [k for k, v in enumerate(inputs) if v is not INFINITY]
    orders = [min(c0.order(), c1.order())]
    for sample in _LINE_SAMPLES:
        moved = list(inputs)
        if finite:
            for k in finite:
                moved[k] = sample
            s0, s1 = builder(*[_pair(v) for v in moved])
        else:
            # Both inputs infinite: approach along f = 1/t, g = 1/(sample t).
            pairs = [(Fraction(1), _T), (Fraction(1), _T * sample)]
            s0, s1 = builder(*pairs)
        s0, s1 = _TPoly.lift(s0), _TPoly.lift(s1)
        orders.append(min(s0.order(), s1.order()))
    k = min(orders)
    if k == float("inf"):
        return Fraction(0), Fraction(0)
    return c0.coefficient(k), c1.coefficient(k)


def _solve_half(builder: Builder, inputs: Sequence, name: str):
    """Solve one cleared linear equation; 0/0 is a DegenerateParameter."""
    c0, c1 = _coefficients_at(builder, inputs)
    if c0 == 0:
        if c1 == 0:
            raise DegenerateParameter(name, "indeterminate (0/0) in the half-map solve")
        return INFINITY
    return -c1 / c0


def half_map_coefficients(builder: Builder, inputs: Sequence) -> tuple[Fraction, Fraction]:
    """The pair (coefficient of the unknown, constant term) used by the solver."""
    return _coefficients_at(builder, inputs)


def _lin(p, c):
    """Homogenized p + c."""
    return p[0] + c * p[1]


def _lsum(p, q):
    """Homogenized p + q (bidegree (1, 1))."""
    return p[0] * q[1] + q[0] * p[1]


def _prod(items):
    out = _TPoly([1])
    for x in items:
        out = out * x
    return out


# ---------------------------------------------------------------------------
# d-P(A2): (f + g)(fbar + g) = prod_{i<=4}(g + b_i) / ((g - b5)(g - b6)),
#          (fbar + g)(fbar + gbar) = prod_{i<=4}(fbar - b_i) / ((fbar + b7 - delta)(fbar + b8 - delta))


def _a2_first(params: ParamsA2):
    b = params.b

    def builder(F, G):
        poles = _lin(G, -b[4]) * _lin(G, -b[5])
        left = _lsum(F, G) * poles
        right = F[1] * _prod(_lin(G, b[i]) for i in range(4))
        return left * G[1], left * G[0] - right

    return builder


def _a2_second(params: ParamsA2):
    b, d = params.b, params.delta

    def builder(H, K):
        poles = _lin(H, b[6] - d) * _lin(H, b[7] - d)
        left = _lsum(H, K) * poles
        right = K[1] * _prod(_lin(H, -b[i]) for i in range(4))
        return left * H[1], left * H[0] - right

    return builder


def dpa2_base_points(params: ParamsA2) -> list[tuple[str, FGPoint]]:
    b = params.b
    pts = [(f"p{i + 1}", FGPoint(b[i], -b[i])) for i in range(4)]
    pts += [("p5", FGPoint(INFINITY, b[4])), ("p6", FGPoint(INFINITY, b[5]))]
    pts += [("p7", FGPoint(-b[6], INFINITY)), ("p8", FGPoint(-b[7], INFINITY))]
    return pts


def _reject_base_points(points, pt: FGPoint):
    for label, bp in points:
        if bp == pt:
            raise BasePoint(label, pt)


def dpa2_half_coefficients(params: ParamsA2, pt: FGPoint):
    """Cleared coefficients of both half-solves; the second is None if the first is 0/0."""
    first = half_map_coefficients(_a2_first(params), (pt.f, pt.g))
    if first == (0, 0):
        return first, None
    fbar = INFINITY if first[0] == 0 else -first[1] / first[0]
    return first, half_map_coefficients(_a2_second(params), (fbar, pt.g))


def dpa2_step(params: ParamsA2, pt: FGPoint) -> tuple[ParamsA2, FGPoint]:
    _reject_base_points(dpa2_base_points(params), pt)
    fbar = _solve_half(_a2_first(params), (pt.f, pt.g), "fbar denominator (f + g)(g - b5)(g - b6)")
    gbar = _solve_half(
        _a2_second(params), (fbar, pt.g), "gbar denominator (fbar + g)(fbar + b7')(fbar + b8')"
    )
    return params.evolved(), FGPoint(fbar, gbar)


# ---------------------------------------------------------------------------
# d-P(A1): with G14 = prod (g - b + b_i), G58 = prod (g - b_i), F14 = prod (fbar - bbar - b_i),
# F58 = prod (fbar + b_i) and c = b + bbar:
#   (g + f - 2b)(g + fbar - c) / ((g + f)(g + fbar)) = G14 / G58
#   (g + fbar - c)(gbar + fbar - 2bbar) / ((g + fbar)(gbar + fbar)) = F14 / F58


def _g14(p, shift, b):
    return _prod(_lin(p, shift + b[i]) for i in range(4))


def _g58(p, b):
    return _prod(_lin(p, -b[i]) for i in range(4, 8))


def _a1_first(params: ParamsA1):
    b0, b = params.b0, params.b
    c = 2 * b0 - params.delta

    def builder(F, G):
        fg = _lsum(F, G)
        shifted = fg - 2 * b0 * F[1] * G[1]
        g14, g58 = _g14(G, -b0, b), _g58(G, b)
        # (G0 X1 + X0 G1 - c X1 G1) * shifted * G58 - (G0 X1 + X0 G1) * fg * G14
        c0 = G[1] * (shifted * g58 - fg * g14)
        c1 = _lin(G, -c) * shifted * g58 - G[0] * fg * g14
        return c0, c1

    return builder


def _a1_second(params: ParamsA1):
    bb, b = params.b0 - params.delta, params.b
    c = 2 * params.b0 - params.delta

    def builder(H, K):
        hk = _lsum(H, K)
        shifted = hk - c * H[1] * K[1]
        f14, f58 = _f14(H, bb, b), _f58(H, b)
        c0 = H[1] * (shifted * f58 - hk * f14)
        c1 = _lin(H, -2 * bb) * shifted * f58 - H[0] * hk * f14
        return c0, c1

    return builder


def _f14(p, bb, b):
    return _prod(_lin(p, -bb - b[i]) for i in range(4))


def _f58(p, b):
    return _prod(_lin(p, b[i]) for i in range(4, 8))


def _a1_inverse_first(evolved: ParamsA1):
    """Solve the second product equation for g given (fbar, gbar), parameters already evolved."""
    bb, b = evolved.b0, evolved.b
    c = 2 * bb + evolved.delta

    def builder(H, Y):
        hy = _lsum(H, Y)
        shifted = hy - 2 * bb * H[1] * Y[1]
        f14, f58 = _f14(H, bb, b), _f58(H, b)
        c0 = H[1] * (shifted * f58 - hy * f14)
        c1 = _lin(H, -c) * shifted * f58 - H[0] * hy * f14
        return c0, c1

    return builder


def _a1_inverse_second(evolved: ParamsA1):
    """Solve the first product equation for f given (fbar, g)."""
    b0 = evolved.b0 + evolved.delta
    b = evolved.b
    c = 2 * b0 - evolved.delta

    def builder(G, H):
        gh = _lsum(G, H)
        shifted = gh - c * G[1] * H[1]
        g14, g58 = _g14(G, -b0, b), _g58(G, b)
        c0 = G[1] * (shifted * g58 - gh * g14)
        c1 = _lin(G, -2 * b0) * shifted * g58 - G[0] * gh * g14
        return c0, c1

    return builder


def dpa1_base_points(params: ParamsA1) -> list[tuple[str, FGPoint]]:
    b0, b = params.b0, params.b
    pts = [(f"p{i + 1}", FGPoint(b0 + b[i], b0 - b[i])) for i in range(4)]
    pts += [(f"p{i + 1}", FGPoint(-b[i], b[i])) for i in range(4, 8)]
    return pts


def dpa1_inverse_base_points(evolved: ParamsA1) -> list[tuple[str, FGPoint]]:
    """Indeterminate points of the inverse map, given the evolved parameters."""
    bb, b = evolved.b0, evolved.b
    pts = [(f"q{i + 1}", FGPoint(bb + b[i], bb - b[i])) for i in range(4)]
    pts += [(f"q{i + 1}", FGPoint(-b[i], b[i])) for i in range(4, 8)]
    return pts


def dpa1_half_coefficients(params: ParamsA1, pt: FGPoint):
    """Cleared coefficients of both half-solves; the second is None if the first is 0/0."""
    first = half_map_coefficients(_a1_first(params), (pt.f, pt.g))
    if first == (0, 0):
        return first, None
    fbar = INFINITY if first[0] == 0 else -first[1] / first[0]
    return first, half_map_coefficients(_a1_second(params), (fbar, pt.g))


def dpa1_step(params: ParamsA1, pt: FGPoint) -> tuple[ParamsA1, FGPoint]:
    _reject_base_points(dpa1_base_points(params), pt)
    fbar = _solve_half(_a1_first(params), (pt.f, pt.g), "fbar denominator of the first half-map")
    gbar = _solve_half(_a1_second(params), (fbar, pt.g), "gbar denominator of the second half-map")
    return params.evolved(), FGPoint(fbar, gbar)


def dpa1_inverse(params: ParamsA1, pt: FGPoint) -> tuple[ParamsA1, FGPoint]:
    """Invert dpa1_step; ``params`` are the evolved parameters of the image point."""
    _reject_base_points(dpa1_inverse_base_points(params), pt)
    g = _solve_half(_a1_inverse_first(params), (pt.f, pt.g), "g denominator of the inverse")
    f = _solve_half(_a1_inverse_second(params), (g, pt.f), "f denominator of the inverse")
    return params.reverted(), FGPoint(f, g)


def dpa1_closed_forms(params: ParamsA1, pt: FGPoint) -> FGPoint:
    """The pre-simplified rational formulas for (fbar, gbar), finite charts only."""
    if not pt.is_finite():
        raise DegenerateParameter("finite (f, g)", "closed forms are affine-chart formulas")
    b0, b = params.b0, params.b
    bb = b0 - params.delta
    c = b0 + bb
    f, g = pt.f, pt.g
    g14 = _prod_value(g - b0 + b[i] for i in range(4))
    g58 = _prod_value(g - b[i] for i in range(4, 8))
    den = (f + g - 2 * b0) * g58 - (f + g) * g14
    if den == 0:
        raise DegenerateParameter("(f + g - 2b) G58 - (f + g) G14")
    fbar = -((g - c) * (f + g - 2 * b0) * g58 - g * (f + g) * g14) / den
    f14 = _prod_value(fbar - bb - b[i] for i in range(4))
    f58 = _prod_value(fbar + b[i] for i in range(4, 8))
    den = (fbar + g - c) * f58 - (fbar + g) * f14
    if den == 0:
        raise DegenerateParameter("(fbar + g - c) F58 - (fbar + g) F14")
    gbar = -((fbar - 2 * bb) * (fbar + g - c) * f58 - fbar * (fbar + g) * f14) / den
    return FGPoint(fbar, gbar)


def _prod_value(items) -> Fraction:
    out = Fraction(1)
    for x in items:
        out *= x
    return out


# ---------------------------------------------------------------------------


def orbit(step, params, start: FGPoint, steps: int):
    """Yield (n, params, point) for n = 0..steps, stopping early only by raising."""
    yield 0, params, start
    pt = start
    for n in range(1, steps + 1):
        params, pt = step(params, pt)
        yield n, params, pt
