"""Explicit (x, y) slices of two Fuchsian moduli spaces and their reduction to (f, g).

Two families are covered:

* 3x3 systems of spectral type 111,111,111 with poles z_1, z_2 and infinity,
  reducing to the model map of surface type A2*;
* 4x4 systems of spectral type 1111,1111,22 with three finite poles and no
  residue at infinity, reducing to the model map of surface type A1*.

Each slice fixes the gauge so that two numbers (x, y) remain; the
accessory unknowns (alpha, beta[, gamma]) are determined by the spectrum
of the remaining residue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .dpmodels import FGPoint, INFINITY, ParamsA1, ParamsA2, dpa1_step, dpa2_step
from .errors import (
    DegenerateFrame,
    DegenerateParameter,
    InconsistentSlice,
    NoAccessorySolution,
    ResidualGaugeUnsolvable,
    SingularMatrix,
    SpectrumMismatch,
)
from .exactalg import (
    RatMat,
    charpoly,
    dot,
    left_nullspace,
    mat_inverse,
    nullspace,
    poly_from_roots,
    projective_frame,
    rat,
    solve_linear,
)
from .fuchsian import (
    INF,
    DecompositionPoint,
    PoleData,
    RiemannScheme,
    fuchs_sum,
    require_nonzero,
    riemann_action,
    sigma13_hat,
    similarity,
)
from .schlesinger import TransformSpec, apply_transform, rank1, rank2


@dataclass(frozen=True)
class XYCoords:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))


@dataclass(frozen=True)
class AccessoryFill:
    values: tuple

    @property
    def alpha(self) -> Fraction:
        return self.values[0]

    @property
    def beta(self) -> Fraction:
        return self.values[1]

    @property
    def gamma(self) -> Fraction:
        return self.values[2]


def _solve_accessory(
    build: Callable[[Sequence[Fraction]], RatMat], unknowns: int, spectrum: Sequence
) -> AccessoryFill:
    """Solve for unknowns entering ``build`` affinely through a single column.

    Every principal minor then depends affinely on the unknowns, so the
    characteristic-polynomial coefficients do too.  The trace coefficient
    does not involve them and must already match.
    """
    target = poly_from_roots(spectrum)
    zero = [Fraction(0)] * unknowns
    base = charpoly(build(zero))
    if base[1] != target[1]:
        raise NoAccessorySolution("trace condition fails; the Fuchs relation does not hold")
    columns = []
    for k in range(unknowns):
        unit = list(zero)
        unit[k] = Fraction(1)
        coeffs = charpoly(build(unit))
        columns.append([coeffs[i] - base[i] for i in range(2, unknowns + 2)])
    system = RatMat([[columns[k][i] for k in range(unknowns)] for i in range(unknowns)])
    rhs = RatMat.column([target[i] - base[i] for i in range(2, unknowns + 2)])
    try:
        solution = solve_linear(system, rhs).flat()
    except SingularMatrix:
        raise NoAccessorySolution("accessory linear system is singular") from None
    if charpoly(build(solution)) != target:
        raise NoAccessorySolution("accessory solution does not reproduce the spectrum")
    return AccessoryFill(tuple(solution))


# ---------------------------------------------------------------------------
# 3x3 slice, spectral type 111,111,111


def a2_scheme(theta1, theta2, theta3, z1=0, z2=1) -> RiemannScheme:
    """Scheme with finite poles z1, z2 (third index 0) and three indices at infinity."""
    t1 = [rat(t) for t in theta1]
    t2 = [rat(t) for t in theta2]
    return RiemannScheme((z1, z2, INF), (t1 + [0], t2 + [0], list(theta3)))


def _a2_thetas(theta: RiemannScheme):
    return theta.theta(1, 1), theta.theta(1, 2), theta.theta(2, 1), theta.theta(2, 2)


def _a2_slice(theta: RiemannScheme, xy: XYCoords, fill: Sequence[Fraction]):
    t11, t12, t21, t22 = _a2_thetas(theta)
    x, y = xy.x, xy.y
    al, be = fill
    b1 = RatMat([[1, 0], [0, 1], [0, 0]])
    c1 = RatMat([[t11, 0, al], [0, t12, be]])
    b2 = RatMat([[0, 1], [0, 1], [1, 1]])
    c2 = RatMat([[-x - t21, x, t21], [t22 - y, y, 0]])
    return b1, c1, b2, c2


def a2_accessory(theta: RiemannScheme, xy: XYCoords) -> AccessoryFill:
    def build(fill):
        b1, c1, b2, c2 = _a2_slice(theta, xy, fill)
        return -(b1 @ c1 + b2 @ c2)

    return _solve_accessory(build, 2, theta.indices[2])


def a2_point_from_xy(theta: RiemannScheme, xy: XYCoords) -> DecompositionPoint:
    t11, t12, t21, t22 = _a2_thetas(theta)
    for value, name in ((t11, "theta_1_1"), (t12, "theta_1_2"), (t21, "theta_2_1"), (t22, "theta_2_2")):
        require_nonzero(value, name)
    fill = a2_accessory(theta, xy)
    b1, c1, b2, c2 = _a2_slice(theta, xy, fill.values)
    z1, z2 = theta.positions[0], theta.positions[1]
    return DecompositionPoint(
        (PoleData(z1, b1, c1, (t11, t12)), PoleData(z2, b2, c2, (t21, t22))),
        theta.indices[2],
    )


def _pin_columns(point: DecompositionPoint, targets) -> DecompositionPoint:
    """Rescale eigen-slots so that b_{i,j} equals the given unit vector exactly."""
    poles = list(point.poles)
    for (i, j), axis in targets:
        pole = poles[i - 1]
        scale = pole.b[axis, j - 1]
        if scale == 0:
            raise DegenerateFrame(f"b_{i},{j} has no component along e_{axis + 1}")
        factors = [Fraction(1)] * pole.r
        factors[j - 1] = 1 / scale
        q = RatMat.diag(factors)
        poles[i - 1] = PoleData(pole.z, pole.b @ q, mat_inverse(q) @ pole.c, pole.thetas)
    return DecompositionPoint(tuple(poles), point.theta_inf)


def a2_xy_from_point(point: DecompositionPoint) -> XYCoords:
    p1, p2 = point.pole(1), point.pole(2)
    if point.m != 3 or p1.r != 2 or p2.r != 2:
        raise InconsistentSlice("expected a 3x3 point with two nonzero eigenvalues at poles 1 and 2")
    frame = projective_frame([p1.b_vec(1), p1.b_vec(2), p2.b_vec(1), p2.b_vec(2)])
    moved = similarity(point, frame)
    moved = _pin_columns(moved, [((1, 1), 0), ((1, 2), 1), ((2, 1), 2)])
    b1, b2 = moved.pole(1).b, moved.pole(2).b
    if b1 != RatMat([[1, 0], [0, 1], [0, 0]]) or b2 != RatMat([[0, 1], [0, 1], [1, 1]]):
        raise InconsistentSlice("frame did not reach the slice normal form")
    c2 = moved.pole(2).c
    if c2[1, 2] != 0 or c2[0, 2] != moved.theta(2, 1):
        raise InconsistentSlice("C_2 does not have the slice pattern")
    return XYCoords(c2[0, 1], c2[1, 1])


def a2_psi_closed(theta: RiemannScheme, xy: XYCoords, as_printed: bool = False) -> XYCoords:
    """Closed form of the (x, y) dynamic of the transform {1 2; 1 1}.

    The y-update carries the factor (theta_2_1 - theta_2_2 + 1).  With
    ``as_printed=True`` the factor (theta_1_1 - theta_2_2 + 1) is used
    instead; that variant disagrees with the transform and is kept only
    so the discrepancy stays reproducible.
    """
    t11, t12, t21, t22 = _a2_thetas(theta)
    x, y = xy.x, xy.y
    try:
        fill = a2_accessory(theta, xy)
    except NoAccessorySolution:
        # The accessory determinant is -Q(x, y), so this is the locus carrying psi's base points.
        raise DegenerateParameter("Q(x, y)", "alpha and beta have Q in the denominator") from None
    al, be = fill.alpha, fill.beta
    lead = (al - be) / require_nonzero(al * (t12 - t11 + 1), "alpha (theta_1_2 - theta_1_1 + 1)")
    inner_den = al * (t21 + 1) - (al - be) * y
    shift = (t11 if as_printed else t21) - t22 + 1
    inner_num = al * (al * (x + y) + y * (t12 + 1)) * shift
    if inner_den == 0:
        raise DegenerateParameter("alpha (theta_2_1 + 1) - (alpha - beta) y", "0/0 or pole of psi")
    new_x = lead * (al * (x + y) + t11 * y)
    new_y = lead * (inner_num / inner_den - al * (x + y) - t11 * y)
    return XYCoords(new_x, new_y)


def a2_psi_pipeline(theta: RiemannScheme, xy: XYCoords) -> tuple[RiemannScheme, XYCoords]:
    point = apply_transform(a2_point_from_xy(theta, xy), rank1(1, 2, 1, 1))
    return point.scheme(), a2_xy_from_point(point)


def a2_curve_q(theta: RiemannScheme, xy: XYCoords) -> Fraction:
    t11, t12, t21, t22 = _a2_thetas(theta)
    x, y = xy.x, xy.y
    return (t11 - t12) * (x + y) * (x + y + t21 - t22) + (t21 - t22) * (t22 * x + t21 * y)


def a2_psi_base_points(theta: RiemannScheme) -> dict[str, XYCoords]:
    """Finite indeterminate points of psi; p3 uses the same pattern as p1 and p2."""
    t11, t12, t21, t22 = _a2_thetas(theta)
    d = require_nonzero(t11 - t12, "theta_1_1 - theta_1_2")
    pts = {}
    for j, t3 in enumerate(theta.indices[2], start=1):
        pts[f"p{j}"] = XYCoords(
            (t11 + t21 + t3) * (t12 + t3) / d, -(t11 + t22 + t3) * (t12 + t3) / d
        )
    pts["p4"] = XYCoords(0, 0)
    pts["p5"] = XYCoords(-t21, t22)
    return pts


def a2_to_fg_projective(theta: RiemannScheme, X, Y, Z) -> FGPoint:
    """The change of variables at a point (X : Y : Z) of the projective plane compactifying (x, y)."""
    t11, t12, t21, t22 = _a2_thetas(theta)
    X, Y, Z = rat(X), rat(Y), rat(Z)
    if X == Y == Z == 0:
        raise ValueError("(0 : 0 : 0) is not a point")
    gap = require_nonzero(t21 - t22, "theta_2_1 - theta_2_2")

    def ratio(num, den, name):
        if den == 0:
            if num == 0:
                raise DegenerateParameter(name, "0/0")
            return INFINITY
        return num / den

    f = ratio((t11 - t12) * (X + Y), gap * Z, "f = (X + Y) / Z")
    g = ratio(t22 * X + t21 * Y, (X + Y) + gap * Z, "theta_2_2 X + theta_2_1 Y")
    return FGPoint(f, g)


def a2_to_fg(theta: RiemannScheme, xy: XYCoords) -> FGPoint:
    return a2_to_fg_projective(theta, xy.x, xy.y, 1)


def a2_from_fg(theta: RiemannScheme, fg: FGPoint) -> XYCoords:
    """Invert a2_to_fg for finite f, g."""
    t11, t12, t21, t22 = _a2_thetas(theta)
    if fg.f is INFINITY or fg.g is INFINITY:
        raise DegenerateParameter("finite (f, g)", "inverse needs finite coordinates")
    gap = require_nonzero(t21 - t22, "theta_2_1 - theta_2_2")
    s = fg.f * gap / require_nonzero(t11 - t12, "theta_1_1 - theta_1_2")
    # t22 x + t21 y = g (s + gap) together with x + y = s
    y = (fg.g * (s + gap) - t22 * s) / (t21 - t22)
    return XYCoords(s - y, y)


def a2_param_dict(theta: RiemannScheme) -> ParamsA2:
    t11, t12, t21, t22 = _a2_thetas(theta)
    t31, t32, t33 = theta.indices[2]
    return ParamsA2((t12 + t31, t12 + t32, t12 + t33, 0, t21, t22, t11 - t12, -t12 - 1))


A2_CHAIN = ("rank1 {2 1; 1 1}", "sigma13_hat", "rank1 {2 1; 2 1}", "sigma13_hat")


def _run_a2_chain(point: DecompositionPoint, chain=A2_CHAIN) -> DecompositionPoint:
    for step in chain:
        if step == "sigma13_hat":
            point = sigma13_hat(point)
        else:
            point = apply_transform(point, TransformSpec.parse(step.split(" ", 1)[1]))
    return point


def a2_scheme_chain(theta: RiemannScheme, chain=A2_CHAIN) -> RiemannScheme:
    for step in chain:
        if step == "sigma13_hat":
            theta = riemann_action(theta, "sigma13_hat")
        else:
            theta = riemann_action(theta, TransformSpec.parse(step.split(" ", 1)[1]))
    return theta


def a2_pipeline_step(theta: RiemannScheme, xy: XYCoords, chain=A2_CHAIN):
    """Run the Schlesinger chain and return (evolved scheme, params, (f, g))."""
    point = _run_a2_chain(a2_point_from_xy(theta, xy), chain)
    new_theta = point.scheme()
    return new_theta, a2_param_dict(new_theta), a2_to_fg(new_theta, a2_xy_from_point(point))


def a2_verify_composition(theta: RiemannScheme, xy: XYCoords, chain=A2_CHAIN) -> bool:
    """Model step in (f, g) versus the Schlesinger chain applied right to left."""
    model_params, model_fg = dpa2_step(a2_param_dict(theta), a2_to_fg(theta, xy))
    _, params, fg = a2_pipeline_step(theta, xy, chain)
    return params == model_params and fg == model_fg


# ---------------------------------------------------------------------------
# 4x4 slice, spectral type 1111,1111,22


def a1_scheme(theta1, theta2, theta3, z=(0, 1, 3)) -> RiemannScheme:
    """theta1: three nonzero indices (a fourth is 0); theta2: four; theta3: the double index."""
    t1 = [rat(t) for t in theta1] + [Fraction(0)]
    t3 = rat(theta3)
    return RiemannScheme(
        (z[0], z[1], z[2], INF), (t1, list(theta2), [t3, t3, 0, 0], [0, 0, 0, 0])
    )


def _a1_thetas(theta: RiemannScheme):
    return theta.indices[0][:3], theta.indices[1], theta.theta(3, 1)


def _a1_slice(theta: RiemannScheme, xy: XYCoords, fill: Sequence[Fraction]):
    (t11, t12, t13), _, t3 = _a1_thetas(theta)
    x, y = xy.x, xy.y
    al, be, ga = fill
    b1 = RatMat([[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]])
    c1 = RatMat([[t11, 0, 0, al], [0, t12, 0, be], [0, 0, t13, ga]])
    b3 = RatMat([[0, 1], [0, 1], [0, 1], [1, 1]])
    c3 = RatMat([[-(x + t3), 0, x, t3], [0, t3 - y, y, 0]])
    return b1, c1, b3, c3


def a1_accessory(theta: RiemannScheme, xy: XYCoords) -> AccessoryFill:
    def build(fill):
        b1, c1, b3, c3 = _a1_slice(theta, xy, fill)
        return -(b1 @ c1 + b3 @ c3)

    return _solve_accessory(build, 3, theta.indices[1])


def eigen_pair(a: RatMat, value: Fraction) -> tuple[RatMat, RatMat]:
    """Right eigenvector and left eigenrow, normalized so that row . col = value."""
    shifted = a - RatMat.identity(a.rows).scale(value)
    right = nullspace(shifted)
    left = left_nullspace(shifted)
    if len(right) != 1 or len(left) != 1:
        raise SpectrumMismatch(f"eigenvalue {value} is not simple")
    b, c = right[0], left[0]
    pairing = require_nonzero(dot(c, b), "left/right eigenvector pairing")
    return b, c.scale(value / pairing)


def a1_point_from_xy(theta: RiemannScheme, xy: XYCoords) -> DecompositionPoint:
    (t11, t12, t13), t2, t3 = _a1_thetas(theta)
    for value, name in ((t11, "theta_1_1"), (t12, "theta_1_2"), (t13, "theta_1_3"), (t3, "theta_3")):
        require_nonzero(value, name)
    for k, value in enumerate(t2, start=1):
        require_nonzero(value, f"theta_2_{k}")
    fill = a1_accessory(theta, xy)
    b1, c1, b3, c3 = _a1_slice(theta, xy, fill.values)
    a2 = -(b1 @ c1 + b3 @ c3)
    pairs = [eigen_pair(a2, t) for t in t2]
    b2 = RatMat.from_columns([b for b, _ in pairs])
    c2 = RatMat.from_rows([c for _, c in pairs])
    z1, z2, z3 = theta.positions[:3]
    return DecompositionPoint(
        (
            PoleData(z1, b1, c1, (t11, t12, t13)),
            PoleData(z2, b2, c2, tuple(t2)),
            PoleData(z3, b3, c3, (t3, t3)),
        ),
        theta.indices[3],
    )


def a1_xy_from_point(point: DecompositionPoint) -> XYCoords:
    """Gauge-invariant read-off of (x, y) for the 4x4 slice.

    With v_1, v_2, v_3 the nonzero-eigenvalue columns of B_1 and W the
    column space of B_3, the vector u spanning W cap span(v_1, v_2, v_3)
    fixes the relative scale u = v_1 + v_2 + v_3.  In the slice u is
    (1,1,1,0), and the rows of C_3 are the unique elements r_1, r_2 of the
    row space of C_3 with r_1(u) = -theta_3, r_1(v_2) = 0 and
    r_2(u) = theta_3, r_2(v_1) = 0.  Then x = r_1(v_3), y = r_2(v_3).
    """
    p1, p3 = point.pole(1), point.pole(3)
    if point.m != 4 or p1.r != 3 or p3.r != 2 or p3.thetas[0] != p3.thetas[1]:
        raise InconsistentSlice("expected the 4x4 slice structure")
    t3 = p3.thetas[0]
    vs = [p1.b_vec(j) for j in (1, 2, 3)]
    w1, w2 = p3.b_vec(1), p3.b_vec(2)
    # u = sum l_j v_j = a w1 + b w2
    system = RatMat.from_columns(vs + [w1, w2])
    kernel = nullspace(system)
    if len(kernel) != 1:
        raise DegenerateFrame("W meets span(v_1, v_2, v_3) in more than a line")
    coeffs = kernel[0].flat()
    if any(c == 0 for c in coeffs[:3]):
        raise DegenerateFrame("intersection vector has a zero frame coordinate")
    vs = [v.scale(c) for v, c in zip(vs, coeffs[:3])]
    u = vs[0] + vs[1] + vs[2]
    r_a, r_b = p3.c_vec(1), p3.c_vec(2)

    def pick(at_u, killed):
        mat = RatMat([[dot(r_a, u), dot(r_b, u)], [dot(r_a, killed), dot(r_b, killed)]])
        try:
            s, t = solve_linear(mat, RatMat.column([at_u, 0])).flat()
        except SingularMatrix:
            raise ResidualGaugeUnsolvable("residual gauge system is singular") from None
        return r_a.scale(s) + r_b.scale(t)

    row1 = pick(-t3, vs[1])
    row2 = pick(t3, vs[0])
    # the slice's e_4 is then fixed by row1(e4) = theta_3, row2(e4) = 0 within W
    e4_system = RatMat([[dot(row1, w1), dot(row1, w2)], [dot(row2, w1), dot(row2, w2)]])
    try:
        solve_linear(e4_system, RatMat.column([t3, 0]))
    except SingularMatrix:
        raise ResidualGaugeUnsolvable("no admissible e_4 direction in W") from None
    return XYCoords(dot(row1, vs[2]), dot(row2, vs[2]))


def a1_curve_q(theta: RiemannScheme, xy: XYCoords) -> Fraction:
    (t11, t12, t13), _, t3 = _a1_thetas(theta)
    x, y = xy.x, xy.y
    lin = (t13 - t11) * x + (t13 - t12) * y
    return lin * lin + (t11 - t12) * (
        (t13 - t12 - t3) * (t13 - t11) * x + (t13 - t11 - t3) * (t13 - t12) * y
    )


def a1_psi_base_points(theta: RiemannScheme) -> dict[str, XYCoords]:
    """Finite indeterminate points of the {1 2; 1 1} dynamic, labelled p1..p6."""
    (t11, t12, t13), t2, t3 = _a1_thetas(theta)
    d1 = require_nonzero(t11 - t13, "theta_1_1 - theta_1_3")
    d2 = require_nonzero(t12 - t13, "theta_1_2 - theta_1_3")
    pts = {}
    for k, t in enumerate(t2, start=1):
        pts[f"p{k}"] = XYCoords(
            (t11 + t + t3) * (t13 + t) / d1, -(t12 + t + t3) * (t13 + t) / d2
        )
    pts["p5"] = XYCoords(0, 0)
    pts["p6"] = XYCoords(-t3, t3)
    return pts


def _a1_fg_parts(theta: RiemannScheme):
    (t11, t12, t13), _, t3 = _a1_thetas(theta)
    return t11, t12, t13, t3


def a1_to_fg(theta: RiemannScheme, xy: XYCoords) -> FGPoint:
    t11, t12, t13, t3 = _a1_fg_parts(theta)
    x, y = xy.x, xy.y
    u, v = t13 - t11, t12 - t13

    def ratio(num, den, name):
        if den == 0:
            if num == 0:
                raise DegenerateParameter(name, "0/0")
            return INFINITY
        return num / den

    f = ratio(-(t12 * u * x - t11 * v * y), u * x - v * y, "f(x, y)")
    xs, ys = x + t3, y - t3
    g = ratio(t12 * u * xs - t11 * v * ys, u * xs - v * ys, "g(x, y)")
    return FGPoint(f, g)


def a1_from_fg(theta: RiemannScheme, fg: FGPoint) -> XYCoords:
    """Invert a1_to_fg: both coordinates are Moebius in the ratio of (x, y)-type lines."""
    t11, t12, t13, t3 = _a1_fg_parts(theta)
    if fg.f is INFINITY or fg.g is INFINITY:
        raise DegenerateParameter("finite (f, g)", "inverse needs finite coordinates")
    u, v = t13 - t11, t12 - t13
    # f (u x - v y) = -(t12 u x - t11 v y)  ->  u (f + t12) x - v (f + t11) y = 0
    # g (u xs - v ys) = t12 u xs - t11 v ys ->  u (g - t12) xs - v (g - t11) ys = 0
    f, g = fg.f, fg.g
    mat = RatMat([[u * (f + t12), -v * (f + t11)], [u * (g - t12), -v * (g - t11)]])
    rhs = RatMat.column([0, -(u * (g - t12) * t3 + v * (g - t11) * t3)])
    try:
        x, y = solve_linear(mat, rhs).flat()
    except SingularMatrix:
        raise DegenerateParameter("det of the (f, g) -> (x, y) system") from None
    return XYCoords(x, y)


def a1_param_dict(theta: RiemannScheme) -> ParamsA1:
    (t11, t12, t13), t2, t3 = _a1_thetas(theta)
    b = t3 / 2
    return ParamsA1(b, tuple(t + b for t in t2) + (t11, t12, t13, -1))


A1_CHAIN = (rank2(2, 3, 1, 1, 2, 2), rank2(2, 3, 3, 1, 4, 2))


def a1_pipeline_step(theta: RiemannScheme, xy: XYCoords, chain=A1_CHAIN):
    point = a1_point_from_xy(theta, xy)
    for spec in chain:
        point = apply_transform(point, spec)
    new_theta = point.scheme()
    return new_theta, a1_param_dict(new_theta), a1_to_fg(new_theta, a1_xy_from_point(point))


def a1_scheme_chain(theta: RiemannScheme, chain=A1_CHAIN) -> RiemannScheme:
    for spec in chain:
        theta = riemann_action(theta, spec)
    return theta


def a1_verify_composition(theta: RiemannScheme, xy: XYCoords, chain=A1_CHAIN) -> bool:
    model_params, model_fg = dpa1_step(a1_param_dict(theta), a1_to_fg(theta, xy))
    _, params, fg = a1_pipeline_step(theta, xy, chain)
    return params == model_params and fg == model_fg


def check_fuchs(theta: RiemannScheme) -> bool:
    return fuchs_sum(theta) == 0
