"""Elementary Schlesinger transformations of rank 1 and rank 2.

A transformation ``{alpha beta; mu nu}`` lowers eigenvalue slot ``mu`` of
pole ``alpha`` by one and raises slot ``nu`` of pole ``beta`` by one.  It is
realized by the multiplier R(z) = I + ((z_alpha - z_beta)/(z - z_alpha)) P.
Two evolution levels are provided: on residue matrices, and on the
eigenvector data (B_i, C_i) with every free normalization constant set to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstraintViolated, DegenerateParameter, InvalidIndex, InvalidTransform
from .exactalg import RatMat, SamplePlan, dot, outer, rat, rational_identity_zero
from .fuchsian import (
    DecompositionPoint,
    FuchsianSystem,
    PoleData,
    require_nonzero,
)


@dataclass(frozen=True)
class TransformSpec:
    alpha: int
    beta: int
    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(mu), int(nu)) for mu, nu in self.pairs)
        if self.alpha == self.beta:
            raise InvalidTransform("alpha and beta must be distinct poles")
        if len(pairs) not in (1, 2):
            raise InvalidTransform("only rank-1 and rank-2 transforms are supported")
        if len(pairs) == 2 and (pairs[0][0] == pairs[1][0] or pairs[0][1] == pairs[1][1]):
            raise InvalidTransform("rank-2 pairs must use distinct slots")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def parse(cls, text: str) -> "TransformSpec":
        """Parse labels like ``"{2 3; 1 1; 2 2}"``."""
        parts = [p.split() for p in text.strip().strip("{}").split(";")]
        try:
            alpha, beta = (int(v) for v in parts[0])
            pairs = tuple((int(a), int(b)) for a, b in parts[1:])
        except ValueError:
            raise InvalidTransform(f"cannot parse transform label {text!r}") from None
        return cls(alpha, beta, pairs)

    @property
    def rank(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        body = "; ".join(f"{mu} {nu}" for mu, nu in self.pairs)
        return f"{{{self.alpha} {self.beta}; {body}}}"


def rank1(alpha: int, beta: int, mu: int, nu: int) -> TransformSpec:
    return TransformSpec(alpha, beta, ((mu, nu),))


def rank2(alpha: int, beta: int, mu1: int, nu1: int, mu2: int, nu2: int) -> TransformSpec:
    return TransformSpec(alpha, beta, ((mu1, nu1), (mu2, nu2)))


@dataclass(frozen=True)
class Multiplier:
    z_alpha: Fraction
    z_beta: Fraction
    p: RatMat

    def __post_init__(self):
        object.__setattr__(self, "z_alpha", rat(self.z_alpha))
        object.__setattr__(self, "z_beta", rat(self.z_beta))
        if self.z_alpha == self.z_beta:
            raise InvalidTransform("multiplier poles must differ")
        if self.p @ self.p != self.p:
            raise InvalidTransform("multiplier matrix is not a projector")

    @property
    def m(self) -> int:
        return self.p.rows

    def _ident(self) -> RatMat:
        return RatMat.identity(self.m)

    def at(self, z) -> RatMat:
        """R(z); at z = z_beta this is the complementary projector."""
        z = rat(z)
        return self._ident() + self.p.scale((self.z_alpha - self.z_beta) / (z - self.z_alpha))

    def inverse_at(self, z) -> RatMat:
        z = rat(z)
        return self._ident() + self.p.scale((self.z_beta - self.z_alpha) / (z - self.z_beta))

    def derivative_at(self, z) -> RatMat:
        z = rat(z)
        return self.p.scale(-(self.z_alpha - self.z_beta) / (z - self.z_alpha) ** 2)


@dataclass(frozen=True)
class Rank2Projectors:
    p1: RatMat
    p2: RatMat
    cal_p1: RatMat
    cal_p2: RatMat
    cal_pt1: RatMat
    cal_pt2: RatMat
    cal_p: RatMat
    trace: Fraction


def _point_positions(point: DecompositionPoint) -> list[Fraction]:
    return [p.z for p in point.poles]


def _check_spec(point: DecompositionPoint, spec: TransformSpec, rank_expected: int):
    if spec.rank != rank_expected:
        raise InvalidTransform(f"expected a rank-{rank_expected} transform, got {spec}")
    npoles = len(point.poles)
    for pole in (spec.alpha, spec.beta):
        if not 1 <= pole <= npoles:
            raise InvalidIndex(f"pole {pole} is not a finite pole of this point")
    for mu, nu in spec.pairs:
        point.theta(spec.alpha, mu)
        point.theta(spec.beta, nu)


def rank1_projector(point: DecompositionPoint, spec: TransformSpec) -> Multiplier:
    _check_spec(point, spec, 1)
    (mu, nu), = spec.pairs
    b = point.pole(spec.beta).b_vec(nu)
    c = point.pole(spec.alpha).c_vec(mu)
    pairing = require_nonzero(dot(c, b), f"c_alpha^{mu} b_beta,{nu}")
    return Multiplier(point.pole(spec.alpha).z, point.pole(spec.beta).z, outer(b, c).scale(1 / pairing))


def rank2_projectors(point: DecompositionPoint, spec: TransformSpec) -> Rank2Projectors:
    _check_spec(point, spec, 2)
    a_pole, b_pole = point.pole(spec.alpha), point.pole(spec.beta)
    ident = RatMat.identity(point.m)
    ps = []
    for k, (mu, nu) in enumerate(spec.pairs, start=1):
        b = b_pole.b_vec(nu)
        c = a_pole.c_vec(mu)
        pairing = require_nonzero(dot(c, b), f"c_alpha^{mu} b_beta,{nu}")
        ps.append(outer(b, c).scale(1 / pairing))
    p1, p2 = ps
    q1, q2 = ident - p1, ident - p2
    trace = require_nonzero((q2 @ p1).trace(), "Tr(Q2 P1)")
    cal_p1 = (q2 @ p1).scale(1 / trace)
    cal_p2 = (q1 @ p2).scale(1 / trace)
    return Rank2Projectors(
        p1=p1,
        p2=p2,
        cal_p1=cal_p1,
        cal_p2=cal_p2,
        cal_pt1=(p1 @ q2).scale(1 / trace),
        cal_pt2=(p2 @ q1).scale(1 / trace),
        cal_p=cal_p1 + cal_p2,
        trace=trace,
    )


def rank2_multiplier(point: DecompositionPoint, spec: TransformSpec) -> Multiplier:
    proj = rank2_projectors(point, spec)
    return Multiplier(point.pole(spec.alpha).z, point.pole(spec.beta).z, proj.cal_p)


def multiplier_for(point: DecompositionPoint, spec: TransformSpec) -> Multiplier:
    return rank1_projector(point, spec) if spec.rank == 1 else rank2_multiplier(point, spec)


def _weighted_sum(point: DecompositionPoint, center: int, other: int) -> RatMat:
    """sum over poles i != center of ((z_other - z_center)/(z_i - z_center)) A_i."""
    zc = point.pole(center).z
    zo = point.pole(other).z
    total = RatMat.zeros(point.m, point.m)
    for idx, pole in enumerate(point.poles, start=1):
        if idx == center:
            continue
        total = total + pole.residue().scale((zo - zc) / (pole.z - zc))
    return total


def _transport_other_poles(point: DecompositionPoint, spec: TransformSpec, mult: Multiplier) -> list:
    poles = list(point.poles)
    for idx, pole in enumerate(point.poles, start=1):
        if idx in (spec.alpha, spec.beta):
            continue
        poles[idx - 1] = PoleData(
            pole.z, mult.at(pole.z) @ pole.b, pole.c @ mult.inverse_at(pole.z), pole.thetas
        )
    return poles


def rank1_transform(point: DecompositionPoint, spec: TransformSpec) -> DecompositionPoint:
    mult = rank1_projector(point, spec)
    (mu, nu), = spec.pairs
    alpha, beta = spec.alpha, spec.beta
    a_pole, b_pole = point.pole(alpha), point.pole(beta)
    ident = RatMat.identity(point.m)
    p = mult.p
    q = ident - p
    w_alpha = _weighted_sum(point, alpha, beta)
    w_beta = _weighted_sum(point, beta, alpha)
    th_a = a_pole.thetas[mu - 1]
    th_b = b_pole.thetas[nu - 1]
    b_nu = b_pole.b_vec(nu)
    c_mu = a_pole.c_vec(mu)
    pairing = dot(c_mu, b_nu)

    new_th_a = require_nonzero(th_a - 1, f"theta_{alpha}_{mu} - 1")
    new_th_b = require_nonzero(th_b + 1, f"theta_{beta}_{nu} + 1")

    # pole alpha
    resolvent_a = ident
    a_b, a_c = [], []
    for j in range(1, a_pole.r + 1):
        if j == mu:
            continue
        den = require_nonzero(
            th_a - a_pole.thetas[j - 1] - 1, f"theta_{alpha}_{mu} - theta_{alpha}_{j} - 1"
        )
        resolvent_a = resolvent_a + outer(a_pole.b_vec(j), a_pole.c_vec(j)).scale(1 / den)
    new_c_mu = (c_mu.scale(1 / pairing)) @ (ident.scale(th_a - 1) + w_alpha @ resolvent_a @ q)
    for j in range(1, a_pole.r + 1):
        if j == mu:
            a_b.append(b_nu)
            a_c.append(new_c_mu)
            continue
        den = th_a - a_pole.thetas[j - 1] - 1
        a_b.append((ident - (p @ w_alpha).scale(1 / den)) @ a_pole.b_vec(j))
        a_c.append(a_pole.c_vec(j) @ q)
    a_thetas = tuple(new_th_a if j == mu else t for j, t in enumerate(a_pole.thetas, start=1))

    # pole beta
    resolvent_b = ident
    for j in range(1, b_pole.r + 1):
        if j == nu:
            continue
        den = require_nonzero(
            th_b - b_pole.thetas[j - 1] + 1, f"theta_{beta}_{nu} - theta_{beta}_{j} + 1"
        )
        resolvent_b = resolvent_b + outer(b_pole.b_vec(j), b_pole.c_vec(j)).scale(1 / den)
    new_b_nu = (ident.scale(th_b + 1) + q @ resolvent_b @ w_beta) @ b_nu.scale(1 / pairing)
    b_b, b_c = [], []
    for j in range(1, b_pole.r + 1):
        if j == nu:
            b_b.append(new_b_nu)
            b_c.append(c_mu)
            continue
        den = th_b - b_pole.thetas[j - 1] + 1
        b_b.append(q @ b_pole.b_vec(j))
        b_c.append(b_pole.c_vec(j) @ (ident - (w_beta @ p).scale(1 / den)))
    b_thetas = tuple(new_th_b if j == nu else t for j, t in enumerate(b_pole.thetas, start=1))

    poles = _transport_other_poles(point, spec, mult)
    poles[alpha - 1] = PoleData(a_pole.z, RatMat.from_columns(a_b), RatMat.from_rows(a_c), a_thetas)
    poles[beta - 1] = PoleData(b_pole.z, RatMat.from_columns(b_b), RatMat.from_rows(b_c), b_thetas)
    return DecompositionPoint(tuple(poles), point.theta_inf)


def rank2_transform(point: DecompositionPoint, spec: TransformSpec) -> DecompositionPoint:
    proj = rank2_projectors(point, spec)
    mult = Multiplier(point.pole(spec.alpha).z, point.pole(spec.beta).z, proj.cal_p)
    alpha, beta = spec.alpha, spec.beta
    a_pole, b_pole = point.pole(alpha), point.pole(beta)
    ident = RatMat.identity(point.m)
    cal_q = ident - proj.cal_p
    qs = (ident - proj.p1, ident - proj.p2)
    cal_ps = (proj.cal_p1, proj.cal_p2)
    cal_pts = (proj.cal_pt1, proj.cal_pt2)
    w_alpha = _weighted_sum(point, alpha, beta)
    w_beta = _weighted_sum(point, beta, alpha)
    mus = [mu for mu, _ in spec.pairs]
    nus = [nu for _, nu in spec.pairs]

    new_a_b: dict = {}
    new_a_c: dict = {}
    new_b_b: dict = {}
    new_b_c: dict = {}
    a_thetas = list(a_pole.thetas)
    b_thetas = list(b_pole.thetas)

    for k, (mu, nu) in enumerate(spec.pairs):
        other_q = qs[1 - k]
        b_nu = b_pole.b_vec(nu)
        c_mu = a_pole.c_vec(mu)
        th_a = a_pole.thetas[mu - 1]
        th_b = b_pole.thetas[nu - 1]
        a_thetas[mu - 1] = require_nonzero(th_a - 1, f"theta_{alpha}_{mu} - 1")
        b_thetas[nu - 1] = require_nonzero(th_b + 1, f"theta_{beta}_{nu} + 1")
        norm = require_nonzero(dot(c_mu, other_q @ b_nu), f"c_alpha^{mu} Q b_beta,{nu}")

        new_a_b[mu] = other_q @ b_nu
        new_b_c[nu] = c_mu @ other_q

        resolvent_a = ident
        for j in range(1, a_pole.r + 1):
            if j in mus:
                continue
            den = require_nonzero(
                th_a - a_pole.thetas[j - 1] - 1, f"theta_{alpha}_{mu} - theta_{alpha}_{j} - 1"
            )
            resolvent_a = resolvent_a + outer(a_pole.b_vec(j), a_pole.c_vec(j)).scale(1 / den)
        new_a_c[mu] = c_mu.scale(1 / norm) @ (ident.scale(th_a - 1) + w_alpha @ resolvent_a @ cal_q)

        resolvent_b = ident
        for j in range(1, b_pole.r + 1):
            if j in nus:
                continue
            den = require_nonzero(
                th_b - b_pole.thetas[j - 1] + 1, f"theta_{beta}_{nu} - theta_{beta}_{j} + 1"
            )
            resolvent_b = resolvent_b + outer(b_pole.b_vec(j), b_pole.c_vec(j)).scale(1 / den)
        new_b_b[nu] = (ident.scale(th_b + 1) + cal_q @ resolvent_b @ w_beta) @ b_nu.scale(1 / norm)

    for j in range(1, a_pole.r + 1):
        if j in mus:
            continue
        th_j = a_pole.thetas[j - 1]
        mix = RatMat.zeros(point.m, point.m)
        for k, mu in enumerate(mus):
            mix = mix + cal_ps[k].scale(1 / (a_pole.thetas[mu - 1] - th_j - 1))
        new_a_b[j] = (ident - mix @ w_alpha) @ a_pole.b_vec(j)
        new_a_c[j] = a_pole.c_vec(j) @ cal_q

    for j in range(1, b_pole.r + 1):
        if j in nus:
            continue
        th_j = b_pole.thetas[j - 1]
        mix = RatMat.zeros(point.m, point.m)
        for k, nu in enumerate(nus):
            mix = mix + cal_pts[k].scale(1 / (b_pole.thetas[nu - 1] - th_j + 1))
        new_b_b[j] = cal_q @ b_pole.b_vec(j)
        new_b_c[j] = b_pole.c_vec(j) @ (ident - w_beta @ mix)

    poles = _transport_other_poles(point, spec, mult)
    poles[alpha - 1] = PoleData(
        a_pole.z,
        RatMat.from_columns([new_a_b[j] for j in range(1, a_pole.r + 1)]),
        RatMat.from_rows([new_a_c[j] for j in range(1, a_pole.r + 1)]),
        tuple(a_thetas),
    )
    poles[beta - 1] = PoleData(
        b_pole.z,
        RatMat.from_columns([new_b_b[j] for j in range(1, b_pole.r + 1)]),
        RatMat.from_rows([new_b_c[j] for j in range(1, b_pole.r + 1)]),
        tuple(b_thetas),
    )
    return DecompositionPoint(tuple(poles), point.theta_inf)


def apply_transform(point: DecompositionPoint, spec: TransformSpec) -> DecompositionPoint:
    return rank1_transform(point, spec) if spec.rank == 1 else rank2_transform(point, spec)


def residue_transform(system: FuchsianSystem, mult: Multiplier, alpha: int, beta: int) -> FuchsianSystem:
    """Evolve the residue matrices directly under the multiplier ``mult``."""
    m = system.m
    ident = RatMat.identity(m)
    p = mult.p
    q = ident - p
    a_alpha = system.residue(alpha)
    a_beta = system.residue(beta)
    if not (p @ a_alpha @ q).is_zero():
        raise ConstraintViolated("P A_alpha Q != 0")
    if not (q @ a_beta @ p).is_zero():
        raise ConstraintViolated("Q A_beta P != 0")
    z_alpha, z_beta = system.residues[alpha - 1][0], system.residues[beta - 1][0]
    if (z_alpha, z_beta) != (mult.z_alpha, mult.z_beta):
        raise ConstraintViolated("multiplier poles do not match alpha and beta")

    new_alpha = a_alpha - q @ a_alpha @ p - p
    new_beta = a_beta - p @ a_beta @ q + p
    out = []
    for idx, (z, a) in enumerate(system.residues, start=1):
        if idx != alpha:
            new_alpha = new_alpha + (p @ a @ q).scale((z_beta - z_alpha) / (z - z_alpha))
        if idx != beta:
            new_beta = new_beta + (q @ a @ p).scale((z_alpha - z_beta) / (z - z_beta))
    for idx, (z, a) in enumerate(system.residues, start=1):
        if idx == alpha or idx == beta:
            out.append((z, None))
        else:
            out.append((z, mult.at(z) @ a @ mult.inverse_at(z)))
    out[alpha - 1] = (z_alpha, new_alpha)
    out[beta - 1] = (z_beta, new_beta)
    total = RatMat.zeros(m, m)
    for _, a in out:
        total = total + a
    return FuchsianSystem(tuple(out), -total)


def compatibility_check(
    before: FuchsianSystem, after: FuchsianSystem, mult: Multiplier, plan: SamplePlan
) -> bool:
    """Sampled check that A_new(z) R(z) - R(z) A(z) - R'(z) vanishes identically."""
    poles = set(before.positions) | set(after.positions) | {mult.z_alpha, mult.z_beta}
    full_plan = SamplePlan(plan.sample_count, plan.seed, tuple(plan.excluded_points) + tuple(poles))

    def residual(z):
        r = mult.at(z)
        return after.evaluate(z) @ r - r @ before.evaluate(z) - mult.derivative_at(z)

    return rational_identity_zero(residual, full_plan)


__all__ = [
    "ConstraintViolated",
    "DegenerateParameter",
    "Multiplier",
    "Rank2Projectors",
    "TransformSpec",
    "apply_transform",
    "compatibility_check",
    "multiplier_for",
    "rank1",
    "rank1_projector",
    "rank1_transform",
    "rank2",
    "rank2_multiplier",
    "rank2_projectors",
    "rank2_transform",
    "residue_transform",
]
