"""Seeded verification suites behind ``isodyn verify``.

Every trial draws its own generic instance from ``Random(seed ^ trial)`` and
records each failed check as ``{trial, seed, instance, expression}``.  A draw
that trips a genericity guard anywhere in the trial (a vanishing
denominator, a degenerate frame, an eigenvalue collision) is discarded and
redrawn from the same generator; the count is reported as ``rejections``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import picard as pic
from .dpmodels import (
    BasePoint,
    dpa1_base_points,
    dpa1_closed_forms,
    dpa1_half_coefficients,
    dpa1_inverse,
    dpa1_step,
    dpa2_base_points,
    dpa2_half_coefficients,
    dpa2_step,
)
from .errors import (
    DegenerateFrame,
    DegenerateParameter,
    IsodynError,
    NoAccessorySolution,
    SingularMatrix,
)
from .exactalg import SamplePlan
from .fuchsian import (
    DecompositionPoint,
    RiemannScheme,
    assemble,
    check_orthogonality,
    is_diagonalizable_with,
    riemann_action,
    sigma13_hat,
)
from .reduction import (
    A1_CHAIN,
    A2_CHAIN,
    XYCoords,
    a1_curve_q,
    a1_param_dict,
    a1_point_from_xy,
    a1_psi_base_points,
    a1_to_fg,
    a1_verify_composition,
    a2_curve_q,
    a2_param_dict,
    a2_point_from_xy,
    a2_psi_base_points,
    a2_psi_closed,
    a2_psi_pipeline,
    a2_to_fg,
    a2_verify_composition,
)
from .sampling import (
    random_4x4_instance,
    random_a1_theta,
    random_a2_instance,
    random_a2_theta,
    random_rational,
    trial_rng,
)
from .schlesinger import (
    TransformSpec,
    apply_transform,
    compatibility_check,
    multiplier_for,
    rank1,
    residue_transform,
)
from .serialization import SCHEMA_VERSION, rat_to_json, scheme_to_json

SUITES = (
    "schlesinger-rank1",
    "schlesinger-rank2",
    "a2-composition",
    "a1-composition",
    "picard",
    "base-points",
    "compatibility",
)

MAX_TRIAL_REDRAWS = 200
COMPATIBILITY_SAMPLES = 20

# Exceptions that mean "this random draw is not generic enough", not "the identity failed".
GENERICITY_ERRORS = (
    DegenerateParameter,
    DegenerateFrame,
    NoAccessorySolution,
    SingularMatrix,
    ZeroDivisionError,
)

# The six translation vectors the transcribed push-forwards must reproduce.
EXPECTED_TRANSLATIONS = {
    "phi_a2": (0, 0, 0, 1, 0, -1, 0),
    "psi_a2": (0, 0, 0, -1, 1, 1, -1),
    "phi_a1": (0, 0, 0, 0, 1, 0, 0, -2),
    "psi11_a1": (0, 0, 0, -1, 0, 1, 0, 0),
    "psi12_a1": (0, 0, 1, 0, 0, 0, 0, -1),
    "psi34_a1": (0, 0, -1, 0, 1, 0, 0, -1),
}


class ConfigError(ValueError):
    """Invalid suite configuration (maps to exit code 2)."""


class Redraw(Exception):
    """Raised inside a trial to discard a non-generic draw."""


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    trials: int
    seed: int
    output_path: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")


@dataclass
class SuiteReport:
    suite: str
    trials_run: int
    seed: int
    failures: list = field(default_factory=list)
    rejections: int = 0
    rejection_reasons: dict = field(default_factory=dict)
    checks: int = 0
    check_counts: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, include_timing: bool = False) -> dict:
        """Report document; timing is left out by default so reruns are byte-identical."""
        doc = {
            "isodyn-schema": SCHEMA_VERSION,
            "suite": self.suite,
            "trials_run": self.trials_run,
            "seed": self.seed,
            "checks": self.checks,
            "check_counts": dict(sorted(self.check_counts.items())),
            "failures": self.failures,
            "rejections": self.rejections,
            "rejection_reasons": dict(sorted(self.rejection_reasons.items())),
            "ok": self.ok,
        }
        if include_timing:
            doc["elapsed_ms"] = self.elapsed_ms
        return doc


class TrialLog:
    """Collects the checks of one trial attempt; discarded on a redraw."""

    def __init__(self):
        self.instance: dict = {}
        self.failed: list[tuple[str, str]] = []
        self.tally: dict[str, int] = {}
        self.checks = 0

    def check(self, tag: str, ok: bool, expression: str):
        self.checks += 1
        self.tally[tag] = self.tally.get(tag, 0) + 1
        if not ok:
            self.failed.append((tag, expression))

    def guard(self, condition: bool, reason: str):
        if not condition:
            raise Redraw(reason)


Trial = Callable[[random.Random, TrialLog, int, int], None]


def _scheme_doc(scheme: RiemannScheme) -> dict:
    doc = scheme_to_json(scheme)
    doc.pop("isodyn-schema")
    return doc


def _xy_doc(xy: XYCoords) -> dict:
    return {"x": rat_to_json(xy.x), "y": rat_to_json(xy.y)}


def _spectral_type_kept(scheme: RiemannScheme, spec) -> RiemannScheme:
    """Predicted scheme of a transform; redraw when the shift creates an eigenvalue collision."""
    predicted = riemann_action(scheme, spec)
    if predicted.spectral_type() != scheme.spectral_type():
        raise Redraw("shifted indices collide")
    for pole in (spec.alpha, spec.beta):
        for mu, nu in spec.pairs:
            slot = mu if pole == spec.alpha else nu
            if predicted.theta(pole, slot) == 0:
                raise Redraw("shifted index becomes zero")
    return predicted


def _transform_checks(log: TrialLog, point: DecompositionPoint, spec, samples_seed: int):
    """The checks shared by both Schlesinger suites; returns the transformed point."""
    predicted = _spectral_type_kept(point.scheme(), spec)
    new = apply_transform(point, spec)
    mult = multiplier_for(point, spec)
    before, after = assemble(point), assemble(new)
    log.check(
        "orthogonality",
        check_orthogonality(new),
        "C_i B_i == diag(theta_i) at every pole of T(point)",
    )
    log.check(
        "scheme-shift",
        new.scheme() == predicted,
        f"scheme(T(point)) == shift of scheme(point) by {spec}",
    )
    log.check(
        "spectral-type",
        new.scheme().spectral_type() == point.scheme().spectral_type(),
        "spectral type is preserved",
    )
    log.check(
        "residue-spectra",
        all(
            is_diagonalizable_with(after.residue(i), predicted.indices[i - 1])
            for i in range(1, len(new.poles) + 1)
        ),
        "assembled residues of T(point) have the predicted eigenvalues and eigenspaces",
    )
    log.check("a-inf", after.a_inf == before.a_inf, "A_inf of T(point) == A_inf of point")
    log.check(
        "compatibility",
        compatibility_check(before, after, mult, SamplePlan(COMPATIBILITY_SAMPLES, samples_seed)),
        f"A_new(z) R(z) - R(z) A(z) - R'(z) == 0 at {COMPATIBILITY_SAMPLES} samples",
    )
    log.check(
        "residue-agreement",
        after.matrices() == residue_transform(before, mult, spec.alpha, spec.beta).matrices(),
        "assemble(T(point)) == residue_transform(assemble(point)) matrix by matrix",
    )
    return new


def _random_rank1_spec(rng: random.Random) -> TransformSpec:
    alpha = rng.choice((1, 2))
    return rank1(alpha, 3 - alpha, rng.choice((1, 2)), rng.choice((1, 2)))


def _slots(pole_rank: int, pole_is_double: bool, rng: random.Random) -> list[int]:
    if pole_is_double:
        pair = [1, 2]
    else:
        pair = rng.sample(range(1, pole_rank + 1), 2)
    rng.shuffle(pair)
    return pair


def _random_rank2_spec(rng: random.Random, point: DecompositionPoint) -> TransformSpec:
    """A rank-2 spec; a pole with a repeated eigenvalue is always used through both of its slots."""
    alpha, beta = rng.sample((1, 2, 3), 2)
    types = point.scheme().spectral_type().partitions

    def pick(pole):
        double = types[pole - 1][0] > 1 and point.pole(pole).r == 2
        return _slots(point.pole(pole).r, double, rng)

    mus, nus = pick(alpha), pick(beta)
    return TransformSpec(alpha, beta, tuple(zip(mus, nus)))


def _rank1_trial(rng, log, trial, trials):
    inst = random_a2_instance(rng)
    spec = _random_rank1_spec(rng)
    log.instance = {
        "scheme": _scheme_doc(inst.scheme),
        "xy": _xy_doc(inst.xy),
        "transform": str(spec),
    }
    _transform_checks(log, inst.point, spec, rng.getrandbits(32))


def _rank2_trial(rng, log, trial, trials):
    inst = random_4x4_instance(rng, "22")
    spec = _random_rank2_spec(rng, inst.point)
    log.instance = {"scheme": _scheme_doc(inst.scheme), "transform": str(spec)}
    _transform_checks(log, inst.point, spec, rng.getrandbits(32))
    if trial < max(1, trials // 5):
        _rank2_composition(rng, log)


def _rank2_composition(rng: random.Random, log: TrialLog):
    """Rank-2 transform versus the two rank-1 transforms on a 1111,1111,1111 instance."""
    inst = random_4x4_instance(rng, "1111")
    spec = _random_rank2_spec(rng, inst.point)
    _spectral_type_kept(inst.point.scheme(), spec)
    (mu1, nu1), (mu2, nu2) = spec.pairs
    step = apply_transform(inst.point, rank1(spec.alpha, spec.beta, mu1, nu1))
    composed = apply_transform(step, rank1(spec.alpha, spec.beta, mu2, nu2))
    direct = apply_transform(inst.point, spec)
    log.instance["composition_instance"] = {
        "scheme": _scheme_doc(inst.scheme),
        "transform": str(spec),
    }
    log.check(
        "rank2-vs-rank1",
        assemble(direct).matrices() == assemble(composed).matrices(),
        f"assemble({spec}(point)) == assemble of the two rank-1 transforms applied in turn",
    )


def _a2_composition_trial(rng, log, trial, trials):
    theta = random_a2_theta(rng)
    xy = XYCoords(random_rational(rng), random_rational(rng))
    log.instance = {"scheme": _scheme_doc(theta), "xy": _xy_doc(xy)}
    a2_point_from_xy(theta, xy)
    a2_to_fg(theta, xy)
    params = a2_param_dict(theta)
    t11, t12 = theta.indices[0][:2]
    log.check("a2-delta", params.delta == -1, "delta = b1 + ... + b8 == -1")
    log.check("a2-b4", params.b[3] == 0, "b4 == 0")
    log.check("a2-b8", params.b[7] == -t12 - 1, "b8 == -theta_1_2 - 1")
    log.check(
        "a2-composition",
        a2_verify_composition(theta, xy),
        "dpa2_step(f, g) == the chain " + " then ".join(A2_CHAIN) + " read back in (f, g)",
    )
    _, pipeline_xy = a2_psi_pipeline(theta, xy)
    log.check(
        "psi-closed",
        a2_psi_closed(theta, xy) == pipeline_xy,
        "a2_psi_closed(x, y) == {1 2; 1 1} through the slice",
    )


def _a1_composition_trial(rng, log, trial, trials):
    theta = random_a1_theta(rng)
    xy = XYCoords(random_rational(rng), random_rational(rng))
    log.instance = {"scheme": _scheme_doc(theta), "xy": _xy_doc(xy)}
    a1_point_from_xy(theta, xy)
    fg = a1_to_fg(theta, xy)
    params = a1_param_dict(theta)
    log.check("a1-theta3", theta.indices[2][0] == 2 * params.b0, "theta_3 == 2b")
    log.check("a1-b8", params.b[7] == -1, "b8 == -1")
    log.check(
        "a1-composition",
        a1_verify_composition(theta, xy),
        "dpa1_step(f, g) == the chain "
        + " then ".join(str(s) for s in A1_CHAIN)
        + " read back in (f, g)",
    )
    if fg.is_finite():
        evolved, image = dpa1_step(params, fg)
        log.check(
            "a1-closed-forms",
            dpa1_closed_forms(params, fg) == image,
            "dpa1_closed_forms(f, g) == dpa1_step(f, g)",
        )
        log.check(
            "a1-inverse",
            dpa1_inverse(evolved, image) == (params, fg),
            "dpa1_inverse(dpa1_step(f, g)) == (f, g)",
        )


def _base_point_trial(rng, log, trial, trials):
    theta2 = random_a2_theta(rng)
    theta1 = random_a1_theta(rng)
    log.instance = {"a2_scheme": _scheme_doc(theta2), "a1_scheme": _scheme_doc(theta1)}
    for label, pt in a2_psi_base_points(theta2).items():
        log.check(
            "curve-q", a2_curve_q(theta2, pt) == 0, f"Q(psi base point {label}) == 0 (3x3 slice)"
        )
    for label, pt in a1_psi_base_points(theta1).items():
        log.check(
            "curve-q", a1_curve_q(theta1, pt) == 0, f"Q(psi base point {label}) == 0 (4x4 slice)"
        )

    params2 = a2_param_dict(theta2)
    points2 = dpa2_base_points(params2)
    log.guard(len({pt for _, pt in points2}) == len(points2), "coincident base points")
    for label, pt in points2:
        first, second = dpa2_half_coefficients(params2, pt)
        log.check(
            "model-base-point-indeterminate",
            first == (0, 0) or second == (0, 0),
            f"dpa2 half-solve is 0/0 at {label}",
        )
        log.check(
            "model-base-point-raised",
            _raises_base_point(dpa2_step, params2, pt, label),
            f"dpa2_step raises BasePoint {label}",
        )

    params1 = a1_param_dict(theta1)
    points1 = dpa1_base_points(params1)
    log.guard(len({pt for _, pt in points1}) == len(points1), "coincident base points")
    for label, pt in points1:
        first, _ = dpa1_half_coefficients(params1, pt)
        log.check(
            "model-base-point-indeterminate",
            first == (0, 0),
            f"dpa1 first half-solve is 0/0 at {label}",
        )
        log.check(
            "model-base-point-raised",
            _raises_base_point(dpa1_step, params1, pt, label),
            f"dpa1_step raises BasePoint {label}",
        )


def _raises_base_point(step, params, pt, label) -> bool:
    try:
        step(params, pt)
    except BasePoint as exc:
        return exc.label == label
    return False


def _compatibility_trial(rng, log, trial, trials):
    """Every Schlesinger step of both reduction chains is compatible with its multiplier."""
    theta2 = random_a2_theta(rng)
    xy2 = XYCoords(random_rational(rng), random_rational(rng))
    theta1 = random_a1_theta(rng)
    xy1 = XYCoords(random_rational(rng), random_rational(rng))
    log.instance = {
        "a2_scheme": _scheme_doc(theta2),
        "a2_xy": _xy_doc(xy2),
        "a1_scheme": _scheme_doc(theta1),
        "a1_xy": _xy_doc(xy1),
    }
    point = a2_point_from_xy(theta2, xy2)
    for step in A2_CHAIN:
        if step == "sigma13_hat":
            point = sigma13_hat(point)
            continue
        spec = TransformSpec.parse(step.split(" ", 1)[1])
        point = _checked_step(log, point, spec, rng.getrandbits(32), "A2 chain")
    point = a1_point_from_xy(theta1, xy1)
    for spec in A1_CHAIN:
        point = _checked_step(log, point, spec, rng.getrandbits(32), "A1 chain")


def _checked_step(log, point, spec, samples_seed, chain_name):
    new = apply_transform(point, spec)
    mult = multiplier_for(point, spec)
    before, after = assemble(point), assemble(new)
    log.check(
        "compatibility",
        compatibility_check(before, after, mult, SamplePlan(COMPATIBILITY_SAMPLES, samples_seed)),
        f"{chain_name} step {spec}: A_new R - R A - R' == 0 at {COMPATIBILITY_SAMPLES} samples",
    )
    log.check(
        "residue-agreement",
        after.matrices() == residue_transform(before, mult, spec.alpha, spec.beta).matrices(),
        f"{chain_name} step {spec}: decomposition and residue evolution agree",
    )
    return new


def _picard_trial(rng, log, trial, trials):
    log.instance = {"maps": list(pic.MAP_NAMES)}
    for name in pic.MAP_NAMES:
        m = pic.pushforward(name)
        roots = pic.root_basis(pic.MAP_ROOTS[name])
        log.check("isometry", pic.check_isometry(m), f"{name} preserves the pairing and fixes -K")
        try:
            vec = pic.translation_vector(m, roots)
        except IsodynError:
            vec = None
        log.check(
            "translation",
            vec == EXPECTED_TRANSLATIONS[name],
            f"translation vector of {name} == {EXPECTED_TRANSLATIONS[name]}",
        )
    t12 = pic.translation_vector(pic.pushforward("psi12_a1"), pic.root_basis("E7_affine"))
    t34 = pic.translation_vector(pic.pushforward("psi34_a1"), pic.root_basis("E7_affine"))
    t_phi = pic.translation_vector(pic.pushforward("phi_a1"), pic.root_basis("E7_affine"))
    log.check(
        "e7-sum",
        tuple(a + b for a, b in zip(t12, t34)) == t_phi,
        "t(psi12_a1) + t(psi34_a1) == t(phi_a1)",
    )
    perm = pic.surface_permutation(pic.pushforward("phi_a2"), pic.root_basis("A2_surface"))
    log.check("d-cycle", perm == (1, 2, 0), "phi_a2 sends D0 -> D1 -> D2 -> D0")
    for label in ("E6_affine", "E7_affine", "A2_surface", "A1_surface"):
        log.check(
            "diagram",
            pic.diagram_matches(pic.root_basis(label)),
            f"{label} has the labelled Dynkin diagram",
        )
    for case in ("a2_schlesinger", "a1_schlesinger"):
        rep = pic.blowdown_change_of_basis(case)
        log.check(
            "blowdown",
            rep.relations_hold and rep.surface_roots_match,
            f"blow-down identification for {case}",
        )


TRIALS: dict[str, Trial] = {
    "schlesinger-rank1": _rank1_trial,
    "schlesinger-rank2": _rank2_trial,
    "a2-composition": _a2_composition_trial,
    "a1-composition": _a1_composition_trial,
    "picard": _picard_trial,
    "base-points": _base_point_trial,
    "compatibility": _compatibility_trial,
}


def run_trial(suite: str, seed: int, trial: int, trials: int) -> tuple[TrialLog, list[str]]:
    """Run one trial with redraws; returns the accepted attempt's log and the redraw reasons."""
    rng = trial_rng(seed, trial)
    body = TRIALS[suite]
    reasons: list[str] = []
    while len(reasons) < MAX_TRIAL_REDRAWS:
        log = TrialLog()
        try:
            body(rng, log, trial, trials)
            return log, reasons
        except (Redraw, BasePoint) + GENERICITY_ERRORS as exc:
            reasons.append(type(exc).__name__)
        except IsodynError as exc:
            log.failed.append(("exception", f"raised {type(exc).__name__}: {exc}"))
            return log, reasons
    log = TrialLog()
    log.failed.append(("redraw-limit", f"no generic draw after {MAX_TRIAL_REDRAWS} attempts"))
    return log, reasons


def run_suite(config: SuiteConfig) -> SuiteReport:
    start = time.perf_counter()
    report = SuiteReport(config.suite, config.trials, config.seed)
    for trial in range(config.trials):
        log, reasons = run_trial(config.suite, config.seed, trial, config.trials)
        report.rejections += len(reasons)
        for reason in reasons:
            report.rejection_reasons[reason] = report.rejection_reasons.get(reason, 0) + 1
        report.checks += log.checks
        for tag, count in log.tally.items():
            report.check_counts[tag] = report.check_counts.get(tag, 0) + count
        for tag, expression in log.failed:
            report.failures.append(
                {
                    "trial": trial,
                    "seed": config.seed ^ trial,
                    "check": tag,
                    "instance": log.instance,
                    "expression": expression,
                }
            )
    report.elapsed_ms = round((time.perf_counter() - start) * 1000)
    return report
