"""Fuchsian systems in Schlesinger normal form and their eigen-decomposition data.

Poles and eigen-slots are numbered from 1 in every public function, the
way they are written in transform labels such as ``{1 2; 1 1}``.  The
pole at infinity carries no matrix data; only its prescribed spectrum
``theta_inf`` is stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateParameter, InvalidIndex, InvalidTransform, SpectrumMismatch
from .exactalg import (
    INF,
    RatMat,
    charpoly,
    cross,
    dot,
    eigenspace,
    mat_inverse,
    poly_from_roots,
    rank,
    rat,
)


def require_nonzero(value, expression: str) -> Fraction:
    """Genericity guard: return ``value`` or raise naming ``expression``."""
    if value == 0:
        raise DegenerateParameter(expression)
    return value


@dataclass(frozen=True)
class RiemannScheme:
    """Pole positions (``INF`` for infinity) with their characteristic indices."""

    positions: tuple
    indices: tuple

    def __post_init__(self):
        pos = tuple(p if p is INF else rat(p) for p in self.positions)
        idx = tuple(tuple(rat(t) for t in row) for row in self.indices)
        if len(pos) != len(idx):
            raise ValueError("one index list per pole is required")
        finite = [p for p in pos if p is not INF]
        if len(set(finite)) != len(finite) or sum(p is INF for p in pos) > 1:
            raise ValueError("pole positions must be pairwise distinct")
        sizes = {len(r) for r in idx}
        if len(sizes) > 1:
            raise ValueError("every pole must list m indices")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return len(self.indices[0]) if self.indices else 0

    def theta(self, pole: int, slot: int) -> Fraction:
        return self.indices[pole - 1][slot - 1]

    def with_indices(self, indices) -> "RiemannScheme":
        return RiemannScheme(self.positions, indices)

    def spectral_type(self) -> "SpectralType":
        parts = []
        for row in self.indices:
            counts: dict = {}
            for t in row:
                counts[t] = counts.get(t, 0) + 1
            parts.append(tuple(sorted(counts.values(), reverse=True)))
        return SpectralType(tuple(parts))


@dataclass(frozen=True)
class SpectralType:
    partitions: tuple

    def __post_init__(self):
        sizes = {sum(p) for p in self.partitions}
        if len(sizes) > 1:
            raise ValueError("each partition must sum to the matrix size")
        for p in self.partitions:
            if list(p) != sorted(p, reverse=True):
                raise ValueError("partitions must be weakly decreasing")

    def __str__(self) -> str:
        return ",".join("".join(str(k) for k in p) for p in self.partitions)


def fuchs_sum(scheme: RiemannScheme) -> Fraction:
    return sum((t for row in scheme.indices for t in row), Fraction(0))


@dataclass(frozen=True)
class PoleData:
    """Eigen-decomposition A = B C at one finite pole; ``c`` is r x m."""

    z: Fraction
    b: RatMat
    c: RatMat
    thetas: tuple

    def __post_init__(self):
        object.__setattr__(self, "z", rat(self.z))
        object.__setattr__(self, "thetas", tuple(rat(t) for t in self.thetas))
        r = len(self.thetas)
        if self.b.cols != r or self.c.rows != r or self.b.rows != self.c.cols:
            raise ValueError(
                f"pole data shapes B{self.b.shape}, C{self.c.shape} do not match {r} eigenvalues"
            )
        if any(t == 0 for t in self.thetas):
            raise ValueError("zero eigenvalues are not stored explicitly")

    @property
    def r(self) -> int:
        return len(self.thetas)

    def b_vec(self, slot: int) -> RatMat:
        return self.b.col(slot - 1)

    def c_vec(self, slot: int) -> RatMat:
        return self.c.row(slot - 1)

    def residue(self) -> RatMat:
        return self.b @ self.c


@dataclass(frozen=True)
class DecompositionPoint:
    poles: tuple
    theta_inf: tuple

    def __post_init__(self):
        poles = tuple(self.poles)
        if not poles:
            raise ValueError("at least one finite pole is required")
        m = poles[0].b.rows
        if any(p.b.rows != m for p in poles):
            raise ValueError("all poles must share the matrix size")
        tinf = tuple(rat(t) for t in self.theta_inf)
        if len(tinf) != m:
            raise ValueError("theta_inf must list m values")
        zs = [p.z for p in poles]
        if len(set(zs)) != len(zs):
            raise ValueError("pole positions must be pairwise distinct")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "theta_inf", tinf)

    @property
    def m(self) -> int:
        return self.poles[0].b.rows

    def pole(self, i: int) -> PoleData:
        if not 1 <= i <= len(self.poles):
            raise InvalidIndex(f"pole {i} does not exist")
        return self.poles[i - 1]

    def theta(self, i: int, j: int) -> Fraction:
        pole = self.pole(i)
        if not 1 <= j <= pole.r:
            raise InvalidIndex(f"pole {i} has no nonzero eigen-slot {j}")
        return pole.thetas[j - 1]

    def replace_pole(self, i: int, pole: PoleData) -> "DecompositionPoint":
        poles = list(self.poles)
        poles[i - 1] = pole
        return DecompositionPoint(tuple(poles), self.theta_inf)

    def scheme(self) -> RiemannScheme:
        m = self.m
        rows = [p.thetas + (Fraction(0),) * (m - p.r) for p in self.poles]
        rows.append(self.theta_inf)
        return RiemannScheme(tuple(p.z for p in self.poles) + (INF,), tuple(rows))


@dataclass(frozen=True)
class FuchsianSystem:
    residues: tuple
    a_inf: RatMat

    def __post_init__(self):
        res = tuple((rat(z), a) for z, a in self.residues)
        object.__setattr__(self, "residues", res)

    @property
    def m(self) -> int:
        return self.a_inf.rows

    @property
    def positions(self) -> list[Fraction]:
        return [z for z, _ in self.residues]

    def residue(self, i: int) -> RatMat:
        return self.residues[i - 1][1]

    def evaluate(self, z) -> RatMat:
        """A(z) = sum A_i / (z - z_i)."""
        z = rat(z)
        total = RatMat.zeros(self.m, self.m)
        for zi, a in self.residues:
            total = total + a.scale(1 / (z - zi))
        return total

    def matrices(self) -> list[RatMat]:
        return [a for _, a in self.residues] + [self.a_inf]


def spectrum_matches(a: RatMat, values: Sequence) -> bool:
    """Characteristic polynomial of ``a`` equals prod (t - v) over ``values``."""
    return charpoly(a) == poly_from_roots(values)


def is_diagonalizable_with(a: RatMat, values: Sequence) -> bool:
    """Spectrum matches and every eigenspace has full dimension."""
    if not spectrum_matches(a, values):
        return False
    counts: dict = {}
    for v in values:
        counts[rat(v)] = counts.get(rat(v), 0) + 1
    return all(len(eigenspace(a, v)) == k for v, k in counts.items())


def assemble(point: DecompositionPoint) -> FuchsianSystem:
    residues = tuple((p.z, p.residue()) for p in point.poles)
    m = point.m
    total = RatMat.zeros(m, m)
    for _, a in residues:
        total = total + a
    a_inf = -total
    if not spectrum_matches(a_inf, point.theta_inf):
        raise SpectrumMismatch("spectrum of A_inf differs from theta_inf")
    return FuchsianSystem(residues, a_inf)


def check_orthogonality(point: DecompositionPoint) -> bool:
    return all(p.c @ p.b == RatMat.diag(p.thetas) for p in point.poles)


def check_ranks(point: DecompositionPoint) -> bool:
    return all(rank(p.b) == p.r and rank(p.c) == p.r for p in point.poles)


# gauge actions


def scalar_gauge(system: FuchsianSystem, i: int, s) -> FuchsianSystem:
    """A_i -> A_i + s I, compensated at infinity."""
    s = rat(s)
    if not 1 <= i <= len(system.residues):
        raise InvalidIndex(f"pole {i} is not a finite pole")
    shift = RatMat.identity(system.m).scale(s)
    res = list(system.residues)
    z, a = res[i - 1]
    res[i - 1] = (z, a + shift)
    return FuchsianSystem(tuple(res), system.a_inf - shift)


def similarity(point: DecompositionPoint, s: RatMat) -> DecompositionPoint:
    """Global conjugation A_i -> S A_i S^-1, i.e. (S B_i, C_i S^-1)."""
    s_inv = mat_inverse(s)
    poles = tuple(PoleData(p.z, s @ p.b, p.c @ s_inv, p.thetas) for p in point.poles)
    return DecompositionPoint(poles, point.theta_inf)


def trivial(point: DecompositionPoint, i: int, q: RatMat) -> DecompositionPoint:
    """Per-pole change of eigenbasis (B_i Q, Q^-1 C_i); Q must commute with diag(Theta_i)."""
    pole = point.pole(i)
    theta = RatMat.diag(pole.thetas)
    if q @ theta != theta @ q:
        raise InvalidTransform("trivial transformation must preserve the eigenvalue blocks")
    return point.replace_pole(i, PoleData(pole.z, pole.b @ q, mat_inverse(q) @ pole.c, pole.thetas))


def sigma_swap(point: DecompositionPoint, i: int, j: int, k: int) -> DecompositionPoint:
    """Exchange the eigen-triples in slots j and k of pole i."""
    pole = point.pole(i)
    for slot in (j, k):
        if not 1 <= slot <= pole.r:
            raise InvalidIndex(f"pole {i} has no nonzero eigen-slot {slot}")
    if j == k:
        return point
    order = list(range(pole.r))
    order[j - 1], order[k - 1] = order[k - 1], order[j - 1]
    b = RatMat.from_columns([pole.b.col(t) for t in order])
    c = RatMat.from_rows([pole.c.row(t) for t in order])
    thetas = tuple(pole.thetas[t] for t in order)
    return point.replace_pole(i, PoleData(pole.z, b, c, thetas))


def sigma13_hat(point: DecompositionPoint) -> DecompositionPoint:
    """Swap eigen-slot 1 of pole 1 with its kernel slot, then shift A_1 by -theta_1^1.

    The net effect on the residue is A_1 -> A_1 - theta_1^1 I.  Slot 1
    becomes the old kernel direction (eigenvalue -theta_1^1); slot 2
    keeps its vector with eigenvalue theta_1^2 - theta_1^1.
    """
    if point.m != 3:
        raise InvalidTransform("sigma13_hat is defined for 3x3 systems")
    pole = point.pole(1)
    if pole.r != 2:
        raise InvalidTransform("pole 1 must carry exactly two nonzero eigenvalues")
    t1, t2 = pole.thetas
    new_t2 = require_nonzero(t2 - t1, "theta_1_2 - theta_1_1")
    b1, b2 = pole.b_vec(1), pole.b_vec(2)
    c1, c2 = pole.c_vec(1), pole.c_vec(2)
    kernel = cross(c1, c2)
    coker = cross(b1, b2).T
    pairing = require_nonzero(dot(kernel, coker), "(c_1^1 x c_1^2).(b_1^1 x b_1^2)")
    new_c1 = coker.scale(-t1 / pairing)
    new_c2 = c2.scale(new_t2 / t2)
    b = RatMat.from_columns([kernel, b2])
    c = RatMat.from_rows([new_c1, new_c2])
    new_pole = PoleData(pole.z, b, c, (-t1, new_t2))
    shifted_inf = tuple(t + t1 for t in point.theta_inf)
    return DecompositionPoint((new_pole,) + point.poles[1:], shifted_inf)


# scheme bookkeeping


def riemann_action(scheme: RiemannScheme, transform) -> RiemannScheme:
    """Predicted scheme after ``transform``.

    ``transform`` is a transform spec (anything with ``alpha``, ``beta``
    and ``pairs``), one of the strings ``"dpa2_model"``, ``"dpa1_model"``,
    ``"sigma13_hat"``, or a tuple ``("scalar_gauge", pole, s)``.
    """
    rows = [list(r) for r in scheme.indices]
    inf_pole = next((k for k, p in enumerate(scheme.positions) if p is INF), None)

    if hasattr(transform, "pairs") and hasattr(transform, "alpha"):
        a, b = transform.alpha - 1, transform.beta - 1
        for mu, nu in transform.pairs:
            try:
                rows[a][mu - 1] -= 1
                rows[b][nu - 1] += 1
            except IndexError:
                raise InvalidTransform(f"index out of range in {transform}") from None
        return scheme.with_indices(rows)

    if isinstance(transform, tuple) and transform and transform[0] == "scalar_gauge":
        _, pole, s = transform
        s = rat(s)
        if inf_pole is None or not 1 <= pole <= len(rows) or pole - 1 == inf_pole:
            raise InvalidTransform("scalar_gauge needs a finite pole and a pole at infinity")
        rows[pole - 1] = [t + s for t in rows[pole - 1]]
        rows[inf_pole] = [t - s for t in rows[inf_pole]]
        return scheme.with_indices(rows)

    if transform == "sigma13_hat":
        if scheme.size != 3 or inf_pole is None:
            raise InvalidTransform("sigma13_hat acts on 3x3 schemes with a pole at infinity")
        t1, t2, t3 = rows[0]
        rows[0] = [t3 - t1, t2 - t1, Fraction(0)]
        rows[inf_pole] = [t + t1 for t in rows[inf_pole]]
        return scheme.with_indices(rows)

    if transform == "dpa2_model":
        if scheme.size != 3 or len(rows) != 3:
            raise InvalidTransform("dpa2_model acts on the 3x3 three-pole scheme")
        rows[0][1] -= 1
        rows[1][0] -= 1
        rows[1][1] -= 1
        rows[2] = [t + 1 for t in rows[2]]
        return scheme.with_indices(rows)

    if transform == "dpa1_model":
        if scheme.size != 4 or len(rows) < 3:
            raise InvalidTransform("dpa1_model acts on the 4x4 scheme")
        rows[1] = [t - 1 for t in rows[1]]
        rows[2][0] += 2
        rows[2][1] += 2
        return scheme.with_indices(rows)

    raise InvalidTransform(f"unknown transform {transform!r}")
