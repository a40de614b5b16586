"""Seeded random generic instances for the verification suites.

Characteristic indices are rationals with numerator in [-20, 20] and
denominator in [1, 20].  One index is solved from the Fuchs relation.
Draws that trip a genericity guard are rejected and redrawn, and the number
of rejections is returned with each instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, TypeVar

from .errors import IsodynError, NoAccessorySolution, SingularMatrix
from .exactalg import RatMat, det, mat_inverse
from .fuchsian import DecompositionPoint, PoleData, RiemannScheme, similarity, trivial
from .reduction import (
    XYCoords,
    _solve_accessory,
    a1_point_from_xy,
    a1_scheme,
    a2_point_from_xy,
    a2_scheme,
    eigen_pair,
)

T = TypeVar("T")

MAX_REJECTIONS = 500


def random_rational(rng: random.Random, height: int = 20) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_nonzero(rng: random.Random, height: int = 20) -> Fraction:
    while True:
        v = random_rational(rng, height)
        if v:
            return v


def random_invertible(rng: random.Random, n: int, spread: int = 5) -> RatMat:
    while True:
        m = RatMat([[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)])
        if det(m) != 0:
            return m


def random_gauge(point: DecompositionPoint, rng: random.Random) -> DecompositionPoint:
    """A random global similarity, then a random block change of eigenbasis at every pole.

    Slots sharing an eigenvalue are mixed by a random invertible block;
    the other slots get random nonzero rescales.
    """
    point = similarity(point, random_invertible(rng, point.m))
    for i in range(1, len(point.poles) + 1):
        thetas = point.pole(i).thetas
        q = [[Fraction(0)] * len(thetas) for _ in thetas]
        for value in dict.fromkeys(thetas):
            slots = [k for k, t in enumerate(thetas) if t == value]
            block = random_invertible(rng, len(slots)) if len(slots) > 1 else None
            for a, ka in enumerate(slots):
                for b, kb in enumerate(slots):
                    q[ka][kb] = block[a, b] if block is not None else random_nonzero(rng, 5)
        point = trivial(point, i, RatMat(q))
    return point


@dataclass(frozen=True)
class Instance:
    point: DecompositionPoint
    scheme: RiemannScheme
    xy: XYCoords | None
    rejections: int


def draw(rng: random.Random, make: Callable[[random.Random], T]) -> tuple[T, int]:
    """Call ``make`` until it returns without a genericity failure."""
    for rejected in range(MAX_REJECTIONS):
        try:
            return make(rng), rejected
        except (IsodynError, SingularMatrix, ZeroDivisionError):
            continue
    raise NoAccessorySolution(f"no generic draw after {MAX_REJECTIONS} attempts")


def _distinct(values) -> bool:
    return len(set(values)) == len(values)


def random_a2_theta(rng: random.Random) -> RiemannScheme:
    t1 = [random_nonzero(rng), random_nonzero(rng)]
    t2 = [random_nonzero(rng), random_nonzero(rng)]
    t3 = [random_rational(rng), random_rational(rng)]
    t3.append(-(sum(t1) + sum(t2) + sum(t3)))
    if not (_distinct(t1 + [0]) and _distinct(t2 + [0]) and _distinct(t3)):
        raise NoAccessorySolution("repeated characteristic index")
    return a2_scheme(t1, t2, t3)


def random_a2_instance(rng: random.Random, gauge: bool = True) -> Instance:
    """A generic point of type 111,111,111 (two finite poles of rank 2, pole at infinity)."""

    def make(r):
        theta = random_a2_theta(r)
        xy = XYCoords(random_rational(r), random_rational(r))
        point = a2_point_from_xy(theta, xy)
        return theta, xy, (random_gauge(point, r) if gauge else point)

    (theta, xy, point), rejected = draw(rng, make)
    return Instance(point, theta, xy, rejected)


def random_a1_theta(rng: random.Random) -> RiemannScheme:
    t1 = [random_nonzero(rng) for _ in range(3)]
    t2 = [random_nonzero(rng) for _ in range(4)]
    t3 = -(sum(t1) + sum(t2)) / 2
    if t3 == 0 or not (_distinct(t1 + [0]) and _distinct(t2)):
        raise NoAccessorySolution("degenerate characteristic indices")
    return a1_scheme(t1, t2, t3)


def random_a1_instance(rng: random.Random, gauge: bool = True) -> Instance:
    """A generic point of type 1111,1111,22 with trivial residue at infinity."""

    def make(r):
        theta = random_a1_theta(r)
        xy = XYCoords(random_rational(r), random_rational(r))
        point = a1_point_from_xy(theta, xy)
        return theta, xy, (random_gauge(point, r) if gauge else point)

    (theta, xy, point), rejected = draw(rng, make)
    return Instance(point, theta, xy, rejected)


def _random_4x4(rng: random.Random, third: str) -> DecompositionPoint:
    """Three finite poles at 0, 1, 3 plus a generic pole at infinity.

    Pole 1 has three nonzero indices, pole 2 four, and pole 3 either a
    double index (``third == "22"``) or three distinct nonzero indices.
    Pole 1 is placed in normal form with its unknown fourth column solved
    so that pole 2 gets the prescribed spectrum; everything is then moved
    by a random gauge.
    """
    t1 = [random_nonzero(rng) for _ in range(3)]
    t2 = [random_nonzero(rng) for _ in range(4)]
    if third == "22":
        v = random_nonzero(rng)
        t3 = [v, v]
    else:
        t3 = [random_nonzero(rng) for _ in range(3)]
    t_inf = [random_rational(rng) for _ in range(3)]
    t_inf.append(-(sum(t1) + sum(t2) + sum(t3) + sum(t_inf)))
    if not (_distinct(t1 + [0]) and _distinct(t2) and _distinct(t_inf)):
        raise NoAccessorySolution("repeated characteristic index")
    if third != "22" and not _distinct(t3 + [0]):
        raise NoAccessorySolution("repeated characteristic index")

    m3 = random_invertible(rng, 4)
    r3 = len(t3)
    b3 = RatMat.from_columns(m3.columns()[:r3])
    c3 = RatMat.diag(t3) @ RatMat.from_rows(mat_inverse(m3).row_list()[:r3])
    b1 = RatMat([[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]])
    a_inf = RatMat.diag(t_inf)
    a3 = b3 @ c3

    def c1_with(fill):
        return RatMat([[t1[0], 0, 0, fill[0]], [0, t1[1], 0, fill[1]], [0, 0, t1[2], fill[2]]])

    def build(fill):
        return -(b1 @ c1_with(fill) + a3 + a_inf)

    fill = _solve_accessory(build, 3, t2)
    c1 = c1_with(fill.values)
    a2 = build(fill.values)
    pairs = [eigen_pair(a2, t) for t in t2]
    b2 = RatMat.from_columns([b for b, _ in pairs])
    c2 = RatMat.from_rows([c for _, c in pairs])
    point = DecompositionPoint(
        (
            PoleData(0, b1, c1, tuple(t1)),
            PoleData(1, b2, c2, tuple(t2)),
            PoleData(3, b3, c3, tuple(t3)),
        ),
        tuple(t_inf),
    )
    return random_gauge(point, rng)


def random_4x4_instance(rng: random.Random, third: str = "22") -> Instance:
    if third not in ("22", "1111"):
        raise ValueError("third pole type must be '22' or '1111'")
    point, rejected = draw(rng, lambda r: _random_4x4(r, third))
    return Instance(point, point.scheme(), None, rejected)


def trial_rng(seed: int, trial: int) -> random.Random:
    """Per-trial generator; the sub-seed is seed XOR trial index."""
    return random.Random(seed ^ trial)
