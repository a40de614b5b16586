import random
from fractions import Fraction

import pytest

from isodyn.errors import InvalidIndex, InvalidTransform, SpectrumMismatch
from isodyn.exactalg import INF, RatMat, charpoly, poly_from_roots
from isodyn.fuchsian import (
    DecompositionPoint,
    PoleData,
    RiemannScheme,
    assemble,
    check_orthogonality,
    check_ranks,
    fuchs_sum,
    riemann_action,
    scalar_gauge,
    sigma13_hat,
    sigma_swap,
    similarity,
    trivial,
)
from isodyn.reduction import XYCoords, a1_scheme, a2_point_from_xy, a2_scheme
from isodyn.sampling import random_a2_instance, random_a2_theta, random_invertible
from isodyn.schlesinger import rank1


def a2_point(seed=1):
    return random_a2_instance(random.Random(seed))


def test_assemble_single_rank_one_pole():
    theta = Fraction(3, 2)
    pole = PoleData(0, RatMat.column([1, 0, 0]), RatMat.row_vector([theta, 0, 0]), (theta,))
    point = DecompositionPoint((pole,), (-theta, 0, 0))
    system = assemble(point)
    assert system.residue(1) == RatMat([[theta, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert system.a_inf == -system.residue(1)


def test_zero_rank_poles_give_zero_residues():
    z = RatMat.zeros(3, 0)
    pole = PoleData(0, z, RatMat.zeros(0, 3), ())
    system = assemble(DecompositionPoint((pole, PoleData(1, z, RatMat.zeros(0, 3), ())), (0, 0, 0)))
    assert all(a.is_zero() for a in system.matrices())


def test_assemble_rejects_wrong_theta_inf():
    inst = a2_point()
    bad = DecompositionPoint(inst.point.poles, (1, 2, 3))
    with pytest.raises(SpectrumMismatch):
        assemble(bad)


def test_a2_slice_a_inf_spectrum():
    inst = a2_point(4)
    a_inf = assemble(inst.point).a_inf
    assert charpoly(a_inf) == poly_from_roots(inst.scheme.indices[2])


def test_orthogonality_and_perturbation():
    inst = a2_point(2)
    assert check_orthogonality(inst.point) and check_ranks(inst.point)
    pole = inst.point.pole(1)
    bumped = PoleData(pole.z, pole.b, pole.c.with_entry(0, 0, pole.c[0, 0] + 1), pole.thetas)
    assert not check_orthogonality(inst.point.replace_pole(1, bumped))


def test_fuchs_sum():
    t1, t2 = (Fraction(1, 2), Fraction(1, 3), 0), (Fraction(1, 4), Fraction(1, 5), 0)
    t_inf = (-Fraction(1, 2), -Fraction(1, 3), -Fraction(9, 20))
    scheme = RiemannScheme((0, 1, INF), (t1, t2, t_inf))
    assert fuchs_sum(scheme) == 0
    assert fuchs_sum(RiemannScheme((0, INF), ((0, 0), (0, 0)))) == 0


def test_fuchs_sum_counts_double_index_twice():
    t1 = [Fraction(1, 3), Fraction(2, 5), Fraction(-1, 7)]
    t2 = [Fraction(1, 2), Fraction(-3, 4), Fraction(5, 6), Fraction(1, 9)]
    t3 = -(sum(t1) + sum(t2)) / 2
    scheme = a1_scheme(t1, t2, t3)
    assert scheme.indices[2][:2] == (t3, t3)
    assert fuchs_sum(scheme) == 0


def test_scalar_gauge_identity_and_inverse():
    system = assemble(a2_point(3).point)
    assert scalar_gauge(system, 1, 0) == system
    theta = Fraction(7, 3)
    assert scalar_gauge(scalar_gauge(system, 1, -theta), 1, theta) == system


def test_sigma_swap_involution_and_orthogonality():
    point = a2_point(5).point
    assert sigma_swap(point, 1, 2, 2) == point
    swapped = sigma_swap(point, 2, 1, 2)
    assert check_orthogonality(swapped)
    assert swapped.pole(2).b.col(0) == point.pole(2).b.col(1)
    assert swapped.pole(2).c.row(0) == point.pole(2).c.row(1)
    assert assemble(swapped).matrices() == assemble(point).matrices()
    assert sigma_swap(swapped, 2, 1, 2) == point
    with pytest.raises(InvalidIndex):
        sigma_swap(point, 1, 1, 3)


def test_sigma13_hat_residue_shift():
    theta = random_a2_theta(random.Random(8))
    point = a2_point_from_xy(theta, XYCoords(Fraction(1, 3), Fraction(-2, 5)))
    new = sigma13_hat(point)
    assert check_orthogonality(new)
    t11 = theta.theta(1, 1)
    before, after = assemble(point), assemble(new)
    assert after.residue(1) == before.residue(1) - RatMat.identity(3).scale(t11)
    assert after.residue(2) == before.residue(2)
    assert new.scheme() == riemann_action(point.scheme(), "sigma13_hat")


def test_sigma13_hat_scheme_is_an_involution():
    theta = random_a2_theta(random.Random(9))
    assert riemann_action(riemann_action(theta, "sigma13_hat"), "sigma13_hat") == theta


def test_gauge_actions_keep_residues():
    inst = a2_point(6)
    s = random_invertible(random.Random(1), 3)
    moved = similarity(inst.point, s)
    assert [s @ a for a in assemble(inst.point).matrices()] == [
        a @ s for a in assemble(moved).matrices()
    ]
    q = RatMat.diag([2, Fraction(-1, 3)])
    rescaled = trivial(inst.point, 1, q)
    assert assemble(rescaled).matrices() == assemble(inst.point).matrices()
    with pytest.raises(InvalidTransform):
        trivial(inst.point, 1, RatMat([[1, 1], [0, 1]]))


def test_riemann_action_spec_and_inverse():
    theta = random_a2_theta(random.Random(10))
    there = riemann_action(theta, rank1(1, 2, 1, 1))
    assert there.theta(1, 1) == theta.theta(1, 1) - 1
    assert there.theta(2, 1) == theta.theta(2, 1) + 1
    assert riemann_action(there, rank1(2, 1, 1, 1)) == theta
    assert fuchs_sum(there) == fuchs_sum(theta)


def test_riemann_action_scalar_gauge_and_errors():
    theta = a2_scheme([1, 2], [3, 4], [-1, -2, -7])
    moved = riemann_action(theta, ("scalar_gauge", 1, Fraction(1, 2)))
    assert moved.indices[0] == (Fraction(3, 2), Fraction(5, 2), Fraction(1, 2))
    assert fuchs_sum(moved) == fuchs_sum(theta)
    with pytest.raises(InvalidTransform):
        riemann_action(theta, "no-such-map")


def test_scheme_validation():
    with pytest.raises(ValueError):
        RiemannScheme((0, 0, INF), ((1, 0), (1, 0), (0, 0)))
    with pytest.raises(ValueError):
        RiemannScheme((0, INF), ((1, 0), (0,)))
    assert a2_scheme([1, 2], [3, 4], [5, 6, 7]).spectral_type().partitions == ((1, 1, 1),) * 3
