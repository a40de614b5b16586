import random

from isodyn.exactalg import det
from isodyn.fuchsian import check_orthogonality, check_ranks
from isodyn.reduction import a2_xy_from_point
from isodyn.sampling import (
    random_4x4_instance,
    random_a1_instance,
    random_a2_instance,
    random_invertible,
    random_nonzero,
    random_rational,
    trial_rng,
)


def test_random_rationals_respect_height():
    rng = random.Random(0)
    values = [random_rational(rng, 20) for _ in range(200)]
    assert all(abs(v.numerator) <= 20 and 1 <= v.denominator <= 20 for v in values)
    assert all(random_nonzero(rng) != 0 for _ in range(200))


def test_random_invertible_is_invertible():
    rng = random.Random(1)
    for n in (2, 3, 4):
        assert det(random_invertible(rng, n)) != 0


def test_trial_rng_uses_xor_sub_seeds():
    assert trial_rng(5, 3).random() == random.Random(5 ^ 3).random()


def test_instances_are_deterministic_and_valid():
    for make in (random_a2_instance, random_a1_instance, random_4x4_instance):
        first, second = make(random.Random(9)), make(random.Random(9))
        assert first.point == second.point
        assert check_orthogonality(first.point) and check_ranks(first.point)


def test_gauged_instance_keeps_its_slice_coordinates():
    inst = random_a2_instance(random.Random(4))
    plain = random_a2_instance(random.Random(4), gauge=False)
    assert a2_xy_from_point(inst.point) == a2_xy_from_point(plain.point) == inst.xy
    assert inst.point != plain.point


def finite_partitions(inst):
    return sorted(inst.point.scheme().spectral_type().partitions[:3])


def test_4x4_spectral_types():
    simple = (1, 1, 1, 1)
    assert finite_partitions(random_4x4_instance(random.Random(3))) == sorted([(2, 2), simple, simple])
    assert finite_partitions(random_4x4_instance(random.Random(3), "1111")) == [simple] * 3
