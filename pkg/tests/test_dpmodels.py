import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from isodyn.errors import BasePoint, DegenerateParameter
from isodyn.dpmodels import (
    INFINITY,
    FGPoint,
    ParamsA1,
    ParamsA2,
    dpa1_base_points,
    dpa1_closed_forms,
    dpa1_half_coefficients,
    dpa1_inverse,
    dpa1_inverse_base_points,
    dpa1_step,
    dpa2_base_points,
    dpa2_half_coefficients,
    dpa2_step,
    orbit,
)
from isodyn.sampling import random_rational
from oracles import dpa1_oracle, dpa2_oracle

small = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def distinct_base_points(make, base_points, rng):
    while True:
        params = make(rng)
        points = [pt for _, pt in base_points(params)]
        if len(set(points)) == len(points):
            return params


def random_a2_params(rng):
    return distinct_base_points(
        lambda r: ParamsA2([random_rational(r, 9) for _ in range(8)]), dpa2_base_points, rng
    )


def random_a1_params(rng):
    return distinct_base_points(
        lambda r: ParamsA1(random_rational(r, 9), [random_rational(r, 9) for _ in range(8)]),
        dpa1_base_points,
        rng,
    )


def generic_step(step, params, pt):
    try:
        return step(params, pt)
    except (BasePoint, DegenerateParameter):
        return None


def test_dpa2_reference_point_matches_oracle():
    params = ParamsA2(range(1, 9))
    new_params, image = dpa2_step(params, FGPoint(10, 11))
    assert (image.f, image.g) == dpa2_oracle(params.b, 10, 11)
    assert image == FGPoint(41, Fraction(2982, 13))
    assert new_params.b == (1, 2, 3, 4, 41, 42, -29, -28)


@given(st.lists(small, min_size=8, max_size=8), small, small)
def test_dpa2_matches_oracle(b, f, g):
    params = ParamsA2(b)
    result = generic_step(dpa2_step, params, FGPoint(f, g))
    assume(result is not None)
    try:
        expected = dpa2_oracle(b, f, g)
    except (ValueError, ZeroDivisionError):
        assume(False)
    assert (result[1].f, result[1].g) == expected


@given(small, st.lists(small, min_size=8, max_size=8), small, small)
def test_dpa1_matches_oracle(b0, b, f, g):
    params = ParamsA1(b0, b)
    result = generic_step(dpa1_step, params, FGPoint(f, g))
    assume(result is not None and result[1].is_finite())
    try:
        expected = dpa1_oracle(b0, b, f, g)
    except (ValueError, ZeroDivisionError):
        assume(False)
    assert (result[1].f, result[1].g) == expected


def test_dpa2_base_points_listed():
    b = tuple(Fraction(v) for v in (0, 2, 3, 4, 5, 6, 7, 8))
    pts = dict(dpa2_base_points(ParamsA2(b)))
    assert pts["p1"] == FGPoint(0, 0)
    assert pts["p4"] == FGPoint(4, -4)
    assert pts["p5"] == FGPoint(INFINITY, 5)
    assert pts["p7"] == FGPoint(-7, INFINITY)
    assert len(pts) == 8


@pytest.mark.parametrize("seed", range(5))
def test_dpa2_base_points_raise_and_are_indeterminate(seed):
    params = random_a2_params(random.Random(seed))
    for label, pt in dpa2_base_points(params):
        with pytest.raises(BasePoint) as info:
            dpa2_step(params, pt)
        assert info.value.label == label
        first, second = dpa2_half_coefficients(params, pt)
        assert first == (0, 0) or second == (0, 0), label


@pytest.mark.parametrize("seed", range(5))
def test_dpa1_base_points_lie_on_two_curves_and_are_indeterminate(seed):
    params = random_a1_params(random.Random(seed))
    points = dpa1_base_points(params)
    for i, (label, pt) in enumerate(points):
        assert pt.f + pt.g == (2 * params.b0 if i < 4 else 0)
        with pytest.raises(BasePoint, match=label):
            dpa1_step(params, pt)
        first, second = dpa1_half_coefficients(params, pt)
        assert first == (0, 0) or second == (0, 0), label


def test_dpa1_curves_coincide_when_b_vanishes():
    params = ParamsA1(0, [1, 2, 3, 4, 5, 6, 7, 8])
    assert all(pt.f + pt.g == 0 for _, pt in dpa1_base_points(params))


def test_generic_point_is_not_indeterminate():
    params = ParamsA2(range(1, 9))
    first, second = dpa2_half_coefficients(params, FGPoint(10, 11))
    assert first != (0, 0) and second != (0, 0)


def test_zero_delta_keeps_parameters():
    b = [1, -1, 2, -2, 3, -3, 4, -4]
    assert ParamsA2(b).evolved() == ParamsA2(b)
    assert ParamsA1(5, b).evolved() == ParamsA1(5, b)


def test_dpa1_parameter_update():
    params = ParamsA1(3, [1, 2, -1, 5, 7, -3, 2, 4])
    new_params, _ = dpa1_step(params, FGPoint(3, 5))
    assert new_params.b0 == 3 - 17 and new_params.b == params.b
    assert new_params.reverted() == params


def test_dpa1_inverse_round_trip_reference():
    params = ParamsA1(3, [1, 2, -1, 5, 7, -3, 2, 4])
    evolved, image = dpa1_step(params, FGPoint(3, 5))
    assert dpa1_inverse(evolved, image) == (params, FGPoint(3, 5))


@given(small, st.lists(small, min_size=8, max_size=8), small, small)
def test_dpa1_inverse_round_trip(b0, b, f, g):
    params = ParamsA1(b0, b)
    result = generic_step(dpa1_step, params, FGPoint(f, g))
    assume(result is not None)
    back = generic_step(dpa1_inverse, *result)
    assume(back is not None)
    assert back == (params, FGPoint(f, g))


def test_dpa1_inverse_base_points_raise():
    params = random_a1_params(random.Random(3)).evolved()
    for label, pt in dpa1_inverse_base_points(params):
        with pytest.raises(BasePoint, match=label):
            dpa1_inverse(params, pt)


@pytest.mark.parametrize("seed", range(10))
def test_dpa1_closed_forms_agree_with_solver(seed):
    rng = random.Random(seed)
    params = random_a1_params(rng)
    result = None
    while result is None or not result[1].is_finite():
        pt = FGPoint(random_rational(rng), random_rational(rng))
        result = generic_step(dpa1_step, params, pt)
    assert dpa1_closed_forms(params, pt) == result[1]


def test_dpa1_closed_forms_need_finite_input():
    with pytest.raises(DegenerateParameter):
        dpa1_closed_forms(ParamsA1(1, range(1, 9)), FGPoint(INFINITY, 2))


def test_dpa2_step_from_infinity():
    params = ParamsA2(range(1, 9))
    # f = oo off the base points: the first equation forces fbar = -g.
    _, image = dpa2_step(params, FGPoint(INFINITY, 2))
    assert image.f == -2
    # A point whose image lands at infinity on the f side.
    _, image = dpa2_step(params, FGPoint(10, 5))
    assert image.f is INFINITY


def test_dpa2_orbit_drift():
    params = ParamsA2([Fraction(1, 2), 1, 2, 3, 5, 7, -11, -13])
    delta = params.delta
    records = list(orbit(dpa2_step, params, FGPoint(Fraction(1, 3), Fraction(2, 7)), 6))
    assert [n for n, _, _ in records] == list(range(7))
    for n, p, _ in records:
        assert p.bi(5) == params.bi(5) + n * delta
        assert p.bi(8) == params.bi(8) - n * delta
        assert p.b[:4] == params.b[:4]


def test_params_validate_length_and_type():
    with pytest.raises(ValueError):
        ParamsA2([1, 2, 3])
    with pytest.raises(TypeError):
        ParamsA1(0.5, range(8))
