import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import cocyclelab as cl
from util import SILVER

finite_reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
circle_points = st.floats(min_value=0.0, max_value=1.0, exclude_max=True)


def test_wrap_unit_values():
    assert cl.wrap_unit(0.0) == 0.0
    assert cl.wrap_unit(1.0) == 0.0
    assert cl.wrap_unit(2.5) == 0.5
    assert cl.wrap_unit(-0.25) == 0.75
    out = cl.wrap_unit(np.array([0.1, 1.2, -0.3]))
    assert np.allclose(out, [0.1, 0.2, 0.7], atol=1e-15)
    assert np.all((out >= 0.0) & (out < 1.0))


@given(t=circle_points, a=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))
@settings(max_examples=200)
def test_rotate_round_trip(t, a):
    back = cl.rotate(cl.rotate(t, a), -a)
    assert cl.circle_distance(back, t) <= 1e-15


@given(t=finite_reals, a=finite_reals)
@settings(max_examples=200)
def test_rotate_round_trip_large_inputs(t, a):
    # large magnitudes round at eps * |t + a|, far above the circle scale
    back = cl.rotate(cl.rotate(t, a), -a)
    assert cl.circle_distance(back, cl.wrap_unit(t)) <= 1e-9


@given(t=circle_points, a=st.floats(min_value=-10, max_value=10, allow_nan=False))
@settings(max_examples=200)
def test_rotate_stays_on_circle(t, a):
    out = cl.rotate(t, a)
    assert 0.0 <= out < 1.0


def test_circle_distance_symmetry_and_range():
    assert cl.circle_distance(0.1, 0.9) == pytest.approx(0.2, abs=1e-15)
    assert cl.circle_distance(0.9, 0.1) == pytest.approx(0.2, abs=1e-15)
    assert cl.circle_distance(0.25, 0.75) == pytest.approx(0.5, abs=1e-15)
    assert cl.circle_distance(0.3, 0.3) == 0.0


def test_as_word_validates():
    word = cl.as_word([0, 1, 1, 0], 2)
    assert word.dtype.kind == "i"
    assert len(cl.as_word([], 3)) == 0
    with pytest.raises(cl.InvalidWordError):
        cl.as_word([0, 2], 2)
    with pytest.raises(cl.InvalidWordError):
        cl.as_word([-1], 2)
    with pytest.raises(cl.InvalidWordError):
        cl.as_word([0.5], 2)


def test_orbit_endpoint_accuracy_long_word():
    rng = np.random.default_rng(7)
    word = rng.integers(0, 2, size=10_000)
    angles = [cl.GOLDEN_MEAN, SILVER]
    orbit = cl.base_orbit(angles, word, 0.123456789)
    assert len(orbit) == 10_001
    total = math.fsum(angles[s] for s in word)
    expected = cl.rotate(0.123456789, total)
    assert cl.circle_distance(orbit[-1], expected) <= 1e-12


def test_orbit_equidistribution():
    orbit = cl.base_orbit([cl.GOLDEN_MEAN], cl.constant_word(4096), 0.0)
    assert stats.kstest(orbit[:-1], "uniform").pvalue > 0.01


def test_backward_orbit_inverts_forward():
    rng = np.random.default_rng(3)
    word = rng.integers(0, 2, size=200)
    angles = [cl.GOLDEN_MEAN, SILVER]
    fwd = cl.base_orbit(angles, word, 0.4)
    back = cl.backward_orbit(angles, word[::-1], fwd[-1])
    for p, q in zip(back, fwd[::-1]):
        assert cl.circle_distance(p, q) <= 1e-12


def test_homoclinic_words():
    const = cl.constant_word(6)
    flip = cl.single_flip_word(6)
    assert list(const) == [0] * 6
    assert list(flip) == [1, 0, 0, 0, 0, 0]
    assert cl.forward_agreement_index(flip, const) == 1
    assert cl.forward_agreement_index(const, const) == 0
    assert cl.backward_agreement_depth(const, const) == 0
    with pytest.raises(cl.NotHomoclinicError):
        cl.forward_agreement_index(cl.constant_word(4), cl.single_flip_word(4, 1)[::-1])


def test_holonomy_offsets_match_base_holonomy():
    angles = [cl.GOLDEN_MEAN, SILVER]
    flip = cl.single_flip_word(8)
    const = cl.constant_word(8)
    offset = cl.stable_holonomy_offset(angles, flip, const)
    assert offset == pytest.approx(
        cl.homoclinic_base_holonomy(angles[0], angles[1]), abs=1e-15
    )
    assert cl.unstable_holonomy_offset(angles, const, const) == 0.0


@given(theta0=circle_points, theta1=circle_points)
@settings(max_examples=100)
def test_base_holonomy_is_rigid_rotation(theta0, theta1):
    delta = cl.homoclinic_base_holonomy(theta0, theta1)
    assert 0.0 <= delta < 1.0
    assert cl.circle_distance(cl.rotate(theta0, delta), theta1) <= 1e-15
