import math

import numpy as np
import pytest

import cocyclelab as cl
from util import SILVER, random_tuple, schrodinger_pair

LOG2 = math.log(2.0)


def constant_diag(values):
    m = cl.TrigMatrixMap.constant(np.diag(values), group_tag=cl.DIAGONAL)
    return cl.RandomProduct([cl.GOLDEN_MEAN], [m])


def test_constant_diagonal_spectrum_exact():
    est = cl.estimate_spectrum(constant_diag([2.0, 1.0, 0.5]), 3000, 4, seed=0)
    assert np.max(np.abs(est.values - [LOG2, 0.0, -LOG2])) <= 1e-10
    assert np.all(est.stderr <= 1e-12)
    assert est.values[0] == est.top


def test_estimate_is_sorted_and_validated():
    est = cl.estimate_spectrum(random_tuple(3, seed=1), 2000, 3, seed=5)
    assert np.all(np.diff(est.values) <= 1e-12)
    with pytest.raises(ValueError):
        cl.LyapunovEstimate(values=np.array([0.0, 1.0]), stderr=np.zeros(2),
                            n_iter=10, n_rep=1, seed=0,
                            replicates=np.zeros((1, 2)))
    with pytest.raises(ValueError):
        cl.LyapunovEstimate(values=np.array([1.0, 0.0]), stderr=np.array([-1.0, 0.0]),
                            n_iter=10, n_rep=1, seed=0,
                            replicates=np.zeros((1, 2)))


def test_seed_determinism_and_worker_merge():
    rp = random_tuple(2, seed=2)
    a = cl.estimate_spectrum(rp, 1500, 4, seed=11)
    b = cl.estimate_spectrum(rp, 1500, 4, seed=11)
    c = cl.estimate_spectrum(rp, 1500, 4, seed=11, workers=3)
    d = cl.estimate_spectrum(rp, 1500, 4, seed=12)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.replicates, b.replicates)
    assert np.array_equal(a.values, c.values)
    assert not np.array_equal(a.values, d.values)


def test_scale_equivariance():
    rp = random_tuple(2, seed=3)
    scaled = cl.RandomProduct(rp.angles, [3.0 * m for m in rp.maps], rp.weights)
    base = cl.estimate_spectrum(rp, 2000, 3, seed=7)
    shifted = cl.estimate_spectrum(scaled, 2000, 3, seed=7)
    assert np.max(np.abs(shifted.values - base.values - math.log(3.0))) <= 1e-10


def test_diagonal_spectrum_birkhoff_oracle():
    # one-dimensional a(t) = 2 + cos(2 pi t): mean of log a is log((2+sqrt 3)/2)
    m = cl.TrigMatrixMap.from_entry_rows(1, [[2.0, 1.0, 0.0]], group_tag=cl.DIAGONAL)
    rp = cl.RandomProduct([cl.GOLDEN_MEAN], [m])
    spec = cl.diagonal_spectrum(rp)
    assert abs(spec[0] - 0.6238107163648714) <= 1e-12
    with pytest.raises(cl.GroupTagError):
        cl.diagonal_spectrum(random_tuple(2, seed=4))


def test_monte_carlo_agrees_with_diagonal_route():
    rng_rows = [[2.4, 0.7, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.9, 0.0, 0.25]]
    m0 = cl.TrigMatrixMap.from_entry_rows(2, rng_rows, group_tag=cl.DIAGONAL)
    m1 = cl.rescale_diagonal(m0, [1.5, 0.5])
    rp = cl.RandomProduct([cl.GOLDEN_MEAN, SILVER], [m0, m1])
    exact = cl.diagonal_spectrum(rp)
    est = cl.estimate_spectrum(rp, 40_000, 8, seed=3)
    assert np.max(np.abs(est.values - exact)) <= 3.0 * np.max(est.stderr) + 2e-3


def test_sum_rule_against_log_det_integral():
    rp = random_tuple(2, seed=6)
    est = cl.estimate_spectrum(rp, 40_000, 8, seed=9)
    expected = cl.mean_log_abs_det(rp)
    assert abs(float(np.sum(est.values)) - expected) <= 3.0 * float(np.sum(est.stderr)) + 2e-3


def test_sl2_exponents_cancel():
    product, _ = schrodinger_pair(energy=3.0)
    est = cl.estimate_spectrum(product, 20_000, 6, seed=4)
    assert abs(est.values[0] + est.values[1]) <= 3.0 * float(np.sum(est.stderr)) + 1e-6


def test_top_exponent_matches_spectrum_head():
    product, _ = schrodinger_pair(energy=3.0)
    full = cl.estimate_spectrum(product, 20_000, 6, seed=8)
    top = cl.estimate_top_exponent(product, 20_000, 6, seed=8)
    assert abs(top.top - full.values[0]) <= 3.0 * (top.stderr[0] + full.stderr[0]) + 1e-3
    with pytest.raises(ValueError):
        cl.estimate_top_exponent(constant_diag([2.0, 1.0, 0.5]), 100, 2, seed=0)


def test_qr_period_invariance_constant_tuple():
    rp = constant_diag([3.0, 0.25])
    fine = cl.estimate_spectrum(rp, 1000, 2, seed=2, qr_period=1)
    coarse = cl.estimate_spectrum(rp, 1000, 2, seed=2, qr_period=25)
    assert np.max(np.abs(fine.values - coarse.values)) <= 1e-12


def test_overflow_raises_renormalization_error():
    rp = constant_diag([1e12, 1.0])
    with pytest.raises(cl.RenormalizationError):
        cl.estimate_spectrum(rp, 600, 1, seed=0, qr_period=600)


def test_single_replicate_has_zero_stderr():
    est = cl.estimate_spectrum(random_tuple(2, seed=8), 500, 1, seed=1)
    assert np.all(est.stderr == 0.0)


def test_knob_validation():
    rp = constant_diag([2.0, 0.5])
    with pytest.raises(ValueError):
        cl.estimate_spectrum(rp, 0, 1, seed=0)
    with pytest.raises(ValueError):
        cl.estimate_spectrum(rp, 10, 0, seed=0)
    with pytest.raises(ValueError):
        cl.estimate_spectrum(rp, 10, 1, seed=0, qr_period=0)
