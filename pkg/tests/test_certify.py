"""Certificates: minors, subset-sum gaps, projective twisting, log integrals."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cocyclelab as cl
from cocyclelab.certify import DEFAULT_REL_GAP
from util import axis_pair, pipeline_tuple_d3, random_tuple

LOG2 = math.log(2.0)


def test_certificate_contract():
    cert = cl.Certificate("WEAK_PINCH", "PASS", 0.1)
    assert cert.passed
    assert not cl.Certificate("WEAK_PINCH", "FAIL", -0.1).passed
    # a clean TWIST_D pass sits exactly at zero, every other kind must clear it
    cl.Certificate("TWIST_D", "PASS", 0.0)
    with pytest.raises(ValueError):
        cl.Certificate("WEAK_PINCH", "PASS", 0.0)
    with pytest.raises(ValueError):
        cl.Certificate("NOT_A_KIND", "PASS", 1.0)
    with pytest.raises(ValueError):
        cl.Certificate("WEAK_PINCH", "MAYBE", 1.0)
    with pytest.raises(ValueError):
        cl.Certificate("WEAK_PINCH", "PASS", math.nan)


def test_certificate_json_round_trip(tmp_path):
    cert = cl.Certificate(
        "TWIST_D", "FAIL", -1.0,
        diagnostics={"integral": math.inf, "count": np.int64(3),
                     "flags": [np.True_, np.False_]},
        seed=7, input_digest="abc",
    )
    path = tmp_path / "cert.json"
    cert.write_json(path)
    doc = json.loads(path.read_text())
    assert doc["kind"] == "TWIST_D"
    assert doc["margin"] == -1.0
    assert doc["seed"] == 7
    assert doc["input_digest"] == "abc"
    assert doc["diagnostics"]["integral"] == "inf"
    assert doc["diagnostics"]["count"] == 3
    assert doc["diagnostics"]["flags"] == [True, False]


def test_minor_index_validation():
    idx = cl.MinorIndex([1, 3], (2, 3))
    assert idx.rows == (1, 3) and idx.cols == (2, 3)
    with pytest.raises(ValueError):
        cl.MinorIndex((0, 1), (1, 2))
    with pytest.raises(ValueError):
        cl.MinorIndex((2, 1), (1, 2))
    with pytest.raises(ValueError):
        cl.MinorIndex((1, 1), (1, 2))
    with pytest.raises(ValueError):
        cl.MinorIndex((1, 2), (1,))
    with pytest.raises(ValueError):
        cl.MinorIndex((), ())


def test_all_minor_indices_counts():
    assert len(list(cl.all_minor_indices(2))) == 5
    assert len(list(cl.all_minor_indices(3))) == 19
    assert len(list(cl.all_minor_indices(4))) == 69


def _cofactor_det(m):
    if len(m) == 1:
        return m[0][0]
    total = 0.0
    for j in range(len(m)):
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1.0) ** j * m[0][j] * _cofactor_det(sub)
    return total


def test_minor_matches_cofactor_expansion():
    rng = np.random.default_rng(10)
    for _ in range(40):
        d = int(rng.integers(2, 5))
        mat = rng.standard_normal((d, d))
        for index in cl.all_minor_indices(d):
            sub = mat[np.ix_([r - 1 for r in index.rows],
                             [c - 1 for c in index.cols])]
            want = _cofactor_det(sub.tolist())
            assert cl.minor(mat, index) == pytest.approx(want, abs=1e-12)
    with pytest.raises(ValueError):
        cl.minor(np.eye(2), cl.MinorIndex((1, 3), (1, 2)))
    with pytest.raises(ValueError):
        cl.minor(np.ones((2, 3)), cl.MinorIndex((1,), (1,)))


def test_weakly_pinching_hyperbolic_passes():
    # the vector iterate sheds its transient like 1/n, so expect ~1e-3 here
    cert = cl.weakly_pinching(axis_pair(), n_iter=2000, n_rep=4, seed=1)
    assert cert.kind == "WEAK_PINCH" and cert.passed
    assert cert.diagnostics["lambda_top"] == pytest.approx(LOG2, abs=2e-3)
    assert cert.margin == pytest.approx(LOG2, abs=5e-3)
    assert cert.seed == 1


def test_weakly_pinching_isometry_is_inconclusive():
    rot = cl.right_rotate(cl.TrigMatrixMap.constant(np.eye(2), group_tag=cl.SL2),
                          0.17)
    product = cl.RandomProduct([cl.GOLDEN_MEAN, 0.3], [rot, rot])
    cert = cl.weakly_pinching(product, n_iter=2000, n_rep=4, seed=0)
    assert cert.verdict == "INCONCLUSIVE"
    assert abs(cert.diagnostics["lambda_top"]) < 1e-10


def test_weakly_twisting_rotated_axes_pass():
    cert = cl.weakly_twisting(axis_pair(0.125), n_samples=40, seed=3,
                              n_pullback=120)
    assert cert.kind == "WEAK_TWIST" and cert.passed
    assert cert.diagnostics["converged_fraction"] == 1.0
    assert cert.diagnostics["separated_fraction"] == 1.0
    assert cert.diagnostics["min_separation"] == pytest.approx(
        math.sin(math.pi / 4), abs=1e-9)


def test_weakly_twisting_trivial_holonomy_fails():
    a0 = cl.TrigMatrixMap.constant(np.diag([2.0, 0.5]), group_tag=cl.SL2)
    product = cl.RandomProduct([cl.GOLDEN_MEAN, 0.3], [a0, a0])
    cert = cl.weakly_twisting(product, n_samples=40, seed=3, n_pullback=120)
    assert cert.verdict == "FAIL"
    assert cert.diagnostics["witnesses"]
    assert cert.diagnostics["min_separation"] <= 1e-9
    with pytest.raises(ValueError):
        cl.weakly_twisting(random_tuple(3, seed=0))


def test_pinching_d_collision_witness():
    cert = cl.pinching_d([3.0, 2.0, 1.0, 0.0])
    assert cert.verdict == "FAIL"
    witness = cert.diagnostics["witness"]
    assert witness["size"] == 2
    assert {tuple(witness["first"]), tuple(witness["second"])} == {(1, 4), (2, 3)}
    assert witness["sum_first"] == witness["sum_second"] == 3.0


def test_pinching_d_distinct_sums_pass():
    cert = cl.pinching_d([math.log(4.0), math.log(2.0), 0.0])
    assert cert.passed
    assert cert.margin > 0.1


def test_pinching_d_degenerate_and_validation():
    flat = cl.pinching_d([1.0, 1.0, 1.0])
    assert flat.verdict == "FAIL" and flat.margin == -DEFAULT_REL_GAP
    with pytest.raises(ValueError):
        cl.pinching_d([1.0])
    with pytest.raises(ValueError):
        cl.pinching_d([1.0, math.inf])


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=5), st.floats(-3, 3),
       st.integers(0, 1000))
@settings(max_examples=80)
def test_pinching_d_shift_and_permutation_invariant(lam, shift, perm_seed):
    if max(lam) - min(lam) < 1e-3:
        return
    base = cl.pinching_d(lam)
    shifted = cl.pinching_d([x + shift for x in lam])
    assert shifted.verdict == base.verdict
    assert shifted.margin == pytest.approx(base.margin, abs=1e-9)
    perm = np.random.default_rng(perm_seed).permutation(len(lam))
    mixed = cl.pinching_d([lam[i] for i in perm])
    assert mixed.verdict == base.verdict
    assert mixed.margin == pytest.approx(base.margin, abs=1e-12)


def test_pinching_d_scale_invariant_margin():
    lam = [1.3, 0.4, -0.2, -1.5]
    base = cl.pinching_d(lam)
    scaled = cl.pinching_d([7.5 * x for x in lam])
    assert scaled.verdict == base.verdict
    assert scaled.margin == pytest.approx(base.margin, abs=1e-12)


def test_log_integral_simple_sine():
    result = cl.log_integrability(lambda t: np.sin(2 * np.pi * t))
    assert result.finite
    assert result.estimate == pytest.approx(LOG2, abs=1e-3)
    assert sorted(result.zeros) == pytest.approx([0.0, 0.5], abs=1e-9)
    assert result.orders == [1, 1]
    assert all(result.diagnostics["transversal"])


def test_log_integral_shifted_roots():
    result = cl.log_integrability(lambda t: np.sin(2 * np.pi * (t - 0.3)))
    assert sorted(result.zeros) == pytest.approx([0.3, 0.8], abs=1e-9)
    assert result.estimate == pytest.approx(LOG2, abs=1e-3)


def test_log_integral_identically_zero_is_infinite():
    result = cl.log_integrability(lambda t: np.zeros_like(t))
    assert not result.finite
    assert result.estimate == math.inf
    assert result.diagnostics["reason"] == "g vanishes on an interval"


def test_log_integral_interval_vanishing_is_infinite():
    result = cl.log_integrability(
        lambda t: np.maximum(np.cos(2 * np.pi * t) - 0.5, 0.0))
    assert not result.finite


def test_log_integral_constant_is_exact():
    result = cl.log_integrability(lambda t: np.full_like(t, 3.7))
    assert result.estimate == abs(math.log(3.7))
    assert result.zeros == []


def test_log_integral_zero_free_matches_closed_form():
    # circle integral of log(2 + cos) is log((2 + sqrt 3) / 2)
    result = cl.log_integrability(lambda t: 2.0 + np.cos(2 * np.pi * t))
    assert result.zeros == []
    assert result.estimate == pytest.approx(0.6238107163648714, abs=1e-9)


def test_log_integral_double_zeros():
    result = cl.log_integrability(lambda t: np.sin(2 * np.pi * t) ** 2)
    assert result.finite
    assert result.orders == [2, 2]
    assert sorted(result.zeros) == pytest.approx([0.0, 0.5], abs=1e-6)
    assert result.estimate == pytest.approx(2.0 * LOG2, rel=5e-3)


def test_log_integral_validation():
    with pytest.raises(ValueError):
        cl.log_integrability(lambda t: np.array([1.0]))
    with pytest.raises(ValueError):
        cl.log_integrability(lambda t: np.where(t > 0.5, np.nan, 1.0))


def _sign_change_counts(product, grid_n=1 << 17):
    ts = np.arange(grid_n) / grid_n
    hol = cl.closed_form_holonomy_many(product, ts)
    counts = {}
    for index in cl.all_minor_indices(product.dim):
        rows = [r - 1 for r in index.rows]
        cols = [c - 1 for c in index.cols]
        sub = hol[:, rows][:, :, cols]
        vals = np.linalg.det(sub) if len(rows) > 1 else sub[:, 0, 0]
        signs = np.sign(vals)
        counts[(index.rows, index.cols)] = int(np.sum(signs != np.roll(signs, 1)))
    return counts


def test_twisting_d_pipeline_tuple_passes():
    product = pipeline_tuple_d3()
    cert = cl.twisting_d(product)
    assert cert.kind == "TWIST_D" and cert.passed
    assert cert.margin == 0.0
    minors = cert.diagnostics["minors"]
    assert len(minors) == 19
    assert all(math.isfinite(entry["integral"]) for entry in minors)
    scan = _sign_change_counts(product)
    for entry in minors:
        assert entry["n_zeros"] == scan[(tuple(entry["rows"]), tuple(entry["cols"]))]


def test_twisting_d_trivial_holonomy_fails():
    a0 = cl.TrigMatrixMap.constant(np.diag([2.0, 0.5]), group_tag=cl.SL2)
    product = cl.RandomProduct([cl.GOLDEN_MEAN, 0.3], [a0, a0])
    cert = cl.twisting_d(product)
    assert cert.verdict == "FAIL"
    assert cert.diagnostics["witness"] is not None
    assert not cert.passed
