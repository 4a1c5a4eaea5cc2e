import math

import mpmath
import numpy as np
import pytest
from scipy.stats import power_divergence
from statsmodels.sandbox.stats.runs import runstest_1samp

from noiselogic.rng import combined
from noiselogic.stattests import (
    PreconditionError,
    TestResult,
    autocorr,
    block_entropy,
    block_entropy_test,
    monobit,
    run_battery,
    runs_test,
)

N = 10**6
ALT = np.tile([0, 1], 50)


@pytest.fixture(scope="module")
def fair_bits():
    return np.random.default_rng(12345).integers(0, 2, N, dtype=np.uint8)


def test_result_pass_iff_p_at_least_alpha():
    assert TestResult("x", 0.0, 0.01, 0.01).passed
    assert not TestResult("x", 0.0, 0.0099, 0.01).passed
    assert TestResult("x", 1.0, 0.5).as_dict()["pass"] is True


def test_monobit_balanced():
    r = monobit(ALT)
    assert r.statistic == 0 and r.p_value == 1.0 and r.passed


def test_monobit_all_ones():
    r = monobit(np.ones(100, dtype=np.uint8))
    assert r.statistic == 10
    expected = float(mpmath.erfc(10 / mpmath.sqrt(2)))
    assert r.p_value == pytest.approx(expected, rel=1e-9)
    assert r.p_value == pytest.approx(1.5e-23, rel=0.05)
    assert not r.passed


def test_monobit_fair(fair_bits):
    assert monobit(fair_bits).passed


def test_length_preconditions():
    with pytest.raises(PreconditionError):
        monobit(np.ones(99, dtype=np.uint8))
    with pytest.raises(PreconditionError):
        runs_test(ALT[:98])
    with pytest.raises(PreconditionError):
        autocorr(ALT, 2)
    with pytest.raises(PreconditionError):
        block_entropy(ALT, 1)
    with pytest.raises(ValueError):
        monobit(np.full(200, 2))


def test_runs_alternating_fails():
    r = runs_test(ALT)
    assert r.statistic == pytest.approx(49 / math.sqrt(2 * 2500 * 4900 / (100**2 * 99)))
    assert not r.passed


def test_runs_all_zeros_is_precondition_error():
    with pytest.raises(PreconditionError):
        runs_test(np.zeros(1000, dtype=np.uint8))


@pytest.mark.parametrize("seed", range(5))
def test_runs_matches_statsmodels(seed):
    b = np.random.default_rng(seed).integers(0, 2, 5000)
    z, p = runstest_1samp(b, cutoff=0.5, correction=False)
    r = runs_test(b)
    assert r.statistic == pytest.approx(z, rel=1e-10)
    assert r.p_value == pytest.approx(p, rel=1e-10)


def test_runs_fair(fair_bits):
    assert runs_test(fair_bits).passed


def test_autocorr_shift_duplicated_fails(fair_bits):
    dup = np.repeat(fair_bits[: N // 2], 2)  # b[2t+1] = b[2t]
    lag1 = autocorr(dup, 1)[0]
    assert lag1.statistic == pytest.approx(0.5, abs=0.01)
    assert not lag1.passed
    assert autocorr(np.ones(1000, dtype=np.uint8), 1)[0].statistic == 1.0


def test_autocorr_fair_all_lags(fair_bits):
    results = autocorr(fair_bits, 16)
    assert [r.test_name for r in results] == [f"autocorr_lag{k}" for k in range(1, 17)]
    assert all(r.passed for r in results)


def test_block_entropy_trivial():
    assert block_entropy(np.zeros(1000, dtype=np.uint8), 1) == 0.0
    assert block_entropy(np.tile([0, 1], 100), 1) == 1.0


def test_block_entropy_fair(fair_bits):
    assert block_entropy(fair_bits, 8) >= 7.99


@pytest.mark.parametrize("m", [1, 4, 8])
def test_block_entropy_test_is_g_test(fair_bits, m):
    bits = fair_bits[:200_000]
    blocks = bits[: (bits.size // m) * m].reshape(-1, m)
    codes = blocks @ (1 << np.arange(m))
    counts = np.bincount(codes, minlength=1 << m)
    g, p = power_divergence(counts, lambda_="log-likelihood")
    r = block_entropy_test(bits, m)
    assert r.p_value == pytest.approx(p, rel=1e-6, abs=1e-300)


def test_battery_fair_passes(fair_bits):
    report = run_battery(fair_bits)
    assert report.passed, report.failures()
    assert len(report.results) == 1 + 1 + 16 + 3
    assert report.as_dict()["verdict"] == "pass"


def test_battery_constant_stream():
    report = run_battery(np.zeros(10**5, dtype=np.uint8))
    assert not report.passed
    assert "monobit" in report.failures()
    assert "runs" in report.errors
    assert report.as_dict()["verdict"] == "fail"


def test_battery_deterministic(fair_bits):
    assert run_battery(fair_bits[:50_000], 0.01).as_dict() == run_battery(fair_bits[:50_000], 0.01).as_dict()


def test_battery_on_pipeline_output():
    assert run_battery(combined(4, N, master_seed=7).bits).passed


def test_battery_catches_undecimated_slow_noise():
    report = run_battery(combined(1, N, master_seed=7, rho=0.99, decimation=1).bits)
    assert "autocorr_lag1" in report.failures()


@pytest.mark.parametrize(
    "name, check",
    [
        ("monobit", lambda b: monobit(b, 0.01).passed),
        ("runs", lambda b: runs_test(b, 0.01).passed),
        ("autocorr_lag1", lambda b: autocorr(b, 1, 0.01)[0].passed),
        ("autocorr_lag7", lambda b: autocorr(b, 7, 0.01)[6].passed),
        ("block_entropy_m4", lambda b: block_entropy_test(b, 4, 0.01).passed),
    ],
)
def test_null_rejection_rate(name, check):
    alpha, streams, n = 0.01, 1000, 10_000
    rng = np.random.default_rng(sum(map(ord, name)))
    rejections = sum(not check(rng.integers(0, 2, n, dtype=np.uint8)) for _ in range(streams))
    sd = math.sqrt(alpha * (1 - alpha) / streams)
    assert abs(rejections / streams - alpha) <= 3 * sd
