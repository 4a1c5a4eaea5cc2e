"""A small randomness battery aimed at bias, periodic bias and long memory.

Battery: monobit, runs, autocorrelation at lags 1-16, block entropy for
block sizes 1, 4 and 8. All p-values use Gaussian or chi-square
approximations, which are accurate in the intended regime n >= 1e6.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import erfc
from scipy.stats import chi2

DEFAULT_ALPHA = 1e-4
AUTOCORR_LAGS = 16
ENTROPY_BLOCKS = (1, 4, 8)


class PreconditionError(ValueError):
    """Input does not meet a test's preconditions; no verdict is possible."""


@dataclass(frozen=True)
class TestResult:
    test_name: str
    statistic: float
    p_value: float
    alpha: float = DEFAULT_ALPHA

    __test__ = False  # keep pytest from collecting this class

    @property
    def passed(self) -> bool:
        return self.p_value >= self.alpha

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def _bits(bits) -> np.ndarray:
    b = np.asarray(bits, dtype=np.uint8).ravel()
    if b.size and b.max() > 1:
        raise ValueError("bits must be 0 or 1")
    return b


def _require(n: int, minimum: int, name: str):
    if n < minimum:
        raise PreconditionError(f"{name} needs at least {minimum} bits, got {n}")


def monobit(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    b = _bits(bits)
    n = b.size
    _require(n, 100, "monobit")
    z = (2.0 * int(b.sum()) - n) / math.sqrt(n)
    return TestResult("monobit", z, float(erfc(abs(z) / math.sqrt(2))), alpha)


def runs_test(bits, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Wald-Wolfowitz runs test, two-sided, normal approximation."""
    b = _bits(bits)
    n = b.size
    _require(n, 100, "runs")
    n1 = int(b.sum())
    n0 = n - n1
    if not 0.4 <= n1 / n <= 0.6:
        raise PreconditionError(f"runs: proportion of ones {n1 / n:.3f} outside [0.4, 0.6]")
    runs = 1 + int(np.count_nonzero(np.diff(b)))
    prod = 2.0 * n0 * n1
    mean = prod / n + 1.0
    var = prod * (prod - n) / (n * n * (n - 1.0))
    z = (runs - mean) / math.sqrt(var)
    return TestResult("runs", z, float(erfc(abs(z) / math.sqrt(2))), alpha)


def autocorr(bits, max_lag: int = AUTOCORR_LAGS, alpha: float = DEFAULT_ALPHA) -> list[TestResult]:
    """Lag-k correlation of the +/-1 sequence, z = r_k * sqrt(n - k)."""
    b = _bits(bits)
    n = b.size
    _require(n, 100 * max_lag, f"autocorr (L={max_lag})")
    s = 2.0 * b - 1.0
    results = []
    for k in range(1, max_lag + 1):
        m = n - k
        r = float(np.dot(s[:-k], s[k:])) / m
        z = r * math.sqrt(m)
        results.append(TestResult(f"autocorr_lag{k}", r, float(erfc(abs(z) / math.sqrt(2))), alpha))
    return results


def _block_counts(b: np.ndarray, m: int) -> np.ndarray:
    blocks = b[: (b.size // m) * m].reshape(-1, m)
    codes = blocks.astype(np.int64) @ (1 << np.arange(m, dtype=np.int64))
    return np.bincount(codes, minlength=1 << m)


def block_entropy(bits, m: int) -> float:
    """Plug-in Shannon entropy (bits) of non-overlapping m-bit blocks."""
    b = _bits(bits)
    _require(b.size, 100 * (1 << m), f"block entropy (m={m})")
    counts = _block_counts(b, m)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def block_entropy_test(bits, m: int, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Entropy deficit as a likelihood-ratio test against uniform blocks.

    G = 2 * B * ln2 * (m - H) is the G-statistic of the block counts, which
    is chi-square with 2**m - 1 degrees of freedom under the null.
    """
    h = block_entropy(bits, m)
    n_blocks = np.asarray(bits).size // m
    g = max(0.0, 2.0 * n_blocks * math.log(2) * (m - h))
    return TestResult(f"block_entropy_m{m}", h, float(chi2.sf(g, (1 << m) - 1)), alpha)


@dataclass
class BatteryReport:
    alpha: float
    n_bits: int
    results: list[TestResult] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.passed for r in self.results)

    def failures(self) -> list[str]:
        return [r.test_name for r in self.results if not r.passed]

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "n_bits": self.n_bits,
            "results": [r.as_dict() for r in self.results],
            "errors": dict(self.errors),
            "verdict": "pass" if self.passed else "fail",
        }


def run_battery(bits, alpha: float = DEFAULT_ALPHA) -> BatteryReport:
    b = _bits(bits)
    report = BatteryReport(alpha, int(b.size))
    checks = [
        ("monobit", lambda: [monobit(b, alpha)]),
        ("runs", lambda: [runs_test(b, alpha)]),
        ("autocorr", lambda: autocorr(b, AUTOCORR_LAGS, alpha)),
    ] + [(f"block_entropy_m{m}", lambda m=m: [block_entropy_test(b, m, alpha)]) for m in ENTROPY_BLOCKS]
    for name, check in checks:
        try:
            report.results.extend(check())
        except PreconditionError as exc:
            report.errors[name] = str(exc)
    return report
