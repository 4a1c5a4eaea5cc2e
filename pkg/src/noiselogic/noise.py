"""Seeded stochastic primitives: telegraph reference waves and Gaussian noise.

Every sample is a pure function of a 64-bit stream key and a step index, so
streams can be evaluated in any order, in chunks, or in parallel and still
give bit-identical output.

Seed derivation (frozen, see README "Format reference"):

    GAMMA = 0x9E3779B97F4A7C15
    mix64(z):  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
               z ^= z >>27; z *= 0x94D049BB133111EB
               z ^= z >> 31                      (all mod 2**64)
    splitmix64(seed, t) = mix64(seed + (t + 1) * GAMMA)

``splitmix64(seed, t)`` is the t-th output of the SplitMix64 generator
started from ``seed``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

BOLTZMANN = 1.380649e-23  # J/K, exact SI value

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

# stream-index offset separating Gaussian streams from telegraph streams
GAUSS_DOMAIN = 1 << 62


_BLOCK = 1 << 15


def _mix_inplace(z: np.ndarray):
    """Apply the SplitMix64 finalizer to a flat uint64 array in place.

    Works block by block through one scratch buffer; large temporaries are
    far slower than the arithmetic itself.
    """
    tmp = np.empty(min(z.size, _BLOCK), dtype=np.uint64)
    for lo in range(0, z.size, _BLOCK):
        v = z[lo:lo + _BLOCK]
        w = tmp[: v.size]
        for shift, mult in ((30, _M1), (27, _M2)):
            np.right_shift(v, np.uint64(shift), out=w)
            np.bitwise_xor(v, w, out=v)
            np.multiply(v, mult, out=v)
        np.right_shift(v, np.uint64(31), out=w)
        np.bitwise_xor(v, w, out=v)


def mix64(z):
    """SplitMix64 finalizer applied elementwise to a uint64 array."""
    z = np.array(z, dtype=np.uint64)
    flat = z.reshape(-1)
    _mix_inplace(flat)
    return flat.reshape(z.shape) if z.ndim else flat[0]


def splitmix64(seed: int, t):
    """t-th SplitMix64 output from ``seed``; ``t`` may be an integer array."""
    z = np.array(t, dtype=np.uint64)
    flat = z.reshape(-1)
    with np.errstate(over="ignore"):
        np.add(flat, np.uint64(1), out=flat)
        np.multiply(flat, np.uint64(GAMMA), out=flat)
        np.add(flat, np.uint64(seed & MASK64), out=flat)
    _mix_inplace(flat)
    return flat.reshape(z.shape) if z.ndim else flat[0]


def stream_key(master_seed: int, stream_index: int) -> int:
    """Per-stream key derived from a master seed and a stream index."""
    return int(splitmix64(master_seed, stream_index))


def uniform01(key: int, t):
    """Uniform draws in the open interval (0, 1): 53 high bits, centred."""
    bits = splitmix64(key, t) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def gaussian(key: int, t):
    """Standard normal draws by inverse CDF of :func:`uniform01`."""
    return ndtri(uniform01(key, t))


@dataclass(frozen=True)
class TelegraphStream:
    """Reference noise R_i^j: i.i.d. equiprobable +/-1 per time step."""

    master_seed: int
    noise_bit: int
    logic_value: int

    def __post_init__(self):
        if self.noise_bit < 0 or self.logic_value not in (0, 1):
            raise ValueError(f"bad stream id ({self.noise_bit}, {self.logic_value})")

    @property
    def stream_index(self) -> int:
        return 2 * self.noise_bit + self.logic_value

    @property
    def key(self) -> int:
        return stream_key(self.master_seed, self.stream_index)

    def samples(self, t) -> np.ndarray:
        return telegraph(self.key, t)


def telegraph(key: int, t) -> np.ndarray:
    """+/-1 samples (int8) from the top bit of the stream output."""
    top = (splitmix64(key, t) >> np.uint64(63)).astype(np.int8)
    return 1 - 2 * top


def rtw_sample(stream: TelegraphStream, t: int) -> int:
    if t < 0:
        raise ValueError("step index must be non-negative")
    return int(telegraph(stream.key, t))


@dataclass(frozen=True)
class OuConfig:
    """Discrete Ornstein-Uhlenbeck process x' = rho*x + sigma*sqrt(1-rho^2)*xi."""

    rho: float = 0.5
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def key(self) -> int:
        return stream_key(self.seed, GAUSS_DOMAIN)

    @property
    def innovation_scale(self) -> float:
        return self.sigma * math.sqrt(1.0 - self.rho * self.rho)


@dataclass(frozen=True)
class OuState:
    x: float
    t: int = 0


def ou_init(cfg: OuConfig) -> OuState:
    """Start in the stationary distribution: x0 = sigma * xi_0."""
    return OuState(cfg.sigma * float(gaussian(cfg.key, 0)), 0)


def ou_step(state: OuState, cfg: OuConfig) -> tuple[OuState, float]:
    t = state.t + 1
    x = cfg.rho * state.x + cfg.innovation_scale * float(gaussian(cfg.key, t))
    return OuState(x, t), x


def ou_path(state: OuState, cfg: OuConfig, n: int) -> tuple[OuState, np.ndarray]:
    """``n`` consecutive :func:`ou_step` results, vectorized.

    Produces the same samples as stepping one at a time.
    """
    if n <= 0:
        return state, np.empty(0)
    t = np.arange(state.t + 1, state.t + n + 1, dtype=np.uint64)
    xi = gaussian(cfg.key, t)
    x, _ = lfilter([cfg.innovation_scale], [1.0, -cfg.rho], xi, zi=[cfg.rho * state.x])
    return OuState(float(x[-1]), state.t + n), x


def ou_samples(cfg: OuConfig, n: int) -> np.ndarray:
    """x_0 .. x_{n-1} of a freshly initialised process."""
    if n <= 0:
        return np.empty(0)
    state = ou_init(cfg)
    _, rest = ou_path(state, cfg, n - 1)
    return np.concatenate(([state.x], rest))


def dissipation_bound(temperature: float, epsilon: float) -> float:
    """Minimum energy (J) per bit operation with error probability ``epsilon``."""
    if temperature < 0:
        raise ValueError("temperature must be non-negative")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    return BOLTZMANN * temperature * math.log(1.0 / epsilon)
