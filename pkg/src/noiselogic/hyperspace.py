"""Noise-bit hyperspace: reference system, superposition states, readout.

A system of N noise-bits owns 2N independent telegraph references R_i^j
(i < N, j in {0, 1}). The N-bit string b is represented by the product
H_b(t) = prod_i R_i^{b_i}(t); distinct strings give uncorrelated products.

Bit strings are written b_0 b_1 ... b_{N-1} from left to right. Dense state
vectors index string b at sum_i b_i * 2**i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .noise import GAMMA, TelegraphStream, mix64, stream_key
from .precision import DOUBLE, Precision

MAX_DENSE_BITS = 20
_CHUNK = 1 << 16


@dataclass
class OpCounter:
    """Tally of scalar multiplications and additions actually performed."""

    mul: int = 0
    add: int = 0

    @property
    def total(self) -> int:
        return self.mul + self.add


def parse_bits(bits, n_bits: int | None = None) -> tuple[int, ...]:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        out = tuple(int(c) for c in bits)
    else:
        out = tuple(int(x) for x in bits)
        if any(x not in (0, 1) for x in out):
            raise ValueError(f"not a bit string: {bits!r}")
    if n_bits is not None and len(out) != n_bits:
        raise ValueError(f"expected {n_bits} bits, got {len(out)}")
    return out


def format_bits(bits) -> str:
    return "".join(str(int(x)) for x in bits)


def dense_index(bits) -> int:
    return sum(int(x) << i for i, x in enumerate(bits))


@dataclass(frozen=True)
class NoiseBitSystem:
    n_bits: int
    master_seed: int = 0
    keys: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_bits < 1:
            raise ValueError("need at least one noise-bit")
        keys = np.array(
            [[stream_key(self.master_seed, 2 * i + j) for j in (0, 1)] for i in range(self.n_bits)],
            dtype=np.uint64,
        )
        object.__setattr__(self, "keys", keys)

    def stream(self, i: int, j: int) -> TelegraphStream:
        return TelegraphStream(self.master_seed, i, j)

    def references(self, t) -> np.ndarray:
        """R_i^j(t) as int8 array of shape (len(t), N, 2)."""
        t = np.atleast_1d(np.asarray(t, dtype=np.uint64))
        with np.errstate(over="ignore"):
            z = self.keys[None, :, :] + (t[:, None, None] + np.uint64(1)) * np.uint64(GAMMA)
        top = (mix64(z) >> np.uint64(63)).astype(np.int8)
        return 1 - 2 * top


@dataclass(frozen=True)
class ExplicitState:
    """Sum of hyperspace vectors over an explicit set of strings."""

    strings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        strings = tuple(parse_bits(s) for s in self.strings)
        if not strings:
            raise ValueError("explicit superposition needs at least one string")
        if len({len(s) for s in strings}) != 1:
            raise ValueError("strings differ in length")
        if len(set(strings)) != len(strings):
            raise ValueError("duplicate strings in superposition")
        object.__setattr__(self, "strings", strings)

    @property
    def n_bits(self) -> int:
        return len(self.strings[0])

    def __contains__(self, bits) -> bool:
        return parse_bits(bits) in self.strings

    def union(self, other: "ExplicitState") -> "ExplicitState":
        return ExplicitState(self.strings + other.strings)


@dataclass(frozen=True, eq=False)
class ProductState:
    """prod_i (a_i R_i^0 + b_i R_i^1); ``coeffs[i] = (a_i, b_i)``."""

    coeffs: np.ndarray
    precision: Precision = DOUBLE

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 2 or c.shape[1] != 2 or c.shape[0] < 1:
            raise ValueError(f"coefficients must have shape (N, 2), got {c.shape}")
        p = self.precision
        conv = np.empty(c.shape, dtype=p.dtype)
        for idx in np.ndindex(c.shape):
            conv[idx] = p.number(c[idx])
        conv.flags.writeable = False
        object.__setattr__(self, "coeffs", conv)

    @classmethod
    def basis(cls, bits, precision: Precision = DOUBLE) -> "ProductState":
        bits = parse_bits(bits)
        return cls([(1, 0) if x == 0 else (0, 1) for x in bits], precision)

    @classmethod
    def full(cls, n_bits: int, precision: Precision = DOUBLE) -> "ProductState":
        """Unnormalized superposition of all 2**N strings (a_i = b_i = 1)."""
        return cls([(1, 1)] * n_bits, precision)

    @classmethod
    def uniform(cls, n_bits: int, precision: Precision = DOUBLE) -> "ProductState":
        with precision.context():
            h = 1 / precision.sqrt(2)
            return cls([(h, h)] * n_bits, precision)

    @property
    def n_bits(self) -> int:
        return self.coeffs.shape[0]

    def pair(self, i: int):
        return self.coeffs[i, 0], self.coeffs[i, 1]

    def replace_pair(self, i: int, a, b) -> "ProductState":
        c = self.coeffs.copy()
        c[i, 0], c[i, 1] = a, b
        return ProductState(c, self.precision)

    def norms(self) -> np.ndarray:
        """|a_i|^2 + |b_i|^2 per noise-bit, as float64."""
        with self.precision.context():
            return np.array([float(abs(a) ** 2 + abs(b) ** 2) for a, b in self.coeffs])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProductState)
            and self.precision == other.precision
            and self.coeffs.shape == other.coeffs.shape
            and bool(np.all(self.coeffs == other.coeffs))
        )


def _check_len(system: NoiseBitSystem, n: int):
    if n != system.n_bits:
        raise ValueError(f"state has {n} bits but the system has {system.n_bits}")


def hyperspace_value(system: NoiseBitSystem, bits, t: int, counter: OpCounter | None = None) -> int:
    bits = parse_bits(bits, system.n_bits)
    r = system.references([t])[0]
    value = int(r[0, bits[0]])
    for i in range(1, system.n_bits):
        value *= int(r[i, bits[i]])
    if counter is not None:
        counter.mul += system.n_bits - 1
    return value


def _product_value(coeffs, refs, counter: OpCounter):
    value = None
    for (a, b), (r0, r1) in zip(coeffs, refs):
        r0, r1 = int(r0), int(r1)
        terms = []
        for coef, r in ((a, r0), (b, r1)):
            if coef == 0:
                continue
            if coef == 1:
                terms.append(r)
            else:
                terms.append(coef * r)
                counter.mul += 1
        if not terms:
            factor = 0
        elif len(terms) == 1:
            factor = terms[0]
        else:
            factor = terms[0] + terms[1]
            counter.add += 1
        if value is None:
            value = factor
        else:
            value = value * factor
            counter.mul += 1
    return value


def superposition_value(system: NoiseBitSystem, state, t: int, counter: OpCounter | None = None):
    """Instantaneous superposition signal S(t) and the ops it took.

    Multiplications by a unit coefficient and terms with a zero coefficient
    are skipped, so the real all-ones state costs N additions plus N - 1
    multiplications.
    """
    own = OpCounter()
    _check_len(system, state.n_bits)
    refs = system.references([t])[0]
    if isinstance(state, ExplicitState):
        value = 0
        for k, bits in enumerate(state.strings):
            h = hyperspace_value(system, bits, t, own)
            if k == 0:
                value = h
            else:
                value += h
                own.add += 1
    else:
        with state.precision.context():
            value = _product_value(state.coeffs, refs, own)
    if counter is not None:
        counter.mul += own.mul
        counter.add += own.add
    return value, own.total


def hyperspace_series(system: NoiseBitSystem, bits, t) -> np.ndarray:
    bits = np.asarray(parse_bits(bits, system.n_bits))
    refs = system.references(t)
    return np.prod(refs[:, np.arange(system.n_bits), bits], axis=1, dtype=np.int64)


def superposition_series(system: NoiseBitSystem, state, t) -> np.ndarray:
    """Vectorized S(t) over an array of steps (no op counting)."""
    _check_len(system, state.n_bits)
    refs = system.references(t)
    if isinstance(state, ExplicitState):
        idx = np.arange(system.n_bits)
        strings = np.array(state.strings)
        h = np.prod(refs[:, idx[None, :], strings], axis=2, dtype=np.int64)
        return h.sum(axis=1)
    if state.precision.extended:
        refs = refs.astype(object)
    a, b = state.coeffs[:, 0], state.coeffs[:, 1]
    with state.precision.context():
        factors = a * refs[:, :, 0] + b * refs[:, :, 1]
        return np.prod(factors, axis=1)


@dataclass(frozen=True)
class CorrelatorEstimate:
    """Time-averaged correlator C = mean_t S(t) H_c(t) with error reporting.

    ``bound`` is the one-sided Hoeffding bound exp(-M theta^2 / (2 V)) on the
    probability that C lands beyond ``theta`` from its mean, with V the
    squared per-step magnitude bound ``scale**2``.
    """

    value: complex | float
    M: int
    threshold: float
    decision: bool
    bound: float
    stderr: float
    half_width: float
    scale: float

    def as_dict(self) -> dict:
        v = complex(self.value)
        return {
            "value": v.real if v.imag == 0 else [v.real, v.imag],
            "M": self.M,
            "threshold": self.threshold,
            "decision": self.decision,
            "bound": self.bound,
            "stderr": self.stderr,
            "half_width": self.half_width,
        }


def _value_scale(state) -> float:
    if isinstance(state, ExplicitState):
        return float(len(state.strings))
    with state.precision.context():
        return float(np.prod([float(abs(a)) + float(abs(b)) for a, b in state.coeffs]))


def hoeffding_bound(M: int, theta: float, scale: float) -> float:
    if scale == 0:
        return 0.0 if theta > 0 else 1.0
    return min(1.0, math.exp(-M * theta * theta / (2.0 * scale * scale)))


def correlator_samples(system: NoiseBitSystem, state, c, M: int, start: int = 0) -> np.ndarray:
    """Per-step products S(t) H_c(t) for t in [start, start + M)."""
    if M < 1:
        raise ValueError("need at least one observation step")
    c = parse_bits(c, system.n_bits)
    chunks = []
    for lo in range(start, start + M, _CHUNK):
        t = np.arange(lo, min(lo + _CHUNK, start + M), dtype=np.uint64)
        s = superposition_series(system, state, t)
        chunks.append(s * hyperspace_series(system, c, t))
    return np.concatenate(chunks)


def _estimate(samples: np.ndarray, state, threshold: float, z: float) -> CorrelatorEstimate:
    M = samples.size
    if samples.dtype == object:
        samples = samples.astype(complex)
    value = samples.mean()
    if np.iscomplexobj(samples) and not np.any(np.imag(samples)):
        samples = samples.real
        value = value.real
    if M > 1:
        stderr = float(np.sqrt(np.sum(np.abs(samples - value) ** 2) / (M - 1) / M))
    else:
        stderr = 0.0
    scale = _value_scale(state)
    theta = min(threshold, 1.0 - threshold)
    decision = bool(np.real(value) > threshold)
    if isinstance(value, np.generic):
        value = value.item()
    return CorrelatorEstimate(value, M, threshold, decision, hoeffding_bound(M, theta, scale), stderr, z * stderr, scale)


def measure_membership(system: NoiseBitSystem, state, c, M: int, start: int = 0,
                       threshold: float = 0.5, z: float = 5.0) -> CorrelatorEstimate:
    """Decide whether string ``c`` is in the superposition (C > threshold)."""
    return _estimate(correlator_samples(system, state, c, M, start), state, threshold, z)


def membership_trials(system: NoiseBitSystem, state, c, M: int, trials: int, start: int = 0) -> np.ndarray:
    """Correlator values of ``trials`` independent readouts on disjoint windows.

    Trial k observes steps [start + k*M, start + (k+1)*M).
    """
    per_block = max(1, _CHUNK // M)
    out = []
    for k in range(0, trials, per_block):
        m = min(per_block, trials - k)
        samples = correlator_samples(system, state, c, M * m, start + k * M)
        out.append(samples.reshape(m, M).mean(axis=1))
    return np.concatenate(out)


def amplitude_exact(state: ProductState, c, counter: OpCounter | None = None):
    if not isinstance(state, ProductState):
        raise TypeError("exact amplitudes are defined for product states only")
    c = parse_bits(c, state.n_bits)
    with state.precision.context():
        amp = state.coeffs[0, c[0]]
        for i in range(1, state.n_bits):
            amp = amp * state.coeffs[i, c[i]]
    if counter is not None:
        counter.mul += state.n_bits - 1
    return amp


def amplitude_estimate(system: NoiseBitSystem, state: ProductState, c, M: int, start: int = 0,
                       threshold: float = 0.5, z: float = 5.0) -> CorrelatorEstimate:
    """Statistical readout of the amplitude of ``c``; E[C] = amplitude_exact.

    ``half_width`` is ``z`` empirical standard errors.
    """
    if not isinstance(state, ProductState):
        raise TypeError("amplitude readout needs a product state")
    return measure_membership(system, state, c, M, start, threshold, z)


def _gate_matrix(gate) -> np.ndarray:
    m = gate.matrix() if hasattr(gate, "matrix") else gate
    return np.asarray(m, dtype=complex).reshape(2, 2)


def brute_force_state(n_bits: int, gate_sequence=(), counter: OpCounter | None = None) -> np.ndarray:
    """Dense 2**N state vector after applying single-bit gates to |0...0>."""
    if n_bits > MAX_DENSE_BITS:
        raise ValueError(f"dense simulation limited to {MAX_DENSE_BITS} bits, got {n_bits}")
    if n_bits < 1:
        raise ValueError("need at least one bit")
    psi = np.zeros(1 << n_bits, dtype=complex)
    psi[0] = 1.0
    for gate, i in gate_sequence:
        if not 0 <= i < n_bits:
            raise IndexError(f"bit index {i} out of range for {n_bits} bits")
        g = _gate_matrix(gate)
        view = psi.reshape(1 << (n_bits - 1 - i), 2, 1 << i)
        lo, hi = view[:, 0, :], view[:, 1, :]
        new_lo = g[0, 0] * lo + g[0, 1] * hi
        new_hi = g[1, 0] * lo + g[1, 1] * hi
        view[:, 0, :], view[:, 1, :] = new_lo, new_hi
        if counter is not None:
            half = lo.size
            counter.mul += 4 * half
            counter.add += 2 * half
    return psi


def product_amplitudes(state: ProductState) -> np.ndarray:
    """All 2**N amplitudes of a product state in dense order (small N only)."""
    if state.n_bits > MAX_DENSE_BITS:
        raise ValueError(f"dense expansion limited to {MAX_DENSE_BITS} bits")
    out = np.ones(1, dtype=complex)
    for i in range(state.n_bits):
        a, b = (complex(x) for x in state.pair(i))
        out = np.concatenate((out * a, out * b))
    return out


# -- exhaustive oracles over reference sign assignments -----------------------


def sign_assignments(n_bits: int):
    """All 2**(2N) assignments of +/-1 to the references, shape (N, 2) each."""
    for signs in itertools.product((1, -1), repeat=2 * n_bits):
        yield np.array(signs, dtype=np.int64).reshape(n_bits, 2)


def exact_expectation(n_bits: int, fn) -> Fraction | complex:
    """Average of ``fn(refs)`` over every equiprobable reference assignment."""
    total = 0
    count = 0
    for refs in sign_assignments(n_bits):
        total += fn(refs)
        count += 1
    if isinstance(total, (int, np.integer)):
        return Fraction(int(total), count)
    return total / count


def hyperspace_product(refs: np.ndarray, bits) -> int:
    v = 1
    for i, x in enumerate(bits):
        v *= int(refs[i, x])
    return v
