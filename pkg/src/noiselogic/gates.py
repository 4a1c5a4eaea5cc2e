"""Single-bit gates on product states.

A gate on noise-bit i rewrites only the coefficient pair (a_i, b_i), so it
costs four multiplications and two additions whatever the number of bits.
The dense baseline in :func:`noiselogic.hyperspace.brute_force_state` pays
3 * 2**N for the same gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hyperspace import OpCounter, ProductState
from .precision import DOUBLE, Precision

STANDARD_NAMES = ("I", "X", "Z", "H", "S", "T")


@dataclass(frozen=True)
class Gate2x2:
    g00: complex
    g01: complex
    g10: complex
    g11: complex
    name: str = "custom"

    @classmethod
    def from_matrix(cls, m, name: str = "custom") -> "Gate2x2":
        m = np.asarray(m, dtype=complex).reshape(2, 2)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1], name)

    def matrix(self) -> np.ndarray:
        return np.array([[self.g00, self.g01], [self.g10, self.g11]], dtype=complex)

    def is_unitary(self, tol: float = 1e-12) -> bool:
        m = self.matrix()
        return bool(np.allclose(m.conj().T @ m, np.eye(2), rtol=0, atol=tol))

    def __matmul__(self, other: "Gate2x2") -> "Gate2x2":
        return Gate2x2.from_matrix(self.matrix() @ other.matrix(), f"{self.name}{other.name}")


def standard_gates(precision: Precision = DOUBLE) -> dict[str, Gate2x2]:
    """Identity, X, Z, H, S = diag(1, i) and T = diag(1, e^{i pi/4}).

    Entries are built at the requested precision so that extended-precision
    states are not limited by a double-rounded 1/sqrt(2).
    """
    num = precision.number
    zero, one = num(0), num(1)
    with precision.context():
        h = one / precision.sqrt(2)
        gates = {
            "I": Gate2x2(one, zero, zero, one, "I"),
            "X": Gate2x2(zero, one, one, zero, "X"),
            "Z": Gate2x2(one, zero, zero, -one, "Z"),
            "H": Gate2x2(h, h, h, -h, "H"),
            "S": Gate2x2(one, zero, zero, precision.expi(1, 2), "S"),
            "T": Gate2x2(one, zero, zero, precision.expi(1, 4), "T"),
        }
    if not precision.extended:
        # exp(i pi/2) in doubles carries a 6e-17 real part
        gates["S"] = Gate2x2(1, 0, 0, 1j, "S")
    for g in gates.values():
        if not g.is_unitary():
            raise AssertionError(f"gate {g.name} failed its unitarity check")
    return gates


def apply_gate(state: ProductState, i: int, gate: Gate2x2, counter: OpCounter | None = None) -> ProductState:
    """New state with (a_i, b_i) <- G (a_i, b_i); the input is untouched."""
    if not 0 <= i < state.n_bits:
        raise IndexError(f"bit index {i} out of range for {state.n_bits} bits")
    p = state.precision
    a, b = state.pair(i)
    with p.context():
        g00, g01, g10, g11 = (p.number(g) for g in (gate.g00, gate.g01, gate.g10, gate.g11))
        new_a = g00 * a + g01 * b
        new_b = g10 * a + g11 * b
    if counter is not None:
        counter.mul += 4
        counter.add += 2
    return state.replace_pair(i, new_a, new_b)


def apply_sequence(state: ProductState, sequence, counter: OpCounter | None = None) -> ProductState:
    for gate, i in sequence:
        state = apply_gate(state, i, gate, counter)
    return state


def gate_cost(gate: Gate2x2, n_bits: int = 1) -> int:
    """Scalar operations counted while applying ``gate`` to an ``n_bits`` state."""
    counter = OpCounter()
    apply_gate(ProductState.basis((0,) * n_bits), n_bits - 1, gate, counter)
    return counter.total


def random_sequence(rng: np.random.Generator, n_bits: int, length: int, gates=None) -> list[tuple[Gate2x2, int]]:
    """Random (gate, bit) pairs drawn from ``gates`` (default: standard set)."""
    gates = list((gates or standard_gates()).values())
    picks = rng.integers(len(gates), size=length)
    bits = rng.integers(n_bits, size=length)
    return [(gates[g], int(i)) for g, i in zip(picks, bits)]
