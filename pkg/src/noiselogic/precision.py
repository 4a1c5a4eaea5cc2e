"""Coefficient arithmetic: IEEE double or multi-precision complex (gmpy2)."""

from __future__ import annotations

import cmath
import contextlib
import math
from dataclasses import dataclass

import gmpy2

DOUBLE_BITS = 53
# product states wider than this switch to extended precision under "auto"
EXTENDED_THRESHOLD = 50


@dataclass(frozen=True)
class Precision:
    bits: int = DOUBLE_BITS

    def __post_init__(self):
        if self.bits < DOUBLE_BITS:
            raise ValueError(f"precision below {DOUBLE_BITS} bits is not supported")

    @property
    def extended(self) -> bool:
        return self.bits > DOUBLE_BITS

    @property
    def dtype(self):
        return object if self.extended else complex

    def context(self):
        """Context manager that must wrap any extended-precision arithmetic."""
        if not self.extended:
            return contextlib.nullcontext()
        return gmpy2.context(gmpy2.get_context(), precision=self.bits)

    def number(self, z):
        if not self.extended:
            return complex(z)
        with self.context():
            if isinstance(z, gmpy2.mpc):
                return +z
            z = complex(z)
            return gmpy2.mpc(z.real, z.imag)

    def sqrt(self, x):
        if not self.extended:
            return complex(math.sqrt(x))
        with self.context():
            return gmpy2.sqrt(gmpy2.mpc(x))

    def expi(self, numerator: int, denominator: int):
        """exp(i * pi * numerator / denominator)."""
        if not self.extended:
            return cmath.exp(1j * math.pi * numerator / denominator)
        with self.context():
            return gmpy2.exp(gmpy2.mpc(0, 1) * gmpy2.const_pi() * numerator / denominator)


DOUBLE = Precision()


def resolve(n_bits: int, mode: str = "auto", bits: int | None = None) -> Precision:
    """Pick a precision for an ``n_bits`` product state.

    ``auto`` keeps doubles up to EXTENDED_THRESHOLD noise-bits and otherwise
    uses ``bits`` or, by default, 2 * n_bits (amplitude products of an
    n-bit state reach 2**-n, so this leaves n bits of headroom).
    """
    if mode == "double":
        return DOUBLE
    if mode == "extended" or (mode == "auto" and n_bits > EXTENDED_THRESHOLD):
        return Precision(max(bits or 2 * n_bits, 64))
    if mode == "auto":
        return DOUBLE
    raise ValueError(f"unknown precision mode {mode!r}")


def is_finite(z) -> bool:
    if isinstance(z, gmpy2.mpc):
        return bool(gmpy2.is_finite(z))
    return cmath.isfinite(complex(z))
