"""Random bits from Gaussian noise: sign of amplitude XOR sign of velocity.

Velocity is the central difference x[t+1] - x[t-1]; for a stationary
process it has zero covariance with x[t] (the forward difference does not),
and for a Gaussian process zero covariance means independence.

Packed file layout: bits are packed little-endian within each byte, so the
first emitted bit is the least significant bit of byte 0. A JSON sidecar
``<file>.json`` records the bit count and full provenance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path

import numpy as np

from . import __version__
from .noise import OuConfig, ou_init, ou_path, stream_key

SIDECAR_FORMAT = "noiselogic-bitstream"


class ZeroEvent(ArithmeticError):
    """Amplitude or central difference is exactly zero; no bit can be drawn."""


def default_decimation(rho: float) -> int:
    """About five correlation times between emitted bits: ceil(5 / (1 - rho))."""
    # rounding first keeps 1 - 0.9 = 0.09999999999999998 from giving 51
    return max(1, math.ceil(round(5.0 / (1.0 - rho), 9)))


@dataclass(frozen=True)
class ExtractorConfig:
    ou: OuConfig = field(default_factory=OuConfig)
    decimation: int | None = None
    skip_zeros: bool = True

    def __post_init__(self):
        if self.decimation is not None and self.decimation < 1:
            raise ValueError(f"decimation must be >= 1, got {self.decimation}")

    @property
    def d(self) -> int:
        return self.decimation if self.decimation is not None else default_decimation(self.ou.rho)

    def as_dict(self) -> dict:
        return {
            "rho": self.ou.rho,
            "sigma": self.ou.sigma,
            "seed": self.ou.seed,
            "decimation": self.d,
            "skip_zeros": self.skip_zeros,
        }


@dataclass
class BitStream:
    bits: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)

    def __len__(self) -> int:
        return self.bits.size

    def __eq__(self, other) -> bool:
        return isinstance(other, BitStream) and np.array_equal(self.bits, other.bits)

    def bias(self) -> float:
        return float(self.bits.mean()) - 0.5 if self.bits.size else 0.0


def extract_bit(x_prev: float, x_curr: float, x_next: float) -> int:
    velocity = x_next - x_prev
    if x_curr == 0 or velocity == 0:
        raise ZeroEvent(f"zero amplitude or velocity at ({x_prev}, {x_curr}, {x_next})")
    return int(x_curr > 0) ^ int(velocity > 0)


def sign_bits(x: np.ndarray, centers: np.ndarray):
    """Amplitude bits, velocity bits and a validity mask at ``centers``.

    ``centers`` must satisfy 1 <= c <= len(x) - 2.
    """
    amp = x[centers]
    vel = x[centers + 1] - x[centers - 1]
    valid = (amp != 0) & (vel != 0)
    return (amp > 0).astype(np.uint8), (vel > 0).astype(np.uint8), valid


CHUNK_SAMPLES = 1 << 18


def sign_chunks(cfg: ExtractorConfig):
    """Endless ``(amp_bits, vel_bits, valid)`` blocks at steps 1, 1 + d, 1 + 2d, ...

    Noise is produced in bounded chunks; consecutive blocks continue the same
    process without gaps.
    """
    d = cfg.d
    per_chunk = max(1, CHUNK_SAMPLES // d)
    state = ou_init(cfg.ou)
    x = np.array([state.x])
    offset = 0  # absolute step of x[0]
    center = 1
    while True:
        last = center + (per_chunk - 1) * d
        # each centre needs its right neighbour; when d > 2 the next left
        # neighbour lies past the buffer and the gap is generated here too
        size = max(last + 2, last + d - 1) - offset
        if size > x.size:
            state, more = ou_path(state, cfg.ou, size - x.size)
            x = np.concatenate((x, more))
        yield sign_bits(x, np.arange(center - offset, last - offset + 1, d))
        center = last + d
        drop = center - 1 - offset
        x = x[drop:]
        offset += drop


def sign_pairs(cfg: ExtractorConfig, n: int):
    """Amplitude and velocity bits at the first ``n`` valid extraction points."""
    amps, vels = [], []
    have = 0
    for a, v, valid in sign_chunks(cfg):
        if have >= n:
            break
        amps.append(a[valid][: n - have])
        vels.append(v[valid][: n - have])
        have += amps[-1].size
    empty = np.empty(0, dtype=np.uint8)
    return (np.concatenate(amps) if amps else empty), (np.concatenate(vels) if vels else empty)


def generate(cfg: ExtractorConfig, n: int) -> BitStream:
    """``n`` bits from one generator, one per ``cfg.d`` noise steps.

    Bits are taken at steps 1, 1 + d, 1 + 2d, ...; a zero event skips that
    extraction point and moves on to the next one.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    bits = np.empty(n, dtype=np.uint8)
    have = 0
    zero_events = 0
    chunks = sign_chunks(cfg)
    while have < n:
        a, v, valid = next(chunks)
        if not valid.all():
            if not cfg.skip_zeros:
                raise ZeroEvent("zero amplitude or velocity in noise stream")
            # count only the events that fall before the n-th bit
            first_n = np.flatnonzero(valid)[: n - have]
            cutoff = first_n[-1] + 1 if first_n.size == n - have else valid.size
            zero_events += int((~valid[:cutoff]).sum())
        b = (a ^ v)[valid][: n - have]
        bits[have:have + b.size] = b
        have += b.size
    prov = {"generators": [dict(cfg.as_dict(), zero_events=zero_events)], "k": 1}
    return BitStream(bits, prov)


def xor_combine(streams) -> BitStream:
    streams = list(streams)
    if not streams:
        raise ValueError("need at least one stream")
    sizes = {len(s) for s in streams}
    if len(sizes) != 1:
        raise ValueError(f"stream lengths differ: {sorted(sizes)}")
    bits = reduce(np.bitwise_xor, (s.bits for s in streams))
    gens = [g for s in streams for g in s.provenance.get("generators", [])]
    return BitStream(bits.copy(), {"generators": gens, "k": len(streams)})


def generator_seeds(master_seed: int, k: int) -> list[int]:
    return [stream_key(master_seed, g) for g in range(k)]


def combined(k: int, n: int, master_seed: int = 0, rho: float = 0.5, sigma: float = 1.0,
             decimation: int | None = None) -> BitStream:
    """XOR of ``k`` independently seeded generators, each producing ``n`` bits."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cfgs = [ExtractorConfig(OuConfig(rho, sigma, s), decimation) for s in generator_seeds(master_seed, k)]
    stream = xor_combine(generate(c, n) for c in cfgs)
    stream.provenance["master_seed"] = master_seed
    return stream


def pack_bits(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def unpack_bits(data: bytes, n: int | None = None) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    if n is not None:
        if n > bits.size:
            raise ValueError(f"sidecar claims {n} bits but file holds {bits.size}")
        bits = bits[:n]
    return bits


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def sidecar(stream: BitStream) -> dict:
    return {
        "format": SIDECAR_FORMAT,
        "version": __version__,
        "n_bits": len(stream),
        "bit_order": "little",
        **stream.provenance,
    }


def read_bitstream(path) -> BitStream:
    """Load a packed file; without a sidecar every byte counts as 8 bits."""
    path = Path(path)
    data = path.read_bytes()
    meta_path = sidecar_path(path)
    meta = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    return BitStream(unpack_bits(data, meta.get("n_bits")), meta)
