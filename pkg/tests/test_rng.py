import itertools
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import noiselogic.rng as rng_mod
from noiselogic.noise import OuConfig, ou_samples
from noiselogic.rng import (
    BitStream,
    ExtractorConfig,
    ZeroEvent,
    combined,
    default_decimation,
    extract_bit,
    generate,
    pack_bits,
    read_bitstream,
    sidecar,
    sidecar_path,
    sign_bits,
    sign_chunks,
    sign_pairs,
    unpack_bits,
    xor_combine,
)

FIXTURES = Path(__file__).parent / "fixtures"
N = 10**6


def piling_up_exact(p_ones) -> Fraction:
    """P(XOR = 1) by enumerating all joint outcomes of independent bits."""
    total = Fraction(0)
    for outcome in itertools.product((0, 1), repeat=len(p_ones)):
        weight = Fraction(1)
        for bit, p in zip(outcome, p_ones):
            weight *= p if bit else 1 - p
        if sum(outcome) % 2:
            total += weight
    return total


def test_extract_bit_examples():
    assert extract_bit(1, 2, 3) == 0
    assert extract_bit(3, 2, 1) == 1
    assert extract_bit(-1, -2, -3) == 0  # negative amplitude, negative slope
    assert extract_bit(-3, -2, -1) == 1


@pytest.mark.parametrize("triple", [(1, 0, 2), (2, 5, 2), (0.0, 0.0, 0.0)])
def test_extract_bit_signals_zero_events(triple):
    with pytest.raises(ZeroEvent):
        extract_bit(*triple)


def test_sign_bits_matches_scalar_extractor():
    x = ou_samples(OuConfig(0.7, 1.0, 4), 500)
    centers = np.arange(1, 499)
    a, v, valid = sign_bits(x, centers)
    assert valid.all()
    assert [int(b) for b in a ^ v] == [extract_bit(*x[c - 1:c + 2]) for c in centers]


def test_sign_bits_flags_zeros():
    x = np.array([1.0, 0.0, 2.0, 3.0, 2.0, -1.0])
    a, v, valid = sign_bits(x, np.arange(1, 5))
    assert valid.tolist() == [False, True, False, True]


def test_default_decimation():
    assert [default_decimation(r) for r in (0.0, 0.5, 0.9, 0.99)] == [5, 10, 50, 500]
    assert ExtractorConfig(OuConfig(0.9)).d == 50
    with pytest.raises(ValueError):
        ExtractorConfig(decimation=0)


def test_generate_empty_and_deterministic():
    cfg = ExtractorConfig(OuConfig(0.5, 1.0, 99))
    assert len(generate(cfg, 0)) == 0
    a = generate(cfg, 3000)
    b = generate(cfg, 3000)
    assert len(a) == 3000
    assert np.array_equal(a.bits, b.bits)
    assert a.provenance == b.provenance
    with pytest.raises(ValueError):
        generate(cfg, -1)


def test_generate_prefix_stable():
    cfg = ExtractorConfig(OuConfig(0.5, 1.0, 5), 3)
    assert np.array_equal(generate(cfg, 100).bits, generate(cfg, 1000).bits[:100])


@pytest.mark.parametrize("d", [1, 2, 7, 500])
def test_sign_chunks_are_contiguous(d):
    cfg = ExtractorConfig(OuConfig(0.3, 1.0, 2), d)
    chunks = sign_chunks(cfg)
    got = [np.concatenate(parts) for parts in zip(*[next(chunks) for _ in range(3)])]
    n = got[0].size
    x = ou_samples(cfg.ou, d * n + 2)
    expected = sign_bits(x, np.arange(1, 1 + d * n, d))
    for g, e in zip(got, expected):
        assert np.array_equal(g, e)


def test_generate_takes_bits_at_decimated_centres():
    cfg = ExtractorConfig(OuConfig(0.5, 1.0, 5), 4)
    x = ou_samples(cfg.ou, 4 * 50 + 2)
    expected = [extract_bit(*x[c - 1:c + 2]) for c in range(1, 1 + 4 * 50, 4)]
    assert generate(cfg, 50).bits.tolist() == expected


def test_generate_skips_zero_events(monkeypatch):
    real = rng_mod.ou_path

    def with_zeros(state, cfg, n):
        new, x = real(state, cfg, n)
        t = np.arange(state.t + 1, state.t + n + 1)
        return new, np.where(t % 7 == 0, 0.0, x)

    monkeypatch.setattr(rng_mod, "ou_path", with_zeros)
    cfg = ExtractorConfig(OuConfig(0.5, 1.0, 1), 1)
    s = generate(cfg, 500)
    assert len(s) == 500
    zeros = s.provenance["generators"][0]["zero_events"]
    # each zero sample spoils its own centre and both neighbours' velocities
    assert zeros > 0
    with pytest.raises(ZeroEvent):
        generate(ExtractorConfig(OuConfig(0.5, 1.0, 1), 1, skip_zeros=False), 500)


def test_extractor_bias_rho09():
    # 1e6 noise samples, one bit per sample
    bits = generate(ExtractorConfig(OuConfig(0.9, 1.0, 21), 1), N - 2).bits
    assert abs(bits.mean() - 0.5) < 2e-3


@pytest.mark.parametrize("rho", [0.0, 0.5, 0.9])
def test_amplitude_and_velocity_bits_independent(rho):
    a, v = sign_pairs(ExtractorConfig(OuConfig(rho, 1.0, 31)), N)
    assert a.size == v.size == N
    assert abs(np.corrcoef(a, v)[0, 1]) < 4 / math.sqrt(N)


def test_forward_difference_would_be_dependent():
    # why the extractor uses the central difference
    x = ou_samples(OuConfig(0.5, 1.0, 3), N)
    a = x[1:-1] > 0
    fwd = (x[2:] - x[1:-1]) > 0
    cen = (x[2:] - x[:-2]) > 0
    assert abs(np.corrcoef(a, fwd)[0, 1]) > 0.1
    assert abs(np.corrcoef(a, cen)[0, 1]) < 4 / math.sqrt(N)


def _lag1(bits):
    s = 2.0 * bits - 1
    return float(np.corrcoef(s[:-1], s[1:])[0, 1])


def test_decimation_decorrelates():
    r_1 = _lag1(generate(ExtractorConfig(OuConfig(0.99, 1.0, 8), 1), N).bits)
    r_50 = _lag1(generate(ExtractorConfig(OuConfig(0.99, 1.0, 8), 50), N).bits)
    assert abs(r_50) < abs(r_1)


def test_xor_combine_basics():
    s = BitStream(np.array([1, 0, 1, 1, 0], dtype=np.uint8))
    assert xor_combine([s]) == s
    assert not xor_combine([s, s]).bits.any()
    with pytest.raises(ValueError):
        xor_combine([s, BitStream([1, 0])])
    with pytest.raises(ValueError):
        xor_combine([])


bit_lists = st.integers(1, 64).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=1, max_size=5)
)


@given(bit_lists, st.randoms())
def test_xor_combine_commutative(streams, rnd):
    bs = [BitStream(s) for s in streams]
    shuffled = bs[:]
    rnd.shuffle(shuffled)
    assert xor_combine(bs) == xor_combine(shuffled)


@given(bit_lists)
def test_xor_combine_associative(streams):
    bs = [BitStream(s) for s in streams]
    if len(bs) < 3:
        bs = bs + bs[:1] * (3 - len(bs))
    left = xor_combine([xor_combine(bs[:2]), *bs[2:]])
    right = xor_combine([bs[0], xor_combine(bs[1:])])
    assert left == right == xor_combine(bs)


def test_piling_up_oracle_matches_lemma():
    eps = Fraction(1, 10)
    for k in range(1, 6):
        p = piling_up_exact([Fraction(1, 2) + eps] * k)
        assert abs(p - Fraction(1, 2)) == 2 ** (k - 1) * eps**k


@pytest.mark.parametrize("k", [2, 3])
def test_piling_up_simulation(k):
    rng = np.random.default_rng(1000 + k)
    streams = [BitStream((rng.random(N) < 0.6).astype(np.uint8)) for _ in range(k)]
    combined_bits = xor_combine(streams).bits
    exact = float(piling_up_exact([Fraction(3, 5)] * k))
    se = math.sqrt(exact * (1 - exact) / N)
    assert abs(combined_bits.mean() - exact) < 4 * se
    assert abs(abs(exact - 0.5) - 2 ** (k - 1) * 0.1**k) < 1e-15
    # combined bias never exceeds the smallest single-stream bias
    assert abs(combined_bits.mean() - 0.5) <= min(abs(s.bits.mean() - 0.5) for s in streams) + 4 * se


def test_pack_little_endian():
    assert pack_bits([1, 0, 0, 0, 0, 0, 0, 0]) == b"\x01"
    assert pack_bits([0, 1, 1]) == b"\x06"
    assert unpack_bits(b"\x06", 3).tolist() == [0, 1, 1]
    with pytest.raises(ValueError):
        unpack_bits(b"\x06", 9)


@given(st.lists(st.integers(0, 1), max_size=200))
def test_pack_roundtrip(bits):
    assert unpack_bits(pack_bits(bits), len(bits)).tolist() == bits


@settings(deadline=None, max_examples=10)
@given(st.integers(0, 2**64 - 1), st.integers(1, 3))
def test_combined_is_pure_function_of_seed(seed, k):
    assert combined(k, 64, seed) == combined(k, 64, seed)


def test_pipeline_reproduces_committed_fixture():
    s = combined(2, 4096, master_seed=2024, rho=0.9)
    assert pack_bits(s.bits) == (FIXTURES / "rng_k2_rho0.9_seed2024.bin").read_bytes()
    assert [g["decimation"] for g in s.provenance["generators"]] == [50, 50]


def test_file_roundtrip_with_sidecar(tmp_path):
    s = combined(3, 1001, master_seed=5)
    path = tmp_path / "bits.bin"
    path.write_bytes(pack_bits(s.bits))
    sidecar_path(path).write_text(__import__("json").dumps(sidecar(s)))
    back = read_bitstream(path)
    assert back == s
    assert back.provenance["k"] == 3
    assert len(back.provenance["generators"]) == 3
    assert {"rho", "sigma", "seed", "decimation", "zero_events"} <= set(back.provenance["generators"][0])
