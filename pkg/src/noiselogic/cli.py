"""Command-line front end: ``noiselogic {rng,test,nbl,bench}``.

Exit codes: 0 success or battery pass, 1 battery fail, 2 usage or
configuration error, 3 I/O error. Every JSON report carries the full run
configuration and the package version.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time

from . import __version__
from .formats import (
    FormatError,
    atomic_write,
    dumps,
    gates_from_list,
    load_json,
    state_from_dict,
)
from .gates import apply_sequence, gate_cost, standard_gates
from .hyperspace import (
    MAX_DENSE_BITS,
    ExplicitState,
    NoiseBitSystem,
    OpCounter,
    ProductState,
    amplitude_exact,
    brute_force_state,
    format_bits,
    measure_membership,
    parse_bits,
    superposition_value,
)
from .precision import resolve
from .rng import combined, pack_bits, read_bitstream, sidecar, sidecar_path
from .stattests import DEFAULT_ALPHA, run_battery

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
SEED_ENV = "NOISELOGIC_SEED"
BRUTE_FORCE_MAX_N = 16


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _emit(doc: dict, out: str | None):
    text = dumps(doc)
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def cmd_rng(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    if args.generators < 1 or args.samples < 0:
        raise UsageError("need generators >= 1 and samples >= 0")
    config = {
        "subcommand": "rng",
        "generators": args.generators,
        "samples": args.samples,
        "rho": args.rho,
        "sigma": args.sigma,
        "decimation": args.decimation,
        "seed": seed,
        "out": args.out,
    }
    stream = combined(args.generators, args.samples, seed, args.rho, args.sigma, args.decimation)
    meta = sidecar(stream)
    meta["config"] = config
    atomic_write(args.out, pack_bits(stream.bits))
    atomic_write(sidecar_path(args.out), dumps(meta))
    _emit({"version": __version__, "config": config, "n_bits": len(stream), "k": args.generators,
           "zero_events": [g["zero_events"] for g in meta["generators"]]}, args.report)
    return EXIT_OK


def cmd_test(args) -> int:
    config = {"subcommand": "test", "input": args.input, "alpha": args.alpha}
    stream = read_bitstream(args.input)
    if len(stream) < 100:
        print(f"error: {args.input} holds {len(stream)} bits; the battery needs at least 100",
              file=sys.stderr)
        return EXIT_USAGE
    report = run_battery(stream.bits, args.alpha)
    _emit({"version": __version__, "config": config, **report.as_dict()}, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _readout(system, state, c, steps, threshold):
    est = measure_membership(system, state, c, steps, threshold=threshold)
    if isinstance(state, ExplicitState):
        exact = 1.0 if c in state else 0.0
        amp_ops = None
    else:
        counter = OpCounter()
        exact = complex(amplitude_exact(state, c, counter))
        amp_ops = counter.total
    exact_c = complex(exact)
    row = {
        "string": format_bits(c),
        "estimate": est.as_dict(),
        "exact": exact_c.real if exact_c.imag == 0 else [exact_c.real, exact_c.imag],
        "exact_decision": bool(exact_c.real > threshold),
        "within_band": bool(abs(complex(est.value) - exact_c) <= est.half_width),
    }
    if amp_ops is not None:
        row["amplitude_ops"] = amp_ops
    return row


def cmd_nbl(args) -> int:
    try:
        doc = load_json(args.state)
    except ValueError as exc:
        raise UsageError(f"{args.state}: invalid JSON ({exc})") from None
    state, file_seed = state_from_dict(doc)
    seed = args.seed if args.seed is not None else file_seed if file_seed is not None else default_seed()
    if args.steps < 1:
        raise UsageError("steps must be >= 1")
    config = {
        "subcommand": "nbl",
        "state": args.state,
        "gates": args.gates,
        "measure": list(args.measure),
        "steps": args.steps,
        "seed": seed,
        "threshold": args.threshold,
    }
    gate_ops = 0
    n_gates = 0
    if args.gates:
        if not isinstance(state, ProductState):
            raise UsageError("gates apply to product states only")
        try:
            items = load_json(args.gates)
        except ValueError as exc:
            raise UsageError(f"{args.gates}: invalid JSON ({exc})") from None
        seq = gates_from_list(items, state.n_bits, state.precision)
        counter = OpCounter()
        state = apply_sequence(state, seq, counter)
        gate_ops, n_gates = counter.total, len(seq)
    try:
        probes = [parse_bits(c, state.n_bits) for c in args.measure]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    system = NoiseBitSystem(state.n_bits, seed)
    _, ops_per_step = superposition_value(system, state, 0)
    report = {
        "version": __version__,
        "config": config,
        "n_bits": state.n_bits,
        "kind": "explicit" if isinstance(state, ExplicitState) else "product",
        "ops_per_step": ops_per_step,
        "gates_applied": n_gates,
        "gate_ops": gate_ops,
        "measurements": [_readout(system, state, c, args.steps, args.threshold) for c in probes],
    }
    _emit(report, args.out)
    return EXIT_OK


def bench_sizes(max_n: int) -> list[int]:
    sizes = list(range(1, min(max_n, BRUTE_FORCE_MAX_N) + 1))
    n = 32
    while n < max_n:
        sizes.append(n)
        n *= 2
    if max_n > BRUTE_FORCE_MAX_N:
        sizes.append(max_n)
    return sizes


def bench_row(n: int, steps: int) -> dict:
    state = ProductState.full(n, resolve(n))
    system = NoiseBitSystem(n, 0)
    counts = set()
    start = time.perf_counter()
    for t in range(steps):
        counts.add(superposition_value(system, state, t)[1])
    wall = time.perf_counter() - start
    if len(counts) != 1:
        raise AssertionError(f"op count varied across steps at N={n}: {sorted(counts)}")
    h = standard_gates()["H"]
    amp = OpCounter()
    amplitude_exact(state, (0,) * n, amp)
    brute = None
    if n <= min(BRUTE_FORCE_MAX_N, MAX_DENSE_BITS):
        counter = OpCounter()
        brute_force_state(n, [(h, 0)], counter)
        brute = counter.total
    return {
        "n_bits": n,
        "product_form_ops": counts.pop(),
        "gate_ops": gate_cost(h, n),
        "amplitude_ops": amp.total,
        "brute_force_ops": brute,
        "wall_time_s": wall,
    }


BENCH_COLUMNS = ["n_bits", "product_form_ops", "gate_ops", "amplitude_ops", "brute_force_ops", "wall_time_s"]


def cmd_bench(args) -> int:
    if args.max_n < 1 or args.steps < 1:
        raise UsageError("need max-n >= 1 and steps >= 1")
    rows = [bench_row(n, args.steps) for n in bench_sizes(args.max_n)]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row[k] is None else row[k]) for k in BENCH_COLUMNS})
    if args.out:
        config = {"subcommand": "bench", "max_n": args.max_n, "steps": args.steps, "out": args.out}
        atomic_write(args.out, buf.getvalue())
        atomic_write(args.out + ".json", dumps({"version": __version__, "config": config, "columns": BENCH_COLUMNS}))
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="noiselogic", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    r = sub.add_parser("rng", help="generate XOR-combined thermal-noise bits")
    r.add_argument("--generators", "-k", type=int, default=4)
    r.add_argument("--samples", "-n", type=int, required=True, help="number of output bits")
    r.add_argument("--rho", type=float, default=0.5, help="one-step noise autocorrelation")
    r.add_argument("--sigma", type=float, default=1.0)
    r.add_argument("--decimation", "-d", type=int, default=None,
                   help="noise steps per bit (default ceil(5 / (1 - rho)))")
    r.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    r.add_argument("--out", "-o", required=True, help="packed bit file; sidecar goes to OUT.json")
    r.add_argument("--report", default=None, help="write the JSON run report here instead of stdout")
    r.set_defaults(func=cmd_rng)

    t = sub.add_parser("test", help="run the randomness battery on a packed bit file")
    t.add_argument("input")
    t.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    t.add_argument("--out", "-o", default=None)
    t.set_defaults(func=cmd_test)

    nb = sub.add_parser("nbl", help="build a noise-bit state, apply gates, read out strings")
    nb.add_argument("state", help="state description (JSON)")
    nb.add_argument("--gates", default=None, help="gate sequence (JSON)")
    nb.add_argument("--measure", "-m", action="append", default=[], help="bit string to read out")
    nb.add_argument("--steps", "-M", type=int, default=1024)
    nb.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    nb.add_argument("--threshold", type=float, default=0.5)
    nb.add_argument("--out", "-o", default=None)
    nb.set_defaults(func=cmd_nbl)

    b = sub.add_parser("bench", help="operation-count scaling table (CSV)")
    b.add_argument("--max-n", type=int, default=64)
    b.add_argument("--steps", type=int, default=100)
    b.add_argument("--out", "-o", default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FormatError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
