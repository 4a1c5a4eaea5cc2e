"""JSON state and gate-sequence files, plus atomic file writes.

State file::

    {"n_bits": 3, "master_seed": 7, "kind": "explicit", "strings": ["010", "111"]}
    {"n_bits": 2, "kind": "product", "coefficients": [[1, 0], [[0.6, 0], [0, 0.8]]]}
    {"n_bits": 4, "kind": "product", "preset": "full" | "uniform" | "basis", "bits": "0000"}

Complex numbers are either plain reals or ``[re, im]`` pairs. ``precision``
("auto", "double", "extended") and ``precision_bits`` are optional.

Gate file: a list of ``{"gate": "H", "bit": 0}`` or
``{"matrix": [[g00, g01], [g10, g11]], "bit": 1, "name": "optional"}``.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .gates import Gate2x2, standard_gates
from .hyperspace import ExplicitState, ProductState, format_bits, parse_bits
from .precision import Precision, resolve


class FormatError(ValueError):
    pass


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise FormatError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise FormatError(f"not a number: {v!r}")


def _encode_complex(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def state_from_dict(doc: dict):
    """Build ``(state, master_seed)`` from a parsed state document."""
    try:
        n = int(doc["n_bits"])
        kind = doc["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"state file needs n_bits and kind: {exc}") from None
    seed = doc.get("master_seed")
    try:
        if kind == "explicit":
            state = ExplicitState(tuple(parse_bits(s, n) for s in doc["strings"]))
        elif kind == "product":
            precision = resolve(n, doc.get("precision", "auto"), doc.get("precision_bits"))
            preset = doc.get("preset")
            if preset == "full":
                state = ProductState.full(n, precision)
            elif preset == "uniform":
                state = ProductState.uniform(n, precision)
            elif preset == "basis":
                state = ProductState.basis(parse_bits(doc.get("bits", "0" * n), n), precision)
            elif preset is None:
                pairs = doc["coefficients"]
                if len(pairs) != n:
                    raise FormatError(f"expected {n} coefficient pairs, got {len(pairs)}")
                state = ProductState([[_complex(a), _complex(b)] for a, b in pairs], precision)
            else:
                raise FormatError(f"unknown preset {preset!r}")
        else:
            raise FormatError(f"unknown state kind {kind!r}")
    except KeyError as exc:
        raise FormatError(f"missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None
    return state, seed


def state_to_dict(state, master_seed: int | None = None) -> dict:
    doc: dict = {"n_bits": state.n_bits}
    if master_seed is not None:
        doc["master_seed"] = master_seed
    if isinstance(state, ExplicitState):
        doc["kind"] = "explicit"
        doc["strings"] = [format_bits(s) for s in state.strings]
    else:
        doc["kind"] = "product"
        doc["coefficients"] = [[_encode_complex(a), _encode_complex(b)] for a, b in state.coeffs]
        if state.precision.extended:
            doc["precision"] = "extended"
            doc["precision_bits"] = state.precision.bits
    return doc


def gates_from_list(items, n_bits: int | None = None, precision: Precision | None = None):
    catalog = standard_gates(precision) if precision is not None else standard_gates()
    seq = []
    if not isinstance(items, list):
        raise FormatError("gate file must hold a JSON list")
    for k, item in enumerate(items):
        try:
            bit = int(item["bit"])
            if "gate" in item:
                name = str(item["gate"]).upper()
                if name not in catalog:
                    raise FormatError(f"unknown gate {item['gate']!r} at entry {k}")
                gate = catalog[name]
            else:
                rows = item["matrix"]
                gate = Gate2x2.from_matrix([[_complex(v) for v in row] for row in rows], item.get("name", "custom"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"bad gate entry {k}: {exc}") from None
        if n_bits is not None and not 0 <= bit < n_bits:
            raise FormatError(f"gate entry {k}: bit {bit} out of range for {n_bits} bits")
        seq.append((gate, bit))
    return seq


def gates_to_list(sequence) -> list[dict]:
    out = []
    for gate, bit in sequence:
        if gate.name in standard_gates():
            out.append({"gate": gate.name, "bit": bit})
        else:
            m = gate.matrix()
            out.append({"matrix": [[_encode_complex(v) for v in row] for row in m], "bit": bit, "name": gate.name})
    return out


def load_json(path):
    return json.loads(Path(path).read_text())


def atomic_write(path, data: bytes | str):
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    if isinstance(data, str):
        data = data.encode()
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
