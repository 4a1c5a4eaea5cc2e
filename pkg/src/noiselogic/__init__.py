"""Discrete-amplitude noise-based logic on a digital machine with seeded noise."""

__version__ = "0.1.0"

from .noise import (  # noqa: E402
    OuConfig,
    OuState,
    TelegraphStream,
    dissipation_bound,
    ou_init,
    ou_step,
    rtw_sample,
)
from .hyperspace import (  # noqa: E402
    CorrelatorEstimate,
    ExplicitState,
    NoiseBitSystem,
    OpCounter,
    ProductState,
    amplitude_estimate,
    amplitude_exact,
    brute_force_state,
    hyperspace_value,
    measure_membership,
    superposition_value,
)
from .gates import Gate2x2, apply_gate, gate_cost, standard_gates  # noqa: E402
from .rng import BitStream, ExtractorConfig, combined, extract_bit, generate, xor_combine  # noqa: E402
from .stattests import TestResult, run_battery  # noqa: E402
