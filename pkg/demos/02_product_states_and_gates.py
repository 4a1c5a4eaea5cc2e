# %% [markdown]
# # Product states and single-bit gates
#
# A product-form state prod_i (a_i R_i^0 + b_i R_i^1) stores only N
# coefficient pairs but represents a weighted superposition of all 2**N
# strings. A single-bit gate rewrites one pair, so its cost does not depend
# on N. A dense state vector has to touch all 2**N entries instead.

# %%
import numpy as np

from noiselogic import (
    NoiseBitSystem,
    OpCounter,
    ProductState,
    amplitude_estimate,
    amplitude_exact,
    apply_gate,
    brute_force_state,
    standard_gates,
    superposition_value,
)
from noiselogic.gates import apply_sequence
from noiselogic.hyperspace import dense_index

G = standard_gates()
print({name: g.matrix().round(3).tolist() for name, g in G.items() if name in "HT"})

# %% [markdown]
# ## Hadamards on every bit
#
# Starting from |000> and applying H to each bit gives the uniform
# superposition with every amplitude equal to 2**-1.5.

# %%
n = 3
seq = [(G["H"], i) for i in range(n)]
state = apply_sequence(ProductState.basis("000"), seq)
dense = brute_force_state(n, seq)
for c in ("000", "101", "111"):
    print(c, complex(amplitude_exact(state, c)).real, dense[dense_index(c)].real)

# %% [markdown]
# ## Reading an amplitude off the noise
#
# The correlator of S(t) with H_c(t) averages to the amplitude of c.

# %%
state = apply_sequence(ProductState.basis("0000"), [(G["H"], i) for i in range(4)] + [(G["T"], 1)])
system = NoiseBitSystem(4, master_seed=11)
for c in ("0000", "0100"):
    est = amplitude_estimate(system, state, c, M=8192)
    print(f"amp({c}): exact {complex(amplitude_exact(state, c)):.4f}, "
          f"estimate {complex(est.value):.4f} +/- {est.half_width:.4f}")

# %% [markdown]
# ## Counting operations
#
# The all-ones state (a_i = b_i = 1) costs one addition per bit and N-1
# multiplications per time step. A gate costs 4 multiplications and 2
# additions. The dense baseline spends 3 * 2**N per gate.

# %%
print(" N  per-step  gate  dense-gate")
for n in (2, 4, 8, 12, 16):
    _, step_ops = superposition_value(NoiseBitSystem(n), ProductState.full(n), 0)
    gate = OpCounter()
    apply_gate(ProductState.basis("0" * n), 0, G["H"], gate)
    dense = OpCounter()
    brute_force_state(n, [(G["H"], 0)], dense)
    print(f"{n:2d}  {step_ops:8d}  {gate.total:4d}  {dense.total:10d}")
