# %% [markdown]
# # A 200-bit register in extended precision
#
# For N = 200 the all-ones superposition takes values up to 2**200, and a
# uniform state has amplitudes of 2**-100. Past 50 bits the package switches
# to gmpy2 complex numbers with 2N bits of mantissa, so sums and products
# of these values stay exact or nearly so.

# %%
import numpy as np

from noiselogic import NoiseBitSystem, ProductState, amplitude_exact, standard_gates, superposition_value
from noiselogic.gates import apply_sequence, random_sequence
from noiselogic.precision import resolve

n = 200
precision = resolve(n)
print(precision)

system = NoiseBitSystem(n, master_seed=200)
full = ProductState.full(n, precision)
for t in range(3):
    value, ops = superposition_value(system, full, t)
    print(f"t={t}: S = {'0' if value == 0 else '+/-2**200'}, {ops} operations")

# %% [markdown]
# Apply a thousand random gates and check that every coefficient pair is
# still normalised.

# %%
gates = standard_gates(precision)
state = apply_sequence(ProductState.uniform(n, precision), random_sequence(np.random.default_rng(1), n, 1000, gates))
print("max |norm - 1|:", max(abs(x - 1) for x in state.norms()))

with precision.context():
    top = tuple(int(abs(b) > abs(a)) for a, b in state.coeffs)
    amp = amplitude_exact(state, top)
    print("largest amplitude:", abs(amp))
