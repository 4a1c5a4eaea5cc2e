# %% [markdown]
# # Noise bits and correlator readout
#
# Each logic bit i owns two reference noises, R_i^0 and R_i^1: independent
# random telegraph waves that flip between +1 and -1 at every step. A bit
# string b is carried by the product H_b(t) = prod_i R_i^{b_i}(t). Products
# for different strings are uncorrelated, so one wire can carry many strings
# at once and a time average picks out any single one of them.

# %%
import numpy as np

from noiselogic import ExplicitState, NoiseBitSystem, hyperspace_value, measure_membership
from noiselogic.hyperspace import hyperspace_series, membership_trials, superposition_series

system = NoiseBitSystem(n_bits=8, master_seed=2024)
t = np.arange(12)
print("R_0^0:", system.references(t)[:, 0, 0])
print("R_0^1:", system.references(t)[:, 0, 1])
print("H_10110010(t):", hyperspace_series(system, "10110010", t))

# %% [markdown]
# Every sample is a pure function of the master seed and the step index, so
# asking for step 5 on its own gives the same value as the series above.

# %%
assert hyperspace_value(system, "10110010", 5) == hyperspace_series(system, "10110010", t)[5]

# %% [markdown]
# ## Orthogonality in practice
#
# The time average of H_b * H_c is 1 when b == c and shrinks like
# 1/sqrt(M) otherwise.

# %%
M = 10_000
window = np.arange(M)
hb = hyperspace_series(system, "00000000", window)
for c in ("00000000", "00000001", "11111111"):
    hc = hyperspace_series(system, c, window)
    print(f"<H_00000000 * H_{c}> over {M} steps = {np.mean(hb * hc):+.4f}")

# %% [markdown]
# ## A superposition of four strings
#
# The signal S(t) is the sum of four hyperspace vectors. Correlating it with
# a probe string gives about 1 for members and about 0 for everything else.

# %%
A = ExplicitState(["00000000", "10110010", "01010101", "11110000"])
S = superposition_series(system, A, t)
print("S(t) for the first steps:", S)

for probe in ("10110010", "10110011"):
    est = measure_membership(system, A, probe, M=1024)
    print(f"{probe}: C = {est.value:+.3f} +/- {est.half_width:.3f}  member={est.decision}  "
          f"Hoeffding bound on a wrong call {est.bound:.1e}")

# %% [markdown]
# ## Error decays exponentially with observation time
#
# Repeat the readout on fresh, non-overlapping windows and count how often
# the 0.5 threshold gives the wrong answer.

# %%
trials = 4000
for M in (4, 16, 64, 256):
    outsider = membership_trials(system, A, "10110011", M, trials)
    member = membership_trials(system, A, "10110010", M, trials, start=M * trials)
    err = (np.sum(outsider > 0.5) + np.sum(member <= 0.5)) / (2 * trials)
    print(f"M = {M:4d}: error rate {err:.4f}")
