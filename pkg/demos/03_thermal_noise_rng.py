# %% [markdown]
# # Random bits from thermal noise
#
# Johnson noise is modelled as a stationary Gaussian process (discrete
# Ornstein-Uhlenbeck with one-step correlation rho). At each extraction
# point the bit is sign(x[t]) XOR sign(x[t+1] - x[t-1]). For a stationary
# Gaussian process the amplitude and the central difference are independent,
# so the two signs are independent fair coins and their XOR is too.

# %%
import numpy as np

from noiselogic import ExtractorConfig, OuConfig, generate, run_battery, xor_combine
from noiselogic.noise import dissipation_bound, ou_samples
from noiselogic.rng import combined, sign_pairs

x = ou_samples(OuConfig(rho=0.9, sigma=1.0, seed=1), 200_000)
print(f"variance {x.var():.4f}, lag-1 autocorrelation {np.corrcoef(x[:-1], x[1:])[0, 1]:.4f}")

# %% [markdown]
# ## Amplitude and velocity signs are uncorrelated
#
# With the forward difference x[t+1] - x[t] instead the two signs would be
# clearly dependent; compare the two.

# %%
a, v = sign_pairs(ExtractorConfig(OuConfig(0.9, 1.0, 2)), 500_000)
print("central difference:", np.corrcoef(a, v)[0, 1].round(5))
fwd = (x[2:] - x[1:-1]) > 0
print("forward difference:", np.corrcoef(x[1:-1] > 0, fwd)[0, 1].round(5))

# %% [markdown]
# ## Decimation and XOR
#
# Slow noise makes consecutive bits correlated. Taking one bit every d steps
# (by default about five correlation times) removes that, and XOR of several
# independently seeded generators shrinks any residual bias.

# %%
cfg = ExtractorConfig(OuConfig(rho=0.99, sigma=1.0, seed=3), decimation=1)
raw = generate(cfg, 200_000)
print("rho=0.99, d=1:", run_battery(raw.bits).failures()[:4])

streams = [generate(ExtractorConfig(OuConfig(0.99, 1.0, s)), 100_000) for s in range(4)]
print("decimation used:", streams[0].provenance["generators"][0]["decimation"])
print("four decimated generators, XOR:", run_battery(xor_combine(streams).bits).as_dict()["verdict"])

# %% [markdown]
# The default pipeline: four generators at rho = 0.5.

# %%
bits = combined(k=4, n=1_000_000, master_seed=7)
report = run_battery(bits.bits)
for r in report.results[:4]:
    print(f"{r.test_name:16s} p = {r.p_value:.3f}")
print("verdict:", report.as_dict()["verdict"])

# %% [markdown]
# Each bit operation with error probability eps costs at least
# k_B * T * ln(1/eps) of energy.

# %%
print(f"{dissipation_bound(300, 0.5):.4e} J at 300 K, eps = 1/2")
