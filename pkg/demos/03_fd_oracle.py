"""Finite-difference oracle: an independent check of the analytic spectrum.

Run: python3 demos/03_fd_oracle.py
"""
# %%
import numpy as np

from starlap import EdgeSignature, discrete_spectrum, discretize_B, spectrum_B
from starlap.spectrum import expand

sig = EdgeSignature(2, 1)
v = expand(spectrum_B(sig, 6))
exact = np.sort(v[np.argsort(np.abs(v))][:6])

# %% The center value is eliminated with a second-order one-sided stencil.
for m in (250, 500, 1000, 2000):
    d = discrete_spectrum(discretize_B(sig, m, "second"), 6)
    print(f"m={m:5d}  max abs error={np.max(np.abs(d - exact)):.3e}")

# %% A first-order elimination converges linearly instead.
for m in (500, 1000):
    d = discrete_spectrum(discretize_B(sig, m, "first"), 6)
    print(f"first-order m={m:5d}  max abs error={np.max(np.abs(d - exact)):.3e}")

# %% The (3,1) star: the level pi^2 keeps multiplicity n_plus - 1 = 2.
d = discrete_spectrum(discretize_B(EdgeSignature(3, 1), 2000), 8)
print("(3,1) discrete eigenvalues:", np.round(d, 5))
