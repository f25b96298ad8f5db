"""Spectrum of the indefinite Kirchhoff Laplacian on a star graph.

Run: python3 demos/01_spectrum.py
"""
# %%
import numpy as np

from starlap import EdgeSignature, asymptotic_eta, eta_root, recover_ratio, spectrum_A, spectrum_B
from starlap.spectrum import expand, is_symmetric

# %% Two edges carry -d^2/dx^2, one edge carries +d^2/dx^2.
sig = EdgeSignature(2, 1)
for p in spectrum_B(sig, 3):
    print(f"{p.kind.value:20s} k={p.k:+d}  value={p.value:+12.6f}  mult={p.multiplicity}")

# %% The decoupled Dirichlet operator A has only the levels +-(k pi)^2.
print("A:", [(round(p.value, 4), p.multiplicity) for p in spectrum_A(sig, 2)])

# %% Weyl zeros approach their large-index asymptote exponentially fast.
for k in (1, 2, 3, 5, -1, -3):
    eta = eta_root(sig, k)
    print(f"k={k:+d}  eta={eta:+.12f}  asymptote={asymptotic_eta(sig, k):+.12f}")

# %% The spectrum is symmetric under negation exactly when n_plus = n_minus.
for p in [(1, 1), (2, 1), (3, 3), (1, 4)]:
    s = EdgeSignature(*p)
    print(p, "symmetric" if is_symmetric(spectrum_B(s, 10)) else "not symmetric")

# %% The first positive eigenvalue alone reveals the edge ratio.
for p in [(1, 1), (3, 2), (7, 1)]:
    s = EdgeSignature(*p)
    print(p, "recovered n+/n- =", round(recover_ratio(eta_root(s, 1)), 12))

# %% Total multiplicity in the window |lambda| <= (3 pi)^2.
v = expand(spectrum_B(sig, 3))
print("eigenvalues counted with multiplicity:", len(v), "sum:", np.round(v.sum(), 6))
