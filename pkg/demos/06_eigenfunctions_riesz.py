"""Eigenfunctions of B: Krein orthogonality, the sign law and Gram conditioning.

Run: python3 demos/06_eigenfunctions_riesz.py
"""
# %%
import numpy as np

from starlap import EdgeSignature, eigenbasis_B, krein_gram, riesz_condition_report

sig = EdgeSignature(2, 1)
basis = eigenbasis_B(sig, 4, 2000)
funcs = [f for _, fs in basis for f in fs]
lams = np.array([pt.value for pt, fs in basis for _ in fs])

# %% Distinct eigenvalues give Krein-orthogonal eigenfunctions, and sign[f, f] = sign(lambda).
K = krein_gram(funcs)
off = lams[:, None] != lams[None, :]
print("max |[f_i, f_j]| across distinct eigenvalues:", np.max(np.abs(K[off])))
print("sign law:", np.all(np.sign(K.diagonal().real) == np.sign(lams)))

# %% Hilbert Gram condition numbers of Krein-normalized truncations grow slowly in N.
for N, c in riesz_condition_report(sig, 40, 2000, sizes=[10, 20, 40, 80]):
    print(f"N={N:3d}  cond={c:.4f}")
