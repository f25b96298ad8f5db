"""Operators Y, X = 1 + Y*Y and W = JX behind the similarity argument.

Run: python3 demos/05_similarity.py
"""
# %%
import numpy as np

from starlap import (EdgeSignature, SimilarityConfig, apply_W, apply_X, apply_Y,
                     form_domain_member, hilbert_inner)
from starlap.graph import random_grid, random_smooth

sig = EdgeSignature(2, 1)
cfg = SimilarityConfig.default(sig)
print("delta =", cfg.delta, " s =", cfg.s, " t =", cfg.t)
print("alpha =", cfg.alpha, " beta =", cfg.beta)

# %% X is a positive perturbation of the identity: <Xu, u> = |u|^2 + |Yu|^2.
rng = np.random.default_rng(0)
u = random_grid(sig, 4000, rng)
yu = apply_Y(cfg, u)
lhs = hilbert_inner(apply_X(cfg, u), u).real
print("<Xu,u> =", lhs, " |u|^2 + |Yu|^2 =", (hilbert_inner(u, u) + hilbert_inner(yu, yu)).real)

# %% (Xu)(0) vanishes, and X is the identity near the outer ends.
Xu = apply_X(cfg, u)
print("center trace of Xu:", Xu.values[:, 0])

# %% W maps the form domain into itself.
for _ in range(3):
    g = random_smooth(sig, rng).sample(2000)
    rep = form_domain_member(apply_W(cfg, g))
    print("W g in form domain:", rep.member, " outer residual:", rep.outer_residual)
