"""Weyl function, gamma field and the abstract Green identity.

Run: python3 demos/02_weyl_function.py
"""
# %%
import numpy as np

from starlap import (EdgeSignature, SmoothTestFunction, eta_root, gamma_0, gamma_1,
                     gamma_field, green_identity_residual, weyl_m)
from starlap.graph import random_smooth

sig = EdgeSignature(1, 1)

# %% M(lambda) = -mu (n_plus cot mu + n_minus coth mu); M(0) = -n.
print("M(0)      =", weyl_m(sig, 0.0))
print("M(2i)     =", weyl_m(sig, 2j))
print("M(eta_1)  =", weyl_m(sig, eta_root(sig, 1)), "(a Weyl zero)")

# %% Both square-root branches give the same value.
lam = 3.0 - 40.0j
mu = np.sqrt(lam)
print("branch gap:", abs(weyl_m(sig, lam, mu=mu) - weyl_m(sig, lam, mu=-mu)))

# %% The gamma field solves the edge equations with value c at the center.
g = gamma_field(sig, 2j, 1.0, m=2000)
print("gamma(2i)1 at the center:", g.values[:, 0])
print("at the outer ends:      ", g.values[:, -1])

# %% Boundary maps of a hand-built test function: f_j(x) = (1 - x) cos x on every edge.
def tile(h):
    return lambda x: np.tile(h(x), (sig.n, 1))


f = SmoothTestFunction(sig, tile(lambda x: (1 - x) * np.cos(x)),
                       tile(lambda x: -np.cos(x) - (1 - x) * np.sin(x)),
                       tile(lambda x: 2 * np.sin(x) - (1 - x) * np.cos(x)))
print("Gamma_0 f =", gamma_0(f), " Gamma_1 f =", gamma_1(f))

# %% Green identity [Tf, g] - [f, Tg] = Gamma_1 f conj(Gamma_0 g) - Gamma_0 f conj(Gamma_1 g).
rng = np.random.default_rng(0)
res = [green_identity_residual(sig, random_smooth(sig, rng), random_smooth(sig, rng)) for _ in range(5)]
print("Green identity residuals:", np.array(res))
