"""Dilation operators Y, Y*, X = 1 + Y*Y and W = JX on grid functions.

On edge j, with a C^1 cutoff ``phi`` equal to 1 on ``[0, delta/2]`` and 0
from ``delta`` on::

    (Y u)(x)  = (alpha s u(s x) + beta t u(t x)) phi(x)
    (Y* u)(x) = alpha u(x/s) phi(x/s) + beta u(x/t) phi(x/t)

``alpha s + beta t = 1`` and ``alpha + beta = -1`` make ``(Yu)(0) = u(0)`` and
``(Y*u)(0) = -u(0)``, hence ``(Xu)(0) = 0``. Dilated samples come from
interpolation on the mesh: a cubic spline by default (O(h^4)), or piecewise
linear (O(h^2)).
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .eigenfunctions import hilbert_gram
from .errors import DomainError
from .graph import CENTER_ATOL, GridFunction, SmoothTestFunction, apply_J, simpson_weights


@dataclass(frozen=True)
class SimilarityConfig:
    """Cutoff width ``delta`` and per-edge dilations ``s_j != t_j`` in (1, 2)."""

    delta: float
    s: tuple
    t: tuple
    interpolation: str = "cubic"

    def __post_init__(self):
        if self.interpolation not in ("cubic", "linear"):
            raise DomainError(f"interpolation must be 'cubic' or 'linear', got {self.interpolation!r}")
        if not 0 < self.delta < 0.5:
            raise DomainError(f"delta must lie in (0, 1/2), got {self.delta}")
        if len(self.s) != len(self.t):
            raise DomainError("s and t need one entry per edge")
        for sj, tj in zip(self.s, self.t):
            if not (1 < sj < 2 and 1 < tj < 2) or sj == tj:
                raise DomainError(f"need s_j != t_j in (1, 2), got {sj}, {tj}")
            # keeps supp(Y*Y u) inside [0, 1 - delta)
            if max(sj, tj) * self.delta >= 1 - self.delta:
                raise DomainError(
                    f"max(s_j, t_j) * delta = {max(sj, tj) * self.delta} must stay below 1 - delta"
                )

    @classmethod
    def default(cls, sig, delta=0.2, s=1.25, t=1.5, interpolation="cubic"):
        return cls(delta, (s,) * sig.n, (t,) * sig.n, interpolation)

    @property
    def alpha(self) -> np.ndarray:
        s, t = np.asarray(self.s), np.asarray(self.t)
        return (1 + t) / (s - t)

    @property
    def beta(self) -> np.ndarray:
        s, t = np.asarray(self.s), np.asarray(self.t)
        return -(1 + s) / (s - t)

    def cutoff(self, x):
        """``phi``: 1 on ``[0, delta/2]``, cubic smoothstep down to 0 at ``delta``."""
        x = np.asarray(x, dtype=float)
        half = self.delta / 2
        w = np.clip((x - half) / half, 0.0, 1.0)
        return 1 - 3 * w**2 + 2 * w**3


def _sampler(cfg, values, xp):
    if cfg.interpolation == "cubic":
        return CubicSpline(xp, values)
    return lambda x: np.interp(x, xp, values.real) + 1j * np.interp(x, xp, values.imag)


def _check_edges(cfg, u):
    if len(cfg.s) != u.signature.n:
        raise DomainError(f"config has {len(cfg.s)} edges, function has {u.signature.n}")


def _keep_flag(u, vals):
    return GridFunction(u.signature, vals, continuous=None if u.continuous else False)


def apply_Y(cfg: SimilarityConfig, u: GridFunction) -> GridFunction:
    _check_edges(cfg, u)
    x = u.x
    phi = cfg.cutoff(x)
    out = np.zeros_like(u.values)
    for j, (s, t, a, b) in enumerate(zip(cfg.s, cfg.t, cfg.alpha, cfg.beta)):
        inside = x <= cfg.delta
        xi = x[inside]
        uj = _sampler(cfg, u.values[j], x)
        out[j, inside] = (a * s * uj(s * xi) + b * t * uj(t * xi)) * phi[inside]
    return _keep_flag(u, out)


def apply_Ystar(cfg: SimilarityConfig, u: GridFunction) -> GridFunction:
    _check_edges(cfg, u)
    x = u.x
    out = np.zeros_like(u.values)
    for j, (s, t, a, b) in enumerate(zip(cfg.s, cfg.t, cfg.alpha, cfg.beta)):
        uj = _sampler(cfg, u.values[j], x)
        out[j] = a * uj(x / s) * cfg.cutoff(x / s) + b * uj(x / t) * cfg.cutoff(x / t)
    return _keep_flag(u, out)


def apply_X(cfg: SimilarityConfig, u: GridFunction) -> GridFunction:
    """``X u = u + Y*(Y u)``."""
    yy = apply_Ystar(cfg, apply_Y(cfg, u))
    return _keep_flag(u, u.values + yy.values)


def apply_W(cfg: SimilarityConfig, u: GridFunction) -> GridFunction:
    """``W u = J X u``."""
    return apply_J(apply_X(cfg, u))


@dataclass(frozen=True)
class FormDomainReport:
    """Sampled membership test for the form domain of ``JB``."""

    dirichlet: bool
    continuous: bool
    outer_residual: float
    center_spread: float

    @property
    def member(self) -> bool:
        return self.dirichlet and self.continuous


def form_domain_member(f, tol=1e-10) -> FormDomainReport:
    """Check ``f_j(1) = 0`` for all j and ``f_1(0) = ... = f_n(0)``.

    Works on grid functions and on analytic test functions. Edgewise H^1
    regularity is taken for granted for both representations.
    """
    if isinstance(f, SmoothTestFunction):
        ends = f.value(np.array([0.0, 1.0]))
        center, outer = ends[:, 0], ends[:, 1]
    else:
        center, outer = f.values[:, 0], f.values[:, -1]
    scale = 1.0 + float(np.max(np.abs(center)))
    spread = float(np.max(np.abs(center - center[0])))
    res = float(np.max(np.abs(outer)))
    return FormDomainReport(res <= tol * scale, spread <= max(tol, CENTER_ATOL) * scale, res, spread)


def galerkin_matrix(cfg, functions):
    """``G[p, q] = <X v_q, v_p>`` for a Hilbert-orthonormalized copy ``v`` of ``functions``.

    ``X >= 1`` makes the smallest singular value at least 1 up to
    discretization error.
    """
    m = functions[0].m
    sig = functions[0].signature
    G = hilbert_gram(functions)
    # G = L L^H, so v_q = sum_p f_p (L^{-T})_{pq} is orthonormal
    C = np.linalg.inv(np.linalg.cholesky(G)).T
    F = np.stack([f.values for f in functions])
    V = np.einsum("pjx,pq->qjx", F, C)
    vs = [GridFunction(sig, v, continuous=False) for v in V]
    XV = np.stack([apply_X(cfg, v).values for v in vs])
    w = simpson_weights(m)
    return np.einsum("qjx,x,pjx->pq", XV, w, np.conj(V))


__all__ = [
    "FormDomainReport",
    "SimilarityConfig",
    "apply_W",
    "apply_X",
    "apply_Y",
    "apply_Ystar",
    "form_domain_member",
    "galerkin_matrix",
]
