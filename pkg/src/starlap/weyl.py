"""Boundary maps, Weyl function and gamma-field of the star graph.

The boundary maps are ``Gamma_0 f = f(0)`` and ``Gamma_1 f = sum_j f_j'(0)``.
On the defect space ``ker(T - lam)`` the edge profiles are ratios of
hyperbolic sines, and everything below is expressed through two even
functions of ``z``::

    r(z, x) = sinh(z (1 - x)) / sinh(z)        h(z) = z coth(z)

with ``z = i*mu`` on positive edges and ``z = mu`` on negative edges. Both are
evaluated for ``Re z >= 0`` only, using ``exp(-2z)`` so that nothing overflows
for large ``|mu|``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError
from .graph import (
    CENTER_ATOL,
    EdgeSignature,
    GridFunction,
    SmoothTestFunction,
    krein_inner,
    vertex_trace,
)

POLE_GUARD = 1e-8
_SERIES_RADIUS = 1e-4


class DefectUndefinedError(PoleError):
    """``lam`` lies in the spectrum of the Dirichlet operator, no defect element."""


@dataclass(frozen=True)
class SpectralParameter:
    """Spectral parameter ``lam`` and its square root ``mu``.

    The branch is the principal one: ``Re mu >= 0``, and ``Im mu >= 0`` when
    ``Re mu = 0``.
    """

    lam: complex
    mu: complex

    @classmethod
    def from_lambda(cls, lam):
        lam = complex(lam)
        mu = complex(np.sqrt(lam))
        if mu.real == 0.0 and mu.imag < 0.0:
            mu = -mu
        return cls(lam, mu)


@dataclass(frozen=True)
class WeylSample:
    param: SpectralParameter
    m_value: complex


def _half_plane(z):
    z = complex(z)
    return -z if z.real < 0 else z


def zcoth(z):
    """``z * coth(z)``, even in ``z`` and equal to 1 at the origin."""
    z = _half_plane(z)
    if abs(z) < _SERIES_RADIUS:
        z2 = z * z
        return 1 + z2 / 3 - z2 * z2 / 45
    q = np.exp(-2 * z)
    return z * (1 + q) / (-np.expm1(-2 * z))


def sinh_ratio(z, x):
    """Return ``sinh(z(1-x))/sinh(z)`` and ``cosh(z(1-x))/sinh(z)`` on ``x``.

    At ``z = 0`` the first ratio is its limit ``1 - x`` and the second is
    returned as ``None`` (it is singular there).
    """
    z = _half_plane(z)
    x = np.asarray(x, dtype=float)
    if z == 0:
        return 1 - x + 0j, None
    den = -np.expm1(-2 * z)
    lead = np.exp(-z * x)
    tail = np.exp(-2 * z * (1 - x))
    return lead * (-np.expm1(-2 * z * (1 - x))) / den, lead * (1 + tail) / den


def nearest_pole(lam):
    """Nearest point of ``{±(k*pi)^2 : k >= 1}`` to ``lam``."""
    lam = complex(lam)
    side = 1.0 if lam.real >= 0 else -1.0
    k0 = max(1, int(round(np.sqrt(abs(lam.real)) / np.pi)))
    cands = [side * (k * np.pi) ** 2 for k in (k0 - 1, k0, k0 + 1) if k >= 1]
    return min(cands, key=lambda p: abs(lam - p))


def _check_pole(lam, guard, exc=PoleError):
    p = nearest_pole(lam)
    if abs(complex(lam) - p) < guard:
        raise exc(f"lambda={lam} is within {guard:g} of the pole {p:.12g}", p)


def weyl_m(sig: EdgeSignature, lam, guard=POLE_GUARD, mu=None) -> complex:
    """Weyl function ``M(lam) = -mu (n_plus cot mu + n_minus coth mu)``.

    ``M(0) = -n``. The value does not depend on the sign of ``mu``; pass
    ``mu`` explicitly to evaluate on a chosen branch.
    """
    lam = complex(lam)
    _check_pole(lam, guard)
    if lam == 0:
        return complex(-sig.n)
    if mu is None:
        mu = SpectralParameter.from_lambda(lam).mu
    # mu cot mu = (i mu) coth(i mu)
    val = -(sig.n_plus * zcoth(1j * mu) + sig.n_minus * zcoth(mu))
    if lam.imag == 0:
        val = complex(val.real)
    return val


def weyl_sample(sig, lam, guard=POLE_GUARD) -> WeylSample:
    p = SpectralParameter.from_lambda(lam)
    return WeylSample(p, weyl_m(sig, p.lam, guard, mu=p.mu))


def _edge_z(sig, mu):
    return np.array([1j * mu] * sig.n_plus + [mu] * sig.n_minus, dtype=complex)


def gamma_smooth(sig: EdgeSignature, lam, c=1.0, guard=POLE_GUARD, mu=None):
    """Defect element ``gamma(lam) c`` as an analytic function on the star.

    Positive edges carry ``c sin(mu(1-x))/sin(mu)``, negative edges
    ``c sinh(mu(1-x))/sinh(mu)``; at ``lam = 0`` every edge carries
    ``c (1-x)``.
    """
    lam = complex(lam)
    c = complex(c)
    _check_pole(lam, guard, DefectUndefinedError)
    n = sig.n
    if lam == 0:
        return SmoothTestFunction(
            sig,
            lambda x: c * np.tile(1 - np.asarray(x, float), (n, 1)) + 0j,
            lambda x: -c * np.ones((n, len(x)), dtype=complex),
            lambda x: np.zeros((n, len(x)), dtype=complex),
        )
    if mu is None:
        mu = SpectralParameter.from_lambda(lam).mu
    zs = _edge_z(sig, mu)

    def value(x):
        return c * np.array([sinh_ratio(z, x)[0] for z in zs])

    def d1(x):
        return -c * np.array([_half_plane(z) * sinh_ratio(z, x)[1] for z in zs])

    def d2(x):
        return (zs**2)[:, None] * value(x)

    return SmoothTestFunction(sig, value, d1, d2)


def gamma_field(sig: EdgeSignature, lam, c=1.0, m=2000, guard=POLE_GUARD, mu=None) -> GridFunction:
    """``gamma(lam) c`` sampled on the mesh with ``m`` intervals per edge."""
    return gamma_smooth(sig, lam, c, guard, mu).sample(m, continuous=True)


def gamma_0(f) -> complex:
    """``Gamma_0 f = f(0)``; requires continuity at the center."""
    if isinstance(f, SmoothTestFunction):
        tr = f.trace()
    else:
        if not f.continuous:
            raise DomainError("Gamma_0 is undefined for a center-discontinuous function")
        tr = vertex_trace(f)
    if tr.center_value is None:
        raise DomainError("Gamma_0 is undefined for a center-discontinuous function")
    return tr.center_value


def gamma_1(f) -> complex:
    """``Gamma_1 f = sum_j f_j'(0)``.

    Analytic for a ``SmoothTestFunction``, second-order stencil for a
    ``GridFunction``.
    """
    tr = f.trace() if isinstance(f, SmoothTestFunction) else vertex_trace(f)
    return complex(np.sum(tr.center_derivatives))


def _require_dt(f: SmoothTestFunction, what="f"):
    tr = f.trace()
    if tr.center_value is None:
        raise DomainError(f"{what} is not continuous at the center")
    scale = 1.0 + abs(tr.center_value)
    if np.max(np.abs(tr.outer_values)) > CENTER_ATOL * scale:
        raise DomainError(f"{what} does not vanish at the outer vertices")
    return tr


def apply_T(f: SmoothTestFunction, m) -> GridFunction:
    """``(T f)_j = eps_j (-f_j'')`` sampled on the mesh."""
    eps = f.signature.signs[:, None]
    return GridFunction(f.signature, -eps * f.sample_d2(m).values, continuous=False)


def green_identity_residual(sig, f: SmoothTestFunction, g: SmoothTestFunction, m=2000) -> float:
    """``|[Tf,g] - [f,Tg] - (G1f conj(G0g) - G0f conj(G1g))|``.

    The brackets are computed by quadrature, the boundary terms from the
    analytic traces.
    """
    if f.signature != sig or g.signature != sig:
        raise DomainError("test functions live on a different star")
    _require_dt(f, "f")
    _require_dt(g, "g")
    fs, gs = f.sample(m), g.sample(m)
    lhs = krein_inner(apply_T(f, m), gs) - krein_inner(fs, apply_T(g, m))
    g0f, g1f = gamma_0(f), gamma_1(f)
    g0g, g1g = gamma_0(g), gamma_1(g)
    rhs = g1f * np.conj(g0g) - g0f * np.conj(g1g)
    return float(abs(lhs - rhs))
