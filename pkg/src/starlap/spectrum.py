"""Point spectra of the Dirichlet-decoupled operator A and the Kirchhoff operator B.

``A`` has the eigenvalues ``(k pi)^2`` (multiplicity ``n_plus``) and
``-(k pi)^2`` (multiplicity ``n_minus``). ``B`` keeps these with multiplicity
reduced by one and gains one simple eigenvalue ``eta_k`` between each pair of
consecutive levels: the zeros of the Weyl function. In ``mu = sqrt|eta|``
they solve::

    k >= 1:   n_plus  cot(mu) + n_minus coth(mu) = 0,   mu in ((k-1) pi, k pi)
    k <= -1:  n_minus cot(mu) + n_plus  coth(mu) = 0,   mu in ((|k|-1) pi, |k| pi)
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, SpectralIndexError, StarlapError
from .graph import EdgeSignature

BRACKET_GUARD = 1e-9 * np.pi
SECULAR_TOL = 1e-11
_BISECT_WIDTH = 1e-6
_NEWTON_SEED_INDEX = 8
_MAX_NEWTON = 60


class RootFindingError(StarlapError):
    """The secular root could not be resolved to the requested tolerance."""


class SpectralKind(str, Enum):
    INHERITED_POSITIVE = "inherited_positive"
    INHERITED_NEGATIVE = "inherited_negative"
    WEYL_ZERO = "weyl_zero"


@dataclass(frozen=True)
class SpectralPoint:
    value: float
    multiplicity: int
    kind: SpectralKind
    k: int


def _check_index(k):
    if int(k) != k or k == 0:
        raise SpectralIndexError(f"root index must be a nonzero integer, got {k!r}")
    return int(k)


def _weights(sig, k):
    """Coefficients ``(a, b)`` of ``a cot(mu) + b coth(mu)`` for the side of k."""
    return (sig.n_plus, sig.n_minus) if k > 0 else (sig.n_minus, sig.n_plus)


def _coth(mu):
    return 1.0 / math.tanh(mu)


def _csch2(mu):
    q = math.exp(-mu)
    return (2 * q / (1 - q * q)) ** 2


def secular(sig: EdgeSignature, k, mu):
    """Secular function of the side selected by the sign of ``k``, at ``mu > 0``."""
    a, b = _weights(sig, _check_index(k))
    return a / math.tan(mu) + b * _coth(mu)


def secular_derivative(sig, k, mu):
    """``d/dmu`` of :func:`secular`; strictly negative on every bracket."""
    a, b = _weights(sig, _check_index(k))
    return -a / math.sin(mu) ** 2 - b * _csch2(mu)


def bracket(k):
    """Open interval of ``eta_k``: ``(((k-1)pi)^2, (k pi)^2)`` mirrored for k < 0."""
    k = _check_index(k)
    lo, hi = ((abs(k) - 1) * np.pi) ** 2, (abs(k) * np.pi) ** 2
    return (lo, hi) if k > 0 else (-hi, 0.0 - lo)


def asymptotic_eta(sig: EdgeSignature, k) -> float:
    """Large-index approximation of ``eta_k``.

    With ``coth -> 1`` the secular equation becomes ``tan(mu) = -n_plus/n_minus``
    for k >= 1 (mirrored for k <= -1), so

    ``(k pi - arctan(n_plus/n_minus))^2`` for k >= 1 and
    ``-(|k| pi - arctan(n_minus/n_plus))^2`` for k <= -1.

    The error in ``sqrt|eta_k|`` decays like ``exp(-2 |k| pi)``.
    """
    k = _check_index(k)
    if k > 0:
        return (k * np.pi - np.arctan(sig.n_plus / sig.n_minus)) ** 2
    return -((-k) * np.pi - np.arctan(sig.n_minus / sig.n_plus)) ** 2


def eta_mu(sig: EdgeSignature, k, tol=SECULAR_TOL) -> float:
    """``sqrt|eta_k|``: the root of the secular function in its mu-bracket.

    Bisection narrows the guarded bracket to ``1e-6`` (skipped for
    ``|k| >= 8``, where the asymptotic value is a good seed), then Newton
    polishes. A Newton step leaving the current bracket is replaced by a
    bisection step, so the iterate never leaves the bracket.
    """
    k = _check_index(k)
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo = (abs(k) - 1) * np.pi + BRACKET_GUARD
    hi = abs(k) * np.pi - BRACKET_GUARD
    f = lambda mu: secular(sig, k, mu)  # noqa: E731
    if abs(k) >= _NEWTON_SEED_INDEX:
        x = float(np.sqrt(abs(asymptotic_eta(sig, k))))
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
    else:
        while hi - lo > _BISECT_WIDTH:
            mid = 0.5 * (lo + hi)
            if f(mid) > 0:
                lo = mid
            else:
                hi = mid
        x = 0.5 * (lo + hi)
    best, best_res = x, math.inf
    for _ in range(_MAX_NEWTON):
        fx = f(x)
        if abs(fx) < best_res:
            best, best_res = x, abs(fx)
        if fx == 0:
            break
        if fx > 0:
            lo = x
        else:
            hi = x
        step = fx / secular_derivative(sig, k, x)
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4 * np.finfo(float).eps * x:
            break
        x = x_new
    x, res = best, best_res
    if not res <= tol:
        raise RootFindingError(f"eta_{k}: secular residual {res:.3e} exceeds tol {tol:.1e}")
    return float(x)


def eta_root(sig: EdgeSignature, k, tol=SECULAR_TOL) -> float:
    """Weyl zero ``eta_k`` of the Kirchhoff operator, ``k != 0``."""
    mu = eta_mu(sig, k, tol)
    return float(np.sign(k) * mu * mu)


def secular_residual(sig, k, eta) -> float:
    return float(abs(secular(sig, k, np.sqrt(abs(eta)))))


def spectrum_A(sig: EdgeSignature, k_max) -> list:
    """Eigenvalues ``±(k pi)^2, k <= k_max`` of A with multiplicities, ascending."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    pts = []
    for k in range(1, k_max + 1):
        lev = (k * np.pi) ** 2
        pts.append(SpectralPoint(-lev, sig.n_minus, SpectralKind.INHERITED_NEGATIVE, -k))
        pts.append(SpectralPoint(lev, sig.n_plus, SpectralKind.INHERITED_POSITIVE, k))
    return sorted(pts, key=lambda p: p.value)


def spectrum_B(sig: EdgeSignature, k_max, tol=SECULAR_TOL) -> list:
    """Eigenvalues of B with ``|k| <= k_max``, ascending; 0 is never among them."""
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    pts = []
    for k in range(1, k_max + 1):
        for kk in (k, -k):
            pts.append(SpectralPoint(eta_root(sig, kk, tol), 1, SpectralKind.WEYL_ZERO, kk))
        lev = (k * np.pi) ** 2
        if sig.n_plus > 1:
            pts.append(SpectralPoint(lev, sig.n_plus - 1, SpectralKind.INHERITED_POSITIVE, k))
        if sig.n_minus > 1:
            pts.append(SpectralPoint(-lev, sig.n_minus - 1, SpectralKind.INHERITED_NEGATIVE, -k))
    pts.sort(key=lambda p: p.value)
    assert all(p.value != 0 for p in pts)
    return pts


def expand(points) -> np.ndarray:
    """Eigenvalues repeated according to multiplicity."""
    return np.array([p.value for p in points for _ in range(p.multiplicity)])


def is_symmetric(points, tol=1e-9) -> bool:
    """Whether the multiset of eigenvalues is invariant under negation."""
    v = np.sort(expand(points))
    w = np.sort(-v)
    return bool(np.all(np.abs(v - w) <= tol * (1 + np.abs(v))))


def recover_ratio(eta_1) -> float:
    """``n_plus/n_minus = -coth(sqrt(eta_1)) tan(sqrt(eta_1))``."""
    if not 0 < eta_1 < np.pi**2:
        raise DomainError(f"eta_1 must lie in (0, pi^2), got {eta_1!r}")
    mu = np.sqrt(eta_1)
    return float(-_coth(mu) * np.tan(mu))


@dataclass(frozen=True)
class InterlacingReport:
    interval: tuple
    m_A: int
    m_B: int
    holds: bool


def count_in(points, a, b) -> int:
    """Total multiplicity of the points in the closed interval ``[a, b]``."""
    return sum(p.multiplicity for p in points if a <= p.value <= b)


def interlacing_check(sig, interval, k_max, spec_A=None, spec_B=None) -> InterlacingReport:
    """Check ``m_A(I) - 1 <= m_B(I) <= m_A(I) + 1`` on an interval avoiding 0.

    Precomputed spectra may be passed to avoid recomputing the roots.
    """
    a, b = map(float, interval)
    if not a < b:
        raise DomainError("interval must satisfy a < b")
    if a <= 0 <= b:
        raise DomainError("interval must not contain 0")
    if max(abs(a), abs(b)) > (k_max * np.pi) ** 2:
        raise DomainError("interval exceeds the range covered by k_max")
    spec_A = spectrum_A(sig, k_max) if spec_A is None else spec_A
    spec_B = spectrum_B(sig, k_max) if spec_B is None else spec_B
    mA, mB = count_in(spec_A, a, b), count_in(spec_B, a, b)
    return InterlacingReport((a, b), mA, mB, mA - 1 <= mB <= mA + 1)
