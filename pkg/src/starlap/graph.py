"""Star graph data model: edge signatures, sampled functions, inner products.

A star graph here is ``n = n_plus + n_minus`` unit intervals glued at the
origin. Edges ``0 .. n_plus-1`` carry ``-d^2/dx^2`` and the remaining edges
carry ``+d^2/dx^2``. A function on the graph is stored edgewise on the uniform
mesh ``x_i = i/m``; index 0 is the central vertex, index ``m`` the outer one.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, MeshError, ShapeError

# relative tolerance under which the center samples count as one value
CENTER_ATOL = 1e-12


@dataclass(frozen=True)
class EdgeSignature:
    """Numbers of positive-sign and negative-sign edges of the star."""

    n_plus: int
    n_minus: int

    def __post_init__(self):
        for name in ("n_plus", "n_minus"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def n(self) -> int:
        return self.n_plus + self.n_minus

    @property
    def signs(self) -> np.ndarray:
        """Per-edge sign ``eps_j``: +1 on the first n_plus edges, -1 after."""
        return np.concatenate([np.ones(self.n_plus), -np.ones(self.n_minus)])

    def __str__(self):
        return f"({self.n_plus},{self.n_minus})"


def mesh(m: int) -> np.ndarray:
    """Uniform mesh ``i/m, i = 0..m`` on the unit edge."""
    return np.linspace(0.0, 1.0, m + 1)


class GridFunction:
    """Edgewise samples of a function on the star graph.

    Parameters
    ----------
    signature : EdgeSignature
    values : array_like, shape (n, m+1)
        ``values[j, i]`` is the value on edge ``j`` at ``x = i/m``.
    continuous : bool or None
        ``True`` demands a shared center value (a ``DomainError`` otherwise),
        ``False`` marks the object as relaxed, ``None`` detects it.

    Values are stored as an immutable complex array. When the function is
    continuous the center samples are made exactly identical.
    """

    __slots__ = ("signature", "values", "continuous")

    def __init__(self, signature: EdgeSignature, values, continuous: Optional[bool] = None):
        vals = np.array(values, dtype=complex)
        if vals.ndim != 2 or vals.shape[0] != signature.n:
            raise ShapeError(
                f"expected values of shape ({signature.n}, m+1), got {vals.shape}"
            )
        if vals.shape[1] < 3:
            raise MeshError("need at least two mesh intervals per edge")
        center = vals[:, 0]
        spread = float(np.max(np.abs(center - center[0])))
        ok = spread <= CENTER_ATOL * (1.0 + float(np.max(np.abs(center))))
        if continuous and not ok:
            raise DomainError(f"edge values at the center differ by {spread:.3e}")
        if continuous is None:
            continuous = ok
        if continuous:
            vals[:, 0] = center.mean()
        vals.setflags(write=False)
        self.signature = signature
        self.values = vals
        self.continuous = bool(continuous)

    @classmethod
    def from_callable(cls, signature, m, func: Callable, continuous=None):
        """Sample ``func(x)`` on the mesh.

        ``func`` receives the mesh array and returns either one profile (used
        on every edge) or an array of shape ``(n, m+1)``.
        """
        x = mesh(m)
        vals = np.broadcast_to(np.asarray(func(x), dtype=complex), (signature.n, m + 1))
        return cls(signature, vals, continuous=continuous)

    @classmethod
    def zeros(cls, signature, m):
        return cls(signature, np.zeros((signature.n, m + 1)))

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def x(self) -> np.ndarray:
        return mesh(self.m)

    @property
    def center_spread(self) -> float:
        c = self.values[:, 0]
        return float(np.max(np.abs(c - c[0])))

    def _check(self, other):
        if not isinstance(other, GridFunction):
            raise ShapeError(f"expected a GridFunction, got {type(other).__name__}")
        if other.signature != self.signature or other.m != self.m:
            raise ShapeError(
                f"grid mismatch: {self.signature} m={self.m} vs {other.signature} m={other.m}"
            )

    def _combine(self, other, vals):
        cont = None if (self.continuous and other.continuous) else False
        return GridFunction(self.signature, vals, continuous=cont)

    def __add__(self, other):
        self._check(other)
        return self._combine(other, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self._combine(other, self.values - other.values)

    def __mul__(self, scalar):
        return GridFunction(self.signature, self.values * scalar,
                            continuous=None if self.continuous else False)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __repr__(self):
        kind = "continuous" if self.continuous else "relaxed"
        return f"GridFunction({self.signature}, m={self.m}, {kind})"


@dataclass(frozen=True)
class VertexTrace:
    """Vertex data ``f(0)``, ``f_j'(0)`` and ``f_j(1)`` of a function.

    ``center_value`` is ``None`` for a center-discontinuous function.
    """

    center_value: Optional[complex]
    center_derivatives: np.ndarray
    outer_values: np.ndarray


class SmoothTestFunction:
    """A function on the star given analytically, with two derivatives.

    Each callable maps a 1-d array ``x`` to an array of shape ``(n, len(x))``.
    Keeping the derivatives analytic lets identity checks isolate the
    quadrature error from differentiation error.
    """

    def __init__(self, signature: EdgeSignature, value, d1, d2):
        self.signature = signature
        self.value = value
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def sine_series(cls, signature, center, coeffs):
        """``f_j(x) = center*(1-x) + sum_k coeffs[j, k-1] * sin(k*pi*x)``.

        Every such function is continuous at the center and vanishes at the
        outer vertices.
        """
        a = np.asarray(coeffs, dtype=complex)
        if a.ndim != 2 or a.shape[0] != signature.n:
            raise ShapeError(f"coeffs must have shape ({signature.n}, K)")
        w = np.pi * np.arange(1, a.shape[1] + 1)
        c = complex(center)

        def value(x):
            return c * (1 - x)[None, :] + a @ np.sin(np.outer(w, x))

        def d1(x):
            return -c * np.ones((signature.n, len(x))) + (a * w) @ np.cos(np.outer(w, x))

        def d2(x):
            return -(a * w**2) @ np.sin(np.outer(w, x))

        return cls(signature, value, d1, d2)

    def sample(self, m, continuous=None) -> GridFunction:
        x = mesh(m)
        return GridFunction(self.signature, self.value(x), continuous=continuous)

    def sample_d1(self, m) -> GridFunction:
        return GridFunction(self.signature, self.d1(mesh(m)), continuous=False)

    def sample_d2(self, m) -> GridFunction:
        return GridFunction(self.signature, self.d2(mesh(m)), continuous=False)

    def trace(self) -> VertexTrace:
        ends = np.array([0.0, 1.0])
        v = np.asarray(self.value(ends), dtype=complex)
        d = np.asarray(self.d1(ends[:1]), dtype=complex)[:, 0]
        center = v[:, 0]
        ok = np.max(np.abs(center - center[0])) <= CENTER_ATOL * (1 + np.max(np.abs(center)))
        return VertexTrace(complex(center.mean()) if ok else None, d, v[:, 1])


@lru_cache(maxsize=16)
def simpson_weights(m: int) -> np.ndarray:
    """Weights ``w`` with ``w @ y == simpson(y, dx=1/m)`` on the edge mesh."""
    h = 1.0 / m
    if m % 2 == 0:
        w = np.full(m + 1, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        w *= h / 3
    else:
        w = np.empty(m + 1)
        for lo in range(0, m + 1, 512):
            hi = min(lo + 512, m + 1)
            block = np.zeros((hi - lo, m + 1))
            block[np.arange(hi - lo), np.arange(lo, hi)] = 1.0
            w[lo:hi] = simpson(block, dx=h, axis=-1)
    w.setflags(write=False)
    return w


def _integrate(y, h):
    return complex(np.sum(y @ simpson_weights(y.shape[-1] - 1)))


def hilbert_inner(f: GridFunction, g: GridFunction) -> complex:
    """``<f, g> = sum_j int_0^1 f_j conj(g_j) dx`` by composite Simpson."""
    f._check(g)
    return _integrate(f.values * np.conj(g.values), f.h)


def krein_inner(f: GridFunction, g: GridFunction) -> complex:
    """Indefinite product ``[f, g] = <f, J g>``."""
    f._check(g)
    eps = f.signature.signs[:, None]
    return _integrate(eps * f.values * np.conj(g.values), f.h)


def hilbert_norm(f: GridFunction) -> float:
    return float(np.sqrt(hilbert_inner(f, f).real))


def apply_J(f: GridFunction) -> GridFunction:
    """Fundamental symmetry: flip the sign on the negative edges.

    The result is continuous only when ``f(0) = 0``; otherwise it comes back
    flagged as relaxed.
    """
    return GridFunction(f.signature, f.signature.signs[:, None] * f.values)


def vertex_trace(f: GridFunction) -> VertexTrace:
    """Vertex data of a grid function.

    Derivatives at the center use the one-sided stencil
    ``(-3 u0 + 4 u1 - u2) / (2 h)``, exact on quadratics.
    """
    if f.m < 3:
        raise MeshError(f"vertex trace needs m >= 3, got m={f.m}")
    u = f.values
    d = (-3 * u[:, 0] + 4 * u[:, 1] - u[:, 2]) / (2 * f.h)
    center = complex(u[0, 0]) if f.continuous else None
    return VertexTrace(center, d.copy(), u[:, -1].copy())


def random_smooth(signature, rng, modes=4, center=None, kirchhoff=False, scale=1.0):
    """Random sine-series function continuous at 0 and zero at the outer ends.

    With ``kirchhoff=True`` the first coefficient is shifted so that
    ``sum_j f_j'(0) = 0``, i.e. the result lies in the domain of the Kirchhoff
    operator.
    """
    n = signature.n
    a = (rng.standard_normal((n, modes)) + 1j * rng.standard_normal((n, modes))) * scale
    a /= np.arange(1, modes + 1) ** 2
    if center is None:
        center = complex(rng.standard_normal(), rng.standard_normal())
    if kirchhoff:
        k = np.arange(1, modes + 1)
        flux = -n * center + np.pi * np.sum(a * k)
        a[0, 0] -= flux / np.pi
    return SmoothTestFunction.sine_series(signature, center, a)


def random_grid(signature, m, rng, modes=6):
    """Random smooth complex grid function continuous at the center.

    Built from low cosine and sine modes so that linear interpolation and
    Simpson quadrature stay accurate; the outer values are not forced to 0.
    """
    n = signature.n
    x = mesh(m)
    k = np.arange(modes)
    a = rng.standard_normal((n, modes)) + 1j * rng.standard_normal((n, modes))
    b = rng.standard_normal((n, modes)) + 1j * rng.standard_normal((n, modes))
    vals = a @ np.cos(np.outer(k * np.pi / 2, x)) + b @ np.sin(np.outer((k + 1) * np.pi / 2, x))
    c = rng.standard_normal() + 1j * rng.standard_normal()
    vals += (c - vals[:, :1])
    return GridFunction(signature, vals, continuous=True)
