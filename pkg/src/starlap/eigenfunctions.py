"""Eigenfunctions of A and B, Krein Gram matrices and Riesz diagnostics.

Inherited eigenvalues ``±(k pi)^2`` have edgewise sine eigenfunctions
``a_j sin(k pi x)`` supported on the edges of one sign; the Kirchhoff
condition for B forces ``sum_j a_j = 0`` there. A Weyl zero ``eta_k`` has the
single eigenfunction ``gamma(eta_k) 1``, which satisfies the Kirchhoff
condition because ``M(eta_k) = 0``.
"""

from dataclasses import dataclass

import numpy as np

from .graph import EdgeSignature, GridFunction, SmoothTestFunction, mesh, simpson_weights
from .spectrum import SpectralKind, SpectralPoint, spectrum_A, spectrum_B
from .weyl import gamma_smooth


@dataclass(frozen=True)
class EigenfunctionSpec:
    """Analytic description of one eigenfunction.

    ``form`` is ``"sine"`` (``coefficients[j] * sin(|k| pi x)`` on edge j) or
    ``"gamma"`` (``coefficients[0] * gamma(eigenvalue) 1``).
    """

    signature: EdgeSignature
    eigenvalue: float
    kind: SpectralKind
    k: int
    coefficients: np.ndarray
    form: str

    def smooth(self) -> SmoothTestFunction:
        sig = self.signature
        if self.form == "gamma":
            return gamma_smooth(sig, self.eigenvalue, self.coefficients[0])
        a = np.asarray(self.coefficients, dtype=complex)[:, None]
        w = abs(self.k) * np.pi
        return SmoothTestFunction(
            sig,
            lambda x: a * np.sin(w * np.asarray(x))[None, :],
            lambda x: a * w * np.cos(w * np.asarray(x))[None, :],
            lambda x: -a * w**2 * np.sin(w * np.asarray(x))[None, :],
        )

    def sample(self, m) -> GridFunction:
        return self.smooth().sample(m, continuous=True)


def _normalized(spec: EigenfunctionSpec, m):
    """Rescale the coefficients so the sampled function has unit Hilbert norm."""
    g = spec.sample(m)
    w = simpson_weights(m)
    nrm = np.sqrt(np.sum((np.abs(g.values) ** 2) @ w))
    coeffs = np.asarray(spec.coefficients, dtype=complex) / nrm
    out = EigenfunctionSpec(spec.signature, spec.eigenvalue, spec.kind, spec.k, coeffs, spec.form)
    return out, g * (1.0 / nrm)


def _sine_specs(sig, point, vectors):
    return [
        EigenfunctionSpec(sig, point.value, point.kind, point.k, np.asarray(a, float), "sine")
        for a in vectors
    ]


def _edge_block(sig, kind):
    if kind == SpectralKind.INHERITED_POSITIVE:
        return np.arange(sig.n_plus)
    return np.arange(sig.n_plus, sig.n)


def eigenspecs_A(sig: EdgeSignature, k_max):
    """Analytic eigenfunctions of A: one ``sqrt(2) sin(k pi x)`` per edge."""
    out = []
    for pt in spectrum_A(sig, k_max):
        vecs = []
        for j in _edge_block(sig, pt.kind):
            a = np.zeros(sig.n)
            a[j] = np.sqrt(2.0)
            vecs.append(a)
        out.append((pt, _sine_specs(sig, pt, vecs)))
    return out


def eigenspecs_B(sig: EdgeSignature, k_max):
    """Analytic eigenfunctions of B, not yet normalized.

    Inherited eigenspaces use the difference basis ``e_first - e_j`` inside
    the edge block of the matching sign.
    """
    out = []
    for pt in spectrum_B(sig, k_max):
        if pt.kind == SpectralKind.WEYL_ZERO:
            specs = [EigenfunctionSpec(sig, pt.value, pt.kind, pt.k, np.array([1.0 + 0j]), "gamma")]
        else:
            block = _edge_block(sig, pt.kind)
            vecs = []
            for j in block[1:]:
                a = np.zeros(sig.n)
                a[block[0]], a[j] = 1.0, -1.0
                vecs.append(a)
            specs = _sine_specs(sig, pt, vecs)
        out.append((pt, specs))
    return out


def eigenbasis_A(sig: EdgeSignature, k_max, m):
    """``[(SpectralPoint, [GridFunction, ...]), ...]`` for A, Hilbert-orthonormal."""
    return [(pt, [s.sample(m) for s in specs]) for pt, specs in eigenspecs_A(sig, k_max)]


def eigenbasis_B(sig: EdgeSignature, k_max, m, with_specs=False):
    """Eigenfunctions of B sampled on the mesh, each of unit Hilbert norm.

    With ``with_specs=True`` each entry also carries the normalized analytic
    descriptions, in the same order as the grid functions.
    """
    out = []
    for pt, specs in eigenspecs_B(sig, k_max):
        pairs = [_normalized(s, m) for s in specs]
        funcs = [g for _, g in pairs]
        if with_specs:
            out.append((pt, funcs, [s for s, _ in pairs]))
        else:
            out.append((pt, funcs))
    return out


def _stack(functions):
    first = functions[0]
    for f in functions[1:]:
        first._check(f)
    return np.stack([f.values for f in functions])


def hilbert_gram(functions) -> np.ndarray:
    """``G[p, q] = <f_p, f_q>``."""
    F = _stack(functions)
    w = simpson_weights(functions[0].m)
    return np.einsum("pjx,x,qjx->pq", F, w, np.conj(F))


def krein_gram(functions) -> np.ndarray:
    """``G[p, q] = [f_p, f_q]``."""
    F = _stack(functions)
    w = simpson_weights(functions[0].m)
    eps = functions[0].signature.signs
    return np.einsum("pjx,j,x,qjx->pq", F, eps, w, np.conj(F))


def ordered(basis):
    """Flatten a basis list to ``[(eigenvalue, f), ...]`` by ``|eigenvalue|``.

    Ties (``lam`` and ``-lam``) put the positive eigenvalue first.
    """
    flat = [(pt.value, f) for pt, funcs, *_ in basis for f in funcs]
    flat.sort(key=lambda t: (abs(t[0]), t[0] < 0))
    return flat


def riesz_condition_report(sig=None, k_max=None, m=None, sizes=None, basis=None):
    """Condition numbers of truncated Hilbert Gram matrices.

    The eigenfunctions (of B unless ``basis`` is supplied) are ordered by
    ``|eigenvalue|``, rescaled so that ``|[f, f]| = 1``, and for every
    truncation size ``N`` the spectral condition number of the leading
    ``N x N`` Hilbert Gram block is reported.

    Returns
    -------
    list of (int, float)
    """
    if basis is None:
        basis = eigenbasis_B(sig, k_max, m)
    flat = ordered(basis)
    funcs = [f for _, f in flat]
    K = krein_gram(funcs).diagonal().real
    scale = 1.0 / np.sqrt(np.abs(K))
    G = hilbert_gram(funcs) * np.outer(scale, scale)
    if sizes is None:
        sizes = range(1, len(funcs) + 1)
    report = []
    for N in sizes:
        if not 1 <= N <= len(funcs):
            raise ValueError(f"truncation size {N} outside 1..{len(funcs)}")
        ev = np.linalg.eigvalsh(G[:N, :N])
        report.append((int(N), float(ev[-1] / ev[0])))
    return report


@dataclass(frozen=True)
class MembershipResiduals:
    """Vertex-condition and ODE residuals of a candidate eigenfunction."""

    outer: float
    continuity: float
    kirchhoff: float
    ode: float


def ode_residual(f: GridFunction, lam) -> float:
    """``max |eps_j (-f_j'') - lam f_j|`` with the 3-point second difference."""
    u = f.values
    d2 = (u[:, :-2] - 2 * u[:, 1:-1] + u[:, 2:]) / f.h**2
    eps = f.signature.signs[:, None]
    return float(np.max(np.abs(-eps * d2 - lam * u[:, 1:-1])))


def membership_residuals(spec: EigenfunctionSpec, m) -> MembershipResiduals:
    """Residuals of the conditions defining the domain of B.

    Vertex conditions come from the analytic form (so they measure the
    eigenfunction, not a stencil), the ODE residual from second differences
    of the samples.
    """
    s = spec.smooth()
    tr = s.trace()
    g = s.sample(m, continuous=False)
    center = np.asarray(s.value(np.array([0.0])))[:, 0]
    return MembershipResiduals(
        outer=float(np.max(np.abs(tr.outer_values))),
        continuity=float(np.max(np.abs(center - center[0]))),
        kirchhoff=float(abs(np.sum(tr.center_derivatives))),
        ode=ode_residual(g, spec.eigenvalue),
    )


def ode_bound(spec: EigenfunctionSpec, m) -> float:
    """Leading truncation error ``h^2 lam^2 max|f| / 12`` of the second difference."""
    vals = spec.smooth().value(mesh(m))
    return (1.0 / m) ** 2 * spec.eigenvalue**2 * float(np.max(np.abs(vals))) / 12


__all__ = [
    "EigenfunctionSpec",
    "MembershipResiduals",
    "SpectralPoint",
    "eigenbasis_A",
    "eigenbasis_B",
    "eigenspecs_A",
    "eigenspecs_B",
    "hilbert_gram",
    "krein_gram",
    "membership_residuals",
    "ode_bound",
    "ode_residual",
    "ordered",
    "riesz_condition_report",
]
