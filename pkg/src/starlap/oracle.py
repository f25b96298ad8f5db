"""Independent checks: finite differences for B, Green-kernel resolvent of A.

The discrete operator uses the 3-point Laplacian on the interior nodes of
every edge, Dirichlet at the outer vertex, and eliminates the center value
through a discrete Kirchhoff condition. Unknowns are ordered edge by edge:
row ``j*(m-1) + (i-1)`` holds node ``i`` of edge ``j``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.integrate import cumulative_simpson
from scipy.sparse import linalg as spla

from .errors import DomainError, MeshError, OracleFailure, OracleNonConvergence
from .graph import CENTER_ATOL, GridFunction, SmoothTestFunction, hilbert_inner, krein_inner, vertex_trace
from .weyl import POLE_GUARD, _check_pole, gamma_field, weyl_m

DENSE_LIMIT = 1200
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class DiscreteOperator:
    """Finite-difference realization ``J L`` of the Kirchhoff operator.

    ``laplacian`` is the (sparse) discrete Kirchhoff Laplacian after center
    elimination and ``signs`` the diagonal of the discrete fundamental
    symmetry. ``center_weights[q]`` gives the center value as
    ``sum_j sum_q center_weights[q] * u[j, q+1]``.
    """

    signature: object
    m: int
    order: str
    laplacian: sparse.csr_matrix = field(repr=False)
    signs: np.ndarray = field(repr=False)
    center_weights: tuple

    @property
    def size(self) -> int:
        return self.signature.n * (self.m - 1)

    @property
    def matrix(self) -> sparse.csr_matrix:
        return sparse.diags(self.signs) @ self.laplacian

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def row(self, edge, node) -> int:
        if not (0 <= edge < self.signature.n and 1 <= node <= self.m - 1):
            raise IndexError(f"no unknown for edge {edge}, node {node}")
        return edge * (self.m - 1) + node - 1

    def position(self, row):
        """Inverse of :meth:`row`: ``(edge, node)``."""
        edge, r = divmod(int(row), self.m - 1)
        return edge, r + 1

    def to_grid(self, vec) -> GridFunction:
        """Embed an unknown vector as a grid function (center and Dirichlet restored)."""
        n, m = self.signature.n, self.m
        u = np.zeros((n, m + 1), dtype=complex)
        u[:, 1:m] = np.asarray(vec).reshape(n, m - 1)
        c = sum(w * u[:, q + 1].sum() for q, w in enumerate(self.center_weights))
        u[:, 0] = c
        return GridFunction(self.signature, u, continuous=True)


def discretize_B(sig, m, vertex_order="second") -> DiscreteOperator:
    """Assemble the finite-difference Kirchhoff operator.

    ``vertex_order="first"`` eliminates the center with
    ``u0 = mean_j u[j, 1]`` (the resulting Laplacian is symmetric);
    ``"second"`` uses the one-sided stencil
    ``sum_j (-3 u0 + 4 u[j,1] - u[j,2]) = 0``.
    """
    if m < 8:
        raise MeshError(f"discretize_B needs m >= 8, got {m}")
    n, p = sig.n, m - 1
    h2 = (1.0 / m) ** 2
    if vertex_order == "first":
        cw = (1.0 / n,)
    elif vertex_order == "second":
        cw = (4.0 / (3 * n), -1.0 / (3 * n))
    else:
        raise DomainError(f"vertex_order must be 'first' or 'second', got {vertex_order!r}")
    edge = sparse.diags([-np.ones(p - 1), 2 * np.ones(p), -np.ones(p - 1)], [-1, 0, 1])
    L = sparse.kron(sparse.identity(n), edge, format="lil")
    # row (j, 1) picks up -u0 through the eliminated center
    for j in range(n):
        r = j * p
        for l in range(n):
            for q, w in enumerate(cw):
                L[r, l * p + q] -= w
    L = (L.tocsr() / h2).astype(float)
    signs = np.repeat(sig.signs, p)
    return DiscreteOperator(sig, m, vertex_order, L, signs, cw)


def discrete_spectrum(op: DiscreteOperator, count, sigma=0.0) -> np.ndarray:
    """The ``count`` eigenvalues of ``J L`` closest to ``sigma``, ascending.

    Small problems are solved densely, large ones by shift-invert Arnoldi.
    Eigenvalues with imaginary parts above ``1e-8`` times their scale raise
    ``OracleFailure``.
    """
    if not 1 <= count <= op.size:
        raise DomainError(f"count must lie in 1..{op.size}")
    if op.size <= DENSE_LIMIT or count >= op.size - 2:
        ev = np.linalg.eigvals(op.dense())
    else:
        try:
            ev = spla.eigs(op.matrix.tocsc(), k=count, sigma=sigma, which="LM",
                           return_eigenvectors=False)
        except spla.ArpackNoConvergence as exc:
            raise OracleNonConvergence(str(exc)) from exc
    ev = ev[np.argsort(np.abs(ev - sigma))][:count]
    scale = max(1.0, float(np.max(np.abs(ev))))
    worst = float(np.max(np.abs(ev.imag)))
    if worst > IMAG_TOL * scale:
        raise OracleFailure(f"non-real discrete eigenvalue: |Im| = {worst:.3e}")
    return np.sort(ev.real)


def write_matrix(op: DiscreteOperator, path):
    """Dump ``J L`` as text: a header line then 1-based ``row col value`` triples."""
    A = op.matrix.tocoo()
    order = np.lexsort((A.col, A.row))
    with open(path, "w", newline="\n") as fh:
        fh.write("% starlap discrete Kirchhoff operator: n_plus n_minus m order\n")
        fh.write(f"{op.signature.n_plus} {op.signature.n_minus} {op.m} {op.order}\n")
        for i in order:
            fh.write(f"{A.row[i] + 1} {A.col[i] + 1} {float(A.data[i])!r}\n")


def read_matrix(path):
    """Read a file written by :func:`write_matrix`; returns ``(header, csr_matrix)``."""
    rows, cols, vals = [], [], []
    header = None
    with open(path) as fh:
        for line in fh:
            if line.startswith("%") or not line.strip():
                continue
            parts = line.split()
            if header is None:
                header = (int(parts[0]), int(parts[1]), int(parts[2]), parts[3])
                continue
            rows.append(int(parts[0]) - 1)
            cols.append(int(parts[1]) - 1)
            vals.append(float(parts[2]))
    n = header[0] + header[1]
    size = n * (header[2] - 1)
    return header, sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


def _cumsimpson(y, x):
    # scipy's cumulative_simpson casts complex input to real
    return (cumulative_simpson(y.real, x=x, initial=0)
            + 1j * cumulative_simpson(y.imag, x=x, initial=0))


def _edge_resolvent(z, g, x):
    """Solve ``-u'' - z u = g`` on (0, 1) with ``u(0) = u(1) = 0``.

    Uses the Dirichlet Green function
    ``sin(nu x<) sin(nu (1 - x>)) / (nu sin nu)``, with the integral split at
    ``x`` so the kink of the kernel never falls inside a quadrature panel.
    """
    nu = np.sqrt(complex(z))
    if abs(nu) < 1e-8:
        left, right = x, 1 - x
        denom = 1.0
    else:
        left, right = np.sin(nu * x), np.sin(nu * (1 - x))
        denom = nu * np.sin(nu)
    inner = _cumsimpson(left * g, x)
    outer = _cumsimpson(right * g, x)
    outer = outer[-1] - outer
    return (right * inner + left * outer) / denom


def resolvent_A(sig, lam, f: GridFunction, guard=POLE_GUARD) -> GridFunction:
    """``(A - lam)^{-1} f``: decoupled Dirichlet problems on each edge.

    On edge j the equation ``eps_j (-u'') - lam u = f`` becomes
    ``-u'' - (eps_j lam) u = eps_j f``.
    """
    if f.signature != sig:
        raise DomainError("f lives on a different star")
    _check_pole(lam, guard)
    x = f.x
    u = np.empty_like(f.values)
    for j, eps in enumerate(sig.signs):
        u[j] = _edge_resolvent(eps * lam, eps * f.values[j], x)
    u[:, 0] = 0.0
    u[:, -1] = 0.0
    return GridFunction(sig, u, continuous=True)


def edge_ode_residual(u: GridFunction, lam, f: GridFunction) -> float:
    """``max |eps_j (-u'') - lam u - f|`` over interior nodes, second differences."""
    v = u.values
    d2 = (v[:, :-2] - 2 * v[:, 1:-1] + v[:, 2:]) / u.h**2
    eps = u.signature.signs[:, None]
    return float(np.max(np.abs(-eps * d2 - lam * v[:, 1:-1] - f.values[:, 1:-1])))


@dataclass(frozen=True)
class KreinResolventReport:
    """Residuals of ``u = (B - lam)^{-1} f`` built from the resolvent of A.

    ``ode``: edge equation residual; ``kirchhoff``: ``|sum_j u_j'(0)|``;
    ``continuity``: spread of the center values; ``dirichlet``: ``max |u_j(1)|``.
    """

    lam: complex
    weyl: complex
    coupling: complex
    ode: float
    kirchhoff: float
    continuity: float
    dirichlet: float
    solution: GridFunction = field(repr=False)

    @property
    def max_residual(self) -> float:
        return max(self.ode, self.kirchhoff, self.continuity, self.dirichlet)


def resolvent_B(sig, lam, f: GridFunction, guard=POLE_GUARD):
    """``(B - lam)^{-1} f`` as a rank-one correction of ``(A - lam)^{-1} f``.

    Returns ``(u, c, M)`` with ``u = (A - lam)^{-1} f + gamma(lam) c`` and
    ``c = -M(lam)^{-1} [f, gamma(conj(lam)) 1]``. The minus sign is what the
    Green identity forces: ``Gamma_1 (A - lam)^{-1} f = [f, gamma(conj(lam)) 1]``
    has to be cancelled by ``c M(lam)``.
    """
    M = weyl_m(sig, lam, guard)
    if abs(M) < 1e-12:
        raise DomainError(f"M({lam}) = {M:.3e}: lambda is numerically an eigenvalue of B")
    g = gamma_field(sig, np.conj(complex(lam)), 1.0, f.m, guard)
    c = -krein_inner(f, g) / M
    ua = resolvent_A(sig, lam, f, guard)
    ug = gamma_field(sig, lam, c, f.m, guard)
    raw = ua.values + ug.values
    return raw, c, M


def krein_resolvent_check(sig, lam, f: GridFunction, guard=POLE_GUARD) -> KreinResolventReport:
    """Verify that the Krein-formula candidate solves ``(B - lam) u = f``."""
    raw, c, M = resolvent_B(sig, lam, f, guard)
    center = raw[:, 0]
    spread = float(np.max(np.abs(center - center[0])))
    u = GridFunction(sig, raw, continuous=False)
    tr = vertex_trace(u)
    return KreinResolventReport(
        lam=complex(lam),
        weyl=complex(M),
        coupling=complex(c),
        ode=edge_ode_residual(u, lam, f),
        kirchhoff=float(abs(np.sum(tr.center_derivatives))),
        continuity=spread,
        dirichlet=float(np.max(np.abs(tr.outer_values))),
        solution=u,
    )


def apply_B_minus(u: SmoothTestFunction, lam, m) -> GridFunction:
    """``(B - lam) u`` sampled on the mesh, for an analytic ``u``."""
    eps = u.signature.signs[:, None]
    x = np.linspace(0.0, 1.0, m + 1)
    vals = -eps * u.d2(x) - lam * u.value(x)
    return GridFunction(u.signature, vals, continuous=False)


def require_domain_B(f: SmoothTestFunction, tol=1e-10):
    """Raise ``DomainError`` unless ``f`` is continuous, Dirichlet and Kirchhoff."""
    tr = f.trace()
    if tr.center_value is None:
        raise DomainError("f is not continuous at the center")
    scale = 1.0 + float(np.max(np.abs(f.d1(np.array([0.0])))))
    if np.max(np.abs(tr.outer_values)) > CENTER_ATOL * (1 + abs(tr.center_value)):
        raise DomainError("f does not vanish at the outer vertices")
    if abs(np.sum(tr.center_derivatives)) > tol * scale:
        raise DomainError("f violates the Kirchhoff condition")


def positivity_check(sig, f: SmoothTestFunction, m=2000):
    """``(<JBf, f>, ||f'||^2)``, both by quadrature.

    ``JB`` acts as ``-d^2/dx^2`` on every edge, so for ``f`` in the domain of
    B integration by parts makes the two numbers equal.
    """
    if f.signature != sig:
        raise DomainError("f lives on a different star")
    require_domain_B(f)
    fs = f.sample(m)
    jbf = -f.sample_d2(m)
    d1 = f.sample_d1(m)
    return float(hilbert_inner(jbf, fs).real), float(hilbert_inner(d1, d1).real)
