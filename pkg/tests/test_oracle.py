import numpy as np
import pytest

from oracles import FROZEN_ETA
from starlap import (
    DomainError,
    EdgeSignature,
    GridFunction,
    MeshError,
    OracleNonConvergence,
    PoleError,
    discrete_spectrum,
    discretize_B,
    krein_inner,
    krein_resolvent_check,
    positivity_check,
    resolvent_A,
    spectrum_B,
)
from starlap.eigenfunctions import eigenspecs_B
from starlap.graph import SmoothTestFunction, random_smooth, vertex_trace
from starlap.oracle import (
    apply_B_minus,
    edge_ode_residual,
    read_matrix,
    resolvent_B,
    write_matrix,
)
from starlap.spectrum import expand
from starlap.weyl import gamma_field, weyl_m

S11, S21, S13, S31 = (EdgeSignature(*p) for p in [(1, 1), (2, 1), (1, 3), (3, 1)])


def smallest(sig, count):
    v = expand(spectrum_B(sig, count))
    return np.sort(v[np.argsort(np.abs(v))][:count])


class TestDiscretization:
    def test_size_and_blocks(self):
        op = discretize_B(S11, 8, "first")
        A = op.dense()
        assert A.shape == (14, 14)
        assert op.size == 14
        np.testing.assert_array_equal(op.signs, [1] * 7 + [-1] * 7)
        # edges couple only through the first interior node (the eliminated center)
        off = A[:7, 7:]
        assert np.count_nonzero(off) == 1 and off[0, 0] != 0

    def test_first_order_symmetric(self):
        L = discretize_B(S21, 50, "first").laplacian.toarray()
        assert np.max(np.abs(L - L.T)) == 0

    def test_second_order_not_symmetric(self):
        L = discretize_B(S21, 50, "second").laplacian.toarray()
        assert np.max(np.abs(L - L.T)) > 0

    def test_poincare(self):
        L = discretize_B(S21, 60, "first").laplacian.toarray()
        assert np.linalg.eigvalsh(L)[0] > 0

    def test_too_coarse(self):
        with pytest.raises(MeshError):
            discretize_B(S11, 7)

    def test_bad_order(self):
        with pytest.raises(DomainError):
            discretize_B(S11, 20, "third")

    def test_row_position(self):
        op = discretize_B(S21, 10)
        for edge in range(3):
            for node in (1, 5, 9):
                assert op.position(op.row(edge, node)) == (edge, node)
        with pytest.raises(IndexError):
            op.row(0, 0)

    def test_to_grid_center(self):
        op = discretize_B(S21, 10, "first")
        g = op.to_grid(np.arange(op.size, dtype=float))
        assert g.continuous
        assert g.values[0, 0] == pytest.approx(np.mean([0, 9, 18]))


class TestDiscreteSpectrum:
    @pytest.mark.parametrize("sig", [S11, S21, S13])
    def test_matches_analytic(self, sig):
        d = discrete_spectrum(discretize_B(sig, 2000), 6)
        exact = smallest(sig, 6)
        assert np.max(np.abs(d - exact) / np.abs(exact)) < 5e-3

    def test_frozen_oracle(self):
        d = discrete_spectrum(discretize_B(S11, 2000), 6)
        ref = np.sort(list(FROZEN_ETA[(1, 1)].values()))
        np.testing.assert_allclose(d, ref, rtol=1e-5)

    def test_second_order_convergence(self):
        exact = smallest(S21, 5)
        errs = [np.max(np.abs(discrete_spectrum(discretize_B(S21, m), 5) - exact)) for m in (500, 1000)]
        assert 3.5 <= errs[0] / errs[1] <= 4.5

    def test_first_order_convergence(self):
        exact = smallest(S21, 5)
        errs = [np.max(np.abs(discrete_spectrum(discretize_B(S21, m, "first"), 5) - exact))
                for m in (500, 1000)]
        assert 1.8 <= errs[0] / errs[1] <= 2.2

    def test_cluster_three_one(self):
        d = discrete_spectrum(discretize_B(S31, 2000), 12)
        near = d[np.abs(d - np.pi**2) < 0.5]
        assert len(near) == 2

    def test_symmetric_for_equal_counts(self):
        d = discrete_spectrum(discretize_B(S11, 1000), 8)
        np.testing.assert_allclose(np.sort(d), np.sort(-d), rtol=1e-6)

    def test_zero_excluded(self):
        for sig in (S21, S13):
            d = discrete_spectrum(discretize_B(sig, 500), 4)
            gap = min(abs(spectrum_B(sig, 1)[i].value) for i in range(len(spectrum_B(sig, 1))))
            assert np.min(np.abs(d)) > 0.5 * gap

    def test_dense_and_sparse_agree(self):
        op = discretize_B(S21, 300)
        d_dense = discrete_spectrum(op, 6)
        from starlap import oracle
        old = oracle.DENSE_LIMIT
        oracle.DENSE_LIMIT = 10
        try:
            d_sparse = discrete_spectrum(op, 6)
        finally:
            oracle.DENSE_LIMIT = old
        np.testing.assert_allclose(d_dense, d_sparse, rtol=1e-9)

    def test_non_convergence_mapped(self, monkeypatch):
        import scipy.sparse.linalg as spla

        def boom(*a, **k):
            raise spla.ArpackNoConvergence("no luck", np.array([]), np.array([]))

        monkeypatch.setattr(spla, "eigs", boom)
        with pytest.raises(OracleNonConvergence):
            discrete_spectrum(discretize_B(S21, 2000), 4)

    def test_bad_count(self):
        with pytest.raises(DomainError):
            discrete_spectrum(discretize_B(S11, 10), 0)


class TestMatrixDump:
    def test_round_trip(self, tmp_path):
        op = discretize_B(S21, 12)
        path = tmp_path / "jl.txt"
        write_matrix(op, path)
        header, A = read_matrix(path)
        assert header == (2, 1, 12, "second")
        assert (A != op.matrix).nnz == 0
        lines = path.read_text().splitlines()
        assert lines[0].startswith("%") and lines[1] == "2 1 12 second"
        r, c, v = lines[2].split()
        assert int(r) >= 1 and int(c) >= 1


class TestResolventA:
    def test_positive_and_negative_edges(self):
        f = GridFunction.from_callable(S21, 2000, lambda x: np.sin(np.pi * x))
        u = resolvent_A(S21, 2.0, f)
        s = np.sin(np.pi * f.x)
        np.testing.assert_allclose(u.values[0], s / (np.pi**2 - 2), atol=1e-10)
        np.testing.assert_allclose(u.values[2], s / (-np.pi**2 - 2), atol=1e-10)

    def test_ode_residual_order(self, rng):
        g = random_smooth(S21, rng)
        res = []
        for m in (500, 1000):
            f = g.sample(m, continuous=False)
            res.append(edge_ode_residual(resolvent_A(S21, 1 + 3j, f), 1 + 3j, f))
        assert 3.0 < res[0] / res[1] < 5.0

    def test_pole(self):
        f = GridFunction.from_callable(S21, 100, lambda x: np.sin(np.pi * x))
        with pytest.raises(PoleError):
            resolvent_A(S21, np.pi**2, f)


class TestKreinFormula:
    def test_residuals(self):
        f = GridFunction.from_callable(S21, 4000, lambda x: np.sin(np.pi * x))
        rep = krein_resolvent_check(S21, 2j, f)
        assert rep.ode < 1e-5 and rep.kirchhoff < 1e-5
        assert rep.continuity < 1e-5 and rep.dirichlet < 1e-5

    def test_residuals_shrink_with_mesh(self):
        r = []
        for m in (1000, 2000):
            f = GridFunction.from_callable(S21, m, lambda x: np.sin(np.pi * x))
            r.append(krein_resolvent_check(S21, 2j, f))
        assert 3.0 < r[0].ode / r[1].ode < 5.0
        assert 3.0 < r[0].kirchhoff / r[1].kirchhoff < 5.0

    def test_literal_plus_sign_breaks_kirchhoff(self):
        m, lam = 4000, 2j
        f = GridFunction.from_callable(S21, m, lambda x: np.sin(np.pi * x))
        raw, c, M = resolvent_B(S21, lam, f)
        # same construction with c -> -c
        flipped = raw - 2 * gamma_field(S21, lam, c, m).values
        tr = vertex_trace(GridFunction(S21, flipped))
        assert abs(np.sum(tr.center_derivatives)) > 0.1

    def test_manufactured(self, rng):
        m = 4000
        for sig in (S21, S13):
            u = random_smooth(sig, rng, kirchhoff=True)
            rep = krein_resolvent_check(sig, 2j, apply_B_minus(u, 2j, m))
            assert np.max(np.abs(rep.solution.values - u.sample(m).values)) < 1e-5

    def test_no_coupling_when_orthogonal(self):
        # f Krein-orthogonal to gamma(conj lam) 1: the correction vanishes
        m, lam = 2000, 2j
        g = gamma_field(S21, np.conj(lam), 1.0, m)
        f0 = GridFunction.from_callable(S21, m, lambda x: np.sin(np.pi * x))
        f = f0 - (krein_inner(f0, g) / krein_inner(g, g)) * g
        rep = krein_resolvent_check(S21, lam, f)
        assert abs(rep.coupling) < 1e-12
        np.testing.assert_allclose(rep.solution.values, resolvent_A(S21, lam, f).values, atol=1e-12)
        assert rep.kirchhoff < 1e-5

    def test_eigenvalue_rejected(self):
        f = GridFunction.from_callable(S11, 200, lambda x: np.sin(np.pi * x))
        with pytest.raises(DomainError):
            krein_resolvent_check(S11, FROZEN_ETA[(1, 1)][1], f)

    def test_coupling_uses_weyl(self):
        f = GridFunction.from_callable(S21, 400, lambda x: np.sin(np.pi * x))
        rep = krein_resolvent_check(S21, 2j, f)
        assert rep.weyl == weyl_m(S21, 2j)


class TestPositivity:
    def test_kirchhoff_profile(self):
        a = np.zeros((3, 2))
        a[0, 1], a[1, 1] = 1.0, -1.0
        a[:, 0] = 1.0 / np.pi  # sum_j f_j'(0) = -3 + 3 = 0
        f = SmoothTestFunction.sine_series(S21, 1.0, a)
        q1, q2 = positivity_check(S21, f, 2000)
        assert abs(q1 - q2) < 1e-8 and q1 > 0

    def test_eigenfunction(self):
        spec = [s for pt, ss in eigenspecs_B(S21, 1) for s in ss if pt.k == 1][0]
        f = spec.smooth()
        q1, q2 = positivity_check(S21, f, 2000)
        fs = f.sample(2000)
        assert q1 == pytest.approx(spec.eigenvalue * krein_inner(fs, fs).real, rel=1e-8)
        assert q1 == pytest.approx(q2, rel=1e-8)

    def test_zero(self):
        f = SmoothTestFunction.sine_series(S21, 0.0, np.zeros((3, 1)))
        assert positivity_check(S21, f) == (0.0, 0.0)

    def test_rejects_non_kirchhoff(self):
        f = SmoothTestFunction.sine_series(S21, 0.0, np.ones((3, 1)))
        with pytest.raises(DomainError):
            positivity_check(S21, f)
