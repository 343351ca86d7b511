import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from agfti.agf import (
    agf_minmax,
    compute_H,
    grad_h,
    inner_value,
    reduced_descent_direction,
    solve_inner_P,
)
from agfti.graphs import weighted_fusion_input

from oracles import (
    dense_bipartite_pieces,
    rand_row_stochastic,
    rand_simplex_interior,
    simplex_qp_oracle,
)


def h_exact(alpha, Zs, Ts, H, lam, beta):
    """h(alpha) under fixed H, via an exact inner maximization."""
    Zt = weighted_fusion_input(Zs, Ts, alpha)
    P = solve_inner_P(Zt, H, lam, beta)
    return inner_value(P, Zt, H, lam, beta)


def procrustes(Z, P):
    U, _, Vh = np.linalg.svd(Z.T @ P)
    return U @ Vh


class TestComputeH:
    def test_zero_labels_zero_H(self):
        rng = np.random.default_rng(0)
        P = rand_row_stochastic(rng, 5, 3)
        H = compute_H(np.zeros((5, 2)), np.zeros((3, 2)), P)
        assert np.all(H == 0.0)

    def test_single_sample_single_anchor(self):
        F = np.array([[1.0, 2.0]])
        Q = np.array([[0.0, -1.0]])
        P = np.array([[1.0]])
        H = compute_H(F, Q, P)
        assert np.isclose(H[0, 0], 1.0 + 9.0, atol=1e-12)

    def test_laplacian_trace_identity(self):
        rng = np.random.default_rng(1)
        n, m, c = 6, 4, 3
        P = rand_row_stochastic(rng, n, m)
        F = rng.standard_normal((n, c))
        Q = rng.standard_normal((m, c))
        H = compute_H(F, Q, P)
        lhs = float(np.sum(H * P))
        # the oracle Laplacian applies the degree normalization internally,
        # so Fhat stacks the raw (F ; Q) blocks
        _, _, Lt = dense_bipartite_pieces(P)
        Fhat = np.vstack([F, Q])
        rhs = float(np.trace(Fhat.T @ Lt @ Fhat))
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))

    def test_zero_column_degree_warns(self):
        P = np.array([[1.0, 0.0], [1.0, 0.0]])
        F = np.ones((2, 2))
        Q = np.ones((2, 2))
        with pytest.warns(RuntimeWarning):
            H = compute_H(F, Q, P)
        assert np.all(np.isfinite(H))

    def test_nonnegative(self):
        rng = np.random.default_rng(2)
        P = rand_row_stochastic(rng, 8, 5)
        F = rng.standard_normal((8, 3))
        Q = rng.standard_normal((5, 3))
        assert compute_H(F, Q, P).min() >= 0.0


class TestSolveInnerP:
    def test_zero_target_uniform(self):
        Z = np.zeros((4, 5))
        H = np.zeros((4, 5))
        P = solve_inner_P(Z, H, lam=3.0, beta=2.0)
        assert np.allclose(P, 0.2, atol=1e-15)

    def test_rows_match_qp_oracle(self):
        rng = np.random.default_rng(3)
        Zt = rng.standard_normal((3, 4))
        H = np.abs(rng.standard_normal((3, 4)))
        lam, beta = 2.0, 1.5
        P = solve_inner_P(Zt, H, lam, beta)
        target = (lam * Zt - H) / (2 * beta)
        for i in range(3):
            ref = simplex_qp_oracle(target[i])
            assert np.abs(P[i] - ref).max() < 1e-10

    def test_maximizes_inner_objective(self):
        rng = np.random.default_rng(4)
        n, m = 6, 5
        Zt = rand_row_stochastic(rng, n, m)
        H = np.abs(rng.standard_normal((n, m)))
        lam, beta = 4.0, 4.0
        P = solve_inner_P(Zt, H, lam, beta)
        best = inner_value(P, Zt, H, lam, beta)
        uniform = np.full((n, m), 1.0 / m)
        assert best >= inner_value(uniform, Zt, H, lam, beta) - 1e-12
        for _ in range(50):
            R = rand_row_stochastic(rng, n, m)
            assert best >= inner_value(R, Zt, H, lam, beta) - 1e-12

    def test_rows_on_simplex(self):
        rng = np.random.default_rng(5)
        P = solve_inner_P(rng.standard_normal((7, 4)), np.zeros((7, 4)), 1.0, 0.5)
        assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)
        assert P.min() >= 0.0

    def test_rejects_nonpositive_beta(self):
        Z = np.zeros((2, 2))
        with pytest.raises(ValueError):
            solve_inner_P(Z, Z, 1.0, 0.0)
        with pytest.raises(ValueError):
            solve_inner_P(Z, Z, 1.0, -1.0)


class TestGradH:
    def _instance(self, rng, n=10, m=5, V=3, c=3):
        Zs = [rand_row_stochastic(rng, n, m) for _ in range(V)]
        P0 = rand_row_stochastic(rng, n, m)
        Ts = [procrustes(Z, P0) for Z in Zs]
        F = rng.standard_normal((n, c))
        Q = rng.standard_normal((m, c))
        H = compute_H(F, Q, P0)
        return Zs, Ts, H

    def test_zero_weight_component(self):
        rng = np.random.default_rng(6)
        Zs, Ts, H = self._instance(rng)
        alpha = np.array([0.6, 0.4, 0.0])
        Zt = weighted_fusion_input(Zs, Ts, alpha)
        P = solve_inner_P(Zt, H, 4.0, 4.0)
        g = grad_h(alpha, P, Zs, Ts, 4.0)
        assert g[2] == 0.0

    def test_zero_lambda(self):
        rng = np.random.default_rng(7)
        Zs, Ts, H = self._instance(rng)
        alpha = np.full(3, 1 / 3)
        P = solve_inner_P(weighted_fusion_input(Zs, Ts, alpha), H, 0.0, 4.0)
        assert np.all(grad_h(alpha, P, Zs, Ts, 0.0) == 0.0)

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(8)
        Zs, Ts, H = self._instance(rng)
        lam, beta = 4.0, 4.0
        eps = 1e-5
        for trial in range(5):
            alpha = rand_simplex_interior(rng, 3, floor=0.15)
            Zt = weighted_fusion_input(Zs, Ts, alpha)
            P = solve_inner_P(Zt, H, lam, beta)
            g = grad_h(alpha, P, Zs, Ts, lam)
            for a, b in [(0, 1), (1, 2), (0, 2)]:
                w = np.zeros(3)
                w[a], w[b] = 1.0, -1.0
                hp = h_exact(alpha + eps * w, Zs, Ts, H, lam, beta)
                hm = h_exact(alpha - eps * w, Zs, Ts, H, lam, beta)
                fd = (hp - hm) / (2 * eps)
                an = float(g @ w)
                assert abs(fd - an) <= 1e-4 * max(1.0, abs(an))


class TestReducedDirection:
    def test_equal_partials_zero_direction(self):
        g = reduced_descent_direction(np.array([2.0, 2.0, 2.0]), np.full(3, 1 / 3))
        assert np.all(g == 0.0)

    @settings(max_examples=60, deadline=None)
    @given(
        grad=hnp.arrays(
            np.float64,
            st.integers(2, 6),
            elements=st.floats(-10, 10, allow_nan=False),
        ),
        seed=st.integers(0, 2**31),
    )
    def test_sums_to_zero_and_descends(self, grad, seed):
        rng = np.random.default_rng(seed)
        alpha = rng.dirichlet(np.ones(grad.size))
        g = reduced_descent_direction(grad, alpha)
        assert abs(g.sum()) <= 1e-12
        assert float(grad @ g) <= 1e-12

    def test_clamps_at_boundary(self):
        alpha = np.array([0.7, 0.3, 0.0])
        grad = np.array([1.0, 0.5, 5.0])  # reduced value at v=2 is positive
        g = reduced_descent_direction(grad, alpha)
        assert g[2] == 0.0
        assert abs(g.sum()) <= 1e-15

    def test_boundary_descent_allowed_inward(self):
        alpha = np.array([0.7, 0.3, 0.0])
        grad = np.array([1.0, 0.5, -5.0])  # negative reduced value: may grow
        g = reduced_descent_direction(grad, alpha)
        assert g[2] > 0.0

    def test_pivot_tie_breaks_low_index(self):
        alpha = np.array([0.5, 0.5, 0.0])
        grad = np.array([3.0, 1.0, 2.0])
        g = reduced_descent_direction(grad, alpha)
        # pivot u = 0, reduced = grad - grad[0] = (0, -2, -1)
        assert np.isclose(g[1], 2.0)
        assert np.isclose(g[2], 1.0)
        assert np.isclose(g[0], -3.0)


class TestAgfMinmax:
    def _instance(self, rng, n=30, m=6, V=3, c=3):
        Zs = [rand_row_stochastic(rng, n, m) for _ in range(V)]
        P0 = rand_row_stochastic(rng, n, m)
        Ts = [procrustes(Z, P0) for Z in Zs]
        F = rand_row_stochastic(rng, n, c)
        Q = rand_row_stochastic(rng, m, c)
        return Zs, Ts, F, Q

    def test_single_view_short_circuit(self):
        rng = np.random.default_rng(9)
        Zs, Ts, F, Q = self._instance(rng, V=1)
        res = agf_minmax(Zs, Ts, F, Q, lam=1.0, beta=4.0)
        assert res.converged
        assert np.array_equal(res.alpha, [1.0])
        assert np.allclose(res.P.sum(axis=1), 1.0, atol=1e-12)
        expected = solve_inner_P(
            weighted_fusion_input(Zs, Ts, res.alpha), res.H, 1.0, 4.0
        )
        assert np.abs(res.P - expected).max() < 1e-14

    def test_identical_views_stay_uniform(self):
        rng = np.random.default_rng(10)
        Zs, Ts, F, Q = self._instance(rng, V=1)
        Zs, Ts = Zs * 3, Ts * 3
        res = agf_minmax(Zs, Ts, F, Q, lam=9.0, beta=4.0)
        assert res.converged
        assert np.allclose(res.alpha, 1 / 3, atol=1e-12)

    def test_converges_and_returns_consistent_state(self):
        rng = np.random.default_rng(11)
        Zs, Ts, F, Q = self._instance(rng)
        lam, beta = 9.0, 4.0
        res = agf_minmax(Zs, Ts, F, Q, lam=lam, beta=beta)
        assert res.converged
        assert res.n_iter <= 50
        assert abs(res.alpha.sum() - 1.0) <= 1e-10
        assert res.alpha.min() >= 0.0
        assert np.allclose(res.P.sum(axis=1), 1.0, atol=1e-10)
        if res.deltas:
            assert res.deltas[-1] <= 1e-4
        # returned P is the exact inner maximizer at the returned weights
        expected = solve_inner_P(
            weighted_fusion_input(Zs, Ts, res.alpha), res.H, lam, beta
        )
        assert np.abs(res.P - expected).max() < 1e-12

    def test_h_nonincreasing_per_accepted_step(self):
        for seed in range(10):
            rng = np.random.default_rng(seed)
            Zs, Ts, F, Q = self._instance(rng, n=60, m=8, V=3)
            res = agf_minmax(Zs, Ts, F, Q, lam=9.0, beta=4.0)
            for before, after in res.h_trace:
                assert after <= before + 1e-9

    def test_weights_stay_on_simplex_every_step(self):
        rng = np.random.default_rng(12)
        Zs, Ts, F, Q = self._instance(rng, n=40, m=8)
        res = agf_minmax(Zs, Ts, F, Q, lam=9.0, beta=4.0)
        for a in res.alpha_trace:
            assert abs(a.sum() - 1.0) <= 1e-10
            assert a.min() >= 0.0


class TestHConvexity:
    def test_convex_along_random_chords(self):
        rng = np.random.default_rng(13)
        n, m, V, c = 20, 6, 3, 3
        Zs = [rand_row_stochastic(rng, n, m) for _ in range(V)]
        P0 = rand_row_stochastic(rng, n, m)
        F = rng.standard_normal((n, c))
        Q = rng.standard_normal((m, c))
        H = compute_H(F, Q, P0)
        lam, beta = 4.0, 4.0
        for Ts in ([np.eye(m)] * V, [procrustes(Z, P0) for Z in Zs]):
            for _ in range(10):
                a1 = rng.dirichlet(np.ones(V))
                a2 = rng.dirichlet(np.ones(V))
                gamma = rng.uniform(0.1, 0.9)
                mix = gamma * a1 + (1 - gamma) * a2
                h_mix = h_exact(mix, Zs, Ts, H, lam, beta)
                bound = gamma * h_exact(a1, Zs, Ts, H, lam, beta) + (
                    1 - gamma
                ) * h_exact(a2, Zs, Ts, H, lam, beta)
                assert h_mix <= bound + 1e-8
