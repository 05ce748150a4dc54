import numpy as np
import pytest
from numpy.testing import assert_allclose

from tensorkit import (
    RpcaOptions,
    frobenius_norm,
    random_tucker,
    robust_tpca,
    soft_threshold,
    svd_threshold,
    tucker_to_tensor,
)


def planted_corruption(seed, shape=(30, 30, 30), ranks=(2, 2, 2), frac=0.05, amp=10.0):
    low = tucker_to_tensor(random_tucker(shape, ranks, seed))
    rng = np.random.default_rng(seed + 1000)
    total = low.size
    count = int(round(frac * total))
    idx = rng.choice(total, size=count, replace=False)
    spikes = np.zeros(total)
    spikes[idx] = amp * rng.choice([-1.0, 1.0], size=count)
    return low, spikes.reshape(shape)


class TestSoftThreshold:
    def test_tau_zero_identity(self):
        x = np.random.default_rng(61).standard_normal((4, 5))
        assert_allclose(soft_threshold(x, 0.0), x)

    def test_scalar_cases(self):
        assert soft_threshold(np.array(3.0), 1.0) == pytest.approx(2.0)
        assert soft_threshold(np.array(-0.5), 1.0) == 0.0
        assert soft_threshold(np.array(-2.5), 1.0) == pytest.approx(-1.5)

    def test_matches_prox_definition_by_grid_search(self):
        # argmin_z 0.5 (z-x)^2 + tau |z| located by dense search, then compared
        grid = np.linspace(-6.0, 6.0, 240001)  # step 5e-5
        for x in (-3.2, -0.7, 0.0, 0.4, 2.9):
            for tau in (0.0, 0.5, 1.3):
                objective = 0.5 * (grid - x) ** 2 + tau * np.abs(grid)
                best = grid[np.argmin(objective)]
                assert abs(float(soft_threshold(np.array(x), tau)) - best) < 1e-4

    def test_contraction(self):
        rng = np.random.default_rng(62)
        for _ in range(20):
            x = rng.standard_normal(30)
            y = rng.standard_normal(30)
            tau = float(rng.uniform(0, 2))
            lhs = np.linalg.norm(soft_threshold(x, tau) - soft_threshold(y, tau))
            assert lhs <= np.linalg.norm(x - y) + 1e-12

    def test_negative_tau_rejected(self):
        with pytest.raises(ValueError):
            soft_threshold(np.ones(3), -0.1)


class TestSvdThreshold:
    def test_tau_zero_identity(self):
        m = np.random.default_rng(63).standard_normal((5, 4))
        assert_allclose(svd_threshold(m, 0.0), m, atol=1e-12)

    def test_diagonal_case(self):
        m = np.diag([3.0, 1.0])
        assert_allclose(svd_threshold(m, 2.0), np.diag([1.0, 0.0]), atol=1e-12)

    def test_nuclear_norm_of_result(self):
        rng = np.random.default_rng(64)
        m = rng.standard_normal((8, 6))
        tau = 0.8
        s = np.linalg.svd(m, compute_uv=False)
        out = svd_threshold(m, tau)
        out_nuc = np.linalg.svd(out, compute_uv=False).sum()
        assert out_nuc == pytest.approx(np.maximum(s - tau, 0).sum(), abs=1e-10)

    def test_rank_bound(self):
        rng = np.random.default_rng(65)
        m = rng.standard_normal((10, 7))
        s = np.linalg.svd(m, compute_uv=False)
        tau = s[3]  # keeps at most 3 values strictly above
        out_s = np.linalg.svd(svd_threshold(m, tau), compute_uv=False)
        assert np.sum(out_s > 1e-10) <= 3

    def test_negative_tau_rejected(self):
        with pytest.raises(ValueError):
            svd_threshold(np.eye(3), -1.0)


class TestRobustTpca:
    def test_zero_input(self):
        res = robust_tpca(np.zeros((5, 5, 5)))
        assert res.converged
        assert_allclose(res.low_rank, 0.0)
        assert_allclose(res.sparse, 0.0)

    def test_uncorrupted_large_lambda(self):
        x = tucker_to_tensor(random_tucker((20, 20, 20), (2, 2, 2), 66))
        res = robust_tpca(x, RpcaOptions(lam=1e3))
        assert res.converged
        assert np.max(np.abs(res.sparse)) < 1e-6
        assert frobenius_norm(res.low_rank - x) / frobenius_norm(x) < 1e-6

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_planted_recovery(self, seed):
        low, spikes = planted_corruption(seed)
        x = low + spikes
        res = robust_tpca(x)
        assert res.converged
        assert frobenius_norm(res.low_rank - low) / frobenius_norm(low) < 0.05
        detected = res.sparse != 0
        true_support = spikes != 0
        precision = (detected & true_support).sum() / max(detected.sum(), 1)
        assert precision >= 0.9
        feas = frobenius_norm(res.low_rank + res.sparse - x) / frobenius_norm(x)
        assert feas <= 1e-6

    def test_residual_trace_nonincreasing_after_burn_in(self):
        for seed in (0, 1, 2, 3, 4):
            low, spikes = planted_corruption(seed)
            res = robust_tpca(low + spikes)
            tr = res.residual_trace
            assert all(tr[i + 1] <= tr[i] for i in range(10, len(tr) - 1))

    def test_feasibility_at_convergence(self):
        x = np.random.default_rng(67).standard_normal((12, 10, 8))
        res = robust_tpca(x, RpcaOptions(max_iters=500))
        if res.converged:
            feas = frobenius_norm(res.low_rank + res.sparse - x) / max(
                frobenius_norm(x), 1e-15)
            assert feas <= 1e-7

    def test_idempotence_on_own_output(self):
        low, spikes = planted_corruption(3)
        first = robust_tpca(low + spikes)
        again = robust_tpca(first.low_rank + first.sparse)
        tol = RpcaOptions().tol
        denom = max(frobenius_norm(first.low_rank), 1e-15)
        assert frobenius_norm(again.low_rank - first.low_rank) / denom <= 10 * tol
        denom = max(frobenius_norm(first.sparse), 1e-15)
        assert frobenius_norm(again.sparse - first.sparse) / denom <= 10 * tol

    def test_nonconvergence_flag_not_exception(self):
        x = np.random.default_rng(68).standard_normal((8, 8, 8))
        res = robust_tpca(x, RpcaOptions(max_iters=3))
        assert not res.converged
        assert res.iterations_run == 3
        assert len(res.residual_trace) == 3

    def test_order_one_rejected(self):
        with pytest.raises(ValueError, match="order"):
            robust_tpca(np.ones(5))

    def test_matrix_input_works(self):
        low = np.outer(np.arange(1.0, 9.0), np.arange(1.0, 7.0))
        res = robust_tpca(low, RpcaOptions(lam=10.0, max_iters=500))
        assert res.converged

    def test_option_validation(self):
        with pytest.raises(ValueError):
            RpcaOptions(lam=0.0)
        with pytest.raises(ValueError):
            RpcaOptions(mu=-1.0)
        with pytest.raises(ValueError):
            RpcaOptions(max_iters=0)
