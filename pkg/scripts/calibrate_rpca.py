"""Calibration sweep that froze the robust_tpca penalty scale.

Runs the planted corruption model (random (2,2,2)-Tucker low-rank part on a
30x30x30 tensor plus 5% +-10 spikes) across penalty scales and seeds, and
reports convergence speed, recovery quality, and residual-trace monotonicity.
The shipped default corresponds to the mu_scale row that converges fastest
while keeping perfect support precision; see _MU_SCALE in tensorkit/rpca.py.

Usage: python scripts/calibrate_rpca.py
"""

import numpy as np

import tensorkit as tk


def planted(seed, shape=(30, 30, 30), ranks=(2, 2, 2), frac=0.05, amp=10.0):
    low = tk.tucker_to_tensor(tk.random_tucker(shape, ranks, seed))
    rng = np.random.default_rng(seed + 1000)
    total = low.size
    count = int(round(frac * total))
    idx = rng.choice(total, size=count, replace=False)
    spikes = np.zeros(total)
    spikes[idx] = amp * rng.choice([-1.0, 1.0], size=count)
    return low, spikes.reshape(shape)


def main():
    print(f"{'mu_scale':>9} {'seed':>4} {'conv':>5} {'iters':>5} "
          f"{'L_err':>9} {'precision':>9} {'monotone':>8}")
    for mu_scale in (0.3, 1.0, 3.0, 10.0, 30.0, 100.0):
        for seed in range(5):
            low, spikes = planted(seed)
            x = low + spikes
            mu = mu_scale * x.ndim / tk.frobenius_norm(x)
            res = tk.robust_tpca(x, tk.RpcaOptions(mu=mu))
            l_err = np.linalg.norm(res.low_rank - low) / np.linalg.norm(low)
            detected = res.sparse != 0
            precision = (detected & (spikes != 0)).sum() / max(detected.sum(), 1)
            tr = res.residual_trace
            monotone = all(tr[i + 1] <= tr[i] for i in range(len(tr) - 1))
            print(f"{mu_scale:>9.1f} {seed:>4} {str(res.converged):>5} "
                  f"{res.iterations_run:>5} {l_err:>9.1e} {precision:>9.3f} "
                  f"{str(monotone):>8}")


if __name__ == "__main__":
    main()
