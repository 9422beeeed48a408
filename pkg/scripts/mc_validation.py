"""Closed forms against the Monte Carlo oracle on random parameter draws.

Prints one line per point with the z-score; exits non-zero if any
|z| exceeds the limit.
"""

import argparse
import sys

import numpy as np

from cipc_covert import detection as d
from cipc_covert import optimize as op
from cipc_covert.model import SchemeConfig, SystemParams
from cipc_covert.montecarlo import McConfig, simulate_miss_detection, simulate_xi_bar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--draws", type=int, default=10 ** 6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--z-limit", type=float, default=4.0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for i in range(args.points):
        scheme = ("conventional", "truncated")[i % 2]
        sp = SystemParams(lambda_ab=rng.uniform(0.3, 3), lambda_aw=rng.uniform(0.3, 3),
                          lambda_bw=rng.uniform(0.3, 3))
        cfg = SchemeConfig(scheme, q=10 ** rng.uniform(-1, 1), p_b_max=10 ** rng.uniform(-1, 1),
                           rate=0.1, epsilon=0.1, p_a_max=10 ** rng.uniform(0, 1))
        g = 10 ** rng.uniform(-1, 0.5)
        ctx = d.make_context(g, cfg, sp)
        tau = rng.uniform(sp.sigma2_w, 1.5 * ctx.nu)
        mc = McConfig(args.seed, args.draws, i)
        z_beta = simulate_miss_detection(tau, g, cfg, sp, mc).z_score(
            d.miss_detection(tau, ctx, cfg, sp))
        z_xb = simulate_xi_bar(cfg.q, cfg, sp, mc, "nested").z_score(op.xi_bar(cfg.q, cfg, sp))
        worst = max(worst, abs(z_beta), abs(z_xb))
        print(f"{i:2d} {scheme:<12} beta z={z_beta:+.2f}  xi_bar(nested) z={z_xb:+.2f}")
    print(f"worst |z| = {worst:.2f}")
    sys.exit(0 if worst <= args.z_limit else 1)


if __name__ == "__main__":
    main()
