"""Frontier on a synthetic two-layer network at the size of the original
Twitter dataset (3456 users), with independent planted partitions per layer.

    python scripts/scale_frontier.py --p 3456 --k 4
"""
import argparse
import time

import numpy as np

from mlpareto import SpectralConfig, frontier, knee_point, nmi
from mlpareto.synthetic import disagreeing_labels, sbm_network


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3456)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--p-in", type=float, default=0.05)
    ap.add_argument("--p-out", type=float, default=0.002)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--symmetric", action="store_true")
    args = ap.parse_args()

    a, b = disagreeing_labels(args.p, args.k, seed=args.seed)
    t0 = time.perf_counter()
    net = sbm_network([a.assignment, b.assignment], args.p_in, args.p_out, seed=args.seed)
    print(f"generated p={net.p}, edges {net.edge_count(0)} / {net.edge_count(1)} "
          f"({time.perf_counter() - t0:.1f} s)")
    t0 = time.perf_counter()
    res = frontier(net, [SpectralConfig(args.k, seed=1), SpectralConfig(args.k, seed=2)],
                   symmetric=args.symmetric)
    elapsed = time.perf_counter() - t0
    c1, c2 = res.path[0].partition, res.path[-1].partition
    print(f"frontier: {elapsed:.1f} s, path {len(res.path)}, front {len(res.front)}")
    print(f"endpoint NMI vs planted: layer0 {nmi(c1, a):.3f}, layer1 {nmi(c2, b):.3f}")
    front = np.array([pt.objectives.values for pt in res.front])
    print(f"front ranges: layer0 [{front[:, 0].min():.4f}, {front[:, 0].max():.4f}], "
          f"layer1 [{front[:, 1].min():.4f}, {front[:, 1].max():.4f}]")
    knee = knee_point(res)
    print(f"knee: step {knee.step}, objectives {tuple(round(v, 4) for v in knee.objectives)}")


if __name__ == "__main__":
    main()
