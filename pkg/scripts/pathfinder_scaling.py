"""MCME on the 109-node PATHFINDER network.

Times skeleton discovery and orientation with and without worker threads
and prints the structure metrics. Hill climbing is skipped here; it needs
minutes on a graph of this size.

    python3 scripts/pathfinder_scaling.py [--n 2000] [--jobs 4]
"""

import argparse
import time

from mcme import forward_sample, load_reference, structure_diff
from mcme.orientation import generate_dag
from mcme.pipeline import McmeConfig, build_skeleton


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()

    net = load_reference("pathfinder")
    data = forward_sample(net, args.n, args.seed)
    cfg = McmeConfig()
    for jobs in sorted({1, args.jobs}):
        t0 = time.monotonic()
        sk = build_skeleton(data, cfg, jobs=jobs)
        t1 = time.monotonic()
        dag = generate_dag(data, sk, cfg.lambda_hat, jobs=jobs)
        t2 = time.monotonic()
        print(f"jobs={jobs}: skeleton {t1 - t0:.1f}s ({len(sk.edges)} edges), orientation {t2 - t1:.1f}s")
    d = structure_diff(dag, net.dag)
    print(f"H={d.h_g} (A={d.a_g}, D={d.d_g}) trueadd={d.trueadd_pct:.1f}% falseadd={d.falseadd_pct:.1f}%")


if __name__ == "__main__":
    main()
