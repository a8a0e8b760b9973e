"""Median structure metrics for MCME and hill climbing over several seeds.

Reproduces the benchmark comparison on the bundled networks (ASIA, ALARM
and the SPORTS/PROPERTY stand-ins). BIC is reported in bits.

    python3 scripts/benchmark_table.py [--seeds 10] [--nets asia sports]
"""

import argparse

from mcme.evaluation import format_reports, run_benchmark
from mcme.network import REFERENCE_NETWORKS
from mcme.pipeline import McmeConfig

# per-network settings that work well at N=1000
CONFIGS = {
    "sports": McmeConfig.from_flat(ct_memory=2, lambda_hat=0.2),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nets", nargs="+", default=["asia", "sports", "property", "alarm"],
                    choices=REFERENCE_NETWORKS)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--n", type=int, default=1000)
    args = ap.parse_args()

    reports = []
    for name in args.nets:
        cfg = CONFIGS.get(name, McmeConfig())
        reports += run_benchmark([name], cfg, ("mcme", "hc"), n=args.n, seeds=range(args.seeds), bic_base=2)
    print(format_reports(reports, "table"))


if __name__ == "__main__":
    main()
