"""How a dependent pair washes out as the conditioning set grows.

Samples the PROPERTY stand-in network and prints G² against the chi-square
critical value for propertyManagement vs propertyExpenses as |Z| goes from
0 to 5. The critical value grows multiplicatively with every variable added
to Z while G² does not keep up, so a CI test with a large Z loses the
dependence. This is why the searches keep the conditioning set small.

    python3 scripts/conditioning_curve.py [--seed 0] [--n 1000]
"""

import argparse

from mcme import forward_sample, load_reference
from mcme.evaluation import explain_target


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--alpha", type=float, default=0.01)
    args = ap.parse_args()

    data = forward_sample(load_reference("property"), args.n, args.seed)
    rows = explain_target(data, "propertyManagement", ["propertyExpenses"], alpha=args.alpha, max_z=5)
    print(f"{'|Z|':>3}  {'G2':>9}  {'critical':>9}  {'dof':>5}  verdict")
    for r in rows:
        verdict = "dependent" if r["dependent"] else "independent"
        print(f"{r['z_size']:>3}  {r['g2']:9.2f}  {r['quantile']:9.2f}  {r['dof']:>5}  {verdict}")
        if r["conditioning"]:
            print(f"       Z = {r['conditioning']}")


if __name__ == "__main__":
    main()
