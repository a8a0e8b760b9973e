"""Regenerate the network files shipped in ``mcme/networks``.

ASIA, ALARM and PATHFINDER are converted from their public BIF files (pass
the directory holding ``asia.bif``, ``alarm.bif`` and ``pathfinder.bif``).
SPORTS and PROPERTY are synthetic stand-ins with the published node and
edge counts, built from ordinal latent-threshold CPTs; the original CPTs
are not bundled here.

    python scripts/make_reference_networks.py --bif-dir /path/to/bifs
"""

import argparse
from pathlib import Path

import numpy as np

from mcme.network import BayesNet, read_bif, write_network
from mcme.dataset import VariableMeta
from mcme.synthetic import network_from_spec, ordinal_cpt, random_dag

OUT = Path(__file__).resolve().parents[1] / "src" / "mcme" / "networks"


def levels(prefix, n):
    return [f"{prefix}{k}" for k in range(n)]


# Football match model: team strength drives possession and shots, shots on
# target drive goals, goals decide the result (home, draw, away).
SPORTS_VARIABLES = {
    "RDlevel": levels("rd", 8),
    "possession": levels("p", 5),
    "HTshots": levels("s", 7),
    "ATshots": levels("s", 7),
    "HTshotOnTarget": levels("t", 6),
    "ATshotsOnTarget": levels("t", 6),
    "HTgoals": levels("g", 5),
    "ATgoals": levels("g", 5),
    "HDA": ["H", "D", "A"],
}
SPORTS_WEIGHTS = {
    ("RDlevel", "possession"): 2.0,
    ("RDlevel", "HTshots"): 1.2,
    ("possession", "HTshots"): 1.5,
    ("RDlevel", "ATshots"): -1.2,
    ("possession", "ATshots"): -1.5,
    ("RDlevel", "HTshotOnTarget"): 0.8,
    ("HTshots", "HTshotOnTarget"): 2.0,
    ("RDlevel", "ATshotsOnTarget"): -0.8,
    ("ATshots", "ATshotsOnTarget"): 2.0,
    ("RDlevel", "HTgoals"): 0.8,
    ("HTshotOnTarget", "HTgoals"): 1.8,
    ("RDlevel", "ATgoals"): -0.8,
    ("ATshotsOnTarget", "ATgoals"): 1.8,
    ("HTgoals", "HDA"): -2.5,
    ("ATgoals", "HDA"): 2.5,
}
SPORTS_NOISE = 0.7


def sports() -> BayesNet:
    noise = {n: SPORTS_NOISE for n in SPORTS_VARIABLES}
    return network_from_spec("sports", SPORTS_VARIABLES, list(SPORTS_WEIGHTS), SPORTS_WEIGHTS, noise)


PROPERTY_NAMES = [
    "propertyManagement", "propertyExpenses", "propertyPurchaseValue", "rentalIncome",
    "rentalGrossYield", "rentalNetYield", "capitalGrowth", "interestRate", "borrowing",
    "loanInterest", "incomeTax", "stampDutyTax", "capitalGainsTax", "otherPropertyExpenses",
    "maintenance", "insurance", "agentFees", "occupancy", "marketDemand", "localEconomy",
    "propertyAge", "refurbishment", "netProfit", "cashFlow", "equity", "lenderPolicy",
    "investorIncome",
]


def property_net(seed=7) -> BayesNet:
    """27 nodes, 31 edges, with propertyManagement -> propertyExpenses."""
    rng = np.random.default_rng(seed)
    n = len(PROPERTY_NAMES)
    dag = random_dag(n, 31, rng, max_parents=3)
    # the first edge carries the management -> expenses pair
    u, v = dag.edges()[0]
    rest = iter(PROPERTY_NAMES[2:])
    names = [PROPERTY_NAMES[0] if i == u else PROPERTY_NAMES[1] if i == v else next(rest) for i in range(n)]
    cards = [int(rng.integers(2, 5)) for _ in range(n)]
    variables = [VariableMeta(names[i], tuple(levels("s", cards[i]))) for i in range(n)]
    cpts = []
    for i in range(n):
        pa = dag.parents[i]
        w = rng.uniform(0.5, 1.0, len(pa)) * rng.choice([-1.0, 1.0], len(pa)) * 3.0
        cpts.append(ordinal_cpt(i, pa, cards, w, noise=1.0))
    dag.names = names
    net = BayesNet(variables, dag, cpts, name="property")
    assert net.dag.has_edge(net.index("propertyManagement"), net.index("propertyExpenses"))
    return net


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bif-dir", type=Path, help="directory with asia/alarm/pathfinder .bif files")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    nets = [sports(), property_net()]
    if args.bif_dir:
        nets += [read_bif(args.bif_dir / f"{n}.bif", name=n) for n in ("asia", "alarm", "pathfinder")]
    for net in nets:
        path = args.out / f"{net.name}.net"
        write_network(net, path)
        print(f"{path}: {net.n_nodes} nodes, {net.dag.n_edges} edges")


if __name__ == "__main__":
    main()
