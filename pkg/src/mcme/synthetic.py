"""Synthetic networks: ordinal latent-threshold CPTs and random DAGs.

These generate the stand-ins shipped for benchmark networks whose original
files are not redistributable here, and the small test networks used by the
test suite.
"""

from __future__ import annotations

from itertools import product
from math import erf, sqrt

import numpy as np

from .dataset import VariableMeta
from .network import BayesNet, Cpt, Dag


def _phi(x):
    return 0.5 * (1.0 + erf(x / sqrt(2.0)))


def ordinal_cpt(child, parents, cards, weights, noise) -> Cpt:
    """CPT of an ordinal child driven by a noisy weighted sum of its parents.

    Each parent state is mapped to [-1, 1] by rank; the child's latent value
    is ``sum(w * parent) + N(0, noise^2)`` and is cut into ``cards[child]``
    bins at normal quantiles, so the child's marginal is roughly uniform when
    the parents are.
    """
    r = cards[child]
    pa_cards = [cards[p] for p in parents]
    w = np.asarray(weights, dtype=float)
    spread = sqrt(float(np.sum(w**2)) / 3.0 + noise**2)
    qs = np.array([_normal_quantile((k + 1) / r) for k in range(r - 1)]) * spread
    rows = []
    for config in product(*(range(c) for c in pa_cards)) if parents else [()]:
        x = np.array([2.0 * s / (c - 1) - 1.0 if c > 1 else 0.0 for s, c in zip(config, pa_cards)])
        m = float(w @ x) if parents else 0.0
        cdf = [_phi((t - m) / noise) for t in qs]
        p = np.diff([0.0, *cdf, 1.0])
        p = np.clip(p, 1e-6, None)
        rows.append(p / p.sum())
    probs = np.round(np.array(rows), 6)
    return Cpt(child, tuple(parents), probs / probs.sum(axis=1, keepdims=True))


def _normal_quantile(q):
    lo, hi = -10.0, 10.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _phi(mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def random_dag(n_nodes, n_edges, rng, max_parents=3) -> Dag:
    """Uniformly chosen edges consistent with a random topological order."""
    order = rng.permutation(n_nodes)
    pairs = [(order[i], order[j]) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    rng.shuffle(pairs)
    parents = [[] for _ in range(n_nodes)]
    count = 0
    for u, v in pairs:
        if count == n_edges:
            break
        if len(parents[v]) < max_parents:
            parents[v].append(int(u))
            count += 1
    if count < n_edges:
        raise ValueError("cannot place that many edges under the in-degree limit")
    return Dag(n_nodes, [sorted(p) for p in parents])


def random_network(n_nodes, n_edges, seed=0, cards=(2, 4), max_parents=3, strength=4.0,
                   names=None, name="random") -> BayesNet:
    """Random DAG with ordinal CPTs of random (signed) strength."""
    rng = np.random.default_rng(seed)
    dag = random_dag(n_nodes, n_edges, rng, max_parents)
    if names is None:
        names = [f"V{i}" for i in range(n_nodes)]
    card = [int(rng.integers(cards[0], cards[1] + 1)) for _ in range(n_nodes)]
    variables = [VariableMeta(names[i], tuple(f"s{k}" for k in range(card[i]))) for i in range(n_nodes)]
    cpts = []
    for i in range(n_nodes):
        pa = dag.parents[i]
        w = rng.uniform(0.5, 1.0, len(pa)) * rng.choice([-1.0, 1.0], len(pa)) * strength
        cpts.append(ordinal_cpt(i, pa, card, w, noise=1.0))
    dag.names = list(names)
    return BayesNet(variables, dag, cpts, name=name)


def network_from_spec(name, variables, edges, weights, noise) -> BayesNet:
    """Ordinal network from ``variables`` ({name: states}) and weighted ``edges``.

    ``weights`` maps (parent, child) to the latent weight; ``noise`` maps each
    child name to its latent noise level.
    """
    names = list(variables)
    idx = {n: i for i, n in enumerate(names)}
    cards = [len(variables[n]) for n in names]
    parents = [[] for _ in names]
    for u, v in edges:
        parents[idx[v]].append(idx[u])
    dag = Dag(len(names), parents, names)
    cpts = []
    for i, n in enumerate(names):
        w = [weights[(names[p], n)] for p in parents[i]]
        cpts.append(ordinal_cpt(i, parents[i], cards, w, noise.get(n, 1.0)))
    metas = [VariableMeta(n, tuple(variables[n])) for n in names]
    return BayesNet(metas, dag, cpts, name=name)
