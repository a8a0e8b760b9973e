"""Two-node (TN) orientation score and skeleton-to-DAG conversion."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .dataset import Dataset
from .errors import McmeError
from .info import conditional_entropy, entropy, joint_entropy, mutual_information
from .network import Dag

log = logging.getLogger(__name__)


class DegenerateScoreError(McmeError):
    """TN score undefined because the child takes a single value in the data."""


FIT_SCALES = ("sample", "count")
# score differences this small (relative) are rounding noise, not evidence
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class TnScore:
    """TN score of ``parent -> child`` and its two components.

    ``cond_entropy`` is H(child | parent) and ``penalty`` the (non-positive)
    entropy penalty. ``value`` uses the fit scale chosen at scoring time;
    ``per_sample`` and ``count_scaled`` expose both scalings of the fit term.
    """

    child: int
    parent: int
    cond_entropy: float
    penalty: float
    n_samples: int
    fit_scale: str = "sample"

    @property
    def fit(self) -> float:
        scale = self.n_samples if self.fit_scale == "count" else 1.0
        return -scale * self.cond_entropy

    @property
    def value(self) -> float:
        return self.fit + self.penalty

    @property
    def per_sample(self) -> float:
        return -self.cond_entropy + self.penalty

    @property
    def count_scaled(self) -> float:
        return -self.n_samples * self.cond_entropy + self.penalty


def tn_score(data: Dataset, child, parent, lambda_hat, fit_scale="sample") -> TnScore:
    """Score of the hypothesis ``parent -> child``; larger is better.

    ``value = -H(child|parent) - lam * I(child, parent) / H(child, parent) * H(parent)``
    with ``lam = lambda_hat * log_k(N)``, ``k`` the number of states the child
    actually takes in the data. With ``fit_scale="count"`` the first term is
    ``-N H(child|parent)`` (the per-family log-likelihood), which leaves the
    penalty negligible for any ``lambda_hat`` in (0, 1) at realistic N.
    """
    if fit_scale not in FIT_SCALES:
        raise ValueError(f"fit_scale must be one of {FIT_SCALES}")
    c, p = data.index(child), data.index(parent)
    if c == p:
        raise ValueError("child and parent must differ")
    k = data.realized_states(c)
    if k < 2:
        raise DegenerateScoreError(f"variable {data.names[c]!r} is constant")
    n = data.n_samples
    h_cond = conditional_entropy(data, c, [p])
    h_joint = joint_entropy(data, [c, p])
    penalty = 0.0
    if h_joint > 0 and lambda_hat != 0:
        lam = lambda_hat * math.log(n) / math.log(k)
        penalty = -lam * mutual_information(data, c, p) / h_joint * entropy(data, p)
    return TnScore(c, p, h_cond, penalty, n, fit_scale)


@dataclass(frozen=True)
class OrientedEdge:
    parent: int
    child: int
    margin: float
    tie: bool = False


def orient_edge(data: Dataset, x, y, lambda_hat, fit_scale="sample"):
    """Direct the skeleton edge {x, y}, or return None if the score is degenerate.

    ``y -> x`` when ``g(x, y) > g(y, x)``, otherwise ``x -> y``. A tie (equal
    scores up to rounding) makes the lower-index node the parent with margin
    0, so the answer does not depend on argument order.
    """
    a, b = sorted((data.index(x), data.index(y)))
    try:
        g_ab = tn_score(data, a, b, lambda_hat, fit_scale).value
        g_ba = tn_score(data, b, a, lambda_hat, fit_scale).value
    except DegenerateScoreError as exc:
        log.warning("edge %s-%s dropped: %s", data.names[a], data.names[b], exc)
        return None
    margin = abs(g_ab - g_ba)
    if margin <= _TIE_TOL * max(1.0, abs(g_ab), abs(g_ba)):
        log.info("TN tie on %s-%s, lower index taken as parent", data.names[a], data.names[b])
        return OrientedEdge(a, b, 0.0, tie=True)
    if g_ab > g_ba:
        return OrientedEdge(b, a, margin)
    return OrientedEdge(a, b, margin)


def generate_dag(data: Dataset, skeleton, lambda_hat, jobs=1, report=None, fit_scale="sample") -> Dag:
    """Orient every skeleton edge and assemble an acyclic graph.

    Edges are inserted strongest margin first. An edge whose preferred
    direction would close a cycle is inserted reversed; if neither direction
    fits it is dropped. ``report`` (a list) receives one dict per reversed or
    dropped edge.
    """
    edges = sorted(skeleton.edges)
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            oriented = list(pool.map(lambda e: orient_edge(data, *e, lambda_hat, fit_scale), edges))
    else:
        oriented = [orient_edge(data, u, v, lambda_hat, fit_scale) for u, v in edges]

    dag = Dag(data.n_variables, names=data.names)
    names = data.names
    for (u, v), o in zip(edges, oriented):
        if o is None and report is not None:
            report.append({"edge": [names[u], names[v]], "action": "dropped", "reason": "degenerate score"})
    ranked = sorted((o for o in oriented if o is not None), key=lambda o: (-o.margin, o.parent, o.child))
    for o in ranked:
        if not dag.has_path(o.child, o.parent):
            dag.add_edge(o.parent, o.child, check_acyclic=False)
        elif not dag.has_path(o.parent, o.child):
            dag.add_edge(o.child, o.parent, check_acyclic=False)
            if report is not None:
                report.append({"edge": [names[o.parent], names[o.child]], "action": "reversed", "reason": "cycle"})
        else:
            log.warning("edge %s-%s dropped: both directions close a cycle", names[o.parent], names[o.child])
            if report is not None:
                report.append({"edge": [names[o.parent], names[o.child]], "action": "dropped", "reason": "cycle"})
    if not dag.is_acyclic():
        raise AssertionError("generate_dag produced a cycle")
    return dag
