import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_dataset
from mcme.dataset import Dataset
from mcme.errors import CapacityError
from mcme.info import conditional_entropy, entropy, joint_entropy
from mcme.network import Dag, forward_sample, load_reference
from mcme.scores import bic_score, family_lld, family_parameters, hill_climb, lld_score
from test_info import random_data


def random_dag(n, rng, p=0.4):
    order = rng.permutation(n)
    parents = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                parents[order[j]].append(int(order[i]))
    return Dag(n, parents)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_lld_is_minus_n_conditional_entropy(seed):
    rng = np.random.default_rng(seed)
    d = random_data(seed, n_vars=4, n=150)
    dag = random_dag(4, rng)
    s = lld_score(d, dag)
    for i in range(4):
        pa = dag.parents[i]
        h = oracles.h(d, [i, *pa]) - (oracles.h(d, pa) if pa else 0.0)
        assert s.per_node[i] == pytest.approx(-d.n_samples * h, abs=1e-8)
        # same quantity as N * (I(X; pa) - H(X))
        if pa:
            i_xpa = entropy(d, i) + joint_entropy(d, pa) - joint_entropy(d, [i, *pa])
            assert s.per_node[i] == pytest.approx(d.n_samples * (i_xpa - entropy(d, i)), abs=1e-8)
    assert s.total == pytest.approx(sum(s.per_node.values()))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_decomposability(seed):
    rng = np.random.default_rng(seed)
    d = random_data(seed, n_vars=4, n=150)
    dag = random_dag(4, rng)
    before = bic_score(d, dag)
    child = int(rng.integers(4))
    if dag.parents[child]:
        p = dag.parents[child][0]
        dag.remove_edge(p, child)
        after = bic_score(d, dag)
        assert after.total - before.total == pytest.approx(after.per_node[child] - before.per_node[child], abs=1e-8)


def test_bic_penalty_and_base():
    d = random_data(3, n_vars=3, n=400)
    dag = Dag(3, [[], [0], [0, 1]])
    lld, bic = lld_score(d, dag), bic_score(d, dag)
    k = sum(family_parameters(d, i, dag.parents[i]) for i in range(3))
    assert bic.total == pytest.approx(lld.total - 0.5 * math.log(400) * k)
    assert bic_score(d, dag, base=2).total == pytest.approx(bic.total / math.log(2))
    with pytest.raises(ValueError):
        bic_score(d, dag, base=1)


def test_mismatched_graph():
    with pytest.raises(ValueError):
        lld_score(random_data(0, n_vars=3), Dag(4))


def test_absurd_parent_set_rejected():
    d = random_data(0, n_vars=5)
    small = Dataset(d.variables, d.columns, cell_cap=8)
    with pytest.raises(CapacityError):
        lld_score(small, Dag(5, [[], [], [], [], [0, 1, 2, 3]]))


def test_hill_climb_independent_data_stays_empty():
    rng = np.random.default_rng(0)
    d = make_dataset(rng.integers(0, 2, (4, 2000)), [2] * 4)
    assert hill_climb(d).n_edges == 0


def test_hill_climb_correlated_pair():
    x = np.arange(300) % 2
    dag = hill_climb(make_dataset([x, x]))
    assert dag.n_edges == 1
    assert hill_climb(make_dataset([x, x])) == dag


@pytest.mark.parametrize("seed", range(3))
def test_hill_climb_improves_on_empty(seed):
    d = forward_sample(load_reference("asia"), 1000, seed)
    dag = hill_climb(d)
    assert dag.is_acyclic()
    assert bic_score(d, dag).total >= bic_score(d, Dag(8)).total
    assert hill_climb(d, max_iters=2).n_edges <= 2


def test_hill_climb_from_truth_does_not_lose_score():
    net = load_reference("asia")
    d = forward_sample(net, 1000, 4)
    dag = hill_climb(d, start=net.dag)
    assert bic_score(d, dag).total >= bic_score(d, net.dag).total
