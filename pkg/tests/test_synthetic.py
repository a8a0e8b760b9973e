import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from mcme.network import load_reference
from mcme.synthetic import ordinal_cpt, random_dag, random_network


@given(st.lists(st.integers(2, 4), min_size=1, max_size=4), st.floats(0.2, 3.0), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_ordinal_rows_are_distributions(cards, noise, seed):
    rng = np.random.default_rng(seed)
    parents = list(range(1, len(cards)))
    cpt = ordinal_cpt(0, parents, cards, rng.normal(size=len(parents)), noise)
    probs = np.asarray(cpt.probs)
    assert probs.shape[-1] == cards[0]
    assert np.all(probs > 0)
    assert np.allclose(probs.reshape(-1, cards[0]).sum(axis=1), 1.0)


@given(st.integers(2, 12), st.integers(0, 500))
@settings(max_examples=40, deadline=None)
def test_random_dag_edge_count_and_acyclicity(n, seed):
    m = min(n - 1, 2 * n)
    g = random_dag(n, m, np.random.default_rng(seed), max_parents=3)
    assert len(g.edges()) == m
    assert g.is_acyclic()
    assert max(len(p) for p in g.parents) <= 3


def test_random_network_is_reproducible():
    a = random_network(6, 7, seed=3)
    b = random_network(6, 7, seed=3)
    assert a.dag.edges() == b.dag.edges()


def test_stand_in_edge_present():
    net = load_reference("property")
    names = net.dag.names
    assert (names.index("propertyManagement"), names.index("propertyExpenses")) in net.dag.edges()
