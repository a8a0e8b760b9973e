from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import binary_net
from mcme.errors import FormatError, StructureError, UnknownReferenceError, ValidationError
from mcme.network import (
    REFERENCE_NETWORKS,
    Dag,
    format_network,
    forward_sample,
    joint_probability,
    load_reference,
    node_uniforms,
    parse_network,
    parse_network_text,
    read_bif,
)

TWO_NODE = """\
network tiny
variable A : a0 a1
variable B : b0 b1
probability A
  table : 0.3 0.7
probability B | A
  a0 : 0.9 0.1
  a1 : 0.2 0.8
"""


def test_parse_two_node():
    net = parse_network_text(TWO_NODE)
    assert net.name == "tiny"
    assert net.dag.parents == [[], [0]]
    assert np.allclose(net.cpts[1].probs, [[0.9, 0.1], [0.2, 0.8]])


@pytest.mark.parametrize(
    "name, nodes, edges",
    [("asia", 8, 8), ("sports", 9, 15), ("property", 27, 31), ("alarm", 37, 46), ("pathfinder", 109, 195)],
)
def test_bundled_network_sizes(name, nodes, edges):
    net = load_reference(name)
    assert (net.n_nodes, net.dag.n_edges) == (nodes, edges)
    assert net.dag.is_acyclic()


def test_unknown_bundled_network():
    with pytest.raises(UnknownReferenceError):
        load_reference("nonesuch")


def test_cycle_is_structure_error():
    text = """\
variable A : 0 1
variable B : 0 1
probability A | B
  0 : 0.5 0.5
  1 : 0.5 0.5
probability B | A
  0 : 0.5 0.5
  1 : 0.5 0.5
"""
    with pytest.raises(StructureError):
        parse_network_text(text)


def test_bad_row_sum_is_validation_error():
    with pytest.raises(ValidationError):
        parse_network_text(TWO_NODE.replace("0.3 0.7", "0.3 0.6"))


def test_row_sum_within_tolerance_is_accepted():
    net = parse_network_text(TWO_NODE.replace("0.3 0.7", "0.3 0.7000005"))
    assert net.cpts[0].probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_undeclared_parent_is_reference_error():
    with pytest.raises(UnknownReferenceError):
        parse_network_text(TWO_NODE.replace("probability B | A", "probability B | C"))


def test_undeclared_state_is_reference_error():
    with pytest.raises(UnknownReferenceError):
        parse_network_text(TWO_NODE.replace("  a1 : 0.2", "  a7 : 0.2"))


def test_format_error_carries_position():
    with pytest.raises(FormatError) as exc:
        parse_network_text(TWO_NODE.replace("  a0 : 0.9 0.1", "  a0 : 0.9 x"))
    assert exc.value.line == 7
    assert exc.value.column is not None


def test_missing_configuration():
    with pytest.raises(FormatError):
        parse_network_text(TWO_NODE.replace("  a1 : 0.2 0.8\n", ""))


@pytest.mark.parametrize("name", ["asia", "sports", "property", "alarm"])
def test_format_parse_roundtrip(name):
    net = load_reference(name)
    again = parse_network_text(format_network(net))
    assert again.dag == net.dag
    assert again.variables == net.variables
    for a, b in zip(net.cpts, again.cpts):
        assert a.parents == b.parents
        assert np.allclose(a.probs, b.probs, atol=1e-12)


def test_read_bif(tmp_path):
    bif = """network unknown {
}
variable A {
  type discrete [ 2 ] { yes, no };
}
variable B {
  type discrete [ 3 ] { lo, mid, hi };
}
probability ( A ) {
  table 0.4, 0.6;
}
probability ( B | A ) {
  (yes) 0.1, 0.2, 0.7;
  (no) 0.5, 0.25, 0.25;
}
"""
    p = tmp_path / "two.bif"
    p.write_text(bif)
    net = read_bif(p)
    assert net.name == "two"
    assert net.dag.parents == [[], [0]]
    assert np.allclose(net.cpts[1].probs, [[0.1, 0.2, 0.7], [0.5, 0.25, 0.25]])
    assert parse_network(p).dag == net.dag


def test_dag_operations():
    g = Dag(3)
    g.add_edge(0, 1)
    g.add_edge(1, 2)
    with pytest.raises(StructureError):
        g.add_edge(2, 0)
    with pytest.raises(StructureError):
        g.add_edge(1, 1)
    with pytest.raises(StructureError):
        g.add_edge(0, 1)
    assert g.has_path(0, 2) and not g.has_path(2, 0)
    assert g.topological_order() == [0, 1, 2]
    g.reverse_edge(0, 1)
    assert g.edges() == [(1, 0), (1, 2)]
    assert Dag.from_dict(g.to_dict()) == g
    with pytest.raises(StructureError):
        Dag(2, [[1], [0]])


def test_deterministic_chain_sampling():
    net = binary_net([[], [0], [1]], [[1.0], [0.0, 1.0], [1.0, 0.0]])
    data = forward_sample(net, 200, seed=5)
    # A=0 always, B copies "not A" -> 1, C = 0 when B = 1
    assert set(map(tuple, data.columns.T)) == {(0, 1, 1)}
    assert joint_probability(net, [0, 1, 1]) == 1.0
    for a in product([0, 1], repeat=3):
        if a != (0, 1, 1):
            assert joint_probability(net, a) == 0.0


def test_fair_coin_frequency():
    net = binary_net([[]], [[0.5]])
    freq = (forward_sample(net, 10_000, seed=11).columns[0] == 0).mean()
    assert 0.47 <= freq <= 0.53


def test_sampling_is_deterministic():
    net = load_reference("alarm")
    assert forward_sample(net, 300, seed=9) == forward_sample(net, 300, seed=9)
    assert forward_sample(net, 300, seed=9) != forward_sample(net, 300, seed=10)


def test_node_streams_can_be_sharded():
    whole = node_uniforms(4, 2, 0, 50)
    parts = np.concatenate([node_uniforms(4, 2, s, 7) for s in range(0, 49, 7)])
    assert np.array_equal(whole[:49], parts)


def test_joint_probability_independent_pair():
    net = binary_net([[], []], [[0.5], [0.5]])
    assert joint_probability(net, [0, 1]) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        joint_probability(net, [0, 2])
    with pytest.raises(ValueError):
        joint_probability(net, [0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 8))
def test_joint_probability_sums_to_one(seed, n):
    rng = np.random.default_rng(seed)
    parents = [sorted(int(p) for p in rng.choice(i, size=min(i, int(rng.integers(0, 3))), replace=False))
               for i in range(n)]
    tables = [list(rng.uniform(0.05, 0.95, size=2 ** len(p))) for p in parents]
    net = binary_net(parents, tables)
    total = sum(joint_probability(net, a) for a in product([0, 1], repeat=n))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_asia_joint_sums_to_one():
    net = load_reference("asia")
    total = sum(joint_probability(net, a) for a in product([0, 1], repeat=8))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_sample_frequencies_fit_joint_probability():
    chi2 = pytest.importorskip("scipy.stats").chi2
    net = binary_net([[], [0], [0, 1], [2]], [[0.3], [0.8, 0.25], [0.9, 0.6, 0.4, 0.05], [0.7, 0.2]])
    n = 50_000
    data = forward_sample(net, n, seed=21)
    codes = np.ravel_multi_index(tuple(data.columns), (2, 2, 2, 2))
    observed = np.bincount(codes, minlength=16)
    expected = np.array([joint_probability(net, a) for a in product([0, 1], repeat=4)]) * n
    stat = float(((observed - expected) ** 2 / expected).sum())
    assert chi2.sf(stat, 15) > 0.001


def test_reference_names_cover_bundle():
    assert set(REFERENCE_NETWORKS) >= {"asia", "sports", "property", "alarm"}
