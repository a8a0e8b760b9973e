import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_dataset
from mcme.dataset import Dataset, VariableMeta, contingency, load_csv
from mcme.errors import CapacityError, FormatError, UnknownReferenceError
from mcme.network import load_reference, forward_sample


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_small_csv(tmp_path):
    d = load_csv(write(tmp_path, "a,b,c\n0,1,x\n1,1,y\n"))
    assert d.n_samples == 2
    assert d.names == ["a", "b", "c"]
    assert d.cardinalities == [2, 1, 2]


def test_states_coded_by_first_appearance(tmp_path):
    d = load_csv(write(tmp_path, "x\nlow\nhigh\nlow\nmid\n"))
    assert d.variables[0].states == ("low", "high", "mid")
    assert d.columns[0].tolist() == [0, 1, 0, 2]


def test_reload_is_identical(tmp_path):
    p = write(tmp_path, "a,b\nu,v\nw,v\nu,z\n")
    assert load_csv(p) == load_csv(p)


def test_delimiter_and_headerless(tmp_path):
    d = load_csv(write(tmp_path, "1;2\n3;2\n"), delimiter=";", header=False)
    assert d.names == ["X0", "X1"]
    assert d.cardinalities == [2, 1]


def test_ragged_row_reports_line(tmp_path):
    with pytest.raises(FormatError) as exc:
        load_csv(write(tmp_path, "a,b\n1,2\n1\n"))
    assert exc.value.line == 3


def test_empty_file(tmp_path):
    with pytest.raises(FormatError):
        load_csv(write(tmp_path, ""))
    with pytest.raises(FormatError):
        load_csv(write(tmp_path, "a,b\n"))


def test_empty_cell(tmp_path):
    with pytest.raises(FormatError) as exc:
        load_csv(write(tmp_path, "a,b\n1,\n"))
    assert (exc.value.line, exc.value.column) == (2, 2)


def test_network_coding_keeps_unseen_states(tmp_path):
    net = load_reference("asia")
    p = write(tmp_path, "asia,tub,smoke,lung,bronc,either,xray,dysp\n" + "no,no,yes,no,no,no,no,no\n")
    d = load_csv(p, network=net)
    assert d.cardinalities == [2] * 8
    assert d.columns[0, 0] == 1  # "no" is the second declared state


def test_network_coding_rejects_unknown_label(tmp_path):
    net = load_reference("asia")
    p = write(tmp_path, "asia,tub,smoke,lung,bronc,either,xray,dysp\n" + "maybe,no,yes,no,no,no,no,no\n")
    with pytest.raises(UnknownReferenceError):
        load_csv(p, network=net)


def test_asia_sample_roundtrip(tmp_path):
    data = forward_sample(load_reference("asia"), 1000, seed=3)
    p = tmp_path / "asia.csv"
    data.to_csv(p)
    d = load_csv(p)
    assert d.n_samples == 1000 and d.n_variables == 8
    assert all(c == 2 for c in d.cardinalities)


def test_variable_meta_invariants():
    assert VariableMeta("x", ("a", "b")).cardinality == 2
    with pytest.raises(ValueError):
        VariableMeta("x", ())
    with pytest.raises(ValueError):
        VariableMeta("x", ("a", "a"))


def test_dataset_rejects_out_of_range_codes():
    with pytest.raises(ValueError):
        Dataset([VariableMeta("x", ("a", "b"))], [[0, 2]])


def test_columns_are_read_only():
    d = make_dataset([[0, 1, 1]])
    with pytest.raises(ValueError):
        d.columns[0, 0] = 1


def test_contingency_single_variable():
    t = contingency(make_dataset([[0, 1, 1]]), [0])
    assert t.counts.tolist() == [1, 2]
    assert t.total == 3


def test_contingency_all_cells_once():
    d = make_dataset([[0, 0, 1, 1], [0, 1, 0, 1]])
    assert contingency(d, [0, 1]).counts.tolist() == [[1, 1], [1, 1]]


def test_contingency_errors():
    d = make_dataset([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        contingency(d, [0, 0])
    with pytest.raises(ValueError):
        contingency(d, [])
    small = Dataset(d.variables, d.columns, cell_cap=3)
    with pytest.raises(CapacityError):
        contingency(small, [0, 1])


def brute_counts(cols, cards, axes):
    out = np.zeros([cards[a] for a in axes], dtype=np.int64)
    for k in range(cols.shape[1]):
        out[tuple(cols[a, k] for a in axes)] += 1
    return out


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_contingency_matches_brute_force_and_marginals(seed):
    rng = np.random.default_rng(seed)
    cards = [int(c) for c in rng.integers(1, 4, size=4)]
    cols = np.array([rng.integers(0, c, size=50) for c in cards])
    d = make_dataset(cols, cards)
    axes = list(rng.permutation(4)[:3])
    full = contingency(d, axes)
    assert np.array_equal(full.counts, brute_counts(cols, cards, axes))
    assert full.total == 50
    for keep in ([axes[0], axes[1]], [axes[2], axes[0]], [axes[1]]):
        assert np.array_equal(full.marginal(keep).counts, contingency(d, keep).counts)
