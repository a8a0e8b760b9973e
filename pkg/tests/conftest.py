import numpy as np
import pytest

from mcme.dataset import Dataset, VariableMeta
from mcme.network import BayesNet, Cpt, Dag

_acceptance = {}


def make_dataset(columns, cards=None, names=None):
    """Dataset from integer columns; cardinalities default to max code + 1."""
    cols = np.asarray(columns, dtype=np.int64)
    if cols.ndim == 1:
        cols = cols[None, :]
    if cards is None:
        cards = [int(c.max()) + 1 for c in cols]
    if names is None:
        names = [f"V{i}" for i in range(len(cols))]
    variables = [VariableMeta(n, tuple(f"s{k}" for k in range(c))) for n, c in zip(names, cards)]
    return Dataset(variables, cols)


def binary_net(parents, tables, names=None):
    """BayesNet over binary nodes; ``tables[i]`` lists P(node=0) per parent configuration."""
    n = len(parents)
    names = names or [chr(ord("A") + i) for i in range(n)]
    variables = [VariableMeta(nm, ("0", "1")) for nm in names]
    dag = Dag(n, [list(p) for p in parents], names)
    cpts = [Cpt(i, tuple(parents[i]), np.array([[p, 1 - p] for p in tables[i]])) for i in range(n)]
    return BayesNet(variables, dag, cpts, name="test")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif report.when == "setup" and report.failed and "test_acceptance.py" in report.nodeid:
        _acceptance[report.nodeid.split("::")[-1]] = "error"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
