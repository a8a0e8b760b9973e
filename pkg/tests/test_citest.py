import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_dataset
from mcme.citest import (
    CiResult,
    assoc,
    chi2_isf,
    chi2_logsf,
    chi2_sf,
    degrees_of_freedom,
    g2_statistic,
    min_assoc,
)
from mcme.info import conditional_mutual_information
from test_info import random_data

scipy_stats = pytest.importorskip("scipy.stats")


def test_sf_known_values():
    assert chi2_sf(0.0, 3) == 1.0
    assert chi2_sf(3.841458820694124, 1) == pytest.approx(0.05, abs=1e-12)
    assert chi2_sf(2.0, 2) == pytest.approx(math.exp(-1.0), abs=1e-14)


@pytest.mark.parametrize("dof", [1, 2, 5, 17, 64, 300])
def test_sf_matches_scipy(dof):
    for x in np.linspace(0, 4 * dof + 40, 97):
        assert chi2_sf(float(x), dof) == pytest.approx(scipy_stats.chi2.sf(x, dof), abs=1e-13, rel=1e-9)


def test_logsf_deep_tail():
    # far beyond double underflow of the p-value itself
    mpmath = pytest.importorskip("mpmath")
    exact = float(mpmath.log(mpmath.gammainc(1.5, 2500, mpmath.inf, regularized=True)))
    assert chi2_logsf(5000.0, 3) == pytest.approx(exact, rel=1e-12)
    assert chi2_sf(5000.0, 3) == 0.0
    assert chi2_logsf(5000.0, 3) > -math.inf


@pytest.mark.parametrize("dof", [1, 4, 9, 36, 576])
@pytest.mark.parametrize("alpha", [0.01, 0.05, 0.5])
def test_isf_inverts_sf(dof, alpha):
    q = chi2_isf(alpha, dof)
    assert q == pytest.approx(scipy_stats.chi2.isf(alpha, dof), rel=1e-8)


def test_bad_arguments():
    with pytest.raises(ValueError):
        chi2_sf(-1.0, 2)
    with pytest.raises(ValueError):
        chi2_sf(1.0, 0)
    with pytest.raises(ValueError):
        chi2_isf(1.5, 2)


def test_dof_formula():
    assert degrees_of_freedom(0, 1, [], [2, 3]) == 2
    assert degrees_of_freedom(0, 1, [2, 3], [2, 3, 4, 2]) == 16
    assert degrees_of_freedom(0, 1, [2], [1, 3, 4]) == 0


def test_g2_independent_grid_is_zero():
    d = make_dataset([[0, 0, 1, 1], [0, 1, 0, 1]])
    assert g2_statistic(d, 0, 1) == pytest.approx(0.0, abs=1e-12)


def test_g2_identical_binaries():
    n = 100
    d = make_dataset([[0, 1] * (n // 2), [0, 1] * (n // 2)])
    assert g2_statistic(d, 0, 1) == pytest.approx(2 * n * math.log(2))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2))
def test_g2_matches_row_oracle(seed, nz):
    d = random_data(seed, n_vars=5, n=150)
    z = [2, 3, 4][:nz]
    g = g2_statistic(d, 0, 1, z)
    assert g == pytest.approx(oracles.g2(d, 0, 1, z), rel=1e-9, abs=1e-9)
    assert g == pytest.approx(2 * d.n_samples * conditional_mutual_information(d, 0, 1, z), rel=1e-8, abs=1e-9)


def test_assoc_degenerate_is_independent():
    d = make_dataset([[0, 1, 0, 1], [0, 0, 0, 0]], cards=[2, 1])
    r = assoc(d, 0, 1)
    assert r.degenerate and r.independent and r.p_value == 1.0


def test_assoc_dependent_pair():
    d = make_dataset([[0, 1] * 50, [0, 1] * 50])
    r = assoc(d, 0, 1, alpha=0.01)
    assert isinstance(r, CiResult)
    assert not r.independent
    assert r.p_value == pytest.approx(scipy_stats.chi2.sf(r.g2, 1))


def test_min_assoc_finds_separating_set():
    rng = np.random.default_rng(0)
    z = rng.integers(0, 2, 2000)
    x = np.where(rng.random(2000) < 0.9, z, 1 - z)
    y = np.where(rng.random(2000) < 0.9, z, 1 - z)
    w = rng.integers(0, 2, 2000)
    d = make_dataset([x, y, z, w])
    assert not assoc(d, 0, 1).independent
    best, witness = min_assoc(d, 0, 1, pool=[2, 3])
    assert 2 in witness
    assert best.independent


def test_min_assoc_pool_limit():
    d = random_data(3, n_vars=7)
    with pytest.raises(ValueError):
        min_assoc(d, 0, 1, pool=[2, 3, 4, 5, 6])
