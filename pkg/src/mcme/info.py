"""Plug-in entropy and mutual-information estimates from contingency counts.

All quantities are in nats. Zero-count cells contribute nothing (the
``0 ln 0 = 0`` convention), and tiny negative round-off is clamped to zero.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, contingency

_SLACK = 1e-12


def _clamp(value):
    return 0.0 if value < 0 and value > -1e-9 else float(value)


def _xlogx_sum(counts):
    c = counts[counts > 0].astype(float)
    return float(np.sum(c * np.log(c)))


def _entropy_from_counts(counts) -> float:
    n = counts.sum()
    if n == 0:
        return 0.0
    return _clamp(np.log(n) - _xlogx_sum(counts) / n)


def _as_list(vars):
    if vars is None:
        return []
    if isinstance(vars, (str, int, np.integer)):
        return [vars]
    return list(vars)


def entropy(data: Dataset, x) -> float:
    """H(X) of the empirical distribution of one variable."""
    return _entropy_from_counts(contingency(data, [x]).counts)


def joint_entropy(data: Dataset, vars) -> float:
    """Entropy of the joint empirical distribution over ``vars``."""
    return _entropy_from_counts(contingency(data, _as_list(vars)).counts)


def conditional_entropy(data: Dataset, x, given=()) -> float:
    """H(X | given) = -sum p(x, g) ln p(x | g)."""
    given = _as_list(given)
    if not given:
        return entropy(data, x)
    ix = data.index(x)
    if ix in [data.index(g) for g in given]:
        raise ValueError("conditioned variable appears in the conditioning set")
    t = contingency(data, [x, *given]).counts.astype(float)
    ng = t.sum(axis=0, keepdims=True)
    mask = t > 0
    ratio = np.ones_like(t)
    np.divide(t, np.broadcast_to(ng, t.shape), out=ratio, where=mask)
    return _clamp(-np.sum(t[mask] * np.log(ratio[mask])) / data.n_samples)


def _cmi_log_sum(table) -> float:
    """sum N_xyz ln(N_xyz N_z / (N_xz N_yz)) for a table with axes (x, y, z...)."""
    t = table.astype(float)
    nxz = t.sum(axis=1, keepdims=True)
    nyz = t.sum(axis=0, keepdims=True)
    nz = t.sum(axis=(0, 1), keepdims=True)
    mask = t > 0
    num = (t * nz)[mask]
    den = (nxz * nyz * np.ones_like(t))[mask]
    return float(np.sum(t[mask] * (np.log(num) - np.log(den))))


def mutual_information(data: Dataset, x, y) -> float:
    """I(X, Y) = sum p(x, y) ln(p(x, y) / (p(x) p(y)))."""
    if data.index(x) == data.index(y):
        raise ValueError("mutual information needs two distinct variables")
    t = contingency(data, [x, y]).counts
    return _clamp(_cmi_log_sum(t) / data.n_samples)


def conditional_mutual_information(data: Dataset, x, y, z=()) -> float:
    """I(X, Y | Z); an empty ``z`` gives :func:`mutual_information`."""
    z = _as_list(z)
    if not z:
        return mutual_information(data, x, y)
    ix, iy = data.index(x), data.index(y)
    iz = [data.index(v) for v in z]
    if ix == iy or ix in iz or iy in iz:
        raise ValueError("x, y and z must be disjoint")
    t = contingency(data, [ix, iy, *iz]).counts
    return _clamp(_cmi_log_sum(t) / data.n_samples)


def eemi(data: Dataset, x, y, z=()) -> float:
    """Entropy-eliminated mutual information of ``x`` and ``y`` given ``z``.

    The mutual information is divided by each variable's (conditional)
    entropy and the two ratios are averaged with weights that favour the
    lower-entropy side::

        EEMI = hy/(hx+hy) * I/hx + hx/(hx+hy) * I/hy

    with ``hx = H(X|Z)``, ``hy = H(Y|Z)`` and ``I = I(X,Y|Z)``. Because
    ``I <= min(hx, hy)`` the result lies in [0, 1]; it is 0 when either
    variable is constant given ``z`` (the mutual information then vanishes).
    """
    hx = conditional_entropy(data, x, z)
    hy = conditional_entropy(data, y, z)
    total = hx + hy
    if total <= _SLACK:
        return 0.0
    i = conditional_mutual_information(data, x, y, z)
    p1, p2 = hy / total, hx / total
    eta1 = i / hx if hx > _SLACK else 0.0
    eta2 = i / hy if hy > _SLACK else 0.0
    return min(1.0, max(0.0, p1 * eta1 + p2 * eta2))


def eemi_closed_form(data: Dataset, x, y, z=()) -> float:
    """``I (hx^2 + hy^2) / (hx hy (hx + hy))``, an algebraic rearrangement of :func:`eemi`.

    Note that this is not ``2 I / (hx + hy)``: the harmonic form is a lower
    bound that is reached only when ``hx == hy``.
    """
    hx = conditional_entropy(data, x, z)
    hy = conditional_entropy(data, y, z)
    if hx <= _SLACK or hy <= _SLACK:
        return 0.0
    i = conditional_mutual_information(data, x, y, z)
    return min(1.0, max(0.0, i * (hx * hx + hy * hy) / (hx * hy * (hx + hy))))
