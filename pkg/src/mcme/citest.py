"""G-squared conditional-independence test against a chi-square reference."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .dataset import Dataset, contingency
from .info import _as_list, _cmi_log_sum

_EPS = 1e-16
_MAX_ITER = 10_000


def _log_gamma_p_series(a, x):
    """log of the regularised lower incomplete gamma P(a, x), series form."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return math.log(total) - x + a * math.log(x) - math.lgamma(a)


def _log_gamma_q_cf(a, x):
    """log of the regularised upper incomplete gamma Q(a, x), modified Lentz."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.log(h) - x + a * math.log(x) - math.lgamma(a)


def chi2_logsf(x: float, dof: int) -> float:
    """Natural log of the chi-square survival function; finite far into the tail."""
    if x < 0:
        raise ValueError("chi-square statistic must be non-negative")
    if dof < 1:
        raise ValueError("degrees of freedom must be positive")
    if x == 0:
        return 0.0
    a, h = 0.5 * dof, 0.5 * x
    if h < a + 1.0:
        return math.log1p(-min(1.0, math.exp(_log_gamma_p_series(a, h))))
    return _log_gamma_q_cf(a, h)


def chi2_sf(x: float, dof: int) -> float:
    """P(chi2_dof >= x), i.e. Q(dof/2, x/2)."""
    return min(1.0, max(0.0, math.exp(chi2_logsf(x, dof))))


def chi2_isf(alpha: float, dof: int) -> float:
    """Upper ``alpha`` quantile of chi-square with ``dof`` degrees of freedom (bisection)."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    lo, hi = 0.0, max(1.0, float(dof))
    while chi2_sf(hi, dof) > alpha:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chi2_sf(mid, dof) > alpha:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def g2_statistic(data: Dataset, x, y, z=()) -> float:
    """G^2 = 2 sum N_xyz ln(N_xyz N_z / (N_xz N_yz)), i.e. 2N I(X,Y|Z)."""
    z = _as_list(z)
    ix, iy = data.index(x), data.index(y)
    iz = [data.index(v) for v in z]
    if ix == iy or ix in iz or iy in iz:
        raise ValueError("x, y and z must be disjoint")
    t = contingency(data, [ix, iy, *iz]).counts
    if t.ndim == 2:
        t = t[..., None]
    return max(0.0, 2.0 * _cmi_log_sum(t))


def degrees_of_freedom(x, y, z, cardinalities) -> int:
    """(|D(X)|-1)(|D(Y)|-1) prod |D(S)|; returns 0 when X or Y is constant.

    ``cardinalities`` maps (or indexes) variables to their state counts.
    """
    dof = (cardinalities[x] - 1) * (cardinalities[y] - 1)
    for s in _as_list(z):
        dof *= cardinalities[s]
    return int(dof)


@dataclass(frozen=True)
class CiResult:
    g2: float
    dof: int
    p_value: float
    log_p: float
    alpha: float
    degenerate: bool = False

    @property
    def independent(self) -> bool:
        return self.p_value >= self.alpha


def assoc(data: Dataset, x, y, z=(), alpha=0.01) -> CiResult:
    """Association of ``x`` and ``y`` given ``z``, measured by the G^2 p-value.

    Small p means strong association. A zero degree-of-freedom count (one of
    the variables has a single state) is treated as independence with p = 1.
    """
    z = [data.index(v) for v in _as_list(z)]
    ix, iy = data.index(x), data.index(y)
    dof = degrees_of_freedom(ix, iy, z, data.cardinalities)
    if dof <= 0:
        return CiResult(0.0, 1, 1.0, 0.0, alpha, degenerate=True)
    g2 = g2_statistic(data, ix, iy, z)
    log_p = chi2_logsf(g2, dof)
    return CiResult(g2, dof, min(1.0, math.exp(log_p)), log_p, alpha)


def min_assoc(data: Dataset, x, y, pool=(), alpha=0.01, max_size=2):
    """Weakest association of ``x`` and ``y`` over conditioning subsets of ``pool``.

    Scans every subset with at most ``max_size`` members and returns
    ``(result, witness)`` for the subset with the largest p-value (first in
    size-then-lexicographic order on ties).
    """
    pool = sorted(data.index(v) for v in _as_list(pool))
    if len(pool) > 4:
        raise ValueError("min_assoc is a diagnostic; pool size is limited to 4")
    best, witness = None, ()
    for k in range(min(max_size, len(pool)) + 1):
        for s in combinations(pool, k):
            r = assoc(data, x, y, s, alpha)
            if best is None or r.log_p > best.log_p:
                best, witness = r, s
    return best, witness
