"""Discrete tabular data: loading, integer coding and contingency counts."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import prod
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import CapacityError, FormatError, UnknownReferenceError

DEFAULT_CELL_CAP = 10**7
_CACHE_MAX_CELLS = 4096


@dataclass(frozen=True)
class VariableMeta:
    """Name and ordered state labels of one discrete variable."""

    name: str
    states: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(str(s) for s in self.states))
        if not self.states:
            raise ValueError(f"variable {self.name!r} has no states")
        if len(set(self.states)) != len(self.states):
            raise ValueError(f"variable {self.name!r} has duplicate state labels")

    @property
    def cardinality(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class ContingencyTable:
    """Dense joint counts over ``axes`` (variable indices, in order)."""

    axes: tuple[int, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def marginal(self, keep: Sequence[int]) -> "ContingencyTable":
        """Sum out every axis whose variable is not in ``keep``.

        The result keeps the variables in the order they appear in ``keep``.
        """
        keep = tuple(keep)
        missing = set(keep) - set(self.axes)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in table axes")
        drop = tuple(i for i, v in enumerate(self.axes) if v not in keep)
        counts = self.counts.sum(axis=drop) if drop else self.counts
        remaining = [v for v in self.axes if v in keep]
        order = [remaining.index(v) for v in keep]
        return ContingencyTable(keep, np.transpose(counts, order))


class Dataset:
    """Integer-coded discrete observations, one column per variable.

    Parameters
    ----------
    variables : sequence of VariableMeta
    columns : array-like, shape (n_variables, n_samples)
        ``columns[i][k]`` is the state code of variable ``i`` in row ``k``.
    cell_cap : int
        Largest contingency table (in cells) that :meth:`contingency` will
        build before raising :class:`CapacityError`.
    """

    def __init__(self, variables, columns, cell_cap=DEFAULT_CELL_CAP):
        self.variables = tuple(variables)
        cols = np.asarray(columns, dtype=np.int64)
        if cols.ndim != 2 or cols.shape[0] != len(self.variables):
            raise ValueError("columns must have shape (n_variables, n_samples)")
        if cols.shape[1] < 1:
            raise ValueError("dataset needs at least one sample")
        for i, v in enumerate(self.variables):
            c = cols[i]
            if c.min() < 0 or c.max() >= v.cardinality:
                raise ValueError(f"codes of {v.name!r} outside [0, {v.cardinality})")
        cols.setflags(write=False)
        self.columns = cols
        self.cell_cap = cell_cap
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        if len(self._index) != len(self.variables):
            raise ValueError("duplicate variable names")
        self._cache: dict[tuple[int, ...], np.ndarray] = {}

    @property
    def n_samples(self) -> int:
        return self.columns.shape[1]

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def cardinalities(self) -> list[int]:
        return [v.cardinality for v in self.variables]

    def index(self, name) -> int:
        """Variable index for ``name`` (an int is passed through after a range check)."""
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < self.n_variables:
                raise IndexError(f"variable index {name} out of range")
            return int(name)
        try:
            return self._index[name]
        except KeyError:
            raise UnknownReferenceError(f"unknown variable {name!r}") from None

    def realized_states(self, var) -> int:
        """Number of distinct codes that actually occur in the column."""
        return int(np.count_nonzero(self.contingency([self.index(var)]).counts))

    def contingency(self, vars) -> ContingencyTable:
        return contingency(self, vars)

    def __repr__(self):
        return f"Dataset(n_samples={self.n_samples}, variables={self.names})"

    def __eq__(self, other):
        return (
            isinstance(other, Dataset)
            and self.variables == other.variables
            and np.array_equal(self.columns, other.columns)
        )

    __hash__ = None

    # --- I/O -----------------------------------------------------------------

    def write_csv(self, fh, delimiter=","):
        """Write header and state labels to an open text file."""
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(self.names)
        labels = [np.asarray(v.states, dtype=object) for v in self.variables]
        w.writerows(zip(*(lab[col] for lab, col in zip(labels, self.columns))))

    def to_csv(self, path, delimiter=","):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            self.write_csv(fh, delimiter)


def contingency(data: Dataset, vars) -> ContingencyTable:
    """Joint count table of ``vars`` over all rows of ``data``.

    Raises
    ------
    ValueError
        Empty or duplicated variable list.
    CapacityError
        The table would have more than ``data.cell_cap`` cells.
    """
    axes = tuple(data.index(v) for v in vars)
    if not axes:
        raise ValueError("contingency needs at least one variable")
    if len(set(axes)) != len(axes):
        raise ValueError(f"duplicate variable in {axes}")
    shape = tuple(data.variables[a].cardinality for a in axes)
    cells = prod(shape)
    if cells > data.cell_cap:
        raise CapacityError(f"table over {axes} needs {cells} cells (cap {data.cell_cap})")
    cached = data._cache.get(axes)
    if cached is None:
        flat = np.ravel_multi_index(tuple(data.columns[a] for a in axes), shape)
        cached = np.bincount(flat, minlength=cells).reshape(shape)
        cached.setflags(write=False)
        if cells <= _CACHE_MAX_CELLS:
            data._cache[axes] = cached
    return ContingencyTable(axes, cached)


def load_csv(path, delimiter=",", header=True, network=None, cell_cap=DEFAULT_CELL_CAP) -> Dataset:
    """Read a categorical CSV file into a :class:`Dataset`.

    Every value is an opaque label; numeric-looking strings are categorical
    too. States are coded in order of first appearance unless ``network`` (a
    :class:`~mcme.network.BayesNet`) is given, in which case its variables
    and state lists define the coding and unseen labels are an error.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        numbered = [(k, r) for k, r in enumerate(csv.reader(fh, delimiter=delimiter), 1) if r]
    if not numbered:
        raise FormatError(f"{path}: empty file")
    if header:
        names = [c.strip() for c in numbered[0][1]]
        numbered = numbered[1:]
    else:
        names = [f"X{i}" for i in range(len(numbered[0][1]))]
    if not numbered:
        raise FormatError(f"{path}: no data rows")
    width = len(names)
    for line, r in numbered:
        if len(r) != width:
            raise FormatError(f"expected {width} fields, found {len(r)}", line=line)
        for j, cell in enumerate(r):
            if cell.strip() == "":
                raise FormatError("empty cell", line=line, column=j + 1)
    body = [r for _, r in numbered]

    if network is not None:
        variables = list(network.variables)
        order = {v.name: i for i, v in enumerate(variables)}
        if sorted(names) != sorted(order):
            raise FormatError(f"{path}: columns {names} do not match network variables")
        columns = np.zeros((len(variables), len(body)), dtype=np.int64)
        for j, name in enumerate(names):
            meta = variables[order[name]]
            lookup = {s: c for c, s in enumerate(meta.states)}
            try:
                columns[order[name]] = [lookup[r[j].strip()] for r in body]
            except KeyError as exc:
                raise UnknownReferenceError(
                    f"state {exc.args[0]!r} of {name!r} not declared by the network"
                ) from None
        return Dataset(variables, columns, cell_cap=cell_cap)

    variables, columns = [], []
    for j, name in enumerate(names):
        lookup: dict[str, int] = {}
        codes = [lookup.setdefault(r[j].strip(), len(lookup)) for r in body]
        variables.append(VariableMeta(name, tuple(lookup)))
        columns.append(codes)
    return Dataset(variables, columns, cell_cap=cell_cap)
