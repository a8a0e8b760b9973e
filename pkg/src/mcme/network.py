"""Ground-truth Bayesian networks: DAGs, CPTs, network files and sampling.

Network file format
-------------------
A line-oriented UTF-8 text format. ``#`` starts a comment. Keywords start a
line; probability rows follow their ``probability`` header::

    network asia
    variable smoke : yes no
    variable lung : yes no
    probability smoke
      table : 0.5 0.5
    probability lung | smoke
      yes : 0.1 0.9
      no  : 0.01 0.99

A row lists one state per parent (in header order), a colon, then one
probability per child state. Root variables use the single row
``table : ...``. State labels may not contain whitespace, ``:``, ``|`` or
``#``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from math import prod
from pathlib import Path

import numpy as np

from .dataset import Dataset, VariableMeta
from .errors import FormatError, StructureError, UnknownReferenceError, ValidationError

ROW_SUM_TOL = 1e-6


class Dag:
    """Directed acyclic graph stored as per-node ordered parent lists.

    Parameters
    ----------
    n_nodes : int
    parents : sequence of sequences of int, optional
        ``parents[i]`` lists the parents of node ``i``.
    names : sequence of str, optional
        Node labels, used only for serialisation and display.
    """

    def __init__(self, n_nodes, parents=None, names=None):
        self.n_nodes = int(n_nodes)
        self.names = list(names) if names is not None else [str(i) for i in range(self.n_nodes)]
        if len(self.names) != self.n_nodes:
            raise ValueError("names must have one entry per node")
        self.parents: list[list[int]] = [[] for _ in range(self.n_nodes)]
        if parents is not None:
            if len(parents) != self.n_nodes:
                raise ValueError("parents must have one entry per node")
            for child, pa in enumerate(parents):
                for p in pa:
                    self._check_new_edge(int(p), child)
                    self.parents[child].append(int(p))
            if self.topological_order() is None:
                raise StructureError("parent lists contain a directed cycle")

    # --- construction ---------------------------------------------------------

    @classmethod
    def from_edges(cls, n_nodes, edges, names=None):
        parents = [[] for _ in range(n_nodes)]
        for u, v in edges:
            parents[v].append(u)
        return cls(n_nodes, parents, names)

    def copy(self) -> "Dag":
        out = Dag(self.n_nodes, names=self.names)
        out.parents = [list(p) for p in self.parents]
        return out

    def _check_new_edge(self, u, v):
        if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
            raise StructureError(f"edge {u}->{v} out of range")
        if u == v:
            raise StructureError(f"self-loop on node {u}")
        if u in self.parents[v]:
            raise StructureError(f"duplicate edge {u}->{v}")

    def add_edge(self, u, v, check_acyclic=True):
        """Insert ``u -> v``; raises StructureError if it would close a cycle."""
        self._check_new_edge(u, v)
        if check_acyclic and self.has_path(v, u):
            raise StructureError(f"edge {u}->{v} closes a directed cycle")
        self.parents[v].append(u)

    def remove_edge(self, u, v):
        self.parents[v].remove(u)

    def reverse_edge(self, u, v):
        self.remove_edge(u, v)
        try:
            self.add_edge(v, u)
        except StructureError:
            self.parents[v].append(u)
            raise

    # --- queries --------------------------------------------------------------

    def has_edge(self, u, v) -> bool:
        return u in self.parents[v]

    def children(self) -> list[list[int]]:
        ch = [[] for _ in range(self.n_nodes)]
        for v, pa in enumerate(self.parents):
            for u in pa:
                ch[u].append(v)
        return ch

    def has_path(self, src, dst) -> bool:
        """True if a directed path ``src -> ... -> dst`` exists (src == dst counts)."""
        if src == dst:
            return True
        children = self.children()
        seen = {src}
        stack = [src]
        while stack:
            node = stack.pop()
            for c in children[node]:
                if c == dst:
                    return True
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def topological_order(self):
        """Kahn ordering (lowest index first among ready nodes) or None if cyclic."""
        indeg = [len(p) for p in self.parents]
        children = self.children()
        ready = sorted(i for i in range(self.n_nodes) if indeg[i] == 0)
        order = []
        while ready:
            node = ready.pop(0)
            order.append(node)
            for c in children[node]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
            ready.sort()
        return order if len(order) == self.n_nodes else None

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for v, pa in enumerate(self.parents) for u in pa)

    def undirected_edges(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges()}

    @property
    def n_edges(self) -> int:
        return sum(len(p) for p in self.parents)

    def __eq__(self, other):
        return (
            isinstance(other, Dag)
            and self.n_nodes == other.n_nodes
            and [sorted(p) for p in self.parents] == [sorted(p) for p in other.parents]
        )

    __hash__ = None

    def __repr__(self):
        arcs = ", ".join(f"{self.names[u]}->{self.names[v]}" for u, v in self.edges())
        return f"Dag({arcs})"

    # --- serialisation ----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.names),
            "parents": {self.names[i]: [self.names[p] for p in pa] for i, pa in enumerate(self.parents)},
        }

    @classmethod
    def from_dict(cls, d) -> "Dag":
        names = list(d["nodes"])
        idx = {n: i for i, n in enumerate(names)}
        parents = [[idx[p] for p in d["parents"].get(n, [])] for n in names]
        return cls(len(names), parents, names)

    def to_edge_list(self) -> str:
        return "".join(f"{self.names[u]} -> {self.names[v]}\n" for u, v in self.edges())


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table of ``child`` given ordered ``parents``.

    ``probs[j, k]`` is P(child = k | parent configuration j), where ``j`` is
    the row-major (last parent fastest) index of the parent states.
    """

    child: int
    parents: tuple[int, ...]
    probs: np.ndarray

    @property
    def parent_config_count(self) -> int:
        return self.probs.shape[0]

    @property
    def child_cardinality(self) -> int:
        return self.probs.shape[1]

    def validate(self, tol=1e-9):
        p = self.probs
        if p.ndim != 2:
            raise ValidationError(f"CPT of node {self.child} must be 2-D")
        if np.any(p < 0) or np.any(p > 1):
            raise ValidationError(f"CPT of node {self.child} has entries outside [0, 1]")
        bad = np.flatnonzero(np.abs(p.sum(axis=1) - 1.0) > tol)
        if bad.size:
            raise ValidationError(f"CPT of node {self.child}: row {bad[0]} does not sum to 1")


class BayesNet:
    """A DAG over discrete variables with one CPT per node."""

    def __init__(self, variables, dag: Dag, cpts, name="network"):
        self.name = name
        self.variables = tuple(variables)
        self.dag = dag
        self.cpts = tuple(cpts)
        n = len(self.variables)
        if dag.n_nodes != n or len(self.cpts) != n:
            raise ValueError("variables, dag and cpts disagree on node count")
        if not dag.is_acyclic():
            raise StructureError("network graph is cyclic")
        card = [v.cardinality for v in self.variables]
        for i, cpt in enumerate(self.cpts):
            if cpt.child != i or list(cpt.parents) != list(dag.parents[i]):
                raise ValueError(f"CPT {i} does not match the DAG parents")
            q = prod(card[p] for p in cpt.parents)
            if cpt.probs.shape != (q, card[i]):
                raise ValidationError(
                    f"CPT of {self.variables[i].name!r} has shape {cpt.probs.shape}, expected {(q, card[i])}"
                )
            cpt.validate()

    @property
    def n_nodes(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def cardinalities(self) -> list[int]:
        return [v.cardinality for v in self.variables]

    def index(self, name) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownReferenceError(f"unknown variable {name!r}") from None

    def __repr__(self):
        return f"BayesNet({self.name!r}, nodes={self.n_nodes}, edges={self.dag.n_edges})"


# --- network file parsing ---------------------------------------------------------

_LABEL = re.compile(r"^[^\s:|#]+$")


def _tokens(text):
    """Yield (line_no, stripped_line, column_of_first_char) for non-blank lines."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line.strip(), len(line) - len(line.lstrip()) + 1


def parse_network_text(text: str) -> BayesNet:
    """Parse network-file text (see module docstring) into a BayesNet."""
    name = "network"
    variables: list[VariableMeta] = []
    var_index: dict[str, int] = {}
    blocks: list[tuple[int, str, list[str], list[tuple[int, int, str]]]] = []
    current = None

    for no, line, col in _tokens(text):
        head = line.split(None, 1)
        kw = head[0]
        if kw == "network":
            name = head[1].strip() if len(head) > 1 else name
            current = None
        elif kw == "variable":
            rest = head[1] if len(head) > 1 else ""
            if ":" not in rest:
                raise FormatError("expected 'variable NAME : STATE ...'", no, col)
            vname, states = (s.strip() for s in rest.split(":", 1))
            states = states.split()
            if not _LABEL.match(vname or "-:"):
                raise FormatError(f"bad variable name {vname!r}", no, col)
            if vname in var_index:
                raise FormatError(f"variable {vname!r} declared twice", no, col)
            if not states:
                raise FormatError(f"variable {vname!r} has no states", no, col)
            if len(set(states)) != len(states):
                raise FormatError(f"variable {vname!r} repeats a state", no, col)
            var_index[vname] = len(variables)
            variables.append(VariableMeta(vname, tuple(states)))
            current = None
        elif kw == "probability":
            rest = head[1] if len(head) > 1 else ""
            child, _, pa = rest.partition("|")
            child = child.strip()
            if not child:
                raise FormatError("probability block without a child", no, col)
            current = (no, child, pa.split(), [])
            blocks.append(current)
        else:
            if current is None:
                raise FormatError(f"unexpected line {line!r}", no, col)
            current[3].append((no, col, line))

    cards = [v.cardinality for v in variables]
    parents: list[list[int] | None] = [None] * len(variables)
    tables: list[np.ndarray | None] = [None] * len(variables)

    for no, child, pa_names, rows in blocks:
        if child not in var_index:
            raise UnknownReferenceError(f"line {no}: probability for undeclared variable {child!r}")
        ci = var_index[child]
        if parents[ci] is not None:
            raise FormatError(f"second probability block for {child!r}", no)
        pa = []
        for p in pa_names:
            if p not in var_index:
                raise UnknownReferenceError(f"line {no}: undeclared parent {p!r} of {child!r}")
            pa.append(var_index[p])
        if len(set(pa)) != len(pa):
            raise FormatError(f"duplicate parent in block for {child!r}", no)
        shape = [cards[p] for p in pa]
        q = prod(shape)
        table = np.full((q, cards[ci]), np.nan)
        for rno, rcol, row in rows:
            if ":" not in row:
                raise FormatError("expected 'STATES : PROBS'", rno, rcol)
            key, vals = row.split(":", 1)
            key = key.split()
            if not pa:
                if key != ["table"]:
                    raise FormatError("root variable rows must read 'table : ...'", rno, rcol)
                j = 0
            else:
                if len(key) != len(pa):
                    raise FormatError(f"expected {len(pa)} parent states, got {len(key)}", rno, rcol)
                codes = []
                for s, p in zip(key, pa):
                    try:
                        codes.append(variables[p].states.index(s))
                    except ValueError:
                        raise UnknownReferenceError(
                            f"line {rno}: {s!r} is not a state of {variables[p].name!r}"
                        ) from None
                j = int(np.ravel_multi_index(codes, shape))
            try:
                probs = [float(v) for v in vals.replace(",", " ").split()]
            except ValueError:
                raise FormatError("non-numeric probability", rno, rcol + row.index(":") + 1) from None
            if len(probs) != cards[ci]:
                raise FormatError(f"expected {cards[ci]} probabilities, got {len(probs)}", rno, rcol)
            if not np.all(np.isnan(table[j])):
                raise FormatError("parent configuration listed twice", rno, rcol)
            total = sum(probs)
            if abs(total - 1.0) > ROW_SUM_TOL or min(probs) < 0:
                raise ValidationError(f"line {rno}: probabilities of {child!r} sum to {total}, not 1")
            table[j] = np.asarray(probs) / total
        if np.isnan(table).any():
            raise FormatError(f"probability block for {child!r} misses parent configurations", no)
        parents[ci] = pa
        tables[ci] = table

    for i, v in enumerate(variables):
        if parents[i] is None:
            raise FormatError(f"no probability block for {v.name!r}")
    dag = Dag(len(variables), names=[v.name for v in variables])
    dag.parents = [list(p) for p in parents]
    if not dag.is_acyclic():
        raise StructureError("parent declarations form a directed cycle")
    cpts = [Cpt(i, tuple(parents[i]), tables[i]) for i in range(len(variables))]
    return BayesNet(variables, dag, cpts, name=name)


def parse_network(path) -> BayesNet:
    """Read a network file from disk (``.bif`` files go through :func:`read_bif`)."""
    path = Path(path)
    if path.suffix.lower() == ".bif":
        return read_bif(path)
    return parse_network_text(path.read_text(encoding="utf-8"))


def format_network(net: BayesNet, precision=12) -> str:
    """Serialise ``net`` in the network-file format (inverse of :func:`parse_network_text`)."""
    lines = [f"network {net.name}"]
    for v in net.variables:
        lines.append(f"variable {v.name} : {' '.join(v.states)}")
    for i, cpt in enumerate(net.cpts):
        pa = [net.variables[p] for p in cpt.parents]
        head = f"probability {net.variables[i].name}"
        if pa:
            head += " | " + " ".join(p.name for p in pa)
        lines.append(head)
        configs = product(*(p.states for p in pa)) if pa else [("table",)]
        for j, key in enumerate(configs):
            vals = " ".join(f"{x:.{precision}g}" for x in cpt.probs[j])
            lines.append(f"  {' '.join(key)} : {vals}")
    return "\n".join(lines) + "\n"


def write_network(net: BayesNet, path):
    Path(path).write_text(format_network(net), encoding="utf-8")


# --- BIF conversion ---------------------------------------------------------------

_BIF_VAR = re.compile(r"variable\s+([^\s{]+)\s*\{[^}]*?\[\s*\d+\s*\]\s*\{([^}]*)\}", re.S)
_BIF_PROB = re.compile(r"probability\s*\(\s*([^)|]+?)\s*(?:\|\s*([^)]*))?\)\s*\{(.*?)\}", re.S)
_BIF_NAME = re.compile(r"network\s+([^\s{]+)")


def _clean_label(s):
    return re.sub(r"[\s:|#]+", "_", s.strip())


def read_bif(path, name=None) -> BayesNet:
    """Convert a BIF file (the format of the public bnlearn repository)."""
    text = Path(path).read_text(encoding="utf-8")
    text = re.sub(r"//.*", "", text)
    m = _BIF_NAME.search(text)
    if name is None:
        name = m.group(1) if m and m.group(1) != "unknown" else Path(path).stem
    variables = []
    for vm in _BIF_VAR.finditer(text):
        states = [_clean_label(s) for s in vm.group(2).split(",") if s.strip()]
        variables.append(VariableMeta(_clean_label(vm.group(1)), tuple(states)))
    idx = {v.name: i for i, v in enumerate(variables)}
    cards = [v.cardinality for v in variables]
    parents: list = [None] * len(variables)
    tables: list = [None] * len(variables)
    for pm in _BIF_PROB.finditer(text):
        child = _clean_label(pm.group(1))
        if child not in idx:
            raise UnknownReferenceError(f"BIF probability for undeclared {child!r}")
        ci = idx[child]
        pa = [idx[_clean_label(p)] for p in (pm.group(2) or "").split(",") if p.strip()]
        shape = [cards[p] for p in pa]
        table = np.zeros((prod(shape), cards[ci]))
        body = pm.group(3)
        tm = re.search(r"table\s+([^;]*);", body)
        if tm:
            vals = np.array([float(x) for x in tm.group(1).replace(",", " ").split()])
            # BIF "table" lists the child state slowest, parents fastest
            table = vals.reshape(cards[ci], -1).T.copy()
        else:
            for rm in re.finditer(r"\(([^)]*)\)\s*([^;]*);", body):
                key = [_clean_label(s) for s in rm.group(1).split(",")]
                codes = [variables[p].states.index(s) for s, p in zip(key, pa)]
                j = int(np.ravel_multi_index(codes, shape)) if pa else 0
                table[j] = [float(x) for x in rm.group(2).replace(",", " ").split()]
        table = table / table.sum(axis=1, keepdims=True)
        parents[ci], tables[ci] = pa, table
    dag = Dag(len(variables), names=[v.name for v in variables])
    dag.parents = [list(p) for p in parents]
    cpts = [Cpt(i, tuple(parents[i]), tables[i]) for i in range(len(variables))]
    return BayesNet(variables, dag, cpts, name=name)


# --- sampling and probability ----------------------------------------------------


def _node_generator(seed, node):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(node)])))


def node_uniforms(seed, node, start, count):
    """Uniform draws ``start .. start+count-1`` of the stream keyed by (seed, node).

    Each draw consumes one 64-bit output, so any sample range can be produced
    independently by advancing the counter.
    """
    gen = _node_generator(seed, node)
    # one Philox counter step yields four 64-bit words
    block, offset = divmod(int(start), 4)
    if block:
        gen.bit_generator.advance(block)
    return gen.random(offset + count)[offset:]


def forward_sample(net: BayesNet, n: int, seed: int = 0) -> Dataset:
    """Ancestral sample of ``n`` rows; identical for identical ``seed``."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    cards = net.cardinalities
    cols = np.zeros((net.n_nodes, n), dtype=np.int64)
    for node in net.dag.topological_order():
        cpt = net.cpts[node]
        u = node_uniforms(seed, node, 0, n)
        if cpt.parents:
            rows = np.ravel_multi_index(tuple(cols[p] for p in cpt.parents), [cards[p] for p in cpt.parents])
        else:
            rows = np.zeros(n, dtype=np.int64)
        cum = np.cumsum(cpt.probs, axis=1)[rows]
        state = (cum <= u[:, None]).sum(axis=1)
        cols[node] = np.minimum(state, cards[node] - 1)
    return Dataset(net.variables, cols)


def joint_probability(net: BayesNet, assignment) -> float:
    """P(X = assignment) as the product of CPT entries."""
    a = [int(x) for x in assignment]
    if len(a) != net.n_nodes:
        raise ValueError(f"assignment needs {net.n_nodes} entries")
    cards = net.cardinalities
    for i, x in enumerate(a):
        if not 0 <= x < cards[i]:
            raise ValueError(f"state {x} out of range for {net.variables[i].name!r}")
    p = 1.0
    for i, cpt in enumerate(net.cpts):
        j = int(np.ravel_multi_index([a[q] for q in cpt.parents], [cards[q] for q in cpt.parents])) if cpt.parents else 0
        p *= cpt.probs[j, a[i]]
    return float(p)


# --- bundled networks --------------------------------------------------------------

REFERENCE_NETWORKS = ("asia", "sports", "property", "alarm", "pathfinder")


def reference_path(name) -> Path:
    """Path of a bundled network file (``asia``, ``sports``, ``property``, ...)."""
    if name not in REFERENCE_NETWORKS:
        raise UnknownReferenceError(f"no bundled network {name!r}; choose from {REFERENCE_NETWORKS}")
    return Path(__file__).with_name("networks") / f"{name}.net"


def load_reference(name) -> BayesNet:
    return parse_network(reference_path(name))
