"""Graphs, graph-state stabilizers and stabilizer expectations."""
import warnings
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from . import kernels
from .pauli import (DENSE_CAP, CapacityError, DimensionError, PauliString, commutes,
                    n_words, pack_bits, to_dense)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"graph needs at least one vertex, got n={self.n}")
        canon = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {{{i},{j}}} outside vertices 1..{self.n}")
            pair = (min(i, j), max(i, j))
            if pair in canon:
                raise ValueError(f"duplicate edge {pair}")
            canon.add(pair)
        object.__setattr__(self, "edges", frozenset(canon))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def complete(cls, n):
        return cls(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    @classmethod
    def path(cls, n):
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    @classmethod
    def star(cls, n, center=1):
        return cls(n, frozenset((min(center, j), max(center, j))
                                for j in range(1, n + 1) if j != center))

    @classmethod
    def named(cls, spec):
        """Built-ins ``complete:n``, ``path:n``, ``star:n``."""
        kind, _, num = spec.partition(":")
        builders = {"complete": cls.complete, "path": cls.path, "star": cls.star}
        if kind not in builders or not num.isdigit():
            raise ValueError(f"unknown graph spec {spec!r}; use complete:n, path:n or star:n")
        return builders[kind](int(num))

    @classmethod
    def from_json(cls, data):
        return cls.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])

    def to_json(self):
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)]}

    def neighbors(self, i):
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def adjacency(self):
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for i, j in self.edges:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return a

    def is_connected(self):
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.edges)
        return nx.is_connected(g)


class StabilizerGroup:
    """``n`` independent, commuting, Hermitian generators with real phases."""

    def __init__(self, generators, check=True):
        gens = tuple(generators)
        if not gens:
            raise ValueError("stabilizer group needs generators")
        self.n = gens[0].n
        self.generators = gens
        if check:
            self._validate()

    def _validate(self):
        if len(self.generators) != self.n:
            raise ValueError(f"need exactly {self.n} generators, got {len(self.generators)}")
        for g in self.generators:
            if g.n != self.n:
                raise DimensionError("generators act on different qubit counts")
            if not g.is_hermitian:
                raise ValueError(f"generator {g} is not Hermitian")
        for a, g in enumerate(self.generators):
            for h in self.generators[a + 1:]:
                if not commutes(g, h):
                    raise ValueError(f"generators {g} and {h} do not commute")
        if self._reduced[3].size != self.n:
            raise ValueError("generators are not independent")

    def __repr__(self):
        return f"StabilizerGroup([{', '.join(str(g) for g in self.generators)}])"

    def __eq__(self, other):
        return isinstance(other, StabilizerGroup) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def arrays(self):
        X = np.array([g.x for g in self.generators], dtype=np.uint64)
        Z = np.array([g.z for g in self.generators], dtype=np.uint64)
        K = np.array([g.phase_exp for g in self.generators], dtype=np.int64)
        return X, Z, K

    @cached_property
    def _reduced(self):
        X, Z, K = self.arrays()
        return kernels.rref(X, Z, K, self.n)

    @cached_property
    def solver(self):
        """Arrays consumed by the expectation kernels."""
        RX, RZ, RK, pivots = self._reduced
        w = n_words(self.n)
        pivrow = np.full(2 * w * 64, -1, dtype=np.int64)
        for r, c in enumerate(pivots):
            pivrow[c if c < self.n else w * 64 + (c - self.n)] = r
        pmask_x = pack_bits((pivrow[: self.n] >= 0).astype(np.uint8))
        pmask_z = pack_bits((pivrow[w * 64: w * 64 + self.n] >= 0).astype(np.uint8))
        return RX, RZ, RK, pivrow, pmask_x, pmask_z


def stabilizer_generators(g):
    """``G_i = X_i prod_{j in N(i)} Z_j`` for every vertex."""
    if g.n > 1 and not g.is_connected():
        warnings.warn("graph is disconnected; graph state is a product of components",
                      stacklevel=2)
    adj = g.adjacency()
    eye = np.eye(g.n, dtype=np.uint8)
    gens = [PauliString.from_bits(eye[i], adj[i]) for i in range(g.n)]
    return StabilizerGroup(gens)


def graph_state_vector(g):
    """Amplitudes ``(-1)^{|E(b)|} / sqrt(2^n)`` of the CZ network on ``|+>^n``.

    ``E(b)`` is the set of edges with both endpoints set in basis index ``b``
    (qubit 1 is the least significant bit).
    """
    if g.n > DENSE_CAP:
        raise CapacityError(f"graph_state_vector refuses n={g.n} > {DENSE_CAP}")
    b = np.arange(1 << g.n)
    parity = np.zeros(b.size, dtype=np.int64)
    for i, j in g.edges:
        parity ^= ((b >> (i - 1)) & (b >> (j - 1)) & 1)
    v = (1 - 2 * parity).astype(complex) / np.sqrt(b.size)
    return fix_global_phase(v)


def fix_global_phase(v, tol=1e-12):
    """Rotate so the first non-negligible amplitude is real positive."""
    v = np.asarray(v, dtype=complex)
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size == 0:
        return v
    a = v[nz[0]]
    return v * (abs(a) / a)


def stabilizer_expectation(s, p):
    """``<p>`` in the state stabilized by ``s``: +1, -1 or 0."""
    if p.n != s.n:
        raise DimensionError(f"string on {p.n} qubits, group on {s.n}")
    if not p.is_hermitian:
        raise ValueError(f"{p} is not Hermitian")
    out = kernels.expectation_batch(*s.solver, p.x[None, :], p.z[None, :],
                                    np.array([p.phase_exp], dtype=np.int64))
    return int(out[0])


def stabilizer_state_vector(s):
    """Dense state of a stabilizer group via the projector ``prod (1 + G_i) / 2``."""
    if s.n > DENSE_CAP:
        raise CapacityError(f"stabilizer_state_vector refuses n={s.n} > {DENSE_CAP}")
    dim = 1 << s.n
    proj = np.eye(dim, dtype=complex)
    for g in s.generators:
        proj = proj @ (np.eye(dim) + to_dense(g)) / 2
    # the projector has rank one; any nonzero column spans its range
    col = proj[:, int(np.argmax(np.linalg.norm(proj, axis=0)))]
    return fix_global_phase(col / np.linalg.norm(col))
