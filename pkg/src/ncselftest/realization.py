"""Quantum realizations of I_n and their evaluation.

Two backends share one ``Realization`` type:

* symbolic: observables are Hermitian ``PauliString``s and the state is a
  ``StabilizerGroup``; correlators are exact integers in {-1, 0, 1};
* dense: observables are Hermitian involutions (numpy matrices) acting on
  any dimension and the state is a unit amplitude vector.
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graphs import (Graph, StabilizerGroup, graph_state_vector, stabilizer_expectation,
                     stabilizer_generators, stabilizer_state_vector)
from .inequality import Label, all_labels, parse_label
from .pauli import DENSE_CAP, CapacityError, PauliString, embed, product, to_dense, unpack_bits

OBS_TOL = 1e-9
NORM_TOL = 1e-12
IMAG_TOL = 1e-9


class CompatibilityError(ValueError):
    """A correlator came out non-real: the factors of a term do not commute."""


class Realization:
    def __init__(self, n, observables, state, name=None):
        self.n = int(n)
        self.observables = {(parse_label(k) if isinstance(k, str) else Label(*k)): v
                            for k, v in observables.items()}
        self.state = state
        self.name = name
        self._validate()

    @property
    def backend(self):
        return "symbolic" if isinstance(self.state, StabilizerGroup) else "dense"

    @property
    def dim(self):
        if self.backend == "symbolic":
            return 1 << self.state.n if self.state.n < 63 else None
        return self.state.shape[0]

    def __getitem__(self, label):
        if isinstance(label, str):
            label = parse_label(label)
        return self.observables[label]

    def _validate(self):
        missing = [str(l) for l in all_labels(self.n) if l not in self.observables]
        if missing:
            raise ValueError(f"realization lacks observables {', '.join(missing)}")
        if self.backend == "symbolic":
            for lab, op in self.observables.items():
                if not isinstance(op, PauliString):
                    raise TypeError(f"{lab}: symbolic realization needs Pauli strings")
                if op.n != self.state.n:
                    raise ValueError(f"{lab} acts on {op.n} qubits, state on {self.state.n}")
                if not op.is_hermitian:
                    raise ValueError(f"{lab} = {op} is not Hermitian")
            return
        psi = np.asarray(self.state, dtype=complex)
        if psi.ndim != 1:
            raise ValueError("dense state must be a vector")
        if abs(np.linalg.norm(psi) - 1) > NORM_TOL:
            raise ValueError(f"state norm {np.linalg.norm(psi)!r} is not 1")
        self.state = psi
        eye = np.eye(psi.size)
        for lab, op in list(self.observables.items()):
            if isinstance(op, PauliString):
                raise TypeError(f"{lab}: mixed symbolic/dense observables")
            op = np.asarray(op, dtype=complex)
            if op.shape != (psi.size, psi.size):
                raise ValueError(f"{lab} has shape {op.shape}, state dimension is {psi.size}")
            if np.linalg.norm(op - op.conj().T, 2) > OBS_TOL:
                raise ValueError(f"{lab} is not Hermitian")
            if np.linalg.norm(op @ op - eye, 2) > OBS_TOL:
                raise ValueError(f"{lab} does not square to the identity")
            self.observables[lab] = op

    def to_dense(self):
        """Dense copy of a symbolic realization (oracle path)."""
        if self.backend == "dense":
            return self
        if self.state.n > DENSE_CAP:
            raise CapacityError(f"to_dense refuses {self.state.n} qubits > {DENSE_CAP}")
        obs = {lab: to_dense(op) for lab, op in self.observables.items()}
        return Realization(self.n, obs, stabilizer_state_vector(self.state), self.name)

    def to_json(self):
        if self.backend == "symbolic":
            return {
                "backend": "symbolic",
                "n": self.n,
                "observables": {str(l): str(self[l]) for l in all_labels(self.n)},
                "stabilizers": [str(g) for g in self.state.generators],
            }
        return {
            "backend": "dense",
            "n": self.n,
            "dim": int(self.state.size),
            "observables": {str(l): _complex_to_json(self[l]) for l in all_labels(self.n)},
            "state": _complex_to_json(self.state),
        }

    @classmethod
    def from_json(cls, data):
        n = int(data["n"])
        backend = data.get("backend", "symbolic" if "stabilizers" in data else "dense")
        if backend == "symbolic":
            obs = {k: PauliString.parse(v) for k, v in data["observables"].items()}
            group = StabilizerGroup([PauliString.parse(s) for s in data["stabilizers"]])
            return cls(n, obs, group)
        obs = {k: _complex_from_json(v, f"observables.{k}") for k, v in data["observables"].items()}
        return cls(n, obs, _complex_from_json(data["state"], "state"))


def _complex_to_json(a):
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _complex_from_json(v, where):
    a = np.asarray(v, dtype=float)
    if a.shape[-1] != 2:
        raise ValueError(f"{where}: complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def ideal_realization(n, backend="symbolic"):
    """``A_i = X_i``, ``B_j = Z_j`` on the complete-graph state."""
    if n < 3:
        raise ValueError(f"ideal realization needs n >= 3, got {n}")
    obs = {Label("A", i): embed("X", i, n) for i in range(1, n + 1)}
    obs.update({Label("B", i): embed("Z", i, n) for i in range(1, n + 1)})
    g = Graph.complete(n)
    if backend == "symbolic":
        return Realization(n, obs, stabilizer_generators(g), name="ideal")
    if backend != "dense":
        raise ValueError(f"unknown backend {backend!r}")
    if n > DENSE_CAP:
        raise CapacityError(f"dense ideal realization refuses n={n} > {DENSE_CAP}")
    return Realization(n, {k: to_dense(v) for k, v in obs.items()}, graph_state_vector(g),
                       name="ideal")


ALT3_OBSERVABLES = {
    "A1": "XII", "A2": "IXZ", "A3": "IZX",
    "B1": "ZII", "B2": "IZI", "B3": "IIZ",
}


def alternative_realization_3():
    """Dense 8-dim realization paired with the graph state of edges {1,2}, {1,3}."""
    obs = {k: to_dense(PauliString.parse(v)) for k, v in ALT3_OBSERVABLES.items()}
    return Realization(3, obs, graph_state_vector(Graph.star(3)), name="alt3")


def _term_labels(term):
    return term.labels if hasattr(term, "labels") else tuple(parse_label(l) for l in term)


def correlator(r, term):
    """Expectation of the slot-ordered product of the term's observables."""
    labels = _term_labels(term)
    if len(labels) != r.n:
        raise ValueError(f"term has {len(labels)} slots, realization has n={r.n}")
    if r.backend == "symbolic":
        p = product([r[l] for l in labels])
        if not p.is_hermitian:
            raise CompatibilityError(f"product {p} of term {term} is not Hermitian")
        return stabilizer_expectation(r.state, p)
    v = r.state
    for lab in reversed(labels):
        v = r[lab] @ v
    val = np.vdot(r.state, v)
    if abs(val.imag) > IMAG_TOL:
        raise CompatibilityError(f"term {term} has imaginary expectation {val.imag:.3e}")
    return float(val.real)


def _symbolic_tables(r):
    """Pairwise phase tables that let a batch kernel form every term product."""
    n = r.n
    A = [r[Label("A", i)] for i in range(1, n + 1)]
    B = [r[Label("B", i)] for i in range(1, n + 1)]
    m = r.state.n
    base = product(B)

    def bits(ops, attr):
        return np.array([unpack_bits(getattr(o, attr), m) for o in ops], dtype=np.int64)

    XA, ZA, XB, ZB = bits(A, "x"), bits(A, "z"), bits(B, "x"), bits(B, "z")
    # beta[a, b] = popcount(z_a & x_b) mod 2 for ordered label pairs
    AB = (ZA @ XB.T) & 1
    BA = (ZB @ XA.T) & 1
    AA = (ZA @ XA.T) & 1
    BB = (ZB @ XB.T) & 1
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    r1 = np.where(upper, AB - BB, 0).sum(axis=1)
    r2 = np.where(upper, BA - BB, 0).sum(axis=0)
    kA = np.array([o.phase_exp for o in A], dtype=np.int64)
    kB = np.array([o.phase_exp for o in B], dtype=np.int64)
    lin = (kA - kB + 2 * (r1 + r2)).astype(np.int64)
    Q = np.where(upper, 2 * (AA - AB - BA + BB), 0).astype(np.int64)
    dx = np.array([a.x ^ b.x for a, b in zip(A, B)], dtype=np.uint64)
    dz = np.array([a.z ^ b.z for a, b in zip(A, B)], dtype=np.uint64)
    return base.x.copy(), base.z.copy(), base.phase_exp, dx, dz, lin, Q


def term_values(ineq, r):
    """Correlator of every term, in term order."""
    if r.n != ineq.n:
        raise ValueError(f"inequality n={ineq.n} but realization n={r.n}")
    if r.backend == "symbolic":
        base_x, base_z, base_k, dx, dz, lin, Q = _symbolic_tables(r)
        vals = kernels.term_expectations(base_x, base_z, base_k, dx, dz, lin, Q,
                                         np.ascontiguousarray(ineq.a_index, dtype=np.int64),
                                         *r.state.solver)
        bad = np.flatnonzero(vals == kernels.IMAGINARY)
        if bad.size:
            raise CompatibilityError(f"term {ineq.terms[int(bad[0])]} has a non-Hermitian product")
        return vals.astype(np.int64)
    return np.array([correlator(r, t) for t in ineq.terms])


def evaluate(ineq, r):
    """Sum of coefficient times correlator; an exact int for symbolic realizations."""
    vals = term_values(ineq, r)
    if r.backend == "symbolic":
        return int(np.dot(ineq.coeffs, vals))
    return float(np.dot(ineq.coeffs.astype(float), vals))


@dataclass
class CompatibilityReport:
    commutators: dict = field(default_factory=dict)
    anticommutators_on_state: dict = field(default_factory=dict)
    tolerance: float = OBS_TOL

    @property
    def admissible(self):
        return all(v <= self.tolerance for v in self.commutators.values())

    @property
    def anticommuting(self):
        return {k: v <= self.tolerance for k, v in self.anticommutators_on_state.items()}

    def max_commutator(self):
        return max(self.commutators.values(), default=0.0)

    def to_json(self):
        return {
            "admissible": self.admissible,
            "tolerance": self.tolerance,
            "max_commutator_residual": self.max_commutator(),
            "commutators": {f"{a},{b}": v for (a, b), v in self.commutators.items()},
            "anticommutators_on_state": dict(self.anticommutators_on_state),
        }


def compatibility_report(r):
    """Residuals of the required commutations and same-index anticommutations.

    Cross-index pairs must commute (operator norm of the commutator, or 0/2
    for Pauli strings).  Same-index pairs are reported as ``||{A_i, B_i} psi||``.
    """
    rep = CompatibilityReport()
    labels = all_labels(r.n)
    for a, la in enumerate(labels):
        for lb in labels[a + 1:]:
            if la.index == lb.index:
                continue
            rep.commutators[(str(la), str(lb))] = _commutator_norm(r, la, lb)
    for i in range(1, r.n + 1):
        rep.anticommutators_on_state[f"A{i},B{i}"] = anticommutator_residual(r, i)
    return rep


def _commutator_norm(r, la, lb):
    p, q = r[la], r[lb]
    if r.backend == "symbolic":
        return 0.0 if (p * q) == (q * p) else 2.0
    return float(np.linalg.norm(p @ q - q @ p, 2))


def anticommutator_residual(r, i):
    """``||{A_i, B_i} |psi>||``."""
    a, b = r[Label("A", i)], r[Label("B", i)]
    if r.backend == "symbolic":
        # {P, Q} is 0 or 2PQ, and PQ is unitary
        return 0.0 if (a * b) == -(b * a) else 2.0
    psi = r.state
    return float(np.linalg.norm(a @ (b @ psi) + b @ (a @ psi)))


def statistics_of(ineq, r):
    """Term-key -> correlator mapping, the input format of the certifier."""
    vals = term_values(ineq, r)
    return {t.key: float(v) for t, v in zip(ineq.terms, vals)}
