"""Robust certification: error parameter, fidelity bounds, Jordan-block realizations.

Reference convention for the noisy model (per block, per site ``j``):

* sites 1..3: ``A = X``, ``B = cos(t) Y + sin(t) X``; ideal ``A = X``, ``B = Y``
* sites >= 4: ``B = X``, ``A = -cos(t) Y + sin(t) X``; ideal ``A = -Y``, ``B = X``

and the ideal per-block state is ``(|0...0> - |1...1>) / sqrt(2)``.  This
basis differs from the ``A = X, B = Z`` complete-graph realization by a
fixed local unitary.  Block amplitudes use the little-endian index order
of the rest of the package.

Bound arithmetic runs on ``fractions.Fraction``: measured values are read
as the decimals they print as, so a deficit of 0.001 yields 25 * 0.001 =
0.025 exactly.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

import numpy as np
import scipy.linalg

from .inequality import Label, all_labels, build, parse_label
from .realization import Realization, anticommutator_residual, term_values

SLACK = 1e-12
RANK_TOL = 1e-8
PRED_TOL = 1e-9

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def _exact(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    return Fraction(repr(float(x)))


# ---------------------------------------------------------------------------
# statistics and bounds


@dataclass
class Statistics:
    n: int
    values: dict  # term key (tuple of label strings) -> correlator

    def __post_init__(self):
        ineq = build(self.n)
        keys = {t.key for t in ineq.terms}
        vals = {tuple(str(parse_label(l)) for l in k): v for k, v in self.values.items()}
        missing = keys - vals.keys()
        if missing:
            raise ValueError(f"statistics missing {len(missing)} term(s), e.g. {''.join(sorted(missing)[0])}")
        extra = vals.keys() - keys
        if extra:
            raise ValueError(f"statistics has unknown term {''.join(sorted(extra)[0])}")
        for k, v in vals.items():
            if not -1 <= float(v) <= 1:
                raise ValueError(f"value {v} for {''.join(k)} outside [-1, 1]")
        self.values = vals

    @classmethod
    def from_json(cls, data):
        vals = {tuple(e["labels"]): e["value"] for e in data["values"]}
        return cls(int(data["n"]), vals)

    def to_json(self):
        return {"n": self.n,
                "values": [{"labels": list(t.key), "value": float(self.values[t.key])}
                           for t in build(self.n).terms]}


def ideal_statistics(n):
    return Statistics(n, {t.key: (1.0 if t.coefficient > 0 else -1.0) for t in build(n).terms})


def deficit_statistics(n, deficit):
    """Every term off its ideal value by the same amount."""
    d = _exact(deficit)
    return Statistics(n, {t.key: float((1 - d) if t.coefficient > 0 else (d - 1))
                          for t in build(n).terms})


def _epsilon_exact(stats):
    eps = Fraction(0)
    for t in build(stats.n).terms:
        sign = 1 if t.coefficient > 0 else -1
        eps = max(eps, 1 - sign * _exact(stats.values[t.key]))
    return eps


def epsilon_from_statistics(stats):
    """Smallest ``eps >= 0`` with every ``sign(coeff) * value >= 1 - eps``."""
    return float(_epsilon_exact(stats))


@dataclass(frozen=True)
class BoundConstants:
    eps0: float
    eps1: float
    eps2: float


def _constants_exact(n, eps):
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    eps = _exact(eps)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    general = ((8 * (2 ** (n - 1) - 1) + 1) * eps, Fraction(0), Fraction(2) ** (5 - n) * eps)
    if n == 3:
        three = (25 * eps, Fraction(0), 4 * eps)
        assert three == general
        return three
    return general


def fidelity_bounds(n, epsilon):
    """State, A-operator and B-operator infidelity constants ``(eps0, eps1, eps2)``."""
    return BoundConstants(*(float(c) for c in _constants_exact(n, epsilon)))


# ---------------------------------------------------------------------------
# Jordan-block realizations


@dataclass(frozen=True)
class JordanBlock:
    weight: float
    angles: tuple
    amplitudes: np.ndarray


@dataclass(frozen=True)
class JordanBlockSpec:
    blocks: tuple

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("Jordan spec needs at least one block")
        n = len(self.blocks[0].angles)
        if n < 3:
            raise ValueError(f"blocks need at least 3 angles, got {n}")
        total = 0.0
        for b, blk in enumerate(self.blocks):
            if blk.weight < 0:
                raise ValueError(f"block {b}: negative weight")
            total += blk.weight
            if len(blk.angles) != n:
                raise ValueError(f"block {b}: {len(blk.angles)} angles, expected {n}")
            if any(abs(a) > np.pi / 2 for a in blk.angles):
                raise ValueError(f"block {b}: angles must lie in [-pi/2, pi/2]")
            amp = np.asarray(blk.amplitudes)
            if amp.shape != (1 << n,):
                raise ValueError(f"block {b}: amplitudes need length {1 << n}")
            if abs(np.linalg.norm(amp) - 1) > 1e-12:
                raise ValueError(f"block {b}: amplitudes are not unit norm")
        if abs(total - 1) > 1e-12:
            raise ValueError(f"block weights sum to {total!r}, not 1")

    @property
    def n(self):
        return len(self.blocks[0].angles)

    @property
    def weights(self):
        return np.array([b.weight for b in self.blocks])

    @property
    def angle_matrix(self):
        return np.array([b.angles for b in self.blocks], dtype=float)

    @classmethod
    def from_json(cls, data):
        blocks = []
        for b in data["blocks"]:
            amp = np.asarray(b["amplitudes"], dtype=float)
            blocks.append(JordanBlock(float(b["weight"]), tuple(float(a) for a in b["angles"]),
                                      amp[:, 0] + 1j * amp[:, 1]))
        spec = cls(tuple(blocks))
        if "n" in data and int(data["n"]) != spec.n:
            raise ValueError(f"field 'n'={data['n']} disagrees with {spec.n} angles per block")
        return spec

    def to_json(self):
        return {"n": self.n, "blocks": [
            {"weight": b.weight, "angles": list(b.angles),
             "amplitudes": np.stack([np.real(b.amplitudes), np.imag(b.amplitudes)], -1).tolist()}
            for b in self.blocks]}


def ghz_minus(n):
    v = np.zeros(1 << n, dtype=complex)
    v[0], v[-1] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    return v


def angle_on_b(site):
    """True when the noise angle of pair ``site`` sits on B (sites 1..3)."""
    return site <= 3


def _site_ops(site, t):
    if angle_on_b(site):
        return _X, np.cos(t) * _Y + np.sin(t) * _X
    return -np.cos(t) * _Y + np.sin(t) * _X, _X


def _ideal_site_ops(site):
    return (_X, _Y) if angle_on_b(site) else (-_Y, _X)


def _embed(op, site, n):
    return np.kron(np.kron(np.eye(1 << (n - site)), op), np.eye(1 << (site - 1)))


def jordan_realization(spec):
    """Direct sum over blocks of per-site parametrized observables."""
    n = spec.n
    obs = {}
    for j in range(1, n + 1):
        a_blocks, b_blocks = [], []
        for blk in spec.blocks:
            a, b = _site_ops(j, blk.angles[j - 1])
            a_blocks.append(_embed(a, j, n))
            b_blocks.append(_embed(b, j, n))
        obs[Label("A", j)] = scipy.linalg.block_diag(*a_blocks)
        obs[Label("B", j)] = scipy.linalg.block_diag(*b_blocks)
    psi = np.concatenate([np.sqrt(b.weight) * np.asarray(b.amplitudes, dtype=complex)
                          for b in spec.blocks])
    return Realization(n, obs, psi, name="jordan")


def ideal_jordan_state(spec):
    g = ghz_minus(spec.n)
    return np.concatenate([np.sqrt(b.weight) * g for b in spec.blocks])


@dataclass
class JordanFidelities:
    state: float
    A: list
    B: list


def actual_fidelities(spec):
    """Closed forms: phase-aligned state overlap and weighted cosines."""
    n = spec.n
    p = spec.weights
    overlaps = np.array([abs(b.amplitudes[0] - b.amplitudes[-1]) / np.sqrt(2) for b in spec.blocks])
    state = float(np.dot(p, overlaps) ** 2)
    cos = p @ np.cos(spec.angle_matrix)
    A = [1.0 if angle_on_b(j) else float(cos[j - 1]) for j in range(1, n + 1)]
    B = [float(cos[j - 1]) if angle_on_b(j) else 1.0 for j in range(1, n + 1)]
    return JordanFidelities(state, A, B)


def actual_fidelities_dense(spec):
    """Same quantities from inner products and traces in the full space."""
    n, d = spec.n, 1 << spec.n
    r = jordan_realization(spec)
    ideal = ideal_jordan_state(spec)
    psi = r.state.copy()
    for b in range(len(spec.blocks)):
        sl = slice(b * d, (b + 1) * d)
        g = np.vdot(ideal[sl], psi[sl])
        if abs(g) > 0:
            psi[sl] *= np.conj(g) / abs(g)
    state = float(abs(np.vdot(ideal, psi)) ** 2)
    # isometry onto span{ sum_l sqrt(p_l) |m>_l }
    W = np.vstack([np.sqrt(b.weight) * np.eye(d) for b in spec.blocks])
    A, B = [], []
    for j in range(1, n + 1):
        ia, ib = _ideal_site_ops(j)
        for kind, ideal_op, out in (("A", ia, A), ("B", ib, B)):
            proj = W.conj().T @ r[Label(kind, j)] @ W
            out.append(float(np.trace(_embed(ideal_op, j, n) @ proj).real / d))
    return JordanFidelities(state, A, B)


# ---------------------------------------------------------------------------
# self-testing predicates on dense realizations


@dataclass
class SubspaceReport:
    basis: np.ndarray
    dimension: int
    residual: float
    singular_values: np.ndarray


def invariant_subspace(r):
    """Span of ``B_S |psi>`` over all subsets S, its rank and invariance residual."""
    if r.backend != "dense":
        r = r.to_dense()
    n = r.n
    vecs = []
    for mask in range(1 << n):
        v = r.state
        for i in range(n, 0, -1):
            if mask >> (i - 1) & 1:
                v = r[Label("B", i)] @ v
        vecs.append(v)
    U, s, _ = np.linalg.svd(np.column_stack(vecs), full_matrices=False)
    rank = int(np.sum(s > RANK_TOL))
    basis = U[:, :rank]
    residual = 0.0
    for lab in all_labels(n):
        ob = r[lab] @ basis
        residual = max(residual, float(np.linalg.norm(ob - basis @ (basis.conj().T @ ob), 2)))
    return SubspaceReport(basis, rank, residual, s)


@dataclass
class CanonicalFormReport:
    predicates: dict = field(default_factory=dict)  # name -> (passed, residual)
    dimension: int = 0
    invariance_residual: float = 0.0

    @property
    def passed(self):
        return all(ok for ok, _ in self.predicates.values())

    def to_json(self):
        return {"passed": self.passed, "dimension": self.dimension,
                "invariance_residual": self.invariance_residual,
                "predicates": {k: {"passed": ok, "residual": res}
                               for k, (ok, res) in self.predicates.items()}}


def canonical_form_check(r):
    """Hypotheses of the canonical-form lemma, tested on the compressed observables."""
    sub = invariant_subspace(r)
    if r.backend != "dense":
        r = r.to_dense()
    n, W = r.n, sub.basis
    proj = {lab: W.conj().T @ r[lab] @ W for lab in all_labels(n)}
    eye = np.eye(sub.dimension)
    squares = max(np.linalg.norm(o @ o - eye, 2) for o in proj.values())
    comm, anti = 0.0, 0.0
    labels = all_labels(n)
    for a, la in enumerate(labels):
        for lb in labels[a + 1:]:
            p, q = proj[la], proj[lb]
            if la.index == lb.index:
                anti = max(anti, np.linalg.norm(p @ q + q @ p, 2))
            else:
                comm = max(comm, np.linalg.norm(p @ q - q @ p, 2))
    trace = max(abs(np.trace(o)) for o in proj.values())
    rep = CanonicalFormReport(dimension=sub.dimension, invariance_residual=sub.residual)
    rep.predicates = {
        "squares_to_identity": (squares <= PRED_TOL, float(squares)),
        "cross_index_commute": (comm <= PRED_TOL, float(comm)),
        "same_index_anticommute": (anti <= PRED_TOL, float(anti)),
        "dimension": (sub.dimension == 1 << n, float(abs(sub.dimension - (1 << n)))),
        "traceless": (trace <= PRED_TOL, float(trace)),
    }
    return rep


# ---------------------------------------------------------------------------
# certification


@dataclass
class RobustnessReport:
    n: int
    epsilon: float
    eps0: float
    eps1: float
    eps2: float
    fid_state_bound: float
    fid_A_bound: float
    fid_B_bound: float
    vacuous: bool
    source: str
    actual_fid_state: float | None = None
    actual_fid_A: list | None = None
    actual_fid_B: list | None = None
    anticommutator_residuals: list | None = None
    lemma_bound: float | None = None
    violations: list = field(default_factory=list)

    def to_json(self):
        return asdict(self)

    def to_text(self):
        lines = [
            f"certification of I_{self.n} ({self.source})",
            f"  epsilon              {self.epsilon:.12g}",
            f"  eps0 / eps1 / eps2   {self.eps0:.12g} / {self.eps1:.12g} / {self.eps2:.12g}",
            f"  state fidelity   >=  {self.fid_state_bound:.12g}",
            f"  A-operator fid.  >=  {self.fid_A_bound:.12g}",
            f"  B-operator fid.  >=  {self.fid_B_bound:.12g}",
        ]
        if self.vacuous:
            lines.append("  (state bound is vacuous at this epsilon)")
        if self.actual_fid_state is not None:
            lines.append(f"  actual state fidelity {self.actual_fid_state:.12g}")
            lines.append("  actual A fidelities   " + " ".join(f"{v:.12g}" for v in self.actual_fid_A))
            lines.append("  actual B fidelities   " + " ".join(f"{v:.12g}" for v in self.actual_fid_B))
        if self.anticommutator_residuals is not None:
            lines.append("  ||{A_i,B_i}psi||      " + " ".join(f"{v:.6g}" for v in self.anticommutator_residuals)
                         + f"  (bound {self.lemma_bound:.6g})")
        lines.append(f"  violations: {len(self.violations)}")
        lines += [f"    {v}" for v in self.violations]
        return "\n".join(lines) + "\n"


def _report(n, eps_exact, source):
    c0, c1, c2 = _constants_exact(n, eps_exact)
    return RobustnessReport(
        n=n, epsilon=float(eps_exact), eps0=float(c0), eps1=float(c1), eps2=float(c2),
        fid_state_bound=float(1 - c0), fid_A_bound=float(1 - c1), fid_B_bound=float(1 - c2),
        vacuous=bool(1 - c0 <= 0), source=source)


def _check_lemma(rep, r):
    rep.lemma_bound = float(4 * np.sqrt(2 * rep.epsilon))
    rep.anticommutator_residuals = [anticommutator_residual(r, i) for i in range(1, r.n + 1)]
    for i, v in enumerate(rep.anticommutator_residuals, start=1):
        if v > rep.lemma_bound + SLACK:
            rep.violations.append(f"anticommutator {i}: {v!r} > {rep.lemma_bound!r}")


def certify(obj):
    """Statistics, Jordan spec or dense realization -> ``RobustnessReport``."""
    if isinstance(obj, Statistics):
        return _report(obj.n, _epsilon_exact(obj), "statistics")
    if isinstance(obj, Realization):
        stats = Statistics(obj.n, {t.key: float(np.clip(v, -1, 1))
                                   for t, v in zip(build(obj.n).terms, term_values(build(obj.n), obj))})
        rep = _report(obj.n, _epsilon_exact(stats), f"realization:{obj.backend}")
        if obj.backend == "dense":
            _check_lemma(rep, obj)
        return rep
    if isinstance(obj, JordanBlockSpec):
        r = jordan_realization(obj)
        ineq = build(obj.n)
        vals = np.clip(term_values(ineq, r), -1, 1)
        stats = Statistics(obj.n, {t.key: float(v) for t, v in zip(ineq.terms, vals)})
        rep = _report(obj.n, _epsilon_exact(stats), "jordan")
        fid = actual_fidelities(obj)
        rep.actual_fid_state, rep.actual_fid_A, rep.actual_fid_B = fid.state, fid.A, fid.B
        if fid.state < rep.fid_state_bound - SLACK:
            rep.violations.append(f"state fidelity {fid.state!r} < {rep.fid_state_bound!r}")
        for j in range(1, obj.n + 1):
            noisy, exact = ("B", "A") if angle_on_b(j) else ("A", "B")
            f_noisy = getattr(fid, noisy)[j - 1]
            f_exact = getattr(fid, exact)[j - 1]
            if f_noisy < rep.fid_B_bound - SLACK:
                rep.violations.append(f"{noisy}{j} fidelity {f_noisy!r} < {rep.fid_B_bound!r}")
            if f_exact < rep.fid_A_bound - SLACK:
                rep.violations.append(f"{exact}{j} fidelity {f_exact!r} < {rep.fid_A_bound!r}")
        _check_lemma(rep, r)
        return rep
    raise TypeError(f"cannot certify {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Monte-Carlo validation


def random_jordan_spec(rng, n=3, max_blocks=8, max_angle=0.3, random_state_prob=0.125):
    """Blocks near the ideal: GHZ amplitudes plus complex noise of random size.

    With probability ``random_state_prob`` a block gets a fully random
    amplitude vector instead.
    """
    nb = int(rng.integers(1, max_blocks + 1))
    weights = rng.dirichlet(np.ones(nb))
    weights /= weights.sum()
    d = 1 << n
    blocks = []
    for w in weights:
        angles = tuple(float(a) for a in rng.uniform(-max_angle, max_angle, n))
        noise = rng.normal(size=d) + 1j * rng.normal(size=d)
        if rng.random() < random_state_prob:
            amp = noise
        else:
            amp = ghz_minus(n) + rng.uniform(0, max_angle) * noise / np.sqrt(2 * d)
        amp = amp / np.linalg.norm(amp) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        blocks.append(JordanBlock(float(w), angles, amp))
    return JordanBlockSpec(tuple(blocks))


@dataclass
class ValidationSummary:
    n: int
    trials: int
    seed: int
    max_angle: float
    violating_trials: int
    violation_counts: dict
    min_margin_state: float
    min_margin_operator: float
    min_margin_lemma: float
    non_vacuous_trials: int
    examples: list

    def to_json(self):
        return asdict(self)


def validate_robustness(n=3, trials=200, max_angle=0.3, seed=0, max_blocks=8, jobs=1):
    """Certify ``trials`` seeded random Jordan specs and tally bound violations.

    Specs are drawn sequentially from one generator, so the result does not
    depend on ``jobs``.
    """
    rng = np.random.default_rng(seed)
    specs = [random_jordan_spec(rng, n, max_blocks, max_angle) for _ in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(certify, specs))
    else:
        reports = [certify(s) for s in specs]
    counts = {"state": 0, "operator": 0, "lemma": 0}
    m_state = m_op = m_lemma = float("inf")
    examples = []
    for k, rep in enumerate(reports):
        m_state = min(m_state, rep.actual_fid_state - rep.fid_state_bound)
        ops = [min(a, b) for a, b in zip(rep.actual_fid_A, rep.actual_fid_B)]
        m_op = min(m_op, min(ops) - rep.fid_B_bound)
        m_lemma = min(m_lemma, rep.lemma_bound - max(rep.anticommutator_residuals))
        for v in rep.violations:
            kind = "state" if v.startswith("state") else "lemma" if v.startswith("anti") else "operator"
            counts[kind] += 1
        if rep.violations and len(examples) < 5:
            examples.append({"trial": k, "epsilon": rep.epsilon, "violations": rep.violations})
    return ValidationSummary(
        n=n, trials=trials, seed=seed, max_angle=max_angle,
        violating_trials=sum(bool(r.violations) for r in reports),
        violation_counts=counts, min_margin_state=m_state, min_margin_operator=m_op,
        min_margin_lemma=m_lemma,
        non_vacuous_trials=sum(not r.vacuous for r in reports), examples=examples)
