"""The inequality family I_n: terms, bounds, liftings and hypergraph export.

For ``n >= 3`` observables ``A_1..A_n, B_1..B_n``, ``I_n`` has one positive
term per position ``i`` (``A_i`` there, ``B`` elsewhere, weight
``alpha_n = C(n-1, 2)``) and one negative term per 3-subset ``{i, j, k}``
(``A`` on the subset, ``B`` elsewhere, weight -1).
"""
from collections import Counter
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np

from . import kernels

BRUTE_FORCE_MAX_VARS = 30


class Label(NamedTuple):
    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


def parse_label(text):
    text = str(text).strip()
    if len(text) < 2 or text[0] not in "AB" or not text[1:].isdigit():
        raise ValueError(f"bad observable label {text!r}; expected A<i> or B<i>")
    return Label(text[0], int(text[1:]))


def all_labels(n):
    return [Label("A", i) for i in range(1, n + 1)] + [Label("B", i) for i in range(1, n + 1)]


@dataclass(frozen=True)
class CorrelatorTerm:
    coefficient: int
    labels: tuple

    def __post_init__(self):
        for slot, lab in enumerate(self.labels, start=1):
            if lab.index != slot or lab.kind not in ("A", "B"):
                raise ValueError(f"slot {slot} holds {lab}; expected A{slot} or B{slot}")

    @classmethod
    def from_a_positions(cls, coefficient, n, a_positions):
        a = set(a_positions)
        return cls(coefficient, tuple(Label("A" if j in a else "B", j) for j in range(1, n + 1)))

    @property
    def n(self):
        return len(self.labels)

    @property
    def a_positions(self):
        return tuple(lab.index for lab in self.labels if lab.kind == "A")

    @property
    def key(self):
        """Hashable identity used by statistics: the tuple of label strings."""
        return tuple(str(lab) for lab in self.labels)

    def __str__(self):
        return f"{self.coefficient:+d}<{''.join(str(lab) for lab in self.labels)}>"


class TermList(Sequence):
    """Read-only view materializing ``CorrelatorTerm`` objects on access."""

    def __init__(self, n, coeffs, a_index):
        self._n = n
        self._coeffs = coeffs
        self._a_index = a_index

    def __len__(self):
        return len(self._coeffs)

    def __getitem__(self, t):
        if isinstance(t, slice):
            return [self[i] for i in range(*t.indices(len(self)))]
        row = self._a_index[t]
        return CorrelatorTerm.from_a_positions(int(self._coeffs[t]), self._n,
                                               [int(p) + 1 for p in row if p >= 0])


def alpha(n):
    return comb(n - 1, 2)


def quantum_bound(n):
    _check_n(n)
    return alpha(n) * n + comb(n, 3)


def _check_n(n):
    if int(n) != n or n < 3:
        raise ValueError(f"I_n is defined for integer n >= 3, got {n}")


def _a_index(n):
    pos = np.full((n, 3), -1, dtype=np.int32)
    pos[:, 0] = np.arange(n)
    chunks = [pos]
    for i in range(n - 2):
        j, k = np.triu_indices(n - i - 1, 1)
        block = np.empty((j.size, 3), dtype=np.int32)
        block[:, 0] = i
        block[:, 1] = j + i + 1
        block[:, 2] = k + i + 1
        chunks.append(block)
    return np.concatenate(chunks)


@dataclass(frozen=True, eq=False)
class Inequality:
    n: int
    alpha: int
    coeffs: np.ndarray
    a_index: np.ndarray
    classical_bound: int
    quantum_bound: int

    def __post_init__(self):
        if len(self.coeffs) != self.n + comb(self.n, 3):
            raise ValueError("term count must be n + C(n, 3)")
        expected = self.alpha * self.n + comb(self.n, 3)
        if self.quantum_bound != expected or expected != 4 * comb(self.n, 3):
            raise ValueError("quantum bound inconsistent with alpha")
        if self.classical_bound > 2 * comb(self.n, 3):
            raise ValueError("classical bound exceeds 2 C(n, 3)")

    @property
    def terms(self):
        return TermList(self.n, self.coeffs, self.a_index)

    def __len__(self):
        return len(self.coeffs)

    def label_masks(self):
        """Bitmask per term: bit j-1 for A_j, bit n+j-1 for B_j."""
        n = self.n
        masks = np.full(len(self), (1 << (2 * n)) - (1 << n), dtype=np.uint64)
        for col in range(3):
            p = self.a_index[:, col].astype(np.int64)
            ok = p >= 0
            bit_a = np.left_shift(np.uint64(1), p[ok].astype(np.uint64))
            bit_b = np.left_shift(np.uint64(1), (p[ok] + n).astype(np.uint64))
            masks[ok] = masks[ok] ^ bit_a ^ bit_b
        return masks

    def to_json(self):
        return {
            "n": self.n,
            "alpha": self.alpha,
            "terms": [{"coeff": t.coefficient, "labels": list(t.key)} for t in self.terms],
            "classical_bound": self.classical_bound,
            "quantum_bound": self.quantum_bound,
        }

    @classmethod
    def from_json(cls, data):
        ineq = build(int(data["n"]))
        mine = ineq.to_json()
        for field in ("alpha", "terms", "classical_bound", "quantum_bound"):
            if field in data and data[field] != mine[field]:
                raise ValueError(f"inequality JSON field {field!r} does not match I_{ineq.n}")
        return ineq


def build(n):
    _check_n(n)
    a = alpha(n)
    coeffs = np.concatenate([np.full(n, a, dtype=np.int64),
                             np.full(comb(n, 3), -1, dtype=np.int64)])
    coeffs.setflags(write=False)
    idx = _a_index(n)
    idx.setflags(write=False)
    return Inequality(n, a, coeffs, idx, classical_bound_fast(n), quantum_bound(n))


def value_on_assignment(ineq, a_values, b_values):
    """I_n evaluated on deterministic +-1 values; plain reference loop."""
    vals = {}
    for i in range(ineq.n):
        vals[Label("A", i + 1)] = a_values[i]
        vals[Label("B", i + 1)] = b_values[i]
    total = 0
    for t in ineq.terms:
        p = 1
        for lab in t.labels:
            p *= vals[lab]
        total += t.coefficient * p
    return total


def classical_bound_bruteforce(ineq, jobs=1):
    """Exact max of I_n over all ``2^(2n)`` +-1 assignments.

    Assignment bitmask bit set means value -1.  The range is split into
    ``jobs`` contiguous prefix blocks; the result does not depend on ``jobs``.
    """
    if isinstance(ineq, int):
        ineq = build(ineq)
    nvars = 2 * ineq.n
    if nvars > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force capped at 2n <= {BRUTE_FORCE_MAX_VARS}; "
                         f"n={ineq.n} needs classical_bound_fast")
    masks = ineq.label_masks()
    coeffs = np.ascontiguousarray(ineq.coeffs, dtype=np.int64)
    total = 1 << nvars
    jobs = max(1, min(int(jobs), total))
    edges = [total * r // jobs for r in range(jobs + 1)]
    if jobs == 1:
        return int(kernels.brute_force_max(masks, coeffs, 0, total))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(lambda r: kernels.brute_force_max(masks, coeffs, edges[r], edges[r + 1]),
                         range(jobs))
        return int(max(parts))


def _e3_given_k(n, k):
    m = n - k
    return sum((-1) ** j * comb(k, 3 - j) * comb(m, j) for j in range(4))


def classical_bound_fast(n):
    """O(n) exact classical bound.

    With ``s_i = a_i b_i`` and ``B = prod b_j``, ``I_n = B (alpha sum s - e_3(s))``;
    ``s`` and ``B`` are independent, so only ``k = #{s_i = +1}`` matters.
    """
    _check_n(n)
    a = alpha(n)
    return max(abs(a * (2 * k - n) - _e3_given_k(n, k)) for k in range(n + 1))


@dataclass(frozen=True)
class Lifting:
    triple: tuple
    terms: tuple


def lifting_decomposition(n):
    """One I_3-shaped block per 3-subset, padded with B's elsewhere."""
    _check_n(n)
    out = []
    for t in _a_index(n)[n:]:
        i, j, k = (int(v) + 1 for v in t)
        terms = tuple(CorrelatorTerm.from_a_positions(1, n, [p]) for p in (i, j, k))
        terms += (CorrelatorTerm.from_a_positions(-1, n, [i, j, k]),)
        out.append(Lifting((i, j, k), terms))
    return out


def signed_term_sum(terms):
    """Multiset of signed terms: label key -> summed coefficient."""
    acc = Counter()
    for t in terms:
        acc[t.key] += t.coefficient
    return {k: v for k, v in acc.items() if v}


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: tuple  # (labels tuple, sign "+" or "-", coefficient)

    def to_json(self):
        return {
            "vertices": list(self.vertices),
            "hyperedges": [{"labels": list(l), "sign": s, "coeff": c} for l, s, c in self.edges],
        }

    def to_dot(self, name="contexts"):
        """Star expansion: one point node per context, red for +, blue for -."""
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        lines += [f'  "{v}";' for v in self.vertices]
        for e, (labels, sign, coeff) in enumerate(self.edges):
            color = "red" if sign == "+" else "blue"
            lines.append(f'  "ctx{e}" [shape=point, color={color}, xlabel="{coeff:+d}"];')
            lines += [f'  "ctx{e}" -- "{lab}" [color={color}];' for lab in labels]
        lines.append("}")
        return "\n".join(lines) + "\n"


def hypergraph(ineq):
    verts = tuple(str(l) for l in all_labels(ineq.n))
    edges = tuple((t.key, "+" if t.coefficient > 0 else "-", t.coefficient) for t in ineq.terms)
    return Hypergraph(verts, edges)
