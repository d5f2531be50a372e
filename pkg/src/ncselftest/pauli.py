"""Phase-tracked n-qubit Pauli strings in binary symplectic form.

A string stores ``i**phase_exp * X^x Z^z`` where ``X^x Z^z`` means the
tensor product over qubits of ``X^{x_j} Z^{z_j}``.  With this convention
``Y = i X Z``, so a string is Hermitian exactly when
``phase_exp + popcount(x & z)`` is even.

Qubits are numbered 1..n in the public API.  Internally qubit ``j`` is bit
``j - 1`` of the packed uint64 words, which is also its bit position in a
dense amplitude index (qubit 1 is the least significant bit).
"""
from dataclasses import dataclass

import numpy as np

DENSE_CAP = 12

_SIGN_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OF = {0: "", 1: "+i", 2: "-", 3: "-i"}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class CapacityError(ValueError):
    """A dense object was requested above ``DENSE_CAP`` qubits."""


def n_words(n):
    return max(1, (n + 63) // 64)


def pack_bits(bits):
    """Pack a 0/1 vector into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    out = np.zeros(n_words(bits.size), dtype=np.uint64)
    idx = np.flatnonzero(bits)
    np.bitwise_or.at(out, idx >> 6, np.left_shift(np.uint64(1), (idx & 63).astype(np.uint64)))
    return out


def unpack_bits(words, n):
    words = np.asarray(words, dtype=np.uint64)
    j = np.arange(n)
    return ((words[j >> 6] >> (j & 63).astype(np.uint64)) & np.uint64(1)).astype(np.uint8)


def _popcount(words):
    return int(np.bitwise_count(words).sum())


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.uint64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PauliString:
    n: int
    phase_exp: int
    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        w = n_words(self.n)
        x, z = _frozen(self.x), _frozen(self.z)
        if x.shape != (w,) or z.shape != (w,):
            raise DimensionError(f"expected {w} words per bit vector for n={self.n}")
        if self.n % 64:
            tail = ~np.uint64(0) << np.uint64(self.n % 64)
            if (x[-1] & tail) or (z[-1] & tail):
                raise DimensionError(f"bits set beyond qubit {self.n}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    # construction -----------------------------------------------------------

    @classmethod
    def from_bits(cls, x_bits, z_bits, phase_exp=0):
        x_bits = np.asarray(x_bits, dtype=np.uint8)
        z_bits = np.asarray(z_bits, dtype=np.uint8)
        if x_bits.shape != z_bits.shape:
            raise DimensionError("x and z bit vectors differ in length")
        return cls(x_bits.size, phase_exp, pack_bits(x_bits), pack_bits(z_bits))

    @classmethod
    def identity(cls, n):
        w = n_words(n)
        return cls(n, 0, np.zeros(w, np.uint64), np.zeros(w, np.uint64))

    @classmethod
    def parse(cls, literal):
        """Parse ``[+|-|+i|-i]`` followed by characters from ``IXYZ``."""
        text = literal.strip()
        body = text.lstrip("+-i")
        prefix = text[: len(text) - len(body)]
        if prefix not in _SIGN_PREFIX:
            raise ValueError(f"bad sign prefix {prefix!r} in Pauli literal {literal!r}")
        if not body or set(body) - set("IXYZ"):
            raise ValueError(f"Pauli literal {literal!r} must use characters I, X, Y, Z")
        x = np.array([c in "XY" for c in body], dtype=np.uint8)
        z = np.array([c in "ZY" for c in body], dtype=np.uint8)
        return cls.from_bits(x, z, _SIGN_PREFIX[prefix] + int(np.sum(x & z)))

    # views ------------------------------------------------------------------

    @property
    def x_bits(self):
        return unpack_bits(self.x, self.n)

    @property
    def z_bits(self):
        return unpack_bits(self.z, self.n)

    @property
    def y_count(self):
        return _popcount(self.x & self.z)

    @property
    def is_hermitian(self):
        return (self.phase_exp + self.y_count) % 2 == 0

    @property
    def coefficient(self):
        """Scalar in front of the I/X/Y/Z character form: one of 1, 1j, -1, -1j."""
        return 1j ** ((self.phase_exp - self.y_count) % 4)

    @property
    def sign(self):
        """+1 or -1 for Hermitian strings."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if (self.phase_exp - self.y_count) % 4 == 0 else -1

    @property
    def weight(self):
        return _popcount(self.x | self.z)

    def is_identity(self):
        return not self.x.any() and not self.z.any()

    def __str__(self):
        chars = np.array(list("IXZY"))[self.x_bits + 2 * self.z_bits]
        return _PREFIX_OF[(self.phase_exp - self.y_count) % 4] + "".join(chars)

    def __repr__(self):
        return f"PauliString({str(self)!r})"

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return (self.n == other.n and self.phase_exp == other.phase_exp
                and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

    def __hash__(self):
        return hash((self.n, self.phase_exp, self.x.tobytes(), self.z.tobytes()))

    def __mul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return PauliString(self.n, self.phase_exp + 2, self.x, self.z)


def _check_dims(p, q):
    if p.n != q.n:
        raise DimensionError(f"Pauli strings act on {p.n} and {q.n} qubits")


def multiply(p, q):
    """Exact operator product ``p q``."""
    _check_dims(p, q)
    k = p.phase_exp + q.phase_exp + 2 * _popcount(p.z & q.x)
    return PauliString(p.n, k, p.x ^ q.x, p.z ^ q.z)


def product(strings, n=None):
    """Ordered product of an iterable of strings (identity if empty)."""
    strings = list(strings)
    if not strings:
        if n is None:
            raise ValueError("empty product needs n")
        return PauliString.identity(n)
    acc = strings[0]
    for s in strings[1:]:
        acc = multiply(acc, s)
    return acc


def symplectic_product(p, q):
    _check_dims(p, q)
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) % 2


def commutes(p, q):
    return symplectic_product(p, q) == 0


def embed(kind, site, n):
    """Single-qubit Pauli ``kind`` in {X, Y, Z, I} at ``site`` (1-based)."""
    if not 1 <= site <= n:
        raise IndexError(f"site {site} outside 1..{n}")
    if kind not in ("I", "X", "Y", "Z"):
        raise ValueError(f"unknown Pauli kind {kind!r}")
    x = np.zeros(n, np.uint8)
    z = np.zeros(n, np.uint8)
    x[site - 1] = kind in "XY"
    z[site - 1] = kind in "ZY"
    return PauliString.from_bits(x, z, 1 if kind == "Y" else 0)


def to_dense(p):
    """``2**n x 2**n`` complex matrix, qubit 1 as the least significant index bit."""
    if p.n > DENSE_CAP:
        raise CapacityError(f"to_dense refuses n={p.n} > {DENSE_CAP}")
    dim = 1 << p.n
    b = np.arange(dim, dtype=np.uint64)
    xi = np.uint64(p.x[0])
    zi = np.uint64(p.z[0])
    signs = 1 - 2 * (np.bitwise_count(b & zi) & 1).astype(np.int64)
    out = np.zeros((dim, dim), dtype=complex)
    out[(b ^ xi).astype(np.intp), b.astype(np.intp)] = (1j ** p.phase_exp) * signs
    return out


def random_pauli(n, rng, hermitian=False):
    x = rng.integers(0, 2, n, dtype=np.uint8)
    z = rng.integers(0, 2, n, dtype=np.uint8)
    k = int(rng.integers(0, 4))
    if hermitian:
        k = 2 * (k % 2) + int(np.sum(x & z))
    return PauliString.from_bits(x, z, k)
