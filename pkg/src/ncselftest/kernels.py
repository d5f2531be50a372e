"""Hot numeric kernels, each in two flavours.

``*_nb`` functions are explicit loops compiled with numba when available;
``*_np`` functions are vectorized numpy.  The un-suffixed names are bound
to one of them at import time (see ``_accel``).  Both flavours are public
so tests and the benchmark can compare them directly.

Bit layout shared by all kernels: a Pauli string on ``n`` qubits is a pair
of uint64 word arrays ``(x, z)`` of length ``ceil(n / 64)``; qubit ``j``
(0-based) lives in word ``j // 64`` at bit ``j % 64``.  Phases are the
exponent ``k`` in ``i**k * X**x Z**z`` (mod 4).
"""
import numpy as np

from ._accel import HAS_NUMBA, njit

# Sentinel returned by the expectation kernels when a query string is not
# Hermitian but its Pauli part lies in the stabilizer group.
IMAGINARY = 5

_CHUNK = 1 << 16


@njit(cache=True, inline="always")
def _popcount64(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


# ---------------------------------------------------------------------------
# exhaustive classical maximum


@njit(cache=True, nogil=True)
def brute_force_max_nb(masks, coeffs, lo, hi):
    """Max over assignment bitmasks ``lo <= m < hi`` of sum_t c_t (-1)^|m & mask_t|."""
    best = np.iinfo(np.int64).min
    nt = masks.shape[0]
    for m in range(lo, hi):
        mm = np.uint64(m)
        total = 0
        for t in range(nt):
            if _popcount64(mm & masks[t]) & 1:
                total -= coeffs[t]
            else:
                total += coeffs[t]
        if total > best:
            best = total
    return best


def brute_force_max_np(masks, coeffs, lo, hi):
    best = np.iinfo(np.int64).min
    masks = np.asarray(masks, dtype=np.uint64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    for start in range(lo, hi, _CHUNK):
        m = np.arange(start, min(start + _CHUNK, hi), dtype=np.uint64)
        parity = np.bitwise_count(m[:, None] & masks[None, :]) & 1
        signs = 1 - 2 * parity.astype(np.int64)
        best = max(best, int((signs @ coeffs).max()))
    return best


# ---------------------------------------------------------------------------
# GF(2) row reduction of a stabilizer group with phase tracking


@njit(cache=True, inline="always")
def _get_bit(words, col):
    return (words[col >> 6] >> np.uint64(col & 63)) & np.uint64(1)


@njit(cache=True)
def rref_nb(X, Z, K, n):
    """Reduced row echelon form over columns x_1..x_n, z_1..z_n.

    Rows are multiplied as Pauli operators, so every output row is itself a
    group element with the correct phase.  Works in place on copies and
    returns ``(X, Z, K, pivots)`` with ``pivots[r]`` the pivot column of row r.
    """
    X = X.copy()
    Z = Z.copy()
    K = K.copy()
    m, w = X.shape
    pivots = np.full(m, -1, dtype=np.int64)
    rank = 0
    for col in range(2 * n):
        if rank == m:
            break
        src = X if col < n else Z
        c = col if col < n else col - n
        piv = -1
        for r in range(rank, m):
            if _get_bit(src[r], c):
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for i in range(w):
                tx = X[piv, i]
                X[piv, i] = X[rank, i]
                X[rank, i] = tx
                tz = Z[piv, i]
                Z[piv, i] = Z[rank, i]
                Z[rank, i] = tz
            tk = K[piv]
            K[piv] = K[rank]
            K[rank] = tk
        for r in range(m):
            if r != rank and _get_bit(src[r], c):
                extra = 0
                for i in range(w):
                    extra += _popcount64(Z[r, i] & X[rank, i])
                    X[r, i] ^= X[rank, i]
                    Z[r, i] ^= Z[rank, i]
                K[r] = (K[r] + K[rank] + 2 * extra) & 3
        pivots[rank] = col
        rank += 1
    return X, Z, K, pivots[:rank]


def _bits_of(words, col):
    return ((words[:, col >> 6] >> np.uint64(col & 63)) & np.uint64(1)).astype(bool)


def rref_np(X, Z, K, n):
    X = np.array(X, dtype=np.uint64)
    Z = np.array(Z, dtype=np.uint64)
    K = np.array(K, dtype=np.int64)
    m = X.shape[0]
    pivots = []
    rank = 0
    for col in range(2 * n):
        if rank == m:
            break
        src = X if col < n else Z
        c = col if col < n else col - n
        hits = np.flatnonzero(_bits_of(src[rank:], c))
        if hits.size == 0:
            continue
        piv = rank + hits[0]
        if piv != rank:
            X[[rank, piv]] = X[[piv, rank]]
            Z[[rank, piv]] = Z[[piv, rank]]
            K[[rank, piv]] = K[[piv, rank]]
        sel = _bits_of(src, c)
        sel[rank] = False
        if sel.any():
            extra = np.bitwise_count(Z[sel] & X[rank]).sum(axis=1).astype(np.int64)
            X[sel] ^= X[rank]
            Z[sel] ^= Z[rank]
            K[sel] = (K[sel] + K[rank] + 2 * extra) & 3
        pivots.append(col)
        rank += 1
    return X, Z, K, np.array(pivots, dtype=np.int64)


# ---------------------------------------------------------------------------
# expectation of Pauli strings in a stabilizer state


@njit(cache=True, inline="always")
def _lowbit(v):
    return _popcount64((v & (~v + np.uint64(1))) - np.uint64(1))


@njit(cache=True)
def _expect_one(qx, qz, qk, RX, RZ, RK, pivrow, pmask_x, pmask_z, ax, az):
    w = qx.shape[0]
    for i in range(w):
        ax[i] = np.uint64(0)
        az[i] = np.uint64(0)
    k = 0
    for half in range(2):
        q = qx if half == 0 else qz
        pm = pmask_x if half == 0 else pmask_z
        for i in range(w):
            bits = q[i] & pm[i]
            while bits:
                b = _lowbit(bits)
                r = pivrow[half * w * 64 + i * 64 + b]
                extra = 0
                for j in range(w):
                    extra += _popcount64(az[j] & RX[r, j])
                    ax[j] ^= RX[r, j]
                    az[j] ^= RZ[r, j]
                k = (k + RK[r] + 2 * extra) & 3
                bits &= bits - np.uint64(1)
    for i in range(w):
        if ax[i] != qx[i] or az[i] != qz[i]:
            return 0
    d = (qk - k) & 3
    if d == 0:
        return 1
    if d == 2:
        return -1
    return IMAGINARY


@njit(cache=True)
def expectation_batch_nb(RX, RZ, RK, pivrow, pmask_x, pmask_z, QX, QZ, QK):
    t = QX.shape[0]
    w = QX.shape[1]
    out = np.empty(t, dtype=np.int8)
    ax = np.empty(w, dtype=np.uint64)
    az = np.empty(w, dtype=np.uint64)
    for s in range(t):
        out[s] = _expect_one(QX[s], QZ[s], QK[s], RX, RZ, RK, pivrow, pmask_x, pmask_z, ax, az)
    return out


def expectation_batch_np(RX, RZ, RK, pivrow, pmask_x, pmask_z, QX, QZ, QK):
    QX = np.asarray(QX, dtype=np.uint64)
    QZ = np.asarray(QZ, dtype=np.uint64)
    t, w = QX.shape
    ax = np.zeros((t, w), dtype=np.uint64)
    az = np.zeros((t, w), dtype=np.uint64)
    k = np.zeros(t, dtype=np.int64)
    for r in range(RX.shape[0]):
        col = int(np.flatnonzero(pivrow == r)[0])
        src = QX if col < w * 64 else QZ
        c = col % (w * 64)
        sel = _bits_of(src, c)
        if not sel.any():
            continue
        extra = np.bitwise_count(az[sel] & RX[r]).sum(axis=1).astype(np.int64)
        ax[sel] ^= RX[r]
        az[sel] ^= RZ[r]
        k[sel] = (k[sel] + RK[r] + 2 * extra) & 3
    member = np.all(ax == QX, axis=1) & np.all(az == QZ, axis=1)
    d = (np.asarray(QK, dtype=np.int64) - k) & 3
    out = np.zeros(t, dtype=np.int8)
    out[member & (d == 0)] = 1
    out[member & (d == 2)] = -1
    out[member & (d % 2 == 1)] = IMAGINARY
    return out


# ---------------------------------------------------------------------------
# correlator strings of an inequality: all-B product with A substitutions


@njit(cache=True)
def term_expectations_nb(base_x, base_z, base_k, dx, dz, lin, Q, a_idx,
                         RX, RZ, RK, pivrow, pmask_x, pmask_z):
    """Expectations of the products for every row of ``a_idx``.

    A term replaces ``B_s`` by ``A_s`` for each listed position ``s`` (-1 pads).
    Its phase is ``base_k + sum lin[s] + sum_{s<t} Q[s, t]`` (mod 4), the
    pairwise part of the ordered product having been precomputed into
    ``lin`` and ``Q``.
    """
    t = a_idx.shape[0]
    w = base_x.shape[0]
    out = np.empty(t, dtype=np.int8)
    qx = np.empty(w, dtype=np.uint64)
    qz = np.empty(w, dtype=np.uint64)
    ax = np.empty(w, dtype=np.uint64)
    az = np.empty(w, dtype=np.uint64)
    width = a_idx.shape[1]
    for s in range(t):
        for i in range(w):
            qx[i] = base_x[i]
            qz[i] = base_z[i]
        k = base_k
        for u in range(width):
            p = a_idx[s, u]
            if p < 0:
                continue
            for i in range(w):
                qx[i] ^= dx[p, i]
                qz[i] ^= dz[p, i]
            k += lin[p]
            for v in range(u + 1, width):
                q = a_idx[s, v]
                if q >= 0:
                    k += Q[p, q] if p < q else Q[q, p]
        out[s] = _expect_one(qx, qz, k & 3, RX, RZ, RK, pivrow, pmask_x, pmask_z, ax, az)
    return out


def term_expectations_np(base_x, base_z, base_k, dx, dz, lin, Q, a_idx,
                         RX, RZ, RK, pivrow, pmask_x, pmask_z):
    a_idx = np.asarray(a_idx, dtype=np.int64)
    out = np.empty(a_idx.shape[0], dtype=np.int8)
    upper = np.triu(Q, 1) + np.triu(Q, 1).T
    for start in range(0, a_idx.shape[0], _CHUNK):
        idx = a_idx[start:start + _CHUNK]
        valid = idx >= 0
        safe = np.where(valid, idx, 0)
        qx = np.broadcast_to(base_x, (idx.shape[0], base_x.shape[0])).copy()
        qz = np.broadcast_to(base_z, (idx.shape[0], base_z.shape[0])).copy()
        k = np.full(idx.shape[0], base_k, dtype=np.int64)
        for u in range(idx.shape[1]):
            v = valid[:, u]
            qx[v] ^= dx[safe[v, u]]
            qz[v] ^= dz[safe[v, u]]
            k[v] += lin[safe[v, u]]
            for w2 in range(u + 1, idx.shape[1]):
                both = v & valid[:, w2]
                k[both] += upper[safe[both, u], safe[both, w2]]
        out[start:start + _CHUNK] = expectation_batch_np(
            RX, RZ, RK, pivrow, pmask_x, pmask_z, qx, qz, k & 3)
    return out


if HAS_NUMBA:
    brute_force_max = brute_force_max_nb
    rref = rref_nb
    expectation_batch = expectation_batch_nb
    term_expectations = term_expectations_nb
else:
    brute_force_max = brute_force_max_np
    rref = rref_np
    expectation_batch = expectation_batch_np
    term_expectations = term_expectations_np
