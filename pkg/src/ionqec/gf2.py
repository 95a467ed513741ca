"""Exact linear algebra over GF(2) and bounded-weight codeword enumeration.

Binary matrices are plain numpy uint8 arrays (addition is XOR, multiplication
is AND); rows are packed into uint64 words at the kernel boundary so that the
distance enumerations (up to 2^28 codewords) run on single-word XOR/popcount.
Column index i maps to bit i of the packed word, so this module is limited to
matrices with at most 64 columns wherever packing is involved.
"""

from __future__ import annotations

import numpy as np

from .accel import NUMBA_ENABLED, njit

MAX_PACK_COLS = 64
KERNEL_DIM_CAP = 28  # full 2^dim enumeration above this is refused


class EnumerationCapacityError(Exception):
    """Raised when a requested enumeration exceeds the configured caps."""


def circulant(size: int, power: int) -> np.ndarray:
    """Permutation matrix cyclically shifting index i to i+power (mod size).

    Power 1 gives the matrix whose first row is (0 1 0 ... 0).
    """
    if size < 1:
        raise ValueError(f"circulant size must be >= 1, got {size}")
    if not 0 <= power < size:
        raise ValueError(f"circulant power must be in [0, {size}), got {power}")
    m = np.zeros((size, size), dtype=np.uint8)
    m[np.arange(size), (np.arange(size) + power) % size] = 1
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two binary matrices."""
    return np.kron(np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8))


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2)."""
    return (np.asarray(a, dtype=np.uint8).astype(np.int64) @ np.asarray(b, dtype=np.uint8).astype(np.int64) % 2).astype(np.uint8)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix sum over GF(2) (XOR)."""
    return np.bitwise_xor(np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8))


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form over GF(2).

    Returns (R, pivot_cols) where R holds only the nonzero rows
    (len(pivot_cols) rows).
    """
    r = np.array(m, dtype=np.uint8, copy=True) % 2
    if r.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    n_rows, n_cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        piv = row + hits[0]
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        elim = np.nonzero(r[:, col])[0]
        elim = elim[elim != row]
        if elim.size:
            r[elim] ^= r[row]
        pivots.append(col)
        row += 1
    return r[: len(pivots)], pivots


def rank(m: np.ndarray) -> int:
    """GF(2) rank via Gaussian elimination."""
    return len(rref(m)[1])


def kernel_basis(m: np.ndarray) -> np.ndarray:
    """Basis of the right null space {v : m v = 0}, one vector per row.

    Returns a (cols - rank, cols) uint8 array (possibly 0 rows).
    """
    m = np.asarray(m, dtype=np.uint8)
    n_cols = m.shape[1]
    r, pivots = rref(m)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row_i, c in enumerate(pivots):
            if r[row_i, f]:
                basis[i, c] = 1
    return basis


def pack_rows(m: np.ndarray) -> np.ndarray:
    """Pack each row of a binary matrix into one uint64 word (bit i = col i)."""
    m = np.asarray(m, dtype=np.uint8)
    if m.shape[1] > MAX_PACK_COLS:
        raise EnumerationCapacityError(
            f"{m.shape[1]} columns exceed the {MAX_PACK_COLS}-bit word packing"
        )
    weights = (np.uint64(1) << np.arange(m.shape[1], dtype=np.uint64))
    return (m.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


def unpack_word(word: int, n_cols: int) -> np.ndarray:
    """Inverse of pack_rows for a single word."""
    return ((int(word) >> np.arange(n_cols)) & 1).astype(np.uint8)


def _rref_words(words: np.ndarray, n_cols: int) -> tuple[np.ndarray, np.ndarray]:
    """RREF on packed rows; returns (pivot rows, pivot column indices)."""
    w = [int(x) for x in words]
    out_rows: list[int] = []
    out_piv: list[int] = []
    for col in range(n_cols):
        mask = 1 << col
        piv = next((i for i, x in enumerate(w) if x & mask), None)
        if piv is None:
            continue
        row = w.pop(piv)
        out_rows = [x ^ row if x & mask else x for x in out_rows]
        w = [x ^ row if x & mask else x for x in w]
        out_rows.append(row)
        out_piv.append(col)
    return np.array(out_rows, dtype=np.uint64), np.array(out_piv, dtype=np.int64)


if NUMBA_ENABLED:

    @njit
    def _popcount64(x):
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @njit
    def _gray_min_logical(basis_words, stab_rows, stab_pivots, best_cap):
        """Minimum-weight kernel element outside rowspace(stab), Gray order.

        best_cap bounds the weights of interest; returns (weight, word) with
        weight == best_cap + 1 when nothing lighter was found.
        """
        one = np.uint64(1)
        zero = np.uint64(0)
        best = np.uint64(best_cap + 1)
        best_vec = zero
        cur = zero
        dim = basis_words.shape[0]
        total = one << np.uint64(dim)
        i = one
        while i < total:
            lsb = i & (zero - i)
            j = _popcount64(lsb - one)
            cur ^= basis_words[j]
            w = _popcount64(cur)
            if w < best and w > zero:
                t = cur
                for ri in range(stab_rows.shape[0]):
                    if (t >> np.uint64(stab_pivots[ri])) & one:
                        t ^= stab_rows[ri]
                if t != zero:
                    best = w
                    best_vec = cur
            i += one
        return best, best_vec

else:

    def _gray_min_logical(basis_words, stab_rows, stab_pivots, best_cap):
        """Fallback: chunked vectorized enumeration of all XOR combinations."""
        dim = basis_words.shape[0]
        lo = min(dim, 20)
        lo_words = np.zeros(1, dtype=np.uint64)
        for b in basis_words[:lo]:
            lo_words = np.concatenate([lo_words, lo_words ^ b])
        hi_words = np.zeros(1, dtype=np.uint64)
        for b in basis_words[lo:]:
            hi_words = np.concatenate([hi_words, hi_words ^ b])
        best = best_cap + 1
        best_vec = np.uint64(0)
        srows = [int(x) for x in stab_rows]
        spivs = [int(x) for x in stab_pivots]
        for hw in hi_words:
            words = lo_words ^ hw
            weights = np.bitwise_count(words)
            weights[words == 0] = best_cap + 2
            order = np.nonzero(weights < best)[0]
            if order.size == 0:
                continue
            order = order[np.argsort(weights[order], kind="stable")]
            for idx in order:
                w = int(weights[idx])
                if w >= best:
                    break
                t = int(words[idx])
                for row, c in zip(srows, spivs):
                    if (t >> c) & 1:
                        t ^= row
                if t:
                    best = w
                    best_vec = words[idx]
        return np.uint64(best), best_vec


if NUMBA_ENABLED:

    @njit
    def _support_scan(col_words, n_cols, stab_rows, stab_pivots, w_max):
        """Lightest weight<=w_max vector v with syndrome 0 outside rowspace(stab).

        col_words[j] holds the check-matrix column j packed over check rows.
        Returns (weight, word), weight == w_max + 1 when none exists.
        """
        one = np.uint64(1)
        zero = np.uint64(0)
        idx = np.zeros(w_max + 1, dtype=np.int64)
        syn = np.zeros(w_max + 1, dtype=np.uint64)
        vec = np.zeros(w_max + 1, dtype=np.uint64)
        for w in range(1, w_max + 1):
            depth = 0
            idx[0] = -1
            while depth >= 0:
                idx[depth] += 1
                if idx[depth] > n_cols - (w - depth):
                    depth -= 1
                    continue
                j = idx[depth]
                syn[depth + 1] = syn[depth] ^ col_words[j]
                vec[depth + 1] = vec[depth] | (one << np.uint64(j))
                if depth + 1 == w:
                    if syn[depth + 1] == zero:
                        t = vec[depth + 1]
                        for ri in range(stab_rows.shape[0]):
                            if (t >> np.uint64(stab_pivots[ri])) & one:
                                t ^= stab_rows[ri]
                        if t != zero:
                            return np.uint64(w), vec[depth + 1]
                else:
                    depth += 1
                    idx[depth] = idx[depth - 1]
        return np.uint64(w_max + 1), zero

else:

    def _support_scan(col_words, n_cols, stab_rows, stab_pivots, w_max):
        from itertools import combinations

        cols = [int(c) for c in col_words]
        srows = [int(x) for x in stab_rows]
        spivs = [int(x) for x in stab_pivots]
        for w in range(1, w_max + 1):
            for combo in combinations(range(n_cols), w):
                s = 0
                v = 0
                for j in combo:
                    s ^= cols[j]
                    v |= 1 << j
                if s == 0:
                    t = v
                    for row, c in zip(srows, spivs):
                        if (t >> c) & 1:
                            t ^= row
                    if t:
                        return np.uint64(w), np.uint64(v)
        return np.uint64(w_max + 1), np.uint64(0)


def pack_cols(m: np.ndarray) -> np.ndarray:
    """Pack each column of a binary matrix into one uint64 word (bit i = row i)."""
    return pack_rows(np.ascontiguousarray(np.asarray(m, dtype=np.uint8).T))


def min_weight_logical(
    stab_rows: np.ndarray,
    commute_checks: np.ndarray,
    w_max: int,
    *,
    kernel_dim_cap: int = KERNEL_DIM_CAP,
) -> tuple[int, np.ndarray] | None:
    """Minimum-weight vector of ker(commute_checks) outside rowspace(stab_rows).

    Enumerates the kernel exhaustively in Gray-code order when its dimension
    is at most ``kernel_dim_cap``, otherwise enumerates supports of weight up
    to ``w_max``. Returns (weight, vector) or None if every such vector is
    heavier than w_max.
    """
    commute_checks = np.asarray(commute_checks, dtype=np.uint8)
    stab_rows = np.asarray(stab_rows, dtype=np.uint8)
    n = commute_checks.shape[1]
    if n > MAX_PACK_COLS:
        raise EnumerationCapacityError(f"{n} qubits exceed the 64-bit enumeration kernels")
    if stab_rows.size and stab_rows.shape[1] != n:
        raise ValueError("stab_rows and commute_checks disagree on column count")
    srows, spivs = _rref_words(pack_rows(stab_rows) if stab_rows.size else np.zeros(0, dtype=np.uint64), n)

    basis = kernel_basis(commute_checks)
    dim = basis.shape[0]
    if dim == 0:
        return None
    if dim <= kernel_dim_cap:
        w, vec = _gray_min_logical(pack_rows(basis), srows, spivs, min(w_max, n))
    else:
        if w_max > n:
            raise EnumerationCapacityError(
                f"kernel dimension {dim} exceeds the cap of {kernel_dim_cap}; "
                "only weight-bounded support enumeration is available (reduce w_max)"
            )
        w, vec = _support_scan(pack_cols(commute_checks), n, srows, spivs, w_max)
    w = int(w)
    if w > w_max:
        return None
    return w, unpack_word(int(vec), n)


def in_rowspace(rref_words: np.ndarray, pivots: np.ndarray, word: int) -> bool:
    """Membership test against a packed RREF (from _rref_words)."""
    t = int(word)
    for row, c in zip(rref_words, pivots):
        if (t >> int(c)) & 1:
            t ^= int(row)
    return t == 0
