"""CSS code constructions: rotated surface codes, BB6 and BB5 bicycle codes.

BB codes live on n = 2*l*m data qubits split into a left and a right block of
l*m qubits each. Blocks are sums of commuting permutations Q_l^u (x) Q_m^v;
x denotes Q_l (x) I_m and y denotes I_l (x) Q_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np

from . import gf2
from .accel import NUMBA_ENABLED, njit
from .gf2 import _support_scan


class DegenerateCodeError(Exception):
    """Raised for operations that need k >= 1 logical qubits."""


@dataclass(frozen=True)
class CssCode:
    """A CSS code given by X/Z check matrices with derived parameters.

    hx, hz are uint8 matrices of shape (checks, n) with hx @ hz.T = 0 over
    GF(2); k = n - rank(hx) - rank(hz). logical_x / logical_z, when present,
    hold k representatives each, normalized so logical_x @ logical_z.T = I_k.
    """

    name: str
    hx: np.ndarray
    hz: np.ndarray
    n: int
    k: int
    d: int | None = None
    logical_x: np.ndarray | None = None
    logical_z: np.ndarray | None = None
    warnings: tuple[str, ...] = field(default=())

    def x_stabilizers(self) -> list[str]:
        return [_row_to_pauli(row, "X") for row in self.hx]

    def z_stabilizers(self) -> list[str]:
        return [_row_to_pauli(row, "Z") for row in self.hz]


def _row_to_pauli(row: np.ndarray, letter: str) -> str:
    return "".join(letter if b else "I" for b in row)


def css_code(name: str, hx: np.ndarray, hz: np.ndarray, *, d: int | None = None,
             warnings: tuple[str, ...] = ()) -> CssCode:
    """Validate the CSS commutation condition and derive (n, k)."""
    hx = np.asarray(hx, dtype=np.uint8) % 2
    hz = np.asarray(hz, dtype=np.uint8) % 2
    if hx.shape[1] != hz.shape[1]:
        raise ValueError("hx and hz must act on the same qubit count")
    if gf2.mat_mul(hx, hz.T).any():
        raise ValueError(f"{name}: X and Z checks do not commute (hx @ hz.T != 0)")
    n = hx.shape[1]
    k = n - gf2.rank(hx) - gf2.rank(hz)
    return CssCode(name=name, hx=hx, hz=hz, n=n, k=k, d=d, warnings=warnings)


# ---------------------------------------------------------------------------
# surface codes
# ---------------------------------------------------------------------------

def build_surface(d: int) -> CssCode:
    """Rotated surface code on a d x d vertex grid, n = d^2, k = 1.

    Qubit (r, c) has index r*d + c. Bulk tiles are weight-4 with the X color
    on the top-left bulk plaquette; weight-2 X tiles sit on the top/bottom
    rows and weight-2 Z tiles on the left/right columns.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"surface code distance must be odd and >= 3, got {d}")
    n = d * d
    x_rows: list[np.ndarray] = []
    z_rows: list[np.ndarray] = []

    def q(r: int, c: int) -> int:
        return r * d + c

    def tile(qubits, is_x):
        row = np.zeros(n, dtype=np.uint8)
        row[list(qubits)] = 1
        (x_rows if is_x else z_rows).append(row)

    for r in range(d - 1):
        for c in range(d - 1):
            tile([q(r, c), q(r, c + 1), q(r + 1, c), q(r + 1, c + 1)], (r + c) % 2 == 0)
    # boundary tiles continue the bulk checkerboard into the virtual rows
    # r=-1 / r=d-1 (X side) and the virtual columns c=-1 / c=d-1 (Z side)
    for c in range(d - 1):
        if (-1 + c) % 2 == 0:
            tile([q(0, c), q(0, c + 1)], True)
        if (d - 1 + c) % 2 == 0:
            tile([q(d - 1, c), q(d - 1, c + 1)], True)
    for r in range(d - 1):
        if (r - 1) % 2 == 1:
            tile([q(r, 0), q(r + 1, 0)], False)
        if (r + d - 1) % 2 == 1:
            tile([q(r, d - 1), q(r + 1, d - 1)], False)

    code = css_code(f"surface-{d}", np.array(x_rows), np.array(z_rows), d=d)
    if code.k != 1 or len(x_rows) != (n - 1) // 2 or len(z_rows) != (n - 1) // 2:
        raise AssertionError(f"surface-{d} construction is inconsistent: k={code.k}")
    return code


# ---------------------------------------------------------------------------
# bicycle codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bb5Spec:
    """BB5 instance: five permutations A_i = Q_l^u (x) Q_m^v as (u, v) pairs."""

    l: int
    m: int
    exps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.exps) != 5:
            raise ValueError("Bb5Spec needs exactly five (u, v) exponent pairs")
        for u, v in self.exps:
            if not (0 <= u < self.l and 0 <= v < self.m):
                raise ValueError(f"exponent ({u},{v}) out of range for l={self.l}, m={self.m}")


@dataclass(frozen=True)
class Bb6Spec:
    """BB6 instance: six generators, each a power of x or of y."""

    l: int
    m: int
    gens: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if len(self.gens) != 6:
            raise ValueError("Bb6Spec needs exactly six (axis, power) generators")
        for axis, p in self.gens:
            if axis not in ("x", "y"):
                raise ValueError(f"generator axis must be 'x' or 'y', got {axis!r}")
            lim = self.l if axis == "x" else self.m
            if not 0 <= p < lim:
                raise ValueError(f"power {p} out of range for axis {axis}")


def _perm(l: int, m: int, u: int, v: int) -> np.ndarray:
    return gf2.kron(gf2.circulant(l, u), gf2.circulant(m, v))


def build_bb5(spec: Bb5Spec) -> CssCode:
    """BB5 code: hx = [A1+A2 | A3+A4+A5], hz = [A3'+A4'+A5' | A1'+A2'] (' = transpose)."""
    a = [_perm(spec.l, spec.m, u, v) for u, v in spec.exps]
    left = a[0] ^ a[1]
    right = a[2] ^ a[3] ^ a[4]
    warnings = []
    if left.sum(axis=1).max() < 2:
        warnings.append("A1 and A2 coincide: weight-2 block degenerates")
    if right.sum(axis=1).max() < 3:
        warnings.append("A3..A5 are not distinct: weight-3 block degenerates")
    hx = np.hstack([left, right])
    hz = np.hstack([np.ascontiguousarray(right.T), np.ascontiguousarray(left.T)])
    return css_code(f"bb5-l{spec.l}m{spec.m}", hx, hz, warnings=tuple(warnings))


def _bb6_gen_matrix(l: int, m: int, axis: str, power: int) -> np.ndarray:
    return _perm(l, m, power, 0) if axis == "x" else _perm(l, m, 0, power)


def build_bb6(spec: Bb6Spec) -> CssCode:
    """BB6 code: hx = [A1+A2+A3 | A4+A5+A6], hz = [A4'+A5'+A6' | A1'+A2'+A3']."""
    g = [_bb6_gen_matrix(spec.l, spec.m, axis, p) for axis, p in spec.gens]
    left = g[0] ^ g[1] ^ g[2]
    right = g[3] ^ g[4] ^ g[5]
    warnings = []
    if left.sum(axis=1).max() < 3 or right.sum(axis=1).max() < 3:
        warnings.append("coinciding generators: stabilizer weight below 6")
    hx = np.hstack([left, right])
    hz = np.hstack([np.ascontiguousarray(right.T), np.ascontiguousarray(left.T)])
    return css_code(f"bb6-l{spec.l}m{spec.m}", hx, hz, warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# logical operators
# ---------------------------------------------------------------------------

def _quotient_basis(kernel: np.ndarray, stab: np.ndarray, k: int) -> np.ndarray:
    """k kernel vectors independent of rowspace(stab)."""
    srows, spivs = gf2._rref_words(gf2.pack_rows(stab), stab.shape[1])
    rows = [int(x) for x in srows]
    pivs = [int(x) for x in spivs]
    picked = []
    for vec in kernel:
        t = int(gf2.pack_rows(vec[None, :])[0])
        for row, c in zip(rows, pivs):
            if (t >> c) & 1:
                t ^= row
        if t:
            picked.append(vec)
            rows.append(t)
            pivs.append((t & -t).bit_length() - 1)
            if len(picked) == k:
                break
    if len(picked) != k:
        raise AssertionError("failed to extract k independent logical representatives")
    return np.array(picked, dtype=np.uint8)


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.hstack([m, np.eye(k, dtype=np.uint8)])
    r, piv = gf2.rref(aug)
    if piv[:k] != list(range(k)):
        raise ValueError("matrix is singular over GF(2)")
    return r[:, k:]


def compute_logicals(code: CssCode) -> CssCode:
    """Populate k X- and Z-logical representatives with pairing I_k.

    Z-logicals span ker(hx) modulo rowspace(hz); X-logicals symmetrically.
    The X side is re-normalized by the inverse pairing matrix so that
    logical_x @ logical_z.T = I_k over GF(2).
    """
    if code.k <= 0:
        raise DegenerateCodeError(f"{code.name} has k={code.k}; no logical operators")
    lz = _quotient_basis(gf2.kernel_basis(code.hx), code.hz, code.k)
    lx = _quotient_basis(gf2.kernel_basis(code.hz), code.hx, code.k)
    pairing = gf2.mat_mul(lx, lz.T)
    lx = gf2.mat_mul(_gf2_inverse(pairing), lx)
    assert np.array_equal(gf2.mat_mul(lx, lz.T), np.eye(code.k, dtype=np.uint8))
    return replace(code, logical_x=lx, logical_z=lz)


def code_distances(code: CssCode, w_max: int | None = None) -> tuple[int, int]:
    """(X distance, Z distance) certified by kernel enumeration."""
    w_max = w_max if w_max is not None else code.n
    rx = gf2.min_weight_logical(code.hx, code.hz, w_max)
    rz = gf2.min_weight_logical(code.hz, code.hx, w_max)
    if rx is None or rz is None:
        raise gf2.EnumerationCapacityError("no logical found within w_max")
    return rx[0], rz[0]


def certify_distance(code: CssCode, w_max: int | None = None) -> CssCode:
    """Return the code with d = min(X distance, Z distance) certified."""
    dx, dz = code_distances(code, w_max)
    return replace(code, d=min(dx, dz))


# ---------------------------------------------------------------------------
# parameter-space search
# ---------------------------------------------------------------------------

@dataclass
class SearchResult:
    hits: list[tuple[object, int, int, int]]  # (spec, n, k, d)
    complete: bool
    candidates: int


def _factorizations(s: int) -> list[tuple[int, int]]:
    """(l, m) with l*m = s and l, m >= 2, balanced pairs first, l >= m first.

    Univariate degenerations (l = 1 or m = 1) are generalized bicycle codes,
    not bivariate ones, and fall outside the searched family.
    """
    fs = [(l, s // l) for l in range(2, s) if s % l == 0 and s // l >= 2]
    return sorted(fs, key=lambda lm: (abs(lm[0] - lm[1]), -lm[0]))


@njit
def _bicycle_words(l, m, cols_a, cols_b):
    """Packed rows of hx and hz for block sums given by group shift indices.

    A group index g = u*m + v shifts position r = i*m + j to
    ((i+u) mod l, (j+v) mod m); hz rows use the inverse shifts (transpose).
    """
    s = l * m
    one = np.uint64(1)
    hx = np.zeros(s, dtype=np.uint64)
    hz = np.zeros(s, dtype=np.uint64)
    for r in range(s):
        i = r // m
        j = r % m
        w = np.uint64(0)
        for t in range(cols_a.shape[0]):
            g = cols_a[t]
            c = ((i + g // m) % l) * m + ((j + g % m) % m)
            w ^= one << np.uint64(c)
        for t in range(cols_b.shape[0]):
            g = cols_b[t]
            c = s + ((i + g // m) % l) * m + ((j + g % m) % m)
            w ^= one << np.uint64(c)
        hx[r] = w
        w = np.uint64(0)
        for t in range(cols_b.shape[0]):
            g = cols_b[t]
            c = ((i - g // m) % l) * m + ((j - g % m) % m)
            w ^= one << np.uint64(c)
        for t in range(cols_a.shape[0]):
            g = cols_a[t]
            c = s + ((i - g // m) % l) * m + ((j - g % m) % m)
            w ^= one << np.uint64(c)
        hz[r] = w
    return hx, hz


@njit
def _rref_words_nb(words, ncols):
    """In-place RREF on packed rows; returns (rank, pivot columns)."""
    one = np.uint64(1)
    nrows = words.shape[0]
    pivots = np.empty(nrows, dtype=np.int64)
    rank = 0
    for c in range(ncols):
        mask = one << np.uint64(c)
        piv = -1
        for r in range(rank, nrows):
            if words[r] & mask:
                piv = r
                break
        if piv < 0:
            continue
        t = words[piv]
        words[piv] = words[rank]
        words[rank] = t
        for r in range(nrows):
            if r != rank and (words[r] & mask):
                words[r] ^= words[rank]
        pivots[rank] = c
        rank += 1
    return rank, pivots


@njit
def _cols_from_rows(rows, ncols):
    one = np.uint64(1)
    cols = np.zeros(ncols, dtype=np.uint64)
    for r in range(rows.shape[0]):
        w = rows[r]
        for c in range(ncols):
            if (w >> np.uint64(c)) & one:
                cols[c] ^= one << np.uint64(r)
    return cols


@njit
def _eval_candidate_nb(l, m, cols_a, cols_b, d_floor):
    """(k, floor_ok) for one bicycle candidate.

    floor_ok = 1 iff no X- or Z-type logical of weight < d_floor exists,
    certified by weight-bounded support scans on both sides.
    """
    s = l * m
    n = 2 * s
    hx, hz = _bicycle_words(l, m, cols_a, cols_b)
    rx = hx.copy()
    rank_x, xpiv = _rref_words_nb(rx, n)
    rz = hz.copy()
    rank_z, zpiv = _rref_words_nb(rz, n)
    k = n - rank_x - rank_z
    if k <= 0 or d_floor <= 1:
        return k, 1
    colx = _cols_from_rows(hx, n)
    wz, _ = _support_scan(colx, n, rz[:rank_z], zpiv[:rank_z], d_floor - 1)
    if wz <= np.uint64(d_floor - 1):
        return k, 0
    colz = _cols_from_rows(hz, n)
    wx, _ = _support_scan(colz, n, rx[:rank_x], xpiv[:rank_x], d_floor - 1)
    if wx <= np.uint64(d_floor - 1):
        return k, 0
    return k, 1


def _eval_candidate_py(l, m, cols_a, cols_b, d_floor):
    """Fallback candidate evaluation on dense uint8 matrices."""
    s = l * m
    n = 2 * s
    A = np.zeros((s, s), dtype=np.uint8)
    B = np.zeros((s, s), dtype=np.uint8)
    for g in cols_a:
        A ^= _perm(l, m, g // m, g % m)
    for g in cols_b:
        B ^= _perm(l, m, g // m, g % m)
    hx = np.hstack([A, B])
    hz = np.hstack([np.ascontiguousarray(B.T), np.ascontiguousarray(A.T)])
    k = n - gf2.rank(hx) - gf2.rank(hz)
    if k <= 0 or d_floor <= 1:
        return k, 1
    for checks, stab in ((hx, hz), (hz, hx)):
        srows, spivs = gf2._rref_words(gf2.pack_rows(stab), n)
        w, _ = _support_scan(gf2.pack_cols(checks), n, srows, spivs, d_floor - 1)
        if int(w) <= d_floor - 1:
            return k, 0
    return k, 1


def _eval_candidate(l, m, cols_a, cols_b, d_floor):
    if NUMBA_ENABLED:
        return _eval_candidate_nb(
            l, m,
            np.asarray(cols_a, dtype=np.int64),
            np.asarray(cols_b, dtype=np.int64),
            d_floor,
        )
    return _eval_candidate_py(l, m, list(cols_a), list(cols_b), d_floor)


def _bb6_generators(l: int, m: int) -> list[tuple[str, int]]:
    # y^0 = x^0 = I is enumerated once, on the x axis
    return [("x", a) for a in range(l)] + [("y", b) for b in range(1, m)]


def _gen_index(gen: tuple[str, int], m: int) -> int:
    axis, p = gen
    return p * m if axis == "x" else p


def search_codes(
    family: str,
    n: int,
    k_target: int,
    d_floor: int,
    *,
    stop_after: int | None = None,
    max_candidates: int | None = None,
) -> SearchResult:
    """Enumerate bicycle instances with k = k_target and certified d >= d_floor.

    Factorizations (l, m) of n/2 are scanned balanced-first; within one,
    candidates follow lexicographic order of the quotiented exponent tuples
    (BB5: A1 = I fixed, then A2, then the sorted {A3, A4, A5} set; BB6:
    sorted distinct generator triples with the (A, B) block swap quotiented).
    Hits carry their exact distance, certified by kernel enumeration. The
    result is flagged incomplete when a limit cut the scan short.
    """
    if family not in ("bb5", "bb6"):
        raise ValueError(f"unknown family {family!r}")
    if n % 2:
        raise ValueError("n must be even for bicycle codes")
    s = n // 2
    hits: list[tuple[object, int, int, int]] = []
    examined = 0

    def certify(spec, build):
        code = certify_distance(build(spec))
        if code.d >= d_floor:
            hits.append((spec, code.n, code.k, code.d))
            return True
        return False

    for l, m in _factorizations(s):
        if family == "bb5":
            cand_iter = (
                ((0, a2), trip)
                for a2 in range(1, s)
                for trip in combinations(range(s), 3)
            )
            to_spec = lambda ca, cb: Bb5Spec(
                l, m, tuple((g // m, g % m) for g in ca + cb))
            build = build_bb5
        else:
            gens = _bb6_generators(l, m)
            idx = [_gen_index(g, m) for g in gens]
            triples = list(combinations(range(len(gens)), 3))
            cand_iter = (
                (tuple(idx[i] for i in ta), tuple(idx[i] for i in tb))
                for a, ta in enumerate(triples)
                for tb in triples[a:]
            )
            gen_of = {i: g for i, g in zip(idx, gens)}
            to_spec = lambda ca, cb: Bb6Spec(
                l, m, tuple(gen_of[g] for g in ca + cb))
            build = build_bb6
        for ca, cb in cand_iter:
            examined += 1
            if max_candidates is not None and examined > max_candidates:
                return SearchResult(hits, False, examined - 1)
            k, ok = _eval_candidate(l, m, ca, cb, d_floor)
            if k == k_target and ok and certify(to_spec(ca, cb), build):
                if stop_after and len(hits) >= stop_after:
                    return SearchResult(hits, False, examined)
    return SearchResult(hits, True, examined)
