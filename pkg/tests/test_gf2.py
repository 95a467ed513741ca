import numpy as np
import pytest

from ionqec import gf2
from ionqec.codes import Bb5Spec, build_bb5

from oracles import naive_min_logical


def test_circulant_identity():
    assert np.array_equal(gf2.circulant(3, 0), np.eye(3, dtype=np.uint8))


def test_circulant_first_row():
    c = gf2.circulant(5, 1)
    assert c[0].tolist() == [0, 1, 0, 0, 0]
    assert c.sum() == 5


def test_circulant_power_out_of_range():
    with pytest.raises(ValueError):
        gf2.circulant(3, 3)
    with pytest.raises(ValueError):
        gf2.circulant(3, -1)


def test_circulant_group_law_exhaustive():
    # Q_l^u Q_l^v = Q_l^{(u+v) mod l} for every l <= 16
    for l in range(1, 17):
        for u in range(l):
            for v in range(l):
                lhs = gf2.mat_mul(gf2.circulant(l, u), gf2.circulant(l, v))
                assert np.array_equal(lhs, gf2.circulant(l, (u + v) % l)), (l, u, v)


def test_circulant_inverse_product():
    assert np.array_equal(
        gf2.mat_mul(gf2.circulant(3, 2), gf2.circulant(3, 1)),
        np.eye(3, dtype=np.uint8))


def test_kron_identity():
    assert np.array_equal(gf2.kron(np.eye(2, dtype=np.uint8), np.eye(3, dtype=np.uint8)),
                          np.eye(6, dtype=np.uint8))


def test_kron_permutation_dims():
    m = gf2.kron(gf2.circulant(5, 1), np.eye(3, dtype=np.uint8))
    assert m.shape == (15, 15)
    assert (m.sum(0) == 1).all() and (m.sum(1) == 1).all()


def test_kron_table_instance():
    # A_5 of the 48-qubit weight-5 instance
    a5 = gf2.kron(gf2.circulant(8, 3), gf2.circulant(3, 2))
    assert a5.shape == (24, 24)
    assert (a5.sum(1) == 1).all()


def test_rank_basics():
    assert gf2.rank(np.eye(4, dtype=np.uint8)) == 4
    assert gf2.rank(np.zeros((3, 3), dtype=np.uint8)) == 0


def test_rank_bb5_30():
    code = build_bb5(Bb5Spec(5, 3, ((0, 0), (1, 0), (0, 0), (0, 1), (2, 2))))
    assert gf2.rank(code.hx) == 13
    assert gf2.rank(code.hz) == 13
    assert code.n - 13 - 13 == 4


def test_rank_transpose_random():
    rng = np.random.default_rng(11)
    for _ in range(40):
        m = rng.integers(0, 2, size=(rng.integers(1, 12), rng.integers(1, 12))).astype(np.uint8)
        assert gf2.rank(m) == gf2.rank(m.T)


def test_kernel_basis_identity_empty():
    assert gf2.kernel_basis(np.eye(3, dtype=np.uint8)).shape == (0, 3)


def test_kernel_basis_parity_check():
    k = gf2.kernel_basis(np.array([[1, 1]], dtype=np.uint8))
    assert k.shape == (1, 2)
    assert k[0].tolist() == [1, 1]


def test_kernel_vectors_annihilate():
    rng = np.random.default_rng(5)
    for _ in range(30):
        m = rng.integers(0, 2, size=(rng.integers(1, 10), rng.integers(2, 14))).astype(np.uint8)
        basis = gf2.kernel_basis(m)
        assert basis.shape[0] == m.shape[1] - gf2.rank(m)
        for v in basis:
            assert not gf2.mat_mul(m, v[:, None]).any()


def test_min_weight_logical_repetition():
    # classical 3-bit repetition: codewords commuting with the parity checks
    stab = np.zeros((0, 3), dtype=np.uint8)
    checks = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    w, vec = gf2.min_weight_logical(stab, checks, 3)
    assert w == 3
    assert vec.tolist() == [1, 1, 1]


def test_min_weight_logical_none_when_capped():
    stab = np.zeros((0, 3), dtype=np.uint8)
    checks = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    assert gf2.min_weight_logical(stab, checks, 2) is None


def test_min_weight_logical_returns_logical_vector(bb5_30):
    w, vec = gf2.min_weight_logical(bb5_30.hz, bb5_30.hx, bb5_30.n)
    assert w == 5
    assert not gf2.mat_mul(bb5_30.hx, vec[:, None]).any()
    rows, pivs = gf2._rref_words(gf2.pack_rows(bb5_30.hz), bb5_30.n)
    assert not gf2.in_rowspace(rows, pivs, int(gf2.pack_rows(vec[None, :])[0]))


def test_min_weight_logical_vs_naive_random_codes():
    rng = np.random.default_rng(23)
    for trial in range(25):
        n = int(rng.integers(4, 13))
        checks = rng.integers(0, 2, size=(rng.integers(1, 5), n)).astype(np.uint8)
        stab = rng.integers(0, 2, size=(rng.integers(0, 4), n)).astype(np.uint8)
        # keep stab inside the codeword space so the quotient is meaningful
        stab = np.array([s for s in stab if not gf2.mat_mul(checks, s[:, None]).any()],
                        dtype=np.uint8).reshape(-1, n)
        expected = naive_min_logical(stab, checks)
        got = gf2.min_weight_logical(stab, checks, n)
        if expected is None:
            assert got is None, trial
        else:
            assert got is not None and got[0] == expected, trial


def test_support_scan_matches_gray_path():
    rng = np.random.default_rng(7)
    for _ in range(10):
        n = int(rng.integers(6, 12))
        checks = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
        stab = np.zeros((0, n), dtype=np.uint8)
        full = gf2.min_weight_logical(stab, checks, n)
        forced = gf2.min_weight_logical(stab, checks, n, kernel_dim_cap=0)
        if full is None:
            assert forced is None
        else:
            assert forced is not None and forced[0] == full[0]


def test_enumeration_capacity_error():
    with pytest.raises(gf2.EnumerationCapacityError):
        gf2.pack_rows(np.zeros((1, 70), dtype=np.uint8))
