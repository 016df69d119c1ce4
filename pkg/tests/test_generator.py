import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose, assert_array_equal

from conftest import small_params
from retrialcap import CapacityError, DomainError, ModelParams, build_generator, check_structure, extract_level_blocks
from retrialcap.generator import SparseGenerator, dump_coordinates, is_irreducible
from retrialcap.oracle import dense_generator


def test_two_state_erlang():
    Qg = build_generator(ModelParams(1, 0, 0, lambda_n=1.0, lambda_h=1.0, nu=1.0))
    assert_array_equal(Qg.toarray(), [[-2.0, 2.0], [1.0, -1.0]])


def test_tiny_row(tiny):
    Qg = build_generator(tiny)
    assert Qg.dim == 6 and Qg.level_width == 2
    row = Qg.toarray()[Qg.space.index((1, 1))]
    expected = np.zeros(6)
    for s, v in {(2, 1): 1.0, (2, 0): 0.4, (1, 0): 0.1, (0, 1): 1.0}.items():
        expected[Qg.space.index(s)] = v
    expected[Qg.space.index((1, 1))] = -2.5
    assert_allclose(row, expected, rtol=0, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(small_params())
def test_matches_longhand_dense(params):
    assert_allclose(build_generator(params).toarray(), dense_generator(params), rtol=1e-14, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(small_params(c_max=30, m_max=10))
def test_structure_invariants(params):
    Qg = build_generator(params)
    assert check_structure(Qg) == []
    assert np.all(Qg.diagonal() < 0)
    assert len(Qg.triplets) == len(Qg.vals)


@pytest.mark.parametrize("params", [
    ModelParams(6, 0, 3, p=1.0),
    ModelParams(6, 6, 3, p=1.0),
    ModelParams(6, 2, 3, p=0.0),
    ModelParams(1, 1, 0),
])
def test_irreducible_edge_cases(params):
    assert is_irreducible(build_generator(params))


def test_level_blocks_interior():
    p = ModelParams(12, 3, 4)
    Qg = build_generator(p)
    m, lam, nu, pr, mu = p.m, p.lam, p.nu, p.p, p.mu_r
    k = np.arange(m + 1)
    for level in range(1, p.c - p.g):
        lower, diag, upper = extract_level_blocks(Qg, level)
        assert_allclose(lower, level * nu * np.eye(m + 1))
        assert_allclose(upper, lam * np.eye(m + 1) + np.diag(pr * mu * k[1:], -1))
        expected = np.diag(-(lam + level * nu + k * mu)) + np.diag((1 - pr) * mu * k[1:], -1)
        assert_allclose(diag, expected, rtol=1e-14)


def test_level_blocks_guard_region():
    p = ModelParams(12, 3, 4)
    Qg = build_generator(p)
    for level in range(p.threshold, p.c + 1):
        _, diag, upper = extract_level_blocks(Qg, level)
        assert_allclose(np.diag(diag, 1), p.lambda_n)
        if upper is not None:
            assert_allclose(np.diag(upper), p.lambda_h)


def test_level_blocks_boundaries():
    Qg = build_generator(ModelParams(4, 1, 2))
    assert extract_level_blocks(Qg, 0)[0] is None
    assert extract_level_blocks(Qg, 4)[2] is None
    with pytest.raises(DomainError):
        extract_level_blocks(Qg, 5)


def test_capacity_cap():
    with pytest.raises(CapacityError):
        build_generator(ModelParams(100, 5, 100), max_states=1000)


def test_fault_detection(tiny):
    Qg = build_generator(tiny)
    vals = Qg.vals.copy()
    vals[0] += 1e-6
    bad = SparseGenerator(Qg.params, Qg.rows, Qg.cols, vals)
    assert any("row sum" in s for s in check_structure(bad))


def test_banded_storage_roundtrip():
    Qg = build_generator(ModelParams(5, 2, 3))
    A = Qg.toarray()
    for transpose in (False, True):
        ab, bw = Qg.to_banded(transpose)
        M = A.T if transpose else A
        n = M.shape[0]
        rebuilt = np.zeros_like(M)
        for j in range(n):
            for i in range(max(0, j - bw), min(n, j + bw + 1)):
                rebuilt[i, j] = ab[bw + i - j, j]
        assert_array_equal(rebuilt, M)


def test_dump_coordinates(tmp_path, tiny):
    Qg = build_generator(tiny)
    path = tmp_path / "q.txt"
    dump_coordinates(Qg, path)
    lines = path.read_text().splitlines()
    assert len(lines) == len(Qg.vals)
    rows = np.array([ln.split() for ln in lines], dtype=float)
    A = np.zeros((Qg.dim, Qg.dim))
    A[rows[:, 0].astype(int), rows[:, 1].astype(int)] = rows[:, 2]
    assert_array_equal(A, Qg.toarray())
    assert lines[0] == "0 0 -2"
