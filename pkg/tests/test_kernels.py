import numpy as np
import pytest

from cdfsvm.core import GKernelSpec, KernelSpec
from cdfsvm.kernels import cross_gram, g_eval, gram, k_eval


def test_k_eval_rbf_zero_distance():
    spec = KernelSpec.rbf(1.0)
    x = np.array([0.3, 0.7])
    assert k_eval(spec, x, x) == 1.0


def test_k_eval_rbf_direct_substitution():
    # squared distance 2 with delta 1 -> exp(-1)
    spec = KernelSpec.rbf(1.0)
    val = k_eval(spec, np.array([0.0, 0.0]), np.array([1.0, 1.0]))
    assert val == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_k_eval_linear():
    spec = KernelSpec.linear()
    assert k_eval(spec, np.array([1.0, 2.0]), np.array([3.0, 4.0])) == 11.0


def test_k_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        k_eval(KernelSpec.linear(), np.array([1.0]), np.array([1.0, 2.0]))


def test_g_eval_step():
    spec = GKernelSpec.step()
    assert g_eval(spec, np.array([1.0, 1.0]), np.array([0.0, 0.0])) == 1.0
    assert g_eval(spec, np.array([1.0, -1.0]), np.array([0.0, 0.0])) == 0.0
    assert g_eval(spec, np.array([0.0]), np.array([0.0])) == 1.0  # closed comparison


def test_g_eval_gaussian():
    spec = GKernelSpec.gaussian(1.0)
    x = np.array([0.25, 0.5])
    assert g_eval(spec, x, x) == 1.0
    val = g_eval(spec, np.array([1.0, 0.0]), np.array([0.0, 0.0]))
    assert val == pytest.approx(np.exp(-0.5), rel=1e-12)


def test_gram_single_row_rbf():
    G = gram(KernelSpec.rbf(0.7), np.array([[0.1, 0.9]]))
    assert G.values.shape == (1, 1) and G.values[0, 0] == 1.0


def test_gram_identical_rows_all_ones():
    G = gram(KernelSpec.rbf(0.7), np.array([[0.4, 0.2], [0.4, 0.2]]))
    assert np.array_equal(G.values, np.ones((2, 2)))


def test_gram_matches_elementwise_k_eval():
    rng = np.random.default_rng(3)
    X = rng.random((3, 2))
    for spec in (KernelSpec.rbf(0.5), KernelSpec.linear()):
        G = gram(spec, X)
        manual = np.array([[k_eval(spec, X[i], X[j]) for j in range(3)]
                           for i in range(3)])
        assert np.allclose(G.values, manual, atol=1e-12)


def test_gram_exact_symmetry_and_unit_diagonal():
    rng = np.random.default_rng(4)
    X = rng.random((12, 3))
    G = gram(KernelSpec.rbf(0.3), X).values
    assert np.array_equal(G, G.T)
    assert np.all(np.diag(G) == 1.0)
    assert np.all(G > 0.0) and np.all(G <= 1.0)


def test_gram_positive_semidefinite():
    rng = np.random.default_rng(5)
    for spec in (KernelSpec.rbf(1.0), KernelSpec.rbf(0.1), KernelSpec.linear()):
        X = rng.random((15, 3))
        eigs = np.linalg.eigvalsh(gram(spec, X).values)
        assert eigs.min() >= -1e-8


def test_gram_full_rank_on_bandwidth_grid():
    rng = np.random.default_rng(6)
    X = rng.random((10, 3))
    for k in range(-4, 5):
        G = gram(KernelSpec.rbf(2.0**k), X).values
        assert np.linalg.matrix_rank(G) == 10


def test_cross_gram_matches_gram_block():
    rng = np.random.default_rng(7)
    X, Z = rng.random((4, 2)), rng.random((5, 2))
    spec = KernelSpec.rbf(0.8)
    C = cross_gram(spec, X, Z)
    manual = np.array([[k_eval(spec, X[i], Z[t]) for t in range(5)]
                       for i in range(4)])
    assert np.allclose(C, manual, atol=1e-12)
