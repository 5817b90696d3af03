import numpy as np
import pytest

from ricbounds.core.errors import DomainError, NonConvergenceError
from ricbounds.services.counter_rng import CounterRng
from ricbounds.services.jacobi import gram_extremes, gram_matrix, jacobi_eigenvalues


def _block(n, k, seed):
    return CounterRng(seed).normal(n * k).reshape((n, k), order="F")


def test_single_column():
    column = np.array([[1.0], [2.0], [2.0]])
    assert gram_extremes(column) == (9.0, 9.0)


def test_orthonormal_columns():
    q, _ = np.linalg.qr(_block(10, 4, seed=1))
    lo, hi = gram_extremes(q)
    assert lo == pytest.approx(1.0, abs=1e-10)
    assert hi == pytest.approx(1.0, abs=1e-10)


def test_three_columns_match_characteristic_roots():
    block = _block(6, 3, seed=2)
    roots = np.sort(np.roots(np.poly(block.T @ block)).real)
    lo, hi = gram_extremes(block)
    assert lo == pytest.approx(roots[0], abs=1e-8)
    assert hi == pytest.approx(roots[-1], abs=1e-8)


@pytest.mark.parametrize("k", [2, 5, 8])
def test_matches_eigvalsh(k):
    block = _block(12, k, seed=k)
    expected = np.linalg.eigvalsh(block.T @ block)
    assert np.sort(jacobi_eigenvalues(gram_matrix(block))) == pytest.approx(expected, abs=1e-9)


def test_gram_is_symmetric():
    g = gram_matrix(_block(7, 4, seed=3))
    assert np.array_equal(g, g.T)


def test_diagonal_input():
    assert np.sort(jacobi_eigenvalues(np.diag([3.0, 1.0, 2.0]))) == pytest.approx([1.0, 2.0, 3.0])


def test_sweep_cap():
    with pytest.raises(NonConvergenceError):
        jacobi_eigenvalues(np.array([[2.0, 1.0], [1.0, 2.0]]), max_sweeps=0)


def test_shape_errors():
    with pytest.raises(DomainError):
        gram_extremes(np.ones((2, 3)))
    with pytest.raises(DomainError):
        gram_extremes(np.ones(4))
