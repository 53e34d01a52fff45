import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from hypothesis.strategies import integers
from scipy.stats import unitary_group

from framecraft import NumericalFailureError, eigh, jacobi_eigh
from framecraft._eigensolver import _round_robin, matrix_function, rank_tolerance, spectral_projection


def random_hermitian(d, seed):
    rnd = np.random.RandomState(seed)
    a = rnd.randn(d, d) + 1j * rnd.randn(d, d)
    return a + a.conj().T


@pytest.mark.parametrize("d", [1, 2, 3, 5, 12, 16, 31])
def test_jacobi_matches_lapack(d):
    matrix = random_hermitian(d, d)
    eigenvalues, eigenvectors = jacobi_eigh(matrix)
    expected, _ = eigh(matrix, method="lapack")

    np.testing.assert_allclose(eigenvalues, expected, atol=1e-9)
    assert np.all(np.diff(eigenvalues) >= 0)
    np.testing.assert_allclose(eigenvectors.conj().T @ eigenvectors, np.eye(d), atol=1e-10)
    np.testing.assert_allclose(
        matrix @ eigenvectors, eigenvectors * eigenvalues, atol=1e-8
    )


@pytest.mark.parametrize("d", range(1, 10))
def test_round_robin_covers_every_pair_once(d):
    rounds = _round_robin(d)
    pairs = [(int(p), int(q)) for ps, qs in rounds for p, q in zip(ps, qs)]

    assert sorted(pairs) == [(p, q) for p in range(d) for q in range(p + 1, d)]
    assert len(rounds) == (0 if d == 1 else d - 1 + d % 2)
    for ps, qs in rounds:
        touched = list(ps) + list(qs)
        assert len(set(touched)) == len(touched)


def test_known_spectrum():
    u = unitary_group.rvs(4, random_state=0)
    spectrum = np.array([3.0, -1.0, 0.5, 2.0])
    matrix = (u * spectrum) @ u.conj().T

    eigenvalues, _ = eigh(matrix)

    np.testing.assert_allclose(eigenvalues, np.sort(spectrum), atol=1e-10)


def test_diagonal_input_is_exact():
    eigenvalues, eigenvectors = jacobi_eigh(np.diag([2.0, 0.0, 4.0, 2.0]))

    assert eigenvalues.tolist() == [0.0, 2.0, 2.0, 4.0]
    # ties keep their original order
    np.testing.assert_array_equal(np.abs(eigenvectors[:, 1:3]), np.eye(4)[:, [0, 3]])


def test_non_convergence():
    with pytest.raises(NumericalFailureError) as info:
        jacobi_eigh(random_hermitian(4, 0), max_sweeps=0)
    assert info.value.iterations == 0


def test_unknown_method():
    with pytest.raises(KeyError, match="eigensolver"):
        eigh(np.eye(2), method="qr")


def test_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))


def test_spectral_helpers():
    matrix = np.diag([0.25, 1.0, 9.0])
    eigenvalues, eigenvectors = eigh(matrix)

    np.testing.assert_allclose(
        spectral_projection(eigenvalues, eigenvectors, 0.5, 2.0), np.diag([0.0, 1.0, 0.0])
    )
    np.testing.assert_allclose(
        matrix_function(eigenvalues, eigenvectors, np.sqrt), np.diag([0.5, 1.0, 3.0])
    )
    assert rank_tolerance(eigenvalues) == pytest.approx(9e-10)
    assert rank_tolerance(np.array([0.1])) == 1e-10


@settings(deadline=None)
@given(
    arrays(np.int64, (6, 6), elements=integers(-10, 10)),
    integers(1, 6),
)
def test_reconstruction(a, d):
    matrix = (a + a.T)[:d, :d].astype(float)
    eigenvalues, eigenvectors = jacobi_eigh(matrix)
    reconstructed = (eigenvectors * eigenvalues) @ eigenvectors.conj().T

    np.testing.assert_allclose(reconstructed, matrix, atol=1e-8 * max(1.0, np.abs(matrix).max()))
