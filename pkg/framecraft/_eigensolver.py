"""
Hermitian eigensolvers. The default is a cyclic Jacobi method acting on numpy
arrays; `scipy.linalg.eigh` is registered as the "lapack" backend.

Both return eigenvalues in ascending order together with the matrix whose
columns are the corresponding orthonormal eigenvectors.
"""
import logging
from functools import lru_cache
from typing import Callable, Dict, Tuple

import numpy as np
import scipy.linalg

from ._exceptions import NumericalFailureError

logger = logging.getLogger(__name__)

JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


@lru_cache(maxsize=None)
def _round_robin(d: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Splits all pairs p < q of range(d) into d - 1 (d even) or d (d odd) rounds
    of disjoint pairs."""
    m = d + d % 2
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = sorted(
            (min(players[i], players[m - 1 - i]), max(players[i], players[m - 1 - i]))
            for i in range(m // 2)
        )
        pairs = [(p, q) for p, q in pairs if q < d]
        if pairs:
            p, q = np.array(pairs).T
            rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Annihilates a[p, q] for a round of disjoint pairs at once; returns the rotated a."""
    apq = a[p, q]
    magnitude = np.abs(apq)
    active = magnitude > 0.0
    safe = np.where(active, magnitude, 1.0)
    phase = np.where(active, np.conj(apq) / safe, 1.0)
    tau = (a[q, q].real - a[p, p].real) / (2.0 * safe)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # per pair: phase rotation of column q followed by a real Givens rotation
    j = np.eye(a.shape[0], dtype=complex)
    j[p, p] = c
    j[p, q] = s
    j[q, p] = -s * phase
    j[q, q] = c * phase
    a = j.conj().T @ a @ j
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:] = v @ j
    return a


def jacobi_eigh(
    matrix: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS
) -> Tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Each sweep visits every pair (p, q), p < q, once. Pairs are grouped into
    round-robin rounds of disjoint pairs, and all rotations of a round are
    applied together as one block unitary. Sweeps stop once the Frobenius norm
    of the off-diagonal part drops below ``tol * ||matrix||_F``; a diagonal
    input is returned unchanged.

    Parameters
    ----------
    matrix: np.ndarray
        Square Hermitian matrix. Only its Hermitian part is used.
    tol: float
        Relative off-diagonal threshold.
    max_sweeps: int
        Maximum number of full sweeps.

    Returns
    -------
    eigenvalues: np.ndarray
        Real eigenvalues, ascending.
    eigenvectors: np.ndarray
        Unitary matrix, column j belongs to eigenvalue j.

    Raises
    ------
    NumericalFailureError
        If the threshold is not reached within `max_sweeps` sweeps.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, but found shape {a.shape}")
    a = (a + a.conj().T) / 2.0
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    threshold = tol * np.linalg.norm(a)
    rounds = _round_robin(d)

    for sweep in range(max_sweeps + 1):
        if _off_diagonal_norm(a) <= threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (d={d})")
            eigenvalues = np.real(np.diag(a)).copy()
            order = np.argsort(eigenvalues, kind="stable")
            return eigenvalues[order], v[:, order]
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            a = _rotate(a, v, p, q)

    raise NumericalFailureError(
        f"Jacobi eigensolver did not converge within {max_sweeps} sweeps "
        f"(off-diagonal norm {_off_diagonal_norm(a):.3e}, threshold {threshold:.3e})",
        iterations=max_sweeps,
    )


def lapack_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(matrix, dtype=complex)
    return scipy.linalg.eigh((a + a.conj().T) / 2.0)


EIGENSOLVERS: Dict[str, Callable] = {
    "jacobi": jacobi_eigh,
    "lapack": lapack_eigh,
}


def eigh(matrix: np.ndarray, method: str = "jacobi") -> Tuple[np.ndarray, np.ndarray]:
    if method not in EIGENSOLVERS:
        raise KeyError(
            f"The specified eigensolver '{method}' is unknown. Known eigensolvers "
            f"are: {list(EIGENSOLVERS)}"
        )
    return EIGENSOLVERS[method](matrix)


def rank_tolerance(eigenvalues: np.ndarray, factor: float = 1e-10) -> float:
    """Eigenvalues below this threshold count as zero."""
    return factor * max(1.0, float(np.max(eigenvalues, initial=0.0)))


def spectral_projection(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, lower: float, upper: float
) -> np.ndarray:
    """Orthogonal projection onto the eigenspaces with eigenvalue in [lower, upper]."""
    mask = (eigenvalues >= lower) & (eigenvalues <= upper)
    basis = eigenvectors[:, mask]
    return basis @ basis.conj().T


def matrix_function(
    eigenvalues: np.ndarray, eigenvectors: np.ndarray, function: Callable
) -> np.ndarray:
    return (eigenvectors * function(eigenvalues)) @ eigenvectors.conj().T
