import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from ._eigensolver import eigh, matrix_function, rank_tolerance, spectral_projection
from ._exceptions import InvalidSystemError, NotTotalError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
RANK_TOL_FACTOR = 1e-10


def _frozen_array(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.flags.writeable = False
    return array


class Classification(str, Enum):
    ONB = "ONB"
    PARSEVAL = "Parseval"
    FRAME = "Frame"
    NOT_TOTAL = "NotTotal"


@dataclass(frozen=True)
class VectorSystem:
    """Finite ordered family {f_n} of vectors in C^d.

    Parameters
    ----------
    vectors: array-like of shape (m, d)
        Row n holds f_n. Real input is promoted to complex.
    """

    vectors: np.ndarray

    def __post_init__(self):
        vectors = self.vectors
        if not isinstance(vectors, np.ndarray):
            vectors = list(vectors)
            if len(vectors) == 0:
                raise InvalidSystemError("A vector system needs at least one vector.")
            dims = [len(np.atleast_1d(v)) for v in vectors]
            for n, dim in enumerate(dims):
                if dim != dims[0]:
                    raise InvalidSystemError(
                        f"Vector {n} has dimension {dim}, but vector 0 has dimension "
                        f"{dims[0]}"
                    )
        array = np.array(vectors, dtype=complex)
        if array.ndim != 2:
            raise InvalidSystemError(
                f"Expected an (m, d) array of vectors, but found shape {array.shape}"
            )
        if array.shape[0] == 0 or array.shape[1] == 0:
            raise InvalidSystemError(
                f"A vector system needs m >= 1 vectors of dimension d >= 1, but found "
                f"shape {array.shape}"
            )
        array.flags.writeable = False
        object.__setattr__(self, "vectors", array)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.vectors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorSystem):
            return NotImplemented
        return self.vectors.shape == other.vectors.shape and bool(
            np.all(self.vectors == other.vectors)
        )

    def __hash__(self):
        return hash((self.vectors.shape, self.vectors.tobytes()))

    def __repr__(self):
        return f"<VectorSystem m={len(self)}, d={self.dim}>"

    def transformed(self, operator: np.ndarray) -> "VectorSystem":
        """Applies a d x d operator to every vector."""
        return VectorSystem(self.vectors @ np.asarray(operator).T)


@dataclass(frozen=True)
class FrameReport:
    """Frame bounds, frame operator and classification of a vector system."""

    lower_bound: float
    upper_bound: float
    frame_operator: np.ndarray
    classification: Classification
    tol: float
    rank_tol: float
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def is_total(self) -> bool:
        return self.classification != Classification.NOT_TOTAL

    @property
    def condition(self) -> float:
        if self.lower_bound <= self.rank_tol:
            return float("inf")
        return self.upper_bound / self.lower_bound

    def to_dict(self) -> dict:
        return {
            "A": self.lower_bound,
            "B": self.upper_bound,
            "classification": self.classification.value,
            "tol": self.tol,
        }

    def __repr__(self):
        return (
            f"<FrameReport {self.classification.value}(A={self.lower_bound}, "
            f"B={self.upper_bound})>"
        )


@dataclass(frozen=True)
class SpectralSlice:
    """Restriction of a system to the spectral window [1/n, n] of its frame operator."""

    n: int
    projection: np.ndarray
    sliced_system: VectorSystem
    window_eigenvalues: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.window_eigenvalues)

    def __repr__(self):
        return f"<SpectralSlice n={self.n}, rank={self.rank}>"


def _as_system(sys: Union[VectorSystem, Iterable]) -> VectorSystem:
    if isinstance(sys, VectorSystem):
        return sys
    return VectorSystem(sys)


def analysis_operator(sys: VectorSystem) -> np.ndarray:
    """Analysis operator theta: v -> (<v, f_n>)_n as an m x d matrix.

    The inner product is linear in the first argument, so row n is the
    conjugate of f_n.
    """
    return _as_system(sys).vectors.conj()


def synthesis_operator(sys: VectorSystem) -> np.ndarray:
    """Adjoint of the analysis operator, d x m, mapping delta_n to f_n."""
    return _as_system(sys).vectors.T.copy()


def frame_operator(sys: VectorSystem) -> np.ndarray:
    """S = theta* theta = sum_n f_n f_n*."""
    theta = analysis_operator(sys)
    return theta.conj().T @ theta


def frame_report(
    sys: VectorSystem, tol: float = DEFAULT_TOL, method: str = "jacobi"
) -> FrameReport:
    """Computes frame bounds and classifies a vector system.

    Parameters
    ----------
    sys: VectorSystem
        The system {f_n}.
    tol: float
        Tolerance for the Parseval test max(|A - 1|, |B - 1|) <= tol.
    method: str
        Eigensolver, "jacobi" (default) or "lapack".

    Returns
    -------
    FrameReport

    Example
    -------
    >>> frame_report(VectorSystem(np.eye(3)))
    <FrameReport ONB(A=1.0, B=1.0)>
    """
    if tol <= 0:
        raise ValueError(f"Tolerance has to be positive, but found {tol}")
    sys = _as_system(sys)
    s = frame_operator(sys)
    eigenvalues, _ = eigh(s, method=method)
    rank_tol = rank_tolerance(eigenvalues, RANK_TOL_FACTOR)
    lower = max(float(eigenvalues[0]), 0.0)
    upper = max(float(eigenvalues[-1]), 0.0)

    if eigenvalues[0] < rank_tol:
        classification = Classification.NOT_TOTAL
    elif max(abs(lower - 1.0), abs(upper - 1.0)) <= tol:
        if len(sys) == sys.dim:
            classification = Classification.ONB
        else:
            classification = Classification.PARSEVAL
    else:
        classification = Classification.FRAME

    s.flags.writeable = False
    return FrameReport(
        lower_bound=lower,
        upper_bound=upper,
        frame_operator=s,
        classification=classification,
        tol=tol,
        rank_tol=rank_tol,
        eigenvalues=_frozen_array(eigenvalues, float),
    )


def canonical_parseval(
    sys: VectorSystem, tol: float = DEFAULT_TOL, method: str = "jacobi"
) -> VectorSystem:
    """Returns the canonical Parseval frame {S^{-1/2} f_k}.

    Raises
    ------
    NotTotalError
        If the lower frame bound does not exceed the rank tolerance; S^{-1/2}
        is only taken on total systems, never as a pseudo-inverse.
    """
    sys = _as_system(sys)
    s = frame_operator(sys)
    eigenvalues, eigenvectors = eigh(s, method=method)
    rank_tol = rank_tolerance(eigenvalues, RANK_TOL_FACTOR)
    if eigenvalues[0] <= rank_tol:
        raise NotTotalError(
            f"System is not total: lower bound {eigenvalues[0]:.3e} <= rank tolerance "
            f"{rank_tol:.3e}, so S^(-1/2) is undefined on the kernel",
            lower_bound=max(float(eigenvalues[0]), 0.0),
        )
    inverse_root = matrix_function(eigenvalues, eigenvectors, lambda x: 1.0 / np.sqrt(x))
    result = sys.transformed(inverse_root)
    logger.debug(f"Canonical Parseval transform of {sys!r}, condition {eigenvalues[-1] / eigenvalues[0]:.3e}")
    return result


def spectral_truncation(
    sys: VectorSystem, n: int, method: str = "jacobi"
) -> SpectralSlice:
    """Projects a system onto the spectral subspace of S for eigenvalues in [1/n, n].

    On the range of the projection E_n the sliced system satisfies
    (1/n^2)||v||^2 <= ||theta v||^2 <= n^2 ||v||^2.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n has to be a positive integer, but found {n}")
    sys = _as_system(sys)
    eigenvalues, eigenvectors = eigh(frame_operator(sys), method=method)
    lower, upper = 1.0 / n, float(n)
    projection = spectral_projection(eigenvalues, eigenvectors, lower, upper)
    window = eigenvalues[(eigenvalues >= lower) & (eigenvalues <= upper)]
    projection.flags.writeable = False
    return SpectralSlice(
        n=int(n),
        projection=projection,
        sliced_system=sys.transformed(projection),
        window_eigenvalues=_frozen_array(window, float),
    )


def span_bounds(sys: VectorSystem, method: str = "jacobi") -> Tuple[float, float]:
    """Frame bounds of a system regarded as a frame for its own span.

    These are the extreme eigenvalues of S above the rank tolerance, i.e. the
    extreme nonzero eigenvalues of the Gram matrix theta theta*.
    """
    eigenvalues, _ = eigh(frame_operator(_as_system(sys)), method=method)
    nonzero = eigenvalues[eigenvalues >= rank_tolerance(eigenvalues, RANK_TOL_FACTOR)]
    if len(nonzero) == 0:
        return 0.0, 0.0
    return float(nonzero[0]), float(nonzero[-1])


def gram_projection_defect(sys: VectorSystem) -> float:
    """||G^2 - G||_F for the Gram matrix G = theta theta*.

    Zero exactly when the system is Parseval, i.e. the projection of an ONB.
    """
    theta = analysis_operator(sys)
    gram = theta @ theta.conj().T
    return float(np.linalg.norm(gram @ gram - gram))


def probe_frame_sums(
    sys: VectorSystem, n_probes: int = 1000, seed: Optional[int] = 0x5EED
) -> np.ndarray:
    """Evaluates sum_n |<v, f_n>|^2 on random unit vectors v.

    Returns
    -------
    np.ndarray
        One frame sum per probe; for a frame with bounds A, B every entry lies
        in [A, B].
    """
    sys = _as_system(sys)
    rng = np.random.default_rng(seed)
    probes = rng.standard_normal((n_probes, sys.dim)) + 1j * rng.standard_normal(
        (n_probes, sys.dim)
    )
    probes /= np.linalg.norm(probes, axis=1, keepdims=True)
    coefficients = probes @ analysis_operator(sys).T
    return np.sum(np.abs(coefficients) ** 2, axis=1)


def standard_basis(dim: int, indices: Optional[Sequence[int]] = None) -> VectorSystem:
    basis = np.eye(dim, dtype=complex)
    if indices is not None:
        basis = basis[list(indices)]
    return VectorSystem(basis)
