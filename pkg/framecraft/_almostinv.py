"""
Almost invariant vectors.

The invariance defect of a unit vector v over a finite generating set is
sqrt(sum_g ||pi(g) v - v||^2) = sqrt(<Delta v, v>) for the Laplacian
Delta = sum_g (I - pi(g))* (I - pi(g)); its bottom eigenpairs are the best
almost invariant vectors.

Two kinds of representations are supported: `UnitaryRepresentation` of a finite
group with generators given as element indices, and the diagonal
representation of Z^d on L2(nu) for an atomic measure nu on the torus
(`MeasureRepresentation`), whose generators are vectors in Z^d.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import singledispatch
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ._eigensolver import eigh
from ._exceptions import DomainError, RepresentationError
from ._representations import UnitaryRepresentation, root_of_unity

logger = logging.getLogger(__name__)

INVARIANT_TOL_FACTOR = 1e-10

Angle = Tuple[Fraction, ...]


def _distance_to_identity(angle: Angle) -> Fraction:
    return max(min(a, 1 - a) for a in angle)


@dataclass(frozen=True)
class DualMeasure:
    """Atomic measure on the dual torus of Z^rank.

    Parameters
    ----------
    rank: int
        The group is Z^rank.
    atoms: sequence of (angle, weight)
        Angles are tuples of exact rationals, reduced into [0, 1); weights are
        positive.
    generators: sequence of integer tuples
        Finite generating set used for all defects.
    """

    rank: int
    atoms: Tuple[Tuple[Angle, float], ...]
    generators: Tuple[Tuple[int, ...], ...] = field(default=None)

    def __post_init__(self):
        if int(self.rank) != self.rank or self.rank < 1:
            raise DomainError(f"Rank has to be a positive integer, but found {self.rank}")
        atoms = []
        for angle, weight in self.atoms:
            parts = angle if isinstance(angle, (tuple, list)) else (angle,)
            angle = tuple(Fraction(a) % 1 for a in parts)
            if len(angle) != self.rank:
                raise DomainError(f"Angle {angle} does not have {self.rank} coordinates")
            if not weight > 0:
                raise DomainError(f"Atom weights have to be positive, found {weight}")
            atoms.append((angle, float(weight)))
        if not atoms:
            raise DomainError("A measure needs at least one atom")
        if len({angle for angle, _ in atoms}) != len(atoms):
            raise DomainError("Atoms have to be distinct")
        generators = self.generators
        if generators is None:
            generators = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        generators = tuple(tuple(int(x) for x in g) for g in generators)
        if not generators:
            raise DomainError("At least one generator is required")
        for g in generators:
            if len(g) != self.rank:
                raise DomainError(f"Generator {g} does not have {self.rank} coordinates")
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "generators", generators)

    @property
    def angles(self) -> List[Angle]:
        return [angle for angle, _ in self.atoms]

    @property
    def weights(self) -> np.ndarray:
        return np.array([weight for _, weight in self.atoms])

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def identity_atom(self) -> Optional[int]:
        for j, angle in enumerate(self.angles):
            if not any(angle):
                return j
        return None

    def distances(self) -> List[Fraction]:
        """Distance of every atom to the identity character (max-norm on the torus)."""
        return [_distance_to_identity(angle) for angle in self.angles]

    def character_values(self, generator: Sequence[int]) -> np.ndarray:
        """xi_j(g) = exp(2 pi i <g, angle_j>) for every atom j."""
        return np.array(
            [
                root_of_unity(sum(int(k) * a for k, a in zip(generator, angle)))
                for angle in self.angles
            ]
        )


@dataclass(frozen=True, eq=False)
class MeasureRepresentation:
    """pi_nu(g) f(xi) = conj(xi(g)) f(xi) on L2(nu).

    ``diagonals[i]`` holds the diagonal of pi_nu(generators[i]). Vectors are
    functions on the atoms; coordinates u = sqrt(weight) * f turn the weighted
    inner product into the Euclidean one.
    """

    measure: DualMeasure
    diagonals: np.ndarray = field(repr=False)

    def to_coordinates(self, f) -> np.ndarray:
        return np.sqrt(self.measure.weights) * np.asarray(f, dtype=complex)

    def from_coordinates(self, u) -> np.ndarray:
        return np.asarray(u, dtype=complex) / np.sqrt(self.measure.weights)

    def norm(self, f) -> float:
        return float(np.linalg.norm(self.to_coordinates(f)))

    @property
    def dim(self) -> int:
        return len(self.measure)


def dual_measure_rep(measure: DualMeasure) -> MeasureRepresentation:
    diagonals = np.array([measure.character_values(g).conj() for g in measure.generators])
    diagonals.flags.writeable = False
    return MeasureRepresentation(measure, diagonals)


def _check_indices(indices, n: int, what: str):
    for i in indices:
        if not 0 <= i < n:
            raise RepresentationError(f"Index {i} is out of range, there are {n} {what}")


@singledispatch
def _generator_action(rep, gens) -> Tuple[List[str], List[np.ndarray]]:
    raise TypeError(f"Unsupported representation type {type(rep).__name__}")


@_generator_action.register
def _(rep: UnitaryRepresentation, gens):
    if gens is None:
        raise ValueError("Generators are required for group representations")
    gens = [int(g) for g in gens]
    _check_indices(gens, rep.group.order, f"elements of {rep.group.name}")
    return [rep.group.labels[g] for g in gens], [rep.matrices[g] for g in gens]


@_generator_action.register
def _(rep: MeasureRepresentation, gens):
    if gens is None:
        gens = range(len(rep.measure.generators))
    gens = [int(i) for i in gens]
    _check_indices(gens, len(rep.measure.generators), "measure generators")
    labels = [",".join(str(x) for x in rep.measure.generators[i]) for i in gens]
    return labels, [np.diag(rep.diagonals[i]) for i in gens]


@singledispatch
def _coordinates(rep, v) -> np.ndarray:
    return np.asarray(v, dtype=complex)


@_coordinates.register
def _(rep: MeasureRepresentation, v):
    return rep.to_coordinates(v)


@singledispatch
def _from_coordinates(rep, u) -> np.ndarray:
    return u


@_from_coordinates.register
def _(rep: MeasureRepresentation, u):
    return rep.from_coordinates(u)


def laplacian(rep, gens=None) -> np.ndarray:
    """Delta = sum_g (I - pi(g))* (I - pi(g)) in orthonormal coordinates."""
    _, matrices = _generator_action(rep, gens)
    if not matrices:
        raise ValueError("The generator list must not be empty")
    eye = np.eye(rep.dim)
    return sum((eye - m).conj().T @ (eye - m) for m in matrices)


def invariance_defect(rep, v, gens=None) -> Dict[str, float]:
    """||pi(g) v - v|| / ||v|| for every generator, keyed by generator label.

    Parameters
    ----------
    rep: UnitaryRepresentation or MeasureRepresentation
    v: array-like
        Nonzero vector; for measure representations a function on the atoms.
    gens: sequence(int)
        Element indices for group representations; indices into
        ``measure.generators`` for measure representations (default: all).
    """
    labels, matrices = _generator_action(rep, gens)
    if not matrices:
        raise ValueError("The generator list must not be empty")
    u = _coordinates(rep, v)
    norm = np.linalg.norm(u)
    if norm == 0:
        raise ValueError("Invariance defects are undefined for the zero vector")
    u = u / norm
    return {label: float(np.linalg.norm(m @ u - u)) for label, m in zip(labels, matrices)}


def combined_defect(defects: Dict[str, float]) -> float:
    return float(np.sqrt(sum(d**2 for d in defects.values())))


class GapReport(NamedTuple):
    defect_per_generator: Dict[str, float]
    combined: float
    minimizer: np.ndarray
    laplacian_min_eig: float

    def to_dict(self) -> dict:
        return {
            "defect_per_generator": dict(self.defect_per_generator),
            "combined": self.combined,
            "minimizer": list(self.minimizer),
            "laplacian_min_eig": self.laplacian_min_eig,
        }


def best_almost_invariant(
    rep, gens=None, exclude_invariants: bool = False, method: str = "jacobi"
) -> GapReport:
    """Minimizes sum_g ||pi(g) v - v||^2 over unit vectors v.

    The minimizer is the eigenvector of the bottom eigenvalue of the Laplacian.
    With `exclude_invariants` the search is restricted to the orthogonal
    complement of the fixed space, i.e. eigenvalues below
    1e-10 * max(1, lambda_max) are discarded.

    Raises
    ------
    DomainError
        If nothing is left after excluding the fixed space.
    """
    delta = laplacian(rep, gens)
    eigenvalues, eigenvectors = eigh(delta, method=method)
    threshold = INVARIANT_TOL_FACTOR * max(1.0, float(eigenvalues[-1]))
    position = 0
    if exclude_invariants:
        retained = np.flatnonzero(eigenvalues >= threshold)
        if len(retained) == 0:
            raise DomainError(
                "Every vector is invariant; the complement of the fixed space is empty"
            )
        position = retained[0]
        logger.debug(f"Excluded a fixed space of dimension {position}")
    u = eigenvectors[:, position]
    peak = u[np.argmax(np.abs(u))]
    u = u * (abs(peak) / peak)
    minimizer = _from_coordinates(rep, u)
    defects = invariance_defect(rep, minimizer, gens)
    return GapReport(
        defects,
        combined_defect(defects),
        minimizer,
        max(float(eigenvalues[position]), 0.0),
    )


def atom_laplacian(measure: DualMeasure) -> np.ndarray:
    """Diagonal of the Laplacian of pi_nu: sum_g |xi_j(g) - 1|^2 at atom j."""
    total = np.zeros(len(measure))
    for g in measure.generators:
        values = measure.character_values(g)
        total += (values.real - 1.0) ** 2 + values.imag**2
    return total


class Thai1Witness(NamedTuple):
    n: int
    vector: np.ndarray
    defect: float


def thai1_witnesses(
    measure: DualMeasure, shrinking_sets: Sequence[Sequence[int]]
) -> List[Thai1Witness]:
    """Normalized indicators v_n = chi_{V_n} / sqrt(nu(V_n)) and their combined defects.

    The sets are atom-index subsets; n counts from 1.
    """
    weights = measure.weights
    values = atom_laplacian(measure)
    witnesses = []
    for n, atoms in enumerate(shrinking_sets, start=1):
        atoms = sorted({int(j) for j in atoms})
        if not atoms:
            raise ValueError(f"Witness set {n} is empty")
        if atoms[0] < 0 or atoms[-1] >= len(measure):
            raise ValueError(f"Witness set {n} contains unknown atoms: {atoms}")
        vector = np.zeros(len(measure), dtype=complex)
        mass = weights[atoms].sum()
        vector[atoms] = 1.0 / np.sqrt(mass)
        defect = float(np.sqrt(np.dot(weights[atoms], values[atoms]) / mass))
        witnesses.append(Thai1Witness(n, vector, defect))
    return witnesses


def is_shrinking(measure: DualMeasure, sets: Sequence[Sequence[int]]) -> bool:
    """True when the sets are nested and each step only drops atoms whose Laplacian
    value is at least that of every atom kept, which makes witness defects
    non-increasing."""
    values = atom_laplacian(measure)
    for outer, inner in zip(sets, sets[1:]):
        outer, inner = set(outer), set(inner)
        if not inner <= outer:
            return False
        dropped = outer - inner
        if dropped and inner and values[list(dropped)].min() < values[list(inner)].max():
            return False
    return True


def tail_sets(measure: DualMeasure) -> List[List[int]]:
    """V_1 = all atoms, then repeatedly drop the atom farthest from the identity."""
    distances = measure.distances()
    order = sorted(range(len(measure)), key=lambda j: (-distances[j], j))
    return [sorted(order[i:]) for i in range(len(order))]


def thai1_obstruction(measure: DualMeasure) -> float:
    """c = min over atoms of sum_g |xi(g) - 1|^2.

    For an atomic measure the Laplacian is diagonal, so c is its bottom
    eigenvalue; c > 0 rules out almost invariant vectors for the truncation and
    c = 0 exactly when the identity character carries mass.
    """
    return float(atom_laplacian(measure).min())
