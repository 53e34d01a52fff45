import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ._eigensolver import eigh, matrix_function, rank_tolerance
from ._exceptions import DomainError, InvalidSystemError, NotTotalError, RepresentationError
from ._frames import RANK_TOL_FACTOR, VectorSystem, frame_operator
from ._groups import DEFAULT_SEED, EXHAUSTIVE_PAIRS_ORDER, FiniteGroup, GroupMorphism

logger = logging.getLogger(__name__)

REP_TOL = 1e-10
PAIR_SAMPLES_PER_ELEMENT = 10


@dataclass(frozen=True, eq=False)
class UnitaryRepresentation:
    """Matrices pi(g), indexed by the element indices of `group`.

    Parameters
    ----------
    group: FiniteGroup
        The represented group.
    matrices: array-like of shape (|G|, d, d)
        ``matrices[g]`` is pi(g).
    """

    group: FiniteGroup
    matrices: np.ndarray = field(repr=False)

    def __post_init__(self):
        matrices = np.array(self.matrices, dtype=complex)
        n = self.group.order
        if matrices.ndim != 3 or matrices.shape[0] != n or matrices.shape[1] != matrices.shape[2]:
            raise RepresentationError(
                f"Expected {n} square matrices of equal size, but found shape {matrices.shape}"
            )
        if matrices.shape[1] == 0:
            raise RepresentationError("Representation dimension has to be positive")
        matrices.flags.writeable = False
        object.__setattr__(self, "matrices", matrices)

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def __call__(self, g: int) -> np.ndarray:
        return self.matrices[g]

    def conjugated(self, unitary: np.ndarray) -> "UnitaryRepresentation":
        """The equivalent representation g -> U pi(g) U*."""
        unitary = np.asarray(unitary, dtype=complex)
        return UnitaryRepresentation(
            self.group, unitary[None] @ self.matrices @ unitary.conj().T[None]
        )

    def __repr__(self):
        return f"<UnitaryRepresentation of {self.group.name}, dim={self.dim}>"


class RepresentationDefects(NamedTuple):
    homomorphism: float
    unitarity: float
    identity: float
    pairs_checked: int
    exhaustive: bool
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.homomorphism, self.unitarity, self.identity) <= self.tol

    def to_dict(self) -> dict:
        return {
            "homomorphism_defect": self.homomorphism,
            "unitarity_defect": self.unitarity,
            "identity_defect": self.identity,
            "pairs_checked": self.pairs_checked,
            "exhaustive": self.exhaustive,
        }


def validate_representation(
    rep: UnitaryRepresentation, tol: float = REP_TOL, seed: Optional[int] = DEFAULT_SEED
) -> RepresentationDefects:
    """Measures how far `rep` is from a unitary representation.

    Returns the maxima of ||pi(g)pi(h) - pi(gh)||_F over all pairs (groups of
    order <= 24, sampled pairs above), of ||pi(g)*pi(g) - I||_F over all g and
    of ||pi(e) - I||_F. Nothing is raised; callers compare against `tol`.
    """
    G, matrices = rep.group, rep.matrices
    eye = np.eye(rep.dim)
    n = G.order
    exhaustive = n <= EXHAUSTIVE_PAIRS_ORDER
    if exhaustive:
        g, h = np.divmod(np.arange(n * n), n)
    else:
        samples = min(n * n, PAIR_SAMPLES_PER_ELEMENT * n)
        g, h = np.random.default_rng(seed).integers(0, n, (2, samples))
    products = matrices[g] @ matrices[h]
    homomorphism = np.linalg.norm(products - matrices[G.table[g, h]], axis=(1, 2))
    gram = np.conj(np.transpose(matrices, (0, 2, 1))) @ matrices
    unitarity = np.linalg.norm(gram - eye[None], axis=(1, 2))
    identity = np.linalg.norm(matrices[G.identity] - eye)
    defects = RepresentationDefects(
        float(homomorphism.max()),
        float(unitarity.max()),
        float(identity),
        len(g),
        exhaustive,
        tol,
    )
    logger.debug(f"Validated {rep!r} on {len(g)} pairs: {defects}")
    return defects


def _checked(rep: UnitaryRepresentation, tol: float = REP_TOL) -> UnitaryRepresentation:
    defects = validate_representation(rep, tol)
    if not defects.ok:
        raise RepresentationError(
            f"Not a unitary representation: homomorphism defect {defects.homomorphism:.3e}, "
            f"unitarity defect {defects.unitarity:.3e}, tolerance {tol:.1e}"
        )
    return rep


def left_regular(G: FiniteGroup) -> UnitaryRepresentation:
    """lambda(g) sends delta_h to delta_{gh}."""
    n = G.order
    matrices = np.zeros((n, n, n))
    g, h = np.divmod(np.arange(n * n), n)
    matrices[g, G.table[g, h], h] = 1.0
    return UnitaryRepresentation(G, matrices)


def trivial_representation(G: FiniteGroup, dim: int = 1) -> UnitaryRepresentation:
    return UnitaryRepresentation(G, np.broadcast_to(np.eye(dim), (G.order, dim, dim)))


def orbit_system(
    rep: UnitaryRepresentation, v, subset: Optional[Sequence[int]] = None
) -> VectorSystem:
    """The family {pi(g) v} for g in `subset` (all of G by default), in subset order."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.dim,):
        raise InvalidSystemError(
            f"Vector has shape {v.shape}, but the representation acts on C^{rep.dim}"
        )
    if subset is None:
        subset = range(rep.group.order)
    subset = np.asarray(list(subset), dtype=np.int64)
    if len(subset) == 0:
        raise InvalidSystemError("The orbit subset must not be empty")
    if subset.min() < 0 or subset.max() >= rep.group.order:
        raise RepresentationError(f"Orbit subset contains non-elements: {subset.tolist()}")
    return VectorSystem(rep.matrices[subset] @ v)


def pullback(rep: UnitaryRepresentation, phi: GroupMorphism) -> UnitaryRepresentation:
    """rho(g) = pi(phi(g)) for a morphism phi: G -> N and a representation pi of N."""
    if phi.target != rep.group:
        raise RepresentationError(
            f"Morphism target {phi.target.name} is not the represented group {rep.group.name}"
        )
    return _checked(UnitaryRepresentation(phi.source, rep.matrices[phi.mapping]))


def direct_sum_power(rep: UnitaryRepresentation, n: int) -> UnitaryRepresentation:
    """pi + pi + ... + pi (n copies), block diagonal."""
    if int(n) != n or n < 1:
        raise ValueError(f"Number of copies has to be a positive integer, but found {n}")
    blocks = [scipy.linalg.block_diag(*([m] * int(n))) for m in rep.matrices]
    return UnitaryRepresentation(rep.group, np.array(blocks))


_QUARTER_ROOTS = {Fraction(0): 1.0 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1.0 + 0j, Fraction(3, 4): -1j}


def root_of_unity(phase: Fraction) -> complex:
    """exp(2 pi i phase); exact when the phase is a multiple of 1/4."""
    phase = Fraction(phase) % 1
    if phase in _QUARTER_ROOTS:
        return _QUARTER_ROOTS[phase]
    return complex(np.exp(2j * np.pi * float(phase)))


@dataclass(frozen=True, eq=False)
class DualCharacterTable:
    """Characters of a finite abelian group.

    ``phases[k][h]`` is the exact rational t with xi_k(h) = exp(2 pi i t) and
    ``characters[k, h]`` its complex value. Characters are ordered
    lexicographically in the exponents of the cyclic factors, which are listed in
    `factors` as (generator, relative order).
    """

    group: FiniteGroup
    phases: Tuple[Tuple[Fraction, ...], ...] = field(repr=False)
    factors: Tuple[Tuple[int, int], ...]
    characters: np.ndarray = field(init=False, repr=False)
    _index: Dict[Tuple[Fraction, ...], int] = field(init=False, repr=False)

    def __post_init__(self):
        characters = np.array([[root_of_unity(p) for p in row] for row in self.phases])
        characters.flags.writeable = False
        object.__setattr__(self, "characters", characters)
        object.__setattr__(self, "_index", {row: k for k, row in enumerate(self.phases)})

    def __len__(self) -> int:
        return len(self.phases)

    def product_index(self, a: int, b: int) -> int:
        """Index of the pointwise product xi_a xi_b."""
        row = tuple((x + y) % 1 for x, y in zip(self.phases[a], self.phases[b]))
        return self._index[row]

    def conjugate_index(self, a: int) -> int:
        return self._index[tuple((-x) % 1 for x in self.phases[a])]

    def __repr__(self):
        return f"<DualCharacterTable of {self.group.name}, factors={list(self.factors)}>"


def abelian_dual(G: FiniteGroup) -> DualCharacterTable:
    """Character table of a finite abelian group.

    The group is split into cyclic steps by repeatedly adjoining an element of
    maximal order relative to the subgroup built so far; characters of the
    subgroup are extended along each step with exact rational phases.

    Raises
    ------
    DomainError
        If G is not abelian.
    """
    if not G.is_abelian:
        raise DomainError(f"{G.name} is not abelian; its dual is not a character group")
    members: List[int] = [G.identity]
    in_members = np.zeros(G.order, dtype=bool)
    in_members[G.identity] = True
    phases: List[Dict[int, Fraction]] = [{G.identity: Fraction(0)}]
    factors: List[Tuple[int, int]] = []

    while len(members) < G.order:
        best, best_order = -1, 0
        for g in np.flatnonzero(~in_members):
            x, m = int(g), 1
            while not in_members[x]:
                x, m = G.mul(x, int(g)), m + 1
            if m > best_order:
                best, best_order = int(g), m
        g, m = best, best_order
        g_m = G.power(g, m)
        powers = [G.power(g, j) for j in range(m)]
        extended = [[G.mul(h, p) for h in members] for p in powers]
        new_phases = []
        for chi in phases:
            for k in range(m):
                step = (chi[g_m] + k) / m
                row = {}
                for j, elements in enumerate(extended):
                    for h, x in zip(members, elements):
                        row[x] = (chi[h] + j * step) % 1
                new_phases.append(row)
        phases = new_phases
        members = [x for elements in extended for x in elements]
        in_members[members] = True
        factors.append((g, m))

    table = tuple(tuple(row[h] for h in range(G.order)) for row in phases)
    logger.debug(f"Dual of {G.name}: cyclic steps {factors}")
    return DualCharacterTable(G, table, tuple(factors))


class FourierTransform(NamedTuple):
    matrix: np.ndarray
    mult_rep: UnitaryRepresentation
    dual: DualCharacterTable


def fourier_unitary(G: FiniteGroup) -> FourierTransform:
    """Fourier transform F[xi, h] = conj(xi(h)) / sqrt(n) and the multiplication
    representation mult(g) = diag(conj(xi(g))).

    The 1/sqrt(n) makes F unitary between counting measures, and
    F lambda(g) = mult(g) F for every g.
    """
    dual = abelian_dual(G)
    n = G.order
    matrix = dual.characters.conj() / np.sqrt(n)
    mult = np.zeros((n, n, n), dtype=complex)
    mult[:, np.arange(n), np.arange(n)] = dual.characters.conj().T
    return FourierTransform(matrix, UnitaryRepresentation(G, mult), dual)


def _full_orbit_analysis(rep: UnitaryRepresentation, v) -> np.ndarray:
    return orbit_system(rep, v).vectors.conj()


def commutation_defect(rep: UnitaryRepresentation, v) -> float:
    """max_g ||theta pi(g) - lambda(g) theta||_F for the analysis operator of the full orbit of v."""
    theta = _full_orbit_analysis(rep, v)
    regular = left_regular(rep.group).matrices
    defects = np.linalg.norm(theta[None] @ rep.matrices - regular @ theta[None], axis=(1, 2))
    return float(defects.max())


def parseval_frame_vector(rep: UnitaryRepresentation, w, method: str = "jacobi") -> np.ndarray:
    """S^{-1/2} w, where S is the frame operator of the full orbit of w.

    S commutes with every pi(g), so the orbit of the result is S^{-1/2} applied
    to the orbit of w, a Parseval frame.
    """
    eigenvalues, eigenvectors = eigh(frame_operator(orbit_system(rep, w)), method=method)
    rank_tol = rank_tolerance(eigenvalues, RANK_TOL_FACTOR)
    if eigenvalues[0] <= rank_tol:
        raise NotTotalError(
            f"Orbit is not total: lower bound {eigenvalues[0]:.3e}, so w is no frame vector",
            lower_bound=max(float(eigenvalues[0]), 0.0),
        )
    inverse_root = matrix_function(eigenvalues, eigenvectors, lambda x: 1.0 / np.sqrt(x))
    return inverse_root @ np.asarray(w, dtype=complex)


class RegularEmbedding(NamedTuple):
    isometry: np.ndarray
    projection: np.ndarray
    isometry_defect: float
    commutation_defect: float


def regular_embedding(rep: UnitaryRepresentation, v) -> RegularEmbedding:
    """Exhibits pi as a subrepresentation of lambda through a Parseval frame vector v.

    theta is an isometry when the orbit of v is Parseval, and theta theta* is then a
    projection commuting with every lambda(g).
    """
    theta = _full_orbit_analysis(rep, v)
    projection = theta @ theta.conj().T
    isometry_defect = np.linalg.norm(theta.conj().T @ theta - np.eye(rep.dim))
    regular = left_regular(rep.group).matrices
    commutator = projection[None] @ regular - regular @ projection[None]
    return RegularEmbedding(
        theta,
        projection,
        float(isometry_defect),
        float(np.linalg.norm(commutator, axis=(1, 2)).max()),
    )
