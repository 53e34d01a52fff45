"""
Induced representations Ind_N^G pi on l2(G/N, C^d).

The coordinate space is laid out in coset blocks (see `BlockLayout`). Block row
x of rho(gamma) reads the block of the coset x*gamma through pi[alpha(x, gamma)],
which is the defining formula rho_gamma(phi)(x) = pi[alpha(x, gamma)](phi(x gamma)).
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ._exceptions import CocycleError, GroupValidationError, InvalidSystemError, RepresentationError
from ._frames import DEFAULT_TOL, frame_report, probe_frame_sums
from ._groups import DEFAULT_SEED, Cocycle, check_cocycle_laws
from ._layout import BlockLayout
from ._representations import UnitaryRepresentation, _checked, orbit_system

logger = logging.getLogger(__name__)

FRAMEXT_PROBES = 200


@dataclass(frozen=True)
class InducedRep:
    base_rep: UnitaryRepresentation
    cocycle: Cocycle
    result: UnitaryRepresentation
    layout: BlockLayout

    @property
    def index(self) -> int:
        return self.cocycle.structure.index

    def __repr__(self):
        return (
            f"<InducedRep {self.base_rep.group.name} -> {self.result.group.name}, "
            f"dim {self.base_rep.dim} -> {self.result.dim}>"
        )


def induce(base_rep: UnitaryRepresentation, cocycle: Cocycle) -> InducedRep:
    """Builds rho = Ind_N^G pi from a representation of N and a cocycle for N <= G.

    Raises
    ------
    RepresentationError
        If `base_rep` does not represent the subgroup of the cocycle, or the
        assembled matrices fail validation.
    CocycleError
        If the cocycle violates one of its laws.
    """
    structure = cocycle.structure
    if base_rep.group != structure.embedding.as_group:
        raise RepresentationError(
            f"Representation of {base_rep.group.name} cannot be induced along a cocycle "
            f"for a subgroup of order {structure.embedding.order}"
        )
    laws = check_cocycle_laws(cocycle)
    if not laws.ok:
        raise CocycleError(f"Cocycle violates its laws: {laws}")

    G = structure.group
    layout = BlockLayout(structure.index, base_rep.dim)
    matrices = np.zeros((G.order, layout.dim, layout.dim), dtype=complex)
    for gamma in range(G.order):
        for x in range(structure.index):
            target = structure.action[x, gamma]
            matrices[gamma, layout.block(x), layout.block(target)] = base_rep.matrices[
                cocycle.alpha[x, gamma]
            ]
    result = _checked(UnitaryRepresentation(G, matrices))
    logger.debug(f"Induced {base_rep!r} to dimension {layout.dim}")
    return InducedRep(base_rep, cocycle, result, layout)


def dilate_frame_vector(ind: InducedRep, w) -> np.ndarray:
    """phi with phi(N) = w and phi(x) = 0 on every other coset."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (ind.base_rep.dim,):
        raise InvalidSystemError(
            f"Vector has shape {w.shape}, but the base representation acts on "
            f"C^{ind.base_rep.dim}"
        )
    if not np.any(w):
        raise InvalidSystemError("Cannot dilate the zero vector")
    blocks = [w] + [np.zeros_like(w)] * (ind.index - 1)
    return ind.layout.flatten(blocks)


def subset_lift(cocycle: Cocycle, S: Sequence[int]) -> List[int]:
    """Evaluation subset for the induced orbit.

    Returns P^{-1} for the disjoint union P = S^{-1} D[0] u ... u S^{-1} D[k-1],
    i.e. the elements D[i]^{-1} s ordered by coset, then by the order of S.

    Parameters
    ----------
    cocycle: Cocycle
        Cocycle carrying the coset representatives D.
    S: sequence(int)
        Nonempty subset of N, as parent element indices.
    """
    structure = cocycle.structure
    G = structure.group
    S = [int(s) for s in S]
    if not S:
        raise ValueError("Subset S must not be empty")
    outside = [s for s in S if s not in structure.embedding]
    if outside:
        raise GroupValidationError(
            f"Elements {outside} of S are not in the subgroup",
            axiom="membership",
            witness=outside,
        )
    lifted: List[int] = []
    seen = set()
    for d in structure.representatives:
        for s in S:
            g = G.mul(G.inv(d), s)
            if g in seen:
                raise CocycleError(
                    f"Lifted subsets overlap at element {g}; coset representatives are "
                    f"inconsistent"
                )
            seen.add(g)
            lifted.append(g)
    return lifted


class FramextReport(NamedTuple):
    base_bounds: Tuple[float, float]
    induced_bounds: Tuple[float, float]
    preserved: bool
    index: int
    subset_size: int
    sampled_sums: Tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "base_bounds": list(self.base_bounds),
            "induced_bounds": list(self.induced_bounds),
            "preserved": self.preserved,
            "index": self.index,
            "subset_size": self.subset_size,
        }


def verify_framext(
    base_rep: UnitaryRepresentation,
    cocycle: Cocycle,
    w,
    S: Optional[Sequence[int]] = None,
    tol: float = DEFAULT_TOL,
    method: str = "jacobi",
    n_probes: int = FRAMEXT_PROBES,
    seed: Optional[int] = DEFAULT_SEED,
) -> FramextReport:
    """Compares the frame bounds of {pi(n) w}_{n in S} with those of the induced orbit
    {rho(g) phi}_{g in subset_lift(S)} of the dilated vector phi.

    Bounds count as preserved when both differ by at most tol * max(1, B) and
    the frame sums of the induced orbit on `n_probes` random unit vectors stay
    inside the induced bounds up to the same margin. With S = N (the default)
    and a frame vector w this always holds.
    """
    embedding = cocycle.structure.embedding
    S = list(embedding.members) if S is None else [int(s) for s in S]
    ind = induce(base_rep, cocycle)
    lift = subset_lift(cocycle, S)

    base = frame_report(
        orbit_system(base_rep, w, [embedding.to_local(s) for s in S]), method=method
    )
    induced_orbit = orbit_system(ind.result, dilate_frame_vector(ind, w), lift)
    induced = frame_report(induced_orbit, method=method)
    sums = probe_frame_sums(induced_orbit, n_probes, seed)
    scale = tol * max(1.0, base.upper_bound)
    preserved = (
        abs(base.lower_bound - induced.lower_bound) <= scale
        and abs(base.upper_bound - induced.upper_bound) <= scale
        and induced.lower_bound - scale <= sums.min()
        and sums.max() <= induced.upper_bound + scale
    )
    logger.debug(f"framext: base {base!r}, induced {induced!r}, preserved={preserved}")
    return FramextReport(
        (base.lower_bound, base.upper_bound),
        (induced.lower_bound, induced.upper_bound),
        bool(preserved),
        ind.index,
        len(lift),
        (float(sums.min()), float(sums.max())),
    )


def framext_decomposition(ind: InducedRep, w, S: Sequence[int], v) -> Tuple[float, float]:
    """Both sides of sum_{g in lift(S)} |<rho_g phi, v>|^2 = sum_i sum_{n in S} |<pi_n w, v_i>|^2,
    with v_i = pi[alpha(N, D[i])] applied to block i of v."""
    structure = ind.cocycle.structure
    embedding = structure.embedding
    v = np.asarray(v, dtype=complex)
    phi = dilate_frame_vector(ind, w)
    lift = subset_lift(ind.cocycle, S)
    lhs = np.sum(np.abs(orbit_system(ind.result, phi, lift).vectors.conj() @ v) ** 2)

    local = [embedding.to_local(s) for s in S]
    base_orbit = orbit_system(ind.base_rep, w, local).vectors
    rhs = 0.0
    for block, d in zip(ind.layout.unflatten(v), structure.representatives):
        v_i = ind.base_rep.matrices[ind.cocycle.alpha[0, d]] @ block
        rhs += np.sum(np.abs(base_orbit.conj() @ v_i) ** 2)
    return float(lhs), float(rhs)
