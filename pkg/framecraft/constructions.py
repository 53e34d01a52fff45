"""
Named group constructions. Every construction is registered under the `kind`
used by group spec documents, e.g. {"kind": "dihedral", "n": 6}, and
`build_group` dispatches on it.

Element orderings are fixed:
cyclic: residues 0..n-1; dihedral: rotations r0..r(n-1), then reflections
s0..s(n-1) where s_a = s r^a; symmetric: permutations of 0..n-1 in
lexicographic order.
"""
import logging
from itertools import permutations
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from ._exceptions import SpecError
from ._groups import FiniteGroup, direct_product, semidirect_product
from ._registry import _DictWithGetAttr

logger = logging.getLogger(__name__)

MAX_SYMMETRIC_DEGREE = 6

_kinds = _DictWithGetAttr("group kind")


def group_kind(name: str):
    def _decorator(func: Callable):
        _kinds[name] = func
        return func

    return _decorator


def _positive_int(value, pointer: str, upper: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise SpecError(f"Expected a positive integer, but found {value!r}", pointer)
    if upper is not None and value > upper:
        raise SpecError(f"Value {value} exceeds the supported maximum {upper}", pointer)
    return int(value)


def cyclic(n: int) -> FiniteGroup:
    n = _positive_int(n, "/n")
    residues = np.arange(n)
    table = (residues[:, None] + residues[None, :]) % n
    return FiniteGroup(table, [str(k) for k in residues], name=f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    n = _positive_int(n, "/n")
    a = np.arange(n)
    rot = (a[:, None] + a[None, :]) % n
    diff = (a[None, :] - a[:, None]) % n
    table = np.block([[rot, n + diff], [n + rot, diff]])
    labels = [f"r{k}" for k in a] + [f"s{k}" for k in a]
    return FiniteGroup(table, labels, name=f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    """Permutations of n points with (sigma tau)(i) = sigma(tau(i))."""
    n = _positive_int(n, "/n", upper=MAX_SYMMETRIC_DEGREE)
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    # lexicographic order is the order of the base-n codes
    weights = n ** np.arange(n - 1, -1, -1)
    codes = perms @ weights
    table = np.searchsorted(codes, perms[:, perms] @ weights)
    labels = ["".join(str(i + 1) for i in p) for p in perms]
    return FiniteGroup(table, labels, name=f"S{n}")


def from_table(labels: Optional[Sequence[str]], table) -> FiniteGroup:
    return FiniteGroup(np.asarray(table), tuple(labels or ()), name="table")


@group_kind("cyclic")
def _cyclic_spec(spec, pointer):
    return cyclic(_positive_int(spec.get("n"), f"{pointer}/n"))


@group_kind("dihedral")
def _dihedral_spec(spec, pointer):
    return dihedral(_positive_int(spec.get("n"), f"{pointer}/n"))


@group_kind("symmetric")
def _symmetric_spec(spec, pointer):
    return symmetric(_positive_int(spec.get("n"), f"{pointer}/n", MAX_SYMMETRIC_DEGREE))


@group_kind("table")
def _table_spec(spec, pointer):
    table = spec.get("table")
    if not isinstance(table, list) or not all(isinstance(row, list) for row in table):
        raise SpecError("Expected the multiplication table as a list of rows", f"{pointer}/table")
    labels = spec.get("labels")
    if labels is not None and not isinstance(labels, list):
        raise SpecError("Expected a list of labels", f"{pointer}/labels")
    for i, row in enumerate(table):
        if len(row) != len(table):
            raise SpecError(
                f"Row {i} has {len(row)} entries, but the table has {len(table)} rows",
                f"{pointer}/table/{i}",
            )
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise SpecError(
                    f"Table entries have to be element indices, found {entry!r}",
                    f"{pointer}/table/{i}/{j}",
                )
    return from_table(labels, table)


@group_kind("product")
def _product_spec(spec, pointer):
    factors = spec.get("factors")
    if not isinstance(factors, list) or len(factors) < 2:
        raise SpecError("A product needs a list of at least two factors", f"{pointer}/factors")
    groups = [build_group(f, f"{pointer}/factors/{i}") for i, f in enumerate(factors)]
    result = groups[0]
    for group in groups[1:]:
        result = direct_product(result, group)
    return result


@group_kind("semidirect")
def _semidirect_spec(spec, pointer):
    acting = build_group(spec.get("acting"), f"{pointer}/acting")
    normal = build_group(spec.get("normal"), f"{pointer}/normal")
    action = spec.get("action")
    if action is None:
        action = [list(range(normal.order))] * acting.order
    if not isinstance(action, list) or len(action) != acting.order:
        raise SpecError(
            f"The action needs one permutation per element of the acting group "
            f"({acting.order})",
            f"{pointer}/action",
        )
    return semidirect_product(acting, normal, action)


def build_group(spec: Mapping, pointer: str = "") -> FiniteGroup:
    """Builds a validated group from a spec document.

    Parameters
    ----------
    spec: dict
        One of {"kind": "cyclic"|"dihedral"|"symmetric", "n": n},
        {"kind": "table", "labels": [...], "table": [[...]]},
        {"kind": "product", "factors": [spec, spec, ...]} or
        {"kind": "semidirect", "acting": spec, "normal": spec, "action": [[perm], ...]}.
    pointer: str
        JSON pointer of `spec` within an enclosing document, used in errors.

    Raises
    ------
    SpecError
        For malformed spec documents.
    KeyError
        For an unknown kind.
    GroupValidationError
        If the resulting table, action or product violates a group axiom.
    """
    if not isinstance(spec, Mapping):
        raise SpecError("Expected a group spec object", pointer)
    kind = spec.get("kind")
    if not isinstance(kind, str):
        raise SpecError("Group spec needs a string field 'kind'", f"{pointer}/kind")
    group = _kinds.resolve(kind)(spec, pointer)
    logger.debug(f"Built {group!r} from kind '{kind}'")
    return group
