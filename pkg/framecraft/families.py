"""
Truncation families. A family has to be a function
family(
    size: int,
    **params
) -> VectorSystem
returning the first `size` vectors of an infinite weak frame, truncated to the
coordinates they touch.
"""
import logging
from abc import ABC
from concurrent.futures import ThreadPoolExecutor
from inspect import getfullargspec
from typing import Callable, Iterable, List, NamedTuple, Optional, Union

import numpy as np
import pandas as pd

from ._frames import VectorSystem, span_bounds
from ._registry import _DictWithGetAttr

logger = logging.getLogger(__name__)


_families = _DictWithGetAttr("family")


def family(func: Optional[Callable] = None, *, register: Optional[bool] = False):
    def _decorator(func: Callable):
        """Turns a function into a BaseFamily"""
        argspecs = getfullargspec(func)
        if argspecs.args != ["size"]:
            raise ValueError(
                f"Family {func.__name__} has to have the following signature: "
                f"family(size, *, param1, ...)"
            )

        class Family(BaseFamily):
            def __init__(self, **kwargs):
                super().__init__(func.__name__, **kwargs)

            def system(self, size, **kwargs):
                return func(size, **kwargs)

        defaults = argspecs.kwonlydefaults or {}
        _family = Family(**defaults)
        if register:
            _families[_family.name] = _family
        return _family

    if func is None:
        return _decorator
    return _decorator(func)


class BaseFamily(ABC):
    def __init__(self, name, **params):
        self.name = name
        self.params = params

    def with_params(self, **kwargs) -> "BaseFamily":
        unknown = [k for k in kwargs if k not in self.params]
        if unknown:
            raise ValueError(f"Family {self.name} has no parameters {unknown}")
        clone = type(self)()
        clone.params = {**self.params, **kwargs}
        return clone

    def system(self, size, **params) -> VectorSystem:
        raise NotImplementedError

    def __call__(self, size: int) -> VectorSystem:
        if int(size) != size or size < 1:
            raise ValueError(f"Truncation size has to be a positive integer, got {size}")
        return self.system(int(size), **self.params)

    def __repr__(self):
        params_repr = "".join([f"; {p}={v}" for p, v in self.params.items()])
        return f"<family {self.name}(size{params_repr})>"


@family(register=True)
def diag(size, *, exponent: float = 1.0):
    """f_n = a_n e_n with a_n = n^(-exponent), in dimension `size`."""
    coefficients = np.arange(1, size + 1, dtype=float) ** (-exponent)
    return VectorSystem(np.diag(coefficients))


@family(register=True)
def overlap(size):
    """f_n = e_n + e_{n+1} for n <= size, in dimension size + 1."""
    vectors = np.zeros((size, size + 1))
    rows = np.arange(size)
    vectors[rows, rows] = 1.0
    vectors[rows, rows + 1] = 1.0
    return VectorSystem(vectors)


class ProfilePoint(NamedTuple):
    N: int
    A: float
    B: float


def _resolve_family(name: Union[str, BaseFamily]) -> BaseFamily:
    if isinstance(name, BaseFamily):
        return name
    return _families.resolve(name.lower())


def truncation_profile(
    family: Union[str, BaseFamily],
    sizes: Iterable[int],
    max_workers: int = 1,
    method: str = "jacobi",
) -> List[ProfilePoint]:
    """Frame bounds of growing truncations of a weak frame.

    For every N the truncated system is analysed as a frame for its span.
    A lower bound A_N tending to zero while B_N stays bounded is the finite
    shadow of a weak frame that is not a frame.

    Parameters
    ----------
    family: str or BaseFamily
        Registered family name ("diag", "overlap") or a family object.
    sizes: iterable(int)
        Strictly increasing truncation sizes.
    max_workers: int
        Points are evaluated concurrently when larger than one; output order
        always follows `sizes`.

    Returns
    -------
    list(ProfilePoint)
    """
    resolved = _resolve_family(family)
    sizes = [int(n) for n in sizes]
    if len(sizes) == 0:
        raise ValueError("At least one truncation size is required.")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"Truncation sizes have to be strictly increasing: {sizes}")

    def _point(size):
        lower, upper = span_bounds(resolved(size), method=method)
        logger.debug(f"{resolved.name}: N={size}, A={lower}, B={upper}")
        return ProfilePoint(size, lower, upper)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            return list(executor.map(_point, sizes))
    return [_point(size) for size in sizes]


def profile_frame(points: Iterable[ProfilePoint]) -> pd.DataFrame:
    return pd.DataFrame(list(points), columns=list(ProfilePoint._fields))
