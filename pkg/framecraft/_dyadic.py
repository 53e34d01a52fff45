"""
Exact arithmetic for dyadic step functions on the real line.

Scalars live in Q(sqrt2) (`QSqrt2`), functions are finite linear combinations
of indicators of intervals with dyadic rational endpoints (`DyadicStep`). On
these the unitary operators of the Baumslag-Solitar group BS(1, 2),

    U f(x) = 2^{-1/2} f(x / 2),    T f(x) = f(x - 1),

act without any rounding, so identities such as U T U^{-1} = T^2 or the
orthonormality of the Haar system are checked by structural equality.
"""
import logging
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ._exceptions import DomainError

logger = logging.getLogger(__name__)

Scalar = Union["QSqrt2", Rational, int]


def _fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("Floats are not exact; pass a Fraction, an int or a string")
    return Fraction(value)


@total_ordering
class QSqrt2:
    """The number a + b*sqrt(2) with rational a and b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _fraction(a)
        self.b = _fraction(b)

    @classmethod
    def _coerce(cls, value) -> "QSqrt2":
        if isinstance(value, QSqrt2):
            return value
        if isinstance(value, (int, Rational)):
            return cls(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QSqrt2(self.a * other.a + 2 * self.b * other.b, self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conj(self) -> "QSqrt2":
        """Galois conjugate a - b*sqrt(2)."""
        return QSqrt2(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QSqrt2":
        if not self:
            raise ZeroDivisionError("QSqrt2 division by zero")
        n = self.norm()
        return QSqrt2(self.a / n, -self.b / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if int(exponent) != exponent:
            return NotImplemented
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        result = QSqrt2(1)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def sign(self) -> int:
        a, b = self.a, self.b
        if a >= 0 and b >= 0:
            return int(a > 0 or b > 0)
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        s = a * a - 2 * b * b
        s = (s > 0) - (s < 0)
        return s if a > 0 else -s

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * float(np.sqrt(2.0))

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt2"

    def __repr__(self):
        return f"QSqrt2({self})"

    _PATTERN = re.compile(
        r"^\s*(?:(?P<a>[+-]?\d+(?:/\d+)?)\s*(?:(?P<op>[+-])\s*(?P<b>\d+(?:/\d+)?)\*sqrt2)?"
        r"|(?P<only_b>[+-]?\d+(?:/\d+)?)\*sqrt2)\s*$"
    )

    @classmethod
    def parse(cls, text: str) -> "QSqrt2":
        """Inverse of str(): "p/q", "r/s*sqrt2" or "p/q + r/s*sqrt2"."""
        match = cls._PATTERN.match(text)
        if match is None:
            raise ValueError(f"Cannot parse '{text}' as a + b*sqrt2")
        if match.group("only_b") is not None:
            return cls(0, Fraction(match.group("only_b")))
        b = Fraction(match.group("b")) if match.group("b") else Fraction(0)
        if match.group("op") == "-":
            b = -b
        return cls(Fraction(match.group("a")), b)


SQRT2 = QSqrt2(0, 1)
INV_SQRT2 = QSqrt2(0, Fraction(1, 2))


def is_dyadic(x) -> bool:
    denominator = Fraction(x).denominator
    return denominator & (denominator - 1) == 0


@dataclass(frozen=True)
class DyadicStep:
    """values[i] on [breakpoints[i], breakpoints[i + 1]), zero outside.

    Instances are always canonical: adjacent equal values are merged and zero
    intervals at both ends are stripped, so equality is structural. The zero
    function has no breakpoints.
    """

    breakpoints: Tuple[Fraction, ...] = ()
    values: Tuple[QSqrt2, ...] = ()

    def __post_init__(self):
        breakpoints = tuple(_fraction(x) for x in self.breakpoints)
        values = tuple(QSqrt2._coerce(v) for v in self.values)
        if any(v is NotImplemented for v in values):
            raise TypeError(f"Values have to be exact scalars, found {self.values}")
        if breakpoints and len(values) != len(breakpoints) - 1:
            raise ValueError(
                f"{len(breakpoints)} breakpoints need {len(breakpoints) - 1} values, "
                f"but found {len(values)}"
            )
        if not breakpoints and values:
            raise ValueError("Values without breakpoints")
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError(f"Breakpoints have to be strictly increasing: {breakpoints}")
        for x in breakpoints:
            if not is_dyadic(x):
                raise DomainError(f"Breakpoint {x} is not a dyadic rational")
        breakpoints, values = _canonical(breakpoints, values)
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)

    @classmethod
    def indicator(cls, lower, upper, value: Scalar = 1) -> "DyadicStep":
        return cls((lower, upper), (value,))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Tuple]) -> "DyadicStep":
        """Sum of value * indicator[lower, upper) over (lower, upper, value) triples."""
        result = cls()
        for lower, upper, value in intervals:
            result = result + cls.indicator(lower, upper, value)
        return result

    def __call__(self, x) -> QSqrt2:
        x = _fraction(x)
        i = bisect_right(self.breakpoints, x) - 1
        if i < 0 or i >= len(self.values):
            return QSqrt2(0)
        return self.values[i]

    def _on(self, breakpoints: Sequence[Fraction]) -> List[QSqrt2]:
        return [self(x) for x in breakpoints[:-1]]

    def __add__(self, other: "DyadicStep") -> "DyadicStep":
        if not isinstance(other, DyadicStep):
            return NotImplemented
        grid = sorted(set(self.breakpoints) | set(other.breakpoints))
        values = [f + g for f, g in zip(self._on(grid), other._on(grid))]
        return DyadicStep(tuple(grid), tuple(values))

    def __neg__(self) -> "DyadicStep":
        return DyadicStep(self.breakpoints, tuple(-v for v in self.values))

    def __sub__(self, other: "DyadicStep") -> "DyadicStep":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "DyadicStep":
        scalar = QSqrt2._coerce(scalar)
        if scalar is NotImplemented:
            return scalar
        return DyadicStep(self.breakpoints, tuple(v * scalar for v in self.values))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.values)

    @property
    def support(self) -> Optional[Tuple[Fraction, Fraction]]:
        if not self.breakpoints:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def norm_squared(self) -> QSqrt2:
        return inner_product(self, self)

    def to_dict(self) -> dict:
        return {
            "breakpoints": [str(x) for x in self.breakpoints],
            "values": [str(v) for v in self.values],
        }

    def __repr__(self):
        pieces = ", ".join(
            f"[{a}, {b}): {v}" for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values)
        )
        return f"DyadicStep({pieces})"


def _canonical(breakpoints, values):
    if not values:
        return (), ()
    points, merged = [breakpoints[0]], []
    for x, v in zip(breakpoints[1:], values):
        if merged and merged[-1] == v:
            points[-1] = x
        else:
            merged.append(v)
            points.append(x)
    start, stop = 0, len(merged)
    while start < stop and not merged[start]:
        start += 1
    while stop > start and not merged[stop - 1]:
        stop -= 1
    if start == stop:
        return (), ()
    return tuple(points[start : stop + 1]), tuple(merged[start:stop])


def inner_product(f: DyadicStep, g: DyadicStep) -> QSqrt2:
    """Exact L2 pairing; all scalars are real, so no conjugation is involved."""
    grid = sorted(set(f.breakpoints) | set(g.breakpoints))
    total = QSqrt2(0)
    for lower, upper, a, b in zip(grid, grid[1:], f._on(grid), g._on(grid)):
        if a and b:
            total = total + a * b * (upper - lower)
    return total


def translate(f: DyadicStep, t) -> DyadicStep:
    """T_t f(x) = f(x - t) for a dyadic rational t."""
    t = _fraction(t)
    if not is_dyadic(t):
        raise DomainError(f"Translation {t} is not a dyadic rational")
    return DyadicStep(tuple(x + t for x in f.breakpoints), f.values)


def dilate(f: DyadicStep, m: int) -> DyadicStep:
    """U^m f(x) = 2^{-m/2} f(x / 2^m)."""
    if int(m) != m:
        raise ValueError(f"Dilation exponent has to be an integer, but found {m}")
    m = int(m)
    scale = Fraction(2) ** m
    return DyadicStep(tuple(x * scale for x in f.breakpoints), f.values) * INV_SQRT2**m


def haar_wavelet(normalized: bool = True) -> DyadicStep:
    """psi = chi_[0,1/2) - chi_[1/2,1), of norm one.

    With `normalized=False` psi is scaled by 1/sqrt(2), so that ||psi||^2 = 1/2.
    """
    psi = DyadicStep((0, Fraction(1, 2), 1), (1, -1))
    if not normalized:
        return psi * INV_SQRT2
    return psi


def haar_system(m_range: Iterable[int], n_range: Iterable[int], psi: Optional[DyadicStep] = None):
    """[((m, n), U^m T^n psi)] with m as the outer index."""
    psi = haar_wavelet() if psi is None else psi
    n_range = list(n_range)
    return [((m, n), dilate(translate(psi, n), m)) for m in m_range for n in n_range]


def haar_gram(m_range: Iterable[int], n_range: Iterable[int]) -> np.ndarray:
    """Exact Gram matrix of {U^m T^n psi} as an object array of QSqrt2."""
    system = [f for _, f in haar_system(list(m_range), n_range)]
    if not system:
        raise ValueError("Index ranges must not be empty")
    gram = np.empty((len(system), len(system)), dtype=object)
    for i, f in enumerate(system):
        for j in range(i, len(system)):
            gram[i, j] = gram[j, i] = inner_product(f, system[j])
    return gram


def is_exact_identity(gram: np.ndarray) -> bool:
    n = gram.shape[0]
    return all(gram[i, j] == int(i == j) for i in range(n) for j in range(n))


def conjugation_identity(n: int, probe: DyadicStep) -> bool:
    """U^{-n} T U^n probe == T_{1/2^n} probe, exactly."""
    if int(n) != n or n < 1:
        raise ValueError(f"n has to be a positive integer, but found {n}")
    lhs = dilate(translate(dilate(probe, n), 1), -n)
    return lhs == translate(probe, Fraction(1, 2**n))


def bs12_relation(probe: DyadicStep) -> bool:
    """U T U^{-1} probe == T^2 probe, the defining relation of BS(1, 2)."""
    return dilate(translate(dilate(probe, -1), 1), 1) == translate(probe, 2)


class BesselRow(NamedTuple):
    n: int
    inner_product: QSqrt2
    partial_sum: QSqrt2


class BesselDivergence(NamedTuple):
    rows: List[BesselRow]
    norm_squared: QSqrt2
    tail_onset: Optional[int]

    def to_frame(self):
        return pd.DataFrame(
            [(r.n, str(r.inner_product), str(r.partial_sum)) for r in self.rows],
            columns=["n", "inner_product", "partial_sum"],
        )


def bessel_divergence(N_max: int, psi: Optional[DyadicStep] = None) -> BesselDivergence:
    """<T_{1/2^n} psi, psi> and partial sums of their squares for n = 1..N_max.

    The elements u^{-n} t u^n are distinct, yet every term stays above
    ||psi||^2 / 2 from `tail_onset` on, so no upper frame bound can hold for the
    orbit of psi over all of BS(1, 2).
    """
    if int(N_max) != N_max or N_max < 1:
        raise ValueError(f"N_max has to be a positive integer, but found {N_max}")
    psi = haar_wavelet() if psi is None else psi
    norm_squared = psi.norm_squared()
    half = norm_squared * Fraction(1, 2)
    rows, partial = [], QSqrt2(0)
    for n in range(1, int(N_max) + 1):
        value = inner_product(translate(psi, Fraction(1, 2**n)), psi)
        partial = partial + value * value
        rows.append(BesselRow(n, value, partial))
    onset = None
    for row in reversed(rows):
        if abs(row.inner_product) < half:
            break
        onset = row.n
    logger.debug(f"Bessel partial sum after {N_max} terms: {float(partial):.6f}")
    return BesselDivergence(rows, norm_squared, onset)
