"""Exact arithmetic kernels for q-combinatorics.

Every probability-carrying quantity in this package is a
:class:`fractions.Fraction`.  This module provides the q-integer,
q-factorial, q-binomial and q-Pochhammer building blocks, plus
:class:`QParam`, the deformation parameter together with its regime
(below, at, or above 1).  Operations that only make sense on one side
of q = 1 raise :class:`~qpascal.errors.RegimeError`.

Floating point enters in exactly one place: the infinite q-Pochhammer
product, which cannot be evaluated in finitely many exact steps.  Its
truncation error is computed alongside the value, and
:func:`q_pochhammer_bounds` gives a certified *rational* enclosure for
callers that need exact downstream guarantees.

Rationals serialize as canonical strings ("3/4", "2", "0") via
:func:`format_rational` / :func:`parse_rational`; this is the wire
format used by every JSON and CSV surface of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import InfiniteProductOutsideSubUnit


def as_fraction(value) -> Fraction:
    """Coerce ints, strings and Fractions to Fraction; reject floats.

    Floats are refused on exact surfaces because Fraction(0.1) silently
    captures the binary approximation, not the decimal the caller meant.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(
            "exact interfaces take Fraction, int or string, not %r" % (value,)
        )
    return Fraction(value)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(text: str) -> Fraction:
    return Fraction(str(text).strip())


class Regime(Enum):
    SUB_UNIT = "sub-unit"  # 0 < q < 1
    UNIT = "unit"  # q = 1
    SUPER_UNIT = "super-unit"  # q > 1


@dataclass(frozen=True)
class QParam:
    """The deformation parameter q > 0 with its regime derived on demand."""

    q: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.q <= 0:
            raise ValueError("q must be positive, got %s" % self.q)

    @property
    def regime(self) -> Regime:
        if self.q < 1:
            return Regime.SUB_UNIT
        if self.q == 1:
            return Regime.UNIT
        return Regime.SUPER_UNIT

    @property
    def inverse(self) -> "QParam":
        return QParam(1 / self.q)

    def require_sub_unit(self, operation: str) -> None:
        from .errors import RegimeError

        if self.regime is not Regime.SUB_UNIT:
            raise RegimeError(
                "%s requires 0 < q < 1, got q = %s" % (operation, self.q)
            )

    def __str__(self) -> str:
        return format_rational(self.q)


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for infinite products.

    Iteration stops once the running term |x| * q^i drops below
    ``target_relative_error``, or after ``max_terms`` factors, whichever
    comes first.
    """

    max_terms: int = 10_000
    target_relative_error: Fraction = Fraction(1, 10**12)

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        object.__setattr__(
            self, "target_relative_error", as_fraction(self.target_relative_error)
        )
        if self.target_relative_error <= 0:
            raise ValueError("target_relative_error must be positive")


DEFAULT_POLICY = TruncationPolicy()


def q_integer(n: int, q: QParam) -> Fraction:
    """[n] = 1 + q + ... + q^(n-1); zero for n = 0."""
    if n < 0:
        raise ValueError("q_integer needs n >= 0, got %d" % n)
    qq = q.q
    if qq == 1:
        return Fraction(n)
    return (1 - qq**n) / (1 - qq)


def q_factorial(n: int, q: QParam) -> Fraction:
    """[n]! = [1][2]...[n]; empty product 1 for n = 0."""
    if n < 0:
        raise ValueError("q_factorial needs n >= 0, got %d" % n)
    return _q_factorial(n, q.q)


@lru_cache(maxsize=None)
def _q_factorial(n: int, qq: Fraction) -> Fraction:
    out = Fraction(1)
    for i in range(1, n + 1):
        if qq == 1:
            out *= i
        else:
            out *= (1 - qq**i) / (1 - qq)
    return out


def q_binomial(n: int, k: int, q: QParam) -> Fraction:
    """Gaussian binomial coefficient; zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return Fraction(0)
    return _q_binomial(n, min(k, n - k), q.q)


@lru_cache(maxsize=None)
def _q_binomial(n: int, k: int, qq: Fraction) -> Fraction:
    out = Fraction(1)
    for i in range(1, k + 1):
        if qq == 1:
            out = out * (n - k + i) / i
        else:
            out = out * (1 - qq ** (n - k + i)) / (1 - qq**i)
    return out


def q_pochhammer(
    x: Fraction | int | str,
    q: QParam,
    k: int | float,
    policy: TruncationPolicy | None = None,
) -> Fraction | float:
    """(x, q)_k = prod_{i<k} (1 - x q^i).

    Finite k gives an exact Fraction.  k = math.inf delegates to
    :func:`q_pochhammer_infinite` and returns only its float value.
    """
    if isinstance(k, float):
        if math.isinf(k) and k > 0:
            return q_pochhammer_infinite(x, q, policy).value
        raise ValueError("k must be a natural number or math.inf")
    if k < 0:
        raise ValueError("k must be a natural number or math.inf")
    xf = as_fraction(x)
    qq = q.q
    out = Fraction(1)
    power = Fraction(1)
    for _ in range(k):
        out *= 1 - xf * power
        if out == 0:
            break
        power *= qq
    return out


class InfiniteProduct(NamedTuple):
    """Truncated infinite product with a certified absolute error bound."""

    value: float
    error_bound: float
    terms: int


def q_pochhammer_infinite(
    x: Fraction | int | str | float,
    q: QParam,
    policy: TruncationPolicy | None = None,
) -> InfiniteProduct:
    """(x, q)_inf for 0 < q < 1, in floating point.

    Stops once |x| q^i < target_relative_error (or at max_terms) and
    reports |true - value| <= error_bound, obtained from the elementary
    enclosure prod_{i>=N} (1 - x q^i) in [1 - s, 1/(1 - s)] where
    s = |x| q^N / (1 - q) < 1.
    """
    if q.regime is not Regime.SUB_UNIT:
        raise InfiniteProductOutsideSubUnit(
            "infinite product diverges unless 0 < q < 1, got q = %s" % q.q
        )
    pol = policy or DEFAULT_POLICY
    xf = float(x if isinstance(x, float) else as_fraction(x))
    qf = float(q.q)
    target = float(pol.target_relative_error)
    value = 1.0
    term = abs(xf)
    n = 0
    while term >= target and n < pol.max_terms:
        value *= 1.0 - xf * qf**n
        n += 1
        term *= qf
    s = term / (1.0 - qf)
    if s >= 1.0:
        raise ValueError(
            "truncation policy too loose: tail estimate %.3g has not converged" % s
        )
    error = abs(value) * s / (1.0 - s)
    return InfiniteProduct(value=value, error_bound=error, terms=n)


def q_pochhammer_bounds(
    x: Fraction | int | str,
    q: QParam,
    policy: TruncationPolicy | None = None,
) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure [lo, hi] of (x, q)_inf for x < 1.

    Used by the boundary-measure constructors so that truncation error
    stays an exact rational and normalizations can be bounded from the
    safe side.  Requires 0 < q < 1 and x < 1 (all factors positive).
    """
    if q.regime is not Regime.SUB_UNIT:
        raise InfiniteProductOutsideSubUnit(
            "infinite product diverges unless 0 < q < 1, got q = %s" % q.q
        )
    xf = as_fraction(x)
    if xf >= 1:
        raise ValueError("rational enclosure implemented only for x < 1")
    pol = policy or DEFAULT_POLICY
    qq = q.q
    partial = Fraction(1)
    power = Fraction(1)  # q^n
    n = 0
    # Also force |x| q^n / (1-q) < 1/2 so the tail enclosure is valid.
    while n < pol.max_terms:
        term = abs(xf) * power
        if term < pol.target_relative_error and term < (1 - qq) / 2:
            break
        partial *= 1 - xf * power
        power *= qq
        n += 1
    else:
        raise ValueError("max_terms reached before the tail bound converged")
    s = abs(xf) * power / (1 - qq)
    if xf >= 0:
        # factors in (0, 1]: the tail only shrinks the product
        return partial * (1 - s), partial
    # factors >= 1: the tail only grows it, by at most 1/(1-s)
    return partial, partial / (1 - s)
