"""Boundary decomposition of q-exchangeable laws (0 < q < 1).

Every q-exchangeable law is a unique mixture of extreme laws indexed by
the points x in {q^kappa : kappa = 0, 1, ...} together with x = 0.  The
extreme law at x has triangle entries given by the kernel polynomial

    Phi[n][k](x) = q^(-k(n-k)) * x^(n-k) * prod_{i<k} (1 - x q^(-i)),

and the mixing measure of any law is recovered from deep levels of its
tilde triangle: the mass at q^kappa is the limit of tv[nu][kappa].

Moment view: the first column u_l = v[l][0] determines the whole
triangle through the modified difference operator

    (delta u)_l = q^(-l) (u_l - u_{l+1}),

namely v[n][k] = (delta^k u)_{n-k}.  The triangle is non-negative
exactly when u is "q-completely monotone" over the available window;
for finite data this is necessarily a truncated check.

The zero boundary point is passed as ``kappa = math.inf`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .errors import InvalidArrayError
from .exactq import (
    QParam,
    as_fraction,
    format_rational,
    parse_rational,
    q_binomial,
)
from .laws import VArray

ZERO_POINT = math.inf  # boundary point x = 0, "kappa = infinity"


def _check_kappa(kappa) -> None:
    if isinstance(kappa, float):
        if math.isinf(kappa) and kappa > 0:
            return
        raise ValueError("kappa must be a natural number or math.inf")
    if not isinstance(kappa, int) or kappa < 0:
        raise ValueError("kappa must be a natural number or math.inf")


@dataclass(frozen=True)
class BoundaryMeasure:
    """Probability measure on {q^kappa} plus the point 0.

    ``atoms`` maps kappa to the mass at x = q^kappa; ``zero_mass`` sits
    at x = 0.  Masses are exact and must sum to exactly 1.
    """

    q: QParam
    atoms: tuple[tuple[int, Fraction], ...]
    zero_mass: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        self.q.require_sub_unit("boundary measure")
        fixed = tuple(
            (int(kappa), as_fraction(mass)) for kappa, mass in self.atoms
        )
        fixed = tuple(sorted(fixed))
        kappas = [kappa for kappa, _ in fixed]
        if any(k < 0 for k in kappas):
            raise InvalidArrayError("atom indices must be non-negative")
        if len(set(kappas)) != len(kappas):
            raise InvalidArrayError("duplicate atom index")
        zero = as_fraction(self.zero_mass)
        if any(mass < 0 for _, mass in fixed) or zero < 0:
            raise InvalidArrayError("masses must be non-negative")
        total = sum((mass for _, mass in fixed), zero)
        if total != 1:
            raise InvalidArrayError(
                "masses sum to %s, not 1" % format_rational(total)
            )
        object.__setattr__(self, "atoms", fixed)
        object.__setattr__(self, "zero_mass", zero)

    @classmethod
    def of(cls, q: QParam, atoms: Mapping[int, object], zero_mass=0) -> "BoundaryMeasure":
        return cls(q, tuple(atoms.items()), as_fraction(zero_mass))

    def mass(self, kappa: int) -> Fraction:
        for k, m in self.atoms:
            if k == kappa:
                return m
        return Fraction(0)

    def atom_dict(self) -> dict[int, Fraction]:
        return dict(self.atoms)

    def to_jsonable(self) -> dict:
        return {
            "q": str(self.q),
            "atoms": [
                {"kappa": kappa, "mass": format_rational(mass)}
                for kappa, mass in self.atoms
            ],
            "zero_mass": format_rational(self.zero_mass),
        }

    @classmethod
    def from_jsonable(cls, obj: Mapping) -> "BoundaryMeasure":
        atoms = tuple(
            (int(a["kappa"]), parse_rational(a["mass"])) for a in obj["atoms"]
        )
        return cls(
            QParam(parse_rational(obj["q"])),
            atoms,
            parse_rational(obj.get("zero_mass", "0")),
        )


@dataclass(frozen=True)
class MomentSequence:
    """Finite moment window (u_0, ..., u_N) of a probability measure."""

    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        vals = tuple(as_fraction(x) for x in self.values)
        if not vals:
            raise ValueError("moment sequence must be non-empty")
        if vals[0] != 1:
            raise ValueError("u_0 must be 1 for a probability measure")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]


def extreme_kernel(
    n: int, k: int, x, q: QParam
) -> tuple[Fraction, Fraction]:
    """Evaluate the extreme-law kernel at x in [0, 1].

    Returns (value, weighted) where weighted = qbinom(n, k) * value is
    the corresponding level mass.  ``value`` vanishes at x = q^kappa
    whenever k > kappa.
    """
    q.require_sub_unit("extreme kernel")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    xf = as_fraction(x)
    if not 0 <= xf <= 1:
        raise ValueError("x must lie in [0, 1], got %s" % xf)
    qq = q.q
    prod = Fraction(1)
    power = Fraction(1)  # q^(-i)
    for _ in range(k):
        prod *= 1 - xf * power
        if prod == 0:
            break
        power /= qq
    if prod == 0:
        return Fraction(0), Fraction(0)
    value = qq ** (-k * (n - k)) * xf ** (n - k) * prod
    return value, q_binomial(n, k, q) * value


def extreme_array(kappa, q: QParam, depth: int) -> VArray:
    """Triangle of the extreme law at x = q^kappa (math.inf gives x = 0)."""
    q.require_sub_unit("extreme array")
    _check_kappa(kappa)
    if isinstance(kappa, float):  # zero boundary point: the all-ones law
        rows = tuple(
            tuple(Fraction(1) if k == n else Fraction(0) for k in range(n + 1))
            for n in range(depth + 1)
        )
        return VArray(q, rows)
    x = q.q**kappa
    rows = tuple(
        tuple(extreme_kernel(n, k, x, q)[0] for k in range(n + 1))
        for n in range(depth + 1)
    )
    return VArray(q, rows)


def mixture_array(measure: BoundaryMeasure, depth: int) -> VArray:
    """Triangle of the mixture of extreme laws under ``measure``."""
    q = measure.q
    qq = q.q
    xs = [(qq**kappa, mass) for kappa, mass in measure.atoms]
    rows = []
    for n in range(depth + 1):
        row = []
        for k in range(n + 1):
            total = Fraction(0)
            for x, mass in xs:
                if mass:
                    total += mass * extreme_kernel(n, k, x, q)[0]
            if k == n:
                total += measure.zero_mass
            row.append(total)
        rows.append(tuple(row))
    return VArray(q, tuple(rows))


def recover_measure(array: VArray, nu: int = 40, kmax: int = 12) -> BoundaryMeasure:
    """Read the mixing measure off level ``nu`` of the tilde triangle.

    The mass at q^kappa is tv[nu][kappa] = d[nu][kappa] * v[nu][kappa]
    for each kappa <= kmax; the remainder (deep-level mass above kmax)
    is assigned to the zero point.  Accuracy improves geometrically in
    nu - kmax.
    """
    array.q.require_sub_unit("measure recovery")
    if not 0 <= kmax <= nu:
        raise ValueError("need 0 <= kmax <= nu")
    if nu > array.depth:
        raise ValueError("nu = %d exceeds array depth %d" % (nu, array.depth))
    atoms = {}
    total = Fraction(0)
    for kappa in range(kmax + 1):
        mass = q_binomial(nu, kappa, array.q) * array.rows[nu][kappa]
        atoms[kappa] = mass
        total += mass
    if total > 1:
        raise InvalidArrayError("level %d carries more than unit mass" % nu)
    return BoundaryMeasure.of(array.q, atoms, 1 - total)


def q_difference(u: Sequence[Fraction], q: QParam) -> tuple[Fraction, ...]:
    """One application of (delta u)_l = q^(-l) (u_l - u_{l+1})."""
    q.require_sub_unit("q-difference")
    qq = q.q
    return tuple(
        (u[l] - u[l + 1]) / qq**l for l in range(len(u) - 1)
    )


class MonotoneCheck(NamedTuple):
    ok: bool
    witness: tuple[int, int] | None  # (iterate, index) of first negative entry


def is_q_completely_monotone(
    u: MomentSequence | Sequence, q: QParam, depth: int | None = None
) -> MonotoneCheck:
    """Truncated q-complete monotonicity check.

    Applies the difference operator up to ``depth`` times (default: as
    far as the window allows) and reports the first negative entry as
    (iterate, index).  Non-negativity of all iterates over the window
    is the exact triangular criterion available from finite data.
    """
    q.require_sub_unit("monotonicity check")
    seq: Sequence[Fraction]
    if isinstance(u, MomentSequence):
        seq = u.values
    else:
        seq = tuple(as_fraction(x) for x in u)
    max_depth = len(seq) - 1
    if depth is None:
        depth = max_depth
    if not 0 <= depth <= max_depth:
        raise ValueError("depth must lie in [0, %d]" % max_depth)
    current = tuple(seq)
    for it in range(depth + 1):
        for idx, value in enumerate(current):
            if value < 0:
                return MonotoneCheck(False, (it, idx))
        if it < depth:
            current = q_difference(current, q)
    return MonotoneCheck(True, None)


def moments_of(array: VArray) -> MomentSequence:
    """First column of the triangle: u_l = v[l][0] = E[x^l]."""
    return MomentSequence(array.first_column)


def array_from_moments(u: MomentSequence | Sequence, q: QParam) -> VArray:
    """Rebuild the full triangle from its first column.

    v[n][k] = (delta^k u)_{n-k}; the result satisfies the backward
    recursion identically, so rebuilding the first column of a valid
    triangle reproduces it exactly.
    """
    q.require_sub_unit("triangle rebuild")
    if isinstance(u, MomentSequence):
        seq = u.values
    else:
        seq = tuple(as_fraction(x) for x in u)
    if not seq or seq[0] != 1:
        raise ValueError("first column must start at 1")
    depth = len(seq) - 1
    iterates = [tuple(seq)]
    for _ in range(depth):
        iterates.append(q_difference(iterates[-1], q))
    rows = tuple(
        tuple(iterates[k][n - k] for k in range(n + 1)) for n in range(depth + 1)
    )
    return VArray(q, rows)
