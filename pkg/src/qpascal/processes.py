"""The three canonical q-processes and their samplers.

Extreme process (parameter kappa, plus the endpoint kappa = math.inf):
    the extreme q-exchangeable law at x = q^kappa.  Two equivalent
    samplers: "forward" appends bit 1 with probability 1 - q^(kappa-k)
    given k ones so far; "runs" draws the zero-run lengths T_0, T_1, ...
    before each successive one as independent geometrics (T_i counts
    failures before first success, success probability 1 - q^(kappa-i))
    and pads with zeros once kappa ones have appeared.

Theta process: independent bits, P(bit m = 1) = theta q^(m-1) / (1 + theta q^(m-1)).
    Its triangle is w[n][k] = theta^k q^(k(k-1)/2) / prod_{i<n}(1 + theta q^i),
    and its mixing measure is the q-analogue of a Poisson distribution.

Polya urn process: forward probabilities from state (n, k)
    P(0) = [b+n-k] / [a+b+n],   P(1) = q^(n-k+b) [a+k] / [a+b+n],
    exact for integer strengths a, b (q = 1 gives the classical urn).
    Its mixing measure is the q-analogue of a beta mixture; for a = 1 it
    is exactly geometric with parameter 1 - q^b.

Sampling conventions (see :mod:`qpascal.rng` for the stream layout):
every binary decision consumes one 64-bit draw j and succeeds iff
j < ceil(p * 2^64) with p the exact rational success probability; a
geometric variable consumes one draw.  Histograms derive the stream of
trial t from derive_seed(seed, t), so trial order cannot matter.

The measure constructors certify their truncation error with exact
rational bounds, so the returned atom masses never overshoot: the
masses plus the reported zero_mass sum to exactly 1, and the atom total
undershoots the true normalization by less than the policy's target
relative error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .boundary import BoundaryMeasure, _check_kappa
from .errors import NonIntegerParamsInExactMode
from .exactq import (
    DEFAULT_POLICY,
    QParam,
    Regime,
    TruncationPolicy,
    as_fraction,
    q_pochhammer_bounds,
    q_pochhammer_infinite,
)
from .laws import FiniteLaw, VArray, word_to_runs
from .pascal_graph import BinaryWord
from .rng import (
    SplitMix64,
    bernoulli_threshold,
    derive_seed,
    geometric_failures,
)

MODES = ("forward", "runs")

Sampler = Callable[[int, SplitMix64], BinaryWord]


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError("mode must be one of %s, got %r" % (MODES, mode))


# ---------------------------------------------------------------- extreme


def extreme_sampler(kappa, q: QParam, mode: str = "forward") -> Sampler:
    """Reusable sampler closure for the extreme process."""
    q.require_sub_unit("extreme sampler")
    _check_kappa(kappa)
    _check_mode(mode)
    qq = q.q
    infinite = isinstance(kappa, float)

    if mode == "forward":
        thresholds: dict[int, int] = {}

        def draw_forward(n: int, rng: SplitMix64) -> BinaryWord:
            bits = []
            k = 0
            for _ in range(n):
                t = thresholds.get(k)
                if t is None:
                    p_one = (
                        Fraction(1) if infinite else 1 - qq ** (kappa - k)
                    )
                    t = bernoulli_threshold(p_one)
                    thresholds[k] = t
                if rng.next_uint64() < t:
                    bits.append(1)
                    k += 1
                else:
                    bits.append(0)
            return BinaryWord(tuple(bits))

        return draw_forward

    def draw_runs(n: int, rng: SplitMix64) -> BinaryWord:
        bits: list[int] = []
        i = 0
        while len(bits) < n and (infinite or i < kappa):
            ratio = Fraction(0) if infinite else qq ** (kappa - i)
            t = geometric_failures(rng, ratio)
            bits.extend([0] * min(t, n - len(bits)))
            if len(bits) < n:
                bits.append(1)
            i += 1
        bits.extend([0] * (n - len(bits)))
        return BinaryWord(tuple(bits))

    return draw_runs


def sample_extreme(
    kappa, q: QParam, n: int, seed: int, mode: str = "forward"
) -> BinaryWord:
    return extreme_sampler(kappa, q, mode)(n, SplitMix64(seed))


def exact_extreme_law(kappa, q: QParam, n: int, mode: str = "forward") -> FiniteLaw:
    """Law of a length-n sample, by exact enumeration of the sampler's
    decision tree (branch probabilities taken as exact rationals)."""
    q.require_sub_unit("extreme law")
    _check_kappa(kappa)
    _check_mode(mode)
    qq = q.q
    infinite = isinstance(kappa, float)

    def stay_ratio(i: int) -> Fraction:
        # probability of a 0 given i ones so far / failure ratio of run i
        if infinite:
            return Fraction(0)
        return qq ** (kappa - i)

    probs: dict[BinaryWord, Fraction] = {}

    if mode == "forward":

        def walk(bits: tuple[int, ...], k: int, p: Fraction) -> None:
            if len(bits) == n:
                probs[BinaryWord(bits)] = p
                return
            r = stay_ratio(k)
            if r:
                walk(bits + (0,), k, p * r)
            if r != 1:
                walk(bits + (1,), k + 1, p * (1 - r))

        walk((), 0, Fraction(1))
        # unreachable words carry probability zero
        for word in _all_binary_words(n):
            probs.setdefault(word, Fraction(0))
        return FiniteLaw(n, probs)

    for word in _all_binary_words(n):
        enc = word_to_runs(word)
        p = Fraction(1)
        for i, run in enumerate(enc.runs):
            r = stay_ratio(i)
            p *= r**run * (1 - r)
            if p == 0:
                break
        if p != 0 and enc.open_zeros:
            p *= stay_ratio(len(enc.runs)) ** enc.open_zeros
        probs[word] = p
    return FiniteLaw(n, probs)


def _all_binary_words(n: int):
    out = [()]
    for _ in range(n):
        out = [bits + (b,) for bits in out for b in (0, 1)]
    return [BinaryWord(bits) for bits in out]


# ------------------------------------------------------------------ theta


@dataclass(frozen=True)
class ThetaParams:
    """theta >= 0 (math.inf allowed where noted), with 0 < q < 1."""

    theta: Fraction
    q: QParam

    def __post_init__(self) -> None:
        self.q.require_sub_unit("theta process")
        theta = self.theta
        if isinstance(theta, float):
            if not (math.isinf(theta) and theta > 0):
                raise TypeError("theta must be an exact rational or math.inf")
        else:
            theta = as_fraction(theta)
            if theta < 0:
                raise ValueError("theta must be non-negative")
            object.__setattr__(self, "theta", theta)

    @property
    def infinite(self) -> bool:
        return isinstance(self.theta, float)


def theta_array(params: ThetaParams, depth: int) -> VArray:
    """Triangle w[n][k] = theta^k q^(k(k-1)/2) / prod_{i<n}(1 + theta q^i)."""
    if params.infinite:
        raise ValueError("theta must be finite for the triangle")
    theta, qq = params.theta, params.q.q
    rows = []
    denom = Fraction(1)  # prod_{i<n} (1 + theta q^i)
    for n in range(depth + 1):
        row = tuple(
            theta**k * qq ** (k * (k - 1) // 2) / denom for k in range(n + 1)
        )
        rows.append(row)
        denom *= 1 + theta * qq**n
    return VArray(params.q, tuple(rows))


def _theta_one_prob(params: ThetaParams, position: int) -> Fraction:
    # P(bit at 1-based `position` is 1)
    if params.infinite:
        return Fraction(1)
    t = params.theta * params.q.q ** (position - 1)
    return t / (1 + t)


def theta_sampler(params: ThetaParams) -> Sampler:
    def draw(n: int, rng: SplitMix64) -> BinaryWord:
        bits = []
        for m in range(1, n + 1):
            t = bernoulli_threshold(_theta_one_prob(params, m))
            bits.append(1 if rng.next_uint64() < t else 0)
        return BinaryWord(tuple(bits))

    return draw


def sample_theta(params: ThetaParams, n: int, seed: int) -> BinaryWord:
    return theta_sampler(params)(n, SplitMix64(seed))


def exact_theta_law(params: ThetaParams, n: int) -> FiniteLaw:
    probs = {}
    ps = [_theta_one_prob(params, m) for m in range(1, n + 1)]
    for word in _all_binary_words(n):
        p = Fraction(1)
        for m, b in enumerate(word):
            p *= ps[m] if b else 1 - ps[m]
        probs[word] = p
    return FiniteLaw(n, probs)


def theta_boundary_measure(
    params: ThetaParams,
    kmax: int = 80,
    policy: TruncationPolicy | None = None,
) -> BoundaryMeasure:
    """Mixing measure of the theta process (q-Poisson weights).

    mass(kappa) proportional to q^(kappa(kappa-1)/2) theta^kappa / (q,q)_kappa,
    normalized by (-theta, q)_inf.  The normalizer is replaced by its
    certified rational upper bound, so atom masses never overshoot and
    the complement assigned to zero_mass stays non-negative.
    """
    if params.infinite:
        raise ValueError("theta must be finite for the mixing measure")
    theta, q = params.theta, params.q
    qq = q.q
    _, z_hi = q_pochhammer_bounds(-theta, q, policy or DEFAULT_POLICY)
    atoms = {}
    poch = Fraction(1)  # (q, q)_kappa
    for kappa in range(kmax + 1):
        term = qq ** (kappa * (kappa - 1) // 2) * theta**kappa / poch
        atoms[kappa] = term / z_hi
        poch *= 1 - qq ** (kappa + 1)
    total = sum(atoms.values())
    return BoundaryMeasure.of(q, atoms, 1 - total)


# ------------------------------------------------------------------ Polya


def _exactable(value) -> int | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return None


@dataclass(frozen=True)
class PolyaParams:
    """Urn strengths a, b > 0 with q in (0, 1].

    Integer strengths run in exact arithmetic; any other positive reals
    switch the process to float mode ([x] evaluated as (1-q^x)/(1-q)).
    """

    a: object
    b: object
    q: QParam

    def __post_init__(self) -> None:
        if self.q.regime is Regime.SUPER_UNIT:
            raise ValueError("urn process needs q <= 1 (flip first for q > 1)")
        for name in ("a", "b"):
            value = getattr(self, name)
            as_int = _exactable(value)
            if as_int is not None:
                object.__setattr__(self, name, as_int)
                value = as_int
            elif not isinstance(value, (float, Fraction)):
                raise TypeError("%s must be a positive number" % name)
            if not float(value) > 0:
                raise ValueError("%s must be positive" % name)

    @property
    def float_mode(self) -> bool:
        return not (isinstance(self.a, int) and isinstance(self.b, int))


def _q_int_real(x: float, qf: float) -> float:
    if qf == 1.0:
        return x
    return (1.0 - qf**x) / (1.0 - qf)


def polya_forward_probs(params: PolyaParams, n: int, k: int):
    """(P(next bit 0), P(next bit 1)) from state (n, k); exact when possible."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    a, b = params.a, params.b
    if not params.float_mode:
        qq = params.q.q

        def qint(m: int) -> Fraction:
            if qq == 1:
                return Fraction(m)
            return (1 - qq**m) / (1 - qq)

        total = qint(a + b + n)
        p_zero = qint(b + n - k) / total
        p_one = qq ** (n - k + b) * qint(a + k) / total
        return p_zero, p_one
    qf = float(params.q.q)
    total = _q_int_real(float(a) + float(b) + n, qf)
    p_zero = _q_int_real(float(b) + n - k, qf) / total
    p_one = qf ** (n - k + float(b)) * _q_int_real(float(a) + k, qf) / total
    return p_zero, p_one


def polya_array(params: PolyaParams, depth: int) -> VArray:
    """Exact triangle of the urn process (integer strengths only)."""
    if params.float_mode:
        raise NonIntegerParamsInExactMode(
            "triangle requires integer strengths, got a=%r b=%r"
            % (params.a, params.b)
        )
    a, b = params.a, params.b
    qq = params.q.q

    def qint(m: int) -> Fraction:
        if qq == 1:
            return Fraction(m)
        return (1 - qq**m) / (1 - qq)

    # rising[c][j] = [c][c+1]...[c+j-1]
    def rising(c: int, j: int) -> Fraction:
        out = Fraction(1)
        for i in range(j):
            out *= qint(c + i)
        return out

    rows = []
    for n in range(depth + 1):
        denom = rising(a + b, n)
        row = tuple(
            qq ** (b * k) * rising(a, k) * rising(b, n - k) / denom
            for k in range(n + 1)
        )
        rows.append(row)
    return VArray(params.q, tuple(rows))


def polya_sampler(params: PolyaParams) -> Sampler:
    if not params.float_mode:
        thresholds: dict[tuple[int, int], int] = {}

        def draw_exact(n: int, rng: SplitMix64) -> BinaryWord:
            bits = []
            k = 0
            for step in range(n):
                key = (step, k)
                t = thresholds.get(key)
                if t is None:
                    _, p_one = polya_forward_probs(params, step, k)
                    t = bernoulli_threshold(p_one)
                    thresholds[key] = t
                if rng.next_uint64() < t:
                    bits.append(1)
                    k += 1
                else:
                    bits.append(0)
            return BinaryWord(tuple(bits))

        return draw_exact

    def draw_float(n: int, rng: SplitMix64) -> BinaryWord:
        # float mode: thresholds are rounded, not exact
        bits = []
        k = 0
        for step in range(n):
            _, p_one = polya_forward_probs(params, step, k)
            t = min(1 << 64, max(0, math.ceil(p_one * (1 << 64))))
            if rng.next_uint64() < t:
                bits.append(1)
                k += 1
            else:
                bits.append(0)
        return BinaryWord(tuple(bits))

    return draw_float


def sample_polya(params: PolyaParams, n: int, seed: int) -> BinaryWord:
    return polya_sampler(params)(n, SplitMix64(seed))


def exact_polya_law(params: PolyaParams, n: int) -> FiniteLaw:
    if params.float_mode:
        raise NonIntegerParamsInExactMode("exact law requires integer strengths")
    probs = {}
    for word in _all_binary_words(n):
        p = Fraction(1)
        k = 0
        for step, bit in enumerate(word):
            p_zero, p_one = polya_forward_probs(params, step, k)
            p *= p_one if bit else p_zero
            if bit:
                k += 1
        probs[word] = p
    return FiniteLaw(n, probs)


def polya_boundary_measure(
    params: PolyaParams,
    kmax: int = 80,
    policy: TruncationPolicy | None = None,
) -> BoundaryMeasure:
    """Mixing measure of the urn process (q-beta weights).

    mass(kappa) = (q^a,q)_kappa q^(kappa b) / (q,q)_kappa
                  * (q^b,q)_inf / (q^(a+b),q)_inf.

    For a = 1 the infinite products cancel to (1 - q^b) and the measure
    is computed exactly (geometric with parameter 1 - q^b).  Otherwise
    the normalizing ratio is replaced by a certified rational lower
    bound, so atoms never overshoot.  Non-integer strengths fall back to
    floats with the same shape.
    """
    q = params.q
    q.require_sub_unit("urn mixing measure")
    pol = policy or DEFAULT_POLICY
    qq = q.q

    if params.float_mode:
        qf = float(qq)
        af, bf = float(params.a), float(params.b)
        ratio = (
            q_pochhammer_infinite(qf**bf, q, pol).value
            / q_pochhammer_infinite(qf ** (af + bf), q, pol).value
        )
        masses = []
        poch_a = 1.0  # (q^a, q)_kappa
        poch_q = 1.0  # (q, q)_kappa
        for kappa in range(kmax + 1):
            masses.append(poch_a * qf ** (kappa * bf) / poch_q * ratio)
            poch_a *= 1.0 - qf ** (af + kappa)
            poch_q *= 1.0 - qf ** (kappa + 1)
        atoms = {kappa: Fraction(m) for kappa, m in enumerate(masses)}
        total = sum(atoms.values())
        if total > 1:  # numeric overshoot: rescale once, exactly
            atoms = {kappa: m / total for kappa, m in atoms.items()}
            total = Fraction(1)
        return BoundaryMeasure.of(q, atoms, 1 - total)

    a, b = params.a, params.b
    if a == 1:
        base = qq**b
        atoms = {kappa: (1 - base) * base**kappa for kappa in range(kmax + 1)}
        return BoundaryMeasure.of(q, atoms, base ** (kmax + 1))

    n_lo, _ = q_pochhammer_bounds(qq**b, q, pol)
    _, d_hi = q_pochhammer_bounds(qq ** (a + b), q, pol)
    ratio = n_lo / d_hi
    atoms = {}
    poch_a = Fraction(1)
    poch_q = Fraction(1)
    for kappa in range(kmax + 1):
        atoms[kappa] = poch_a * qq ** (kappa * b) / poch_q * ratio
        poch_a *= 1 - qq ** (a + kappa)
        poch_q *= 1 - qq ** (kappa + 1)
    total = sum(atoms.values())
    return BoundaryMeasure.of(q, atoms, 1 - total)


# -------------------------------------------------------------- histograms


def empirical_level_histogram(
    sampler: Sampler, n: int, trials: int, seed: int
) -> dict[int, int]:
    """Counts of the number of ones over ``trials`` independent words.

    Trial t uses the stream seeded by derive_seed(seed, t); results are
    independent of execution order.
    """
    counts: dict[int, int] = {}
    for t in range(trials):
        word = sampler(n, SplitMix64(derive_seed(seed, t)))
        k = word.ones
        counts[k] = counts.get(k, 0) + 1
    return counts


def tv_distance(
    counts: Mapping[int, int], trials: int, exact_level: Sequence[Fraction]
) -> Fraction:
    """Total variation between empirical frequencies and an exact level law."""
    keys = set(counts) | set(range(len(exact_level)))
    total = Fraction(0)
    for k in keys:
        empirical = Fraction(counts.get(k, 0), trials)
        exact = exact_level[k] if k < len(exact_level) else Fraction(0)
        total += abs(empirical - exact)
    return total / 2
