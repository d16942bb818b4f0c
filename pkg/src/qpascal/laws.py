"""Triangular law arrays for q-exchangeable binary sequences.

A q-exchangeable law on infinite 0/1 sequences is determined by the
triangle v[n][k] = P(the word 1^k 0^(n-k)); any other word w of length
n with k ones then has probability q^inversions(w) * v[n][k].  VArray
holds that triangle ("v" in the wire format).  TildeArray holds the
level distributions tv[n][k] = d[n][k] * v[n][k], where d is the
Gaussian binomial (the path count of the weighted lattice); its rows
are genuine probability vectors.

The defining consistency condition on v is the backward recursion

    v[n][k] = v[n+1][k] + q^(n-k) * v[n+1][k+1],        v[0][0] = 1,

checked exactly by :func:`check_recursion`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .errors import InvalidArrayError
from .exactq import (
    QParam,
    as_fraction,
    format_rational,
    parse_rational,
    q_binomial,
    q_integer,
)
from .pascal_graph import BinaryWord
from . import guards

MAX_WORD_LENGTH = 20  # default cap for whole-law enumerations


def _coerce_rows(rows) -> tuple[tuple[Fraction, ...], ...]:
    out = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    if not out:
        raise InvalidArrayError("array needs at least the root row")
    for n, row in enumerate(out):
        if len(row) != n + 1:
            raise InvalidArrayError(
                "row %d must have %d entries, got %d" % (n, n + 1, len(row))
            )
    return out


@dataclass(frozen=True)
class VArray:
    """Canonical-word probability triangle of a q-exchangeable law."""

    q: QParam
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", _coerce_rows(self.rows))

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> Fraction:
        return self.rows[n][k]

    @property
    def first_column(self) -> tuple[Fraction, ...]:
        return tuple(row[0] for row in self.rows)

    def to_jsonable(self) -> dict:
        return {
            "q": str(self.q),
            "depth": self.depth,
            "v": [[format_rational(x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_jsonable(cls, obj: Mapping) -> "VArray":
        rows = tuple(
            tuple(parse_rational(x) for x in row) for row in obj["v"]
        )
        arr = cls(QParam(parse_rational(obj["q"])), rows)
        if "depth" in obj and int(obj["depth"]) != arr.depth:
            raise InvalidArrayError(
                "declared depth %s does not match %d rows"
                % (obj["depth"], arr.depth + 1)
            )
        return arr


@dataclass(frozen=True)
class TildeArray:
    """Level distributions: row n is the law of the height after n steps."""

    q: QParam
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = _coerce_rows(self.rows)
        object.__setattr__(self, "rows", rows)
        for n, row in enumerate(rows):
            if any(x < 0 for x in row):
                raise InvalidArrayError("negative mass in level %d" % n)
            if sum(row) != 1:
                raise InvalidArrayError(
                    "level %d sums to %s, not 1" % (n, format_rational(sum(row)))
                )

    @property
    def depth(self) -> int:
        return len(self.rows) - 1

    def entry(self, n: int, k: int) -> Fraction:
        return self.rows[n][k]

    def level(self, n: int) -> tuple[Fraction, ...]:
        return self.rows[n]

    def to_jsonable(self) -> dict:
        return {
            "q": str(self.q),
            "depth": self.depth,
            "tv": [[format_rational(x) for x in row] for row in self.rows],
        }

    @classmethod
    def from_jsonable(cls, obj: Mapping) -> "TildeArray":
        rows = tuple(
            tuple(parse_rational(x) for x in row) for row in obj["tv"]
        )
        arr = cls(QParam(parse_rational(obj["q"])), rows)
        if "depth" in obj and int(obj["depth"]) != arr.depth:
            raise InvalidArrayError(
                "declared depth %s does not match %d rows"
                % (obj["depth"], arr.depth + 1)
            )
        return arr


class RecursionCheck(NamedTuple):
    ok: bool
    witness: tuple[int, int] | None  # first offending (n, k)


def check_recursion(array: VArray) -> RecursionCheck:
    """Exact check of v[0][0] = 1, non-negativity, and the recursion."""
    qq = array.q.q
    rows = array.rows
    if rows[0][0] != 1:
        return RecursionCheck(False, (0, 0))
    depth = array.depth
    for n in range(depth + 1):
        for k in range(n + 1):
            if rows[n][k] < 0:
                return RecursionCheck(False, (n, k))
            if n < depth:
                expected = rows[n + 1][k] + qq ** (n - k) * rows[n + 1][k + 1]
                if rows[n][k] != expected:
                    return RecursionCheck(False, (n, k))
    return RecursionCheck(True, None)


def tilde_of_v(array: VArray) -> TildeArray:
    rows = tuple(
        tuple(q_binomial(n, k, array.q) * x for k, x in enumerate(row))
        for n, row in enumerate(array.rows)
    )
    return TildeArray(array.q, rows)


def v_of_tilde(array: TildeArray) -> VArray:
    rows = tuple(
        tuple(x / q_binomial(n, k, array.q) for k, x in enumerate(row))
        for n, row in enumerate(array.rows)
    )
    return VArray(array.q, rows)


def backward_kernel(n: int, k: int, q: QParam) -> tuple[Fraction, Fraction]:
    """One-step backward transition at (n, k).

    Returns (p_stay, p_down): probability that the length-(n-1) prefix
    kept k ones, respectively k-1 ones.  These depend only on (n, k, q),
    not on the law.
    """
    if n < 1 or not 0 <= k <= n:
        raise ValueError("need n >= 1 and 0 <= k <= n")
    total = q_integer(n, q)
    p_stay = q_integer(n - k, q) / total
    p_down = q.q ** (n - k) * q_integer(k, q) / total
    return p_stay, p_down


def multistep_backward(
    n: int, k: int, nu: int, kappa: int, q: QParam
) -> Fraction:
    """P(height k at level n | height kappa at level nu), for n <= nu."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if not 0 <= kappa <= nu:
        raise ValueError("need 0 <= kappa <= nu")
    if n > nu:
        raise ValueError("need n <= nu")
    over = q_binomial(nu - n, kappa - k, q)
    if over == 0:
        return Fraction(0)
    return (
        q.q ** ((kappa - k) * (n - k))
        * over
        * q_binomial(n, k, q)
        / q_binomial(nu, kappa, q)
    )


def word_probability(array: VArray, word: BinaryWord) -> Fraction:
    """Probability of ``word`` as a prefix under the law of ``array``."""
    n = len(word)
    if n > array.depth:
        raise ValueError(
            "word of length %d exceeds array depth %d" % (n, array.depth)
        )
    return array.q.q ** word.inversions() * array.rows[n][word.ones]


@dataclass(frozen=True)
class FiniteLaw:
    """A probability law on 0/1 words of one fixed length."""

    n: int
    probs: dict

    def __post_init__(self) -> None:
        guards.check_count(2**self.n, 2**MAX_WORD_LENGTH, "word law")
        fixed: dict[BinaryWord, Fraction] = {}
        for word, p in self.probs.items():
            if not isinstance(word, BinaryWord):
                word = BinaryWord.from_string(str(word))
            if len(word) != self.n:
                raise InvalidArrayError(
                    "word %s has length %d, expected %d" % (word, len(word), self.n)
                )
            fixed[word] = as_fraction(p)
        for word, p in fixed.items():
            if p < 0:
                raise InvalidArrayError("negative probability at %s" % word)
        if sum(fixed.values()) != 1:
            raise InvalidArrayError("probabilities must sum to 1 exactly")
        object.__setattr__(self, "probs", fixed)

    def prob(self, word: BinaryWord) -> Fraction:
        return self.probs.get(word, Fraction(0))

    def to_jsonable(self) -> dict:
        items = sorted(self.probs.items(), key=lambda kv: str(kv[0]))
        return {
            "n": self.n,
            "probs": {str(w): format_rational(p) for w, p in items},
        }

    @classmethod
    def from_jsonable(cls, obj: Mapping) -> "FiniteLaw":
        return cls(int(obj["n"]), dict(obj["probs"]))


def law_of_array(array: VArray, n: int) -> FiniteLaw:
    """Restrict the law of ``array`` to words of length n (n <= 20)."""
    guards.check_count(2**n, 2**MAX_WORD_LENGTH, "word law")
    probs = {}
    for bits in _all_words(n):
        w = BinaryWord(bits)
        probs[w] = word_probability(array, w)
    return FiniteLaw(n, probs)


def _all_words(n: int):
    if n == 0:
        yield ()
        return
    for head in _all_words(n - 1):
        yield head + (0,)
        yield head + (1,)


class ExchangeabilityCheck(NamedTuple):
    ok: bool
    witness: tuple[BinaryWord, int] | None  # word and swap position


def check_q_exchangeable(law: FiniteLaw, q: QParam) -> ExchangeabilityCheck:
    """Check P(word with positions i, i+1 swapped) = q^(b_i - b_{i+1}) P(word).

    Scans words in lexicographic order and returns the first violation.
    """
    qq = q.q
    for word in sorted(law.probs, key=str):
        p = law.probs[word]
        for i in range(law.n - 1):
            bi, bj = word.bits[i], word.bits[i + 1]
            if bi == bj:
                continue
            swapped = word.swap_adjacent(i)
            if law.prob(swapped) != qq ** (bi - bj) * p:
                return ExchangeabilityCheck(False, (word, i))
    return ExchangeabilityCheck(True, None)


@dataclass(frozen=True)
class RunEncoding:
    """Run-length view of a word: zero-run lengths between successive ones.

    ``runs[i]`` counts the zeros before the (i+1)-th one; ``open_zeros``
    counts zeros after the last one (the start of an unterminated run).
    """

    runs: tuple[int, ...]
    open_zeros: int = 0

    def __post_init__(self) -> None:
        if any(r < 0 for r in self.runs) or self.open_zeros < 0:
            raise ValueError("run lengths must be non-negative")

    @property
    def trailing(self) -> bool:
        return self.open_zeros > 0

    @property
    def length(self) -> int:
        return sum(self.runs) + len(self.runs) + self.open_zeros


def word_to_runs(word: BinaryWord) -> RunEncoding:
    runs = []
    current = 0
    for b in word:
        if b:
            runs.append(current)
            current = 0
        else:
            current += 1
    return RunEncoding(tuple(runs), current)


def runs_to_word(encoding: RunEncoding) -> BinaryWord:
    bits: list[int] = []
    for r in encoding.runs:
        bits.extend([0] * r)
        bits.append(1)
    bits.extend([0] * encoding.open_zeros)
    return BinaryWord(tuple(bits))
