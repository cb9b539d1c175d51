"""Words, codes, distance distributions and the code file format.

Binary words are stored as Python ints: bit ``i`` holds coordinate ``i + 1``.
Quaternary words pack one digit per two bits, digit ``i`` at bits ``2i, 2i+1``.
Canonical order everywhere is lexicographic with coordinate 1 most significant.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_BINARY_LENGTH = 63
MAX_QUATERNARY_LENGTH = 31
# above this the Walsh-Hadamard profile would overflow int64 / memory
_WHT_MAX_LENGTH = 20


class CodeFormatError(ValueError):
    """Malformed code file or inconsistent word data."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class EmptyCodeError(CodeFormatError):
    pass


# ---------------------------------------------------------------------------
# word helpers


def word_from_str(s: str) -> int:
    if not s or any(ch not in "01" for ch in s):
        raise ValueError(f"not a binary word: {s!r}")
    return int(s[::-1], 2)


def word_to_str(bits: int, n: int) -> str:
    return format(bits, f"0{n}b")[::-1] if n else ""


def lex_key(bits: int, n: int) -> int:
    """Integer whose numeric order is the lexicographic order of words."""
    return int(format(bits, f"0{n}b")[::-1], 2)


def lex_keys(words: np.ndarray, n: int) -> np.ndarray:
    """Vectorized :func:`lex_key`."""
    words = np.asarray(words, dtype=np.int64)
    out = np.zeros_like(words)
    for i in range(n):
        out |= ((words >> i) & 1) << (n - 1 - i)
    return out


def all_ones(n: int) -> int:
    return (1 << n) - 1


def weight(bits: int) -> int:
    return bits.bit_count()


def _check_length(n: int, limit: int = MAX_BINARY_LENGTH) -> None:
    if not 0 < n <= limit:
        raise ValueError(f"word length {n} outside 1..{limit}")


@dataclass(frozen=True, order=False)
class BinaryWord:
    length: int
    bits: int

    def __post_init__(self):
        _check_length(self.length)
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond the word length")

    @classmethod
    def from_str(cls, s: str) -> "BinaryWord":
        return cls(len(s), word_from_str(s))

    @classmethod
    def zero(cls, n: int) -> "BinaryWord":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BinaryWord":
        return cls(n, all_ones(n))

    def __str__(self) -> str:
        return word_to_str(self.bits, self.length)

    def __add__(self, other: "BinaryWord") -> "BinaryWord":
        _same_length(self, other)
        return BinaryWord(self.length, self.bits ^ other.bits)

    def __getitem__(self, coord: int) -> int:
        """Coordinate value, 1-based."""
        if not 1 <= coord <= self.length:
            raise IndexError(coord)
        return (self.bits >> (coord - 1)) & 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def concat(self, suffix: str) -> "BinaryWord":
        return BinaryWord(self.length + len(suffix), self.bits | (word_from_str(suffix) << self.length))


def _same_length(x: BinaryWord, y: BinaryWord) -> None:
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")


def hamming_distance(x: BinaryWord, y: BinaryWord) -> int:
    _same_length(x, y)
    return (x.bits ^ y.bits).bit_count()


# ---------------------------------------------------------------------------
# codes


@dataclass(frozen=True)
class BinaryCode:
    """A set of binary words of one length, kept in lexicographic order."""

    length: int
    words: tuple[int, ...]
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_length(self.length)
        ws = set(self.words)
        for w in ws:
            if w < 0 or w >> self.length:
                raise CodeFormatError(f"word {w:#x} does not fit length {self.length}")
        n = self.length
        object.__setattr__(self, "words", tuple(sorted(ws, key=lambda w: lex_key(w, n))))
        object.__setattr__(self, "_members", frozenset(ws))

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "BinaryCode":
        strings = list(strings)
        if not strings:
            raise EmptyCodeError("no words")
        n = len(strings[0])
        if any(len(s) != n for s in strings):
            raise CodeFormatError("words of different lengths")
        return cls(n, tuple(word_from_str(s) for s in strings))

    @classmethod
    def from_array(cls, n: int, arr) -> "BinaryCode":
        return cls(n, tuple(int(w) for w in np.asarray(arr).ravel()))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[int]:
        return iter(self.words)

    def __contains__(self, w) -> bool:
        if isinstance(w, BinaryWord):
            return w.length == self.length and w.bits in self._members
        return w in self._members

    @property
    def members(self) -> frozenset:
        return self._members

    @property
    def total(self) -> int:
        return len(self.words)

    def entries(self) -> Iterator[tuple[int, int]]:
        for w in self.words:
            yield w, 1

    def multiplicity(self, w: int) -> int:
        return int(w in self._members)

    def strings(self) -> list[str]:
        return [word_to_str(w, self.length) for w in self.words]

    def array(self) -> np.ndarray:
        return np.fromiter(self.words, dtype=np.int64, count=len(self.words))

    def translate(self, v: int) -> "BinaryCode":
        return BinaryCode(self.length, tuple(w ^ v for w in self.words))

    def append(self, suffix: str) -> "BinaryCode":
        """Concatenate ``suffix`` after every word."""
        s = word_from_str(suffix) << self.length
        return BinaryCode(self.length + len(suffix), tuple(w | s for w in self.words))

    def union(self, *others: "BinaryCode") -> "BinaryCode":
        ws = set(self.words)
        for o in others:
            _codes_same_length(self, o)
            ws.update(o.words)
        return BinaryCode(self.length, tuple(ws))

    def difference(self, other: "BinaryCode") -> "BinaryCode":
        _codes_same_length(self, other)
        return BinaryCode(self.length, tuple(self._members - other.members))

    def as_multiset(self) -> "MultisetCode":
        return MultisetCode(self.length, tuple((w, 1) for w in self.words))


@dataclass(frozen=True)
class MultisetCode:
    """Binary words with positive multiplicities (twofold codes, twofold STS)."""

    length: int
    entries_: tuple[tuple[int, int], ...]
    _mult: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_length(self.length)
        counts: Counter = Counter()
        for w, k in self.entries_:
            if k < 1:
                raise CodeFormatError(f"multiplicity {k} < 1")
            if w < 0 or w >> self.length:
                raise CodeFormatError(f"word {w:#x} does not fit length {self.length}")
            counts[w] += k
        n = self.length
        ordered = tuple(sorted(counts.items(), key=lambda e: lex_key(e[0], n)))
        object.__setattr__(self, "entries_", ordered)
        object.__setattr__(self, "_mult", dict(ordered))

    @classmethod
    def from_codes(cls, *parts: BinaryCode | "MultisetCode", multiplicities: Sequence[int] | None = None) -> "MultisetCode":
        """Multiset union, each part optionally repeated ``multiplicities[i]`` times."""
        if not parts:
            raise EmptyCodeError("no parts")
        n = parts[0].length
        mults = multiplicities or [1] * len(parts)
        acc: list[tuple[int, int]] = []
        for p, k in zip(parts, mults):
            if p.length != n:
                raise ValueError("parts of different lengths")
            acc.extend((w, m * k) for w, m in p.entries())
        return cls(n, tuple(acc))

    def entries(self) -> Iterator[tuple[int, int]]:
        return iter(self.entries_)

    def __len__(self) -> int:
        return len(self.entries_)

    def __iter__(self) -> Iterator[int]:
        return iter(self._mult)

    def __contains__(self, w) -> bool:
        if isinstance(w, BinaryWord):
            return w.length == self.length and w.bits in self._mult
        return w in self._mult

    @property
    def total(self) -> int:
        return sum(self._mult.values())

    @property
    def words(self) -> tuple[int, ...]:
        return tuple(self._mult)

    def multiplicity(self, w: int) -> int:
        return self._mult.get(w, 0)

    def support(self) -> BinaryCode:
        return BinaryCode(self.length, tuple(self._mult))

    def translate(self, v: int) -> "MultisetCode":
        return MultisetCode(self.length, tuple((w ^ v, k) for w, k in self.entries_))

    def counter(self) -> Counter:
        return Counter(self._mult)

    def is_set(self) -> bool:
        return all(k == 1 for k in self._mult.values())


AnyCode = BinaryCode | MultisetCode


def _codes_same_length(a, b) -> None:
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")


def _word_bits(x, n: int) -> int:
    if isinstance(x, BinaryWord):
        if x.length != n:
            raise ValueError(f"length mismatch: word {x.length} vs code {n}")
        return x.bits
    x = int(x)
    if x < 0 or x >> n:
        raise ValueError("word does not fit the code length")
    return x


# ---------------------------------------------------------------------------
# distances


def _chunked_pair_distances(xs: np.ndarray, ys: np.ndarray, chunk: int = 1024) -> Iterator[tuple[int, np.ndarray]]:
    xs = xs.astype(np.uint64)
    ys = ys.astype(np.uint64)
    for start in range(0, len(xs), chunk):
        block = xs[start:start + chunk, None] ^ ys[None, :]
        yield start, np.bitwise_count(block).astype(np.int64)


def code_distance(code: AnyCode) -> int | None:
    """Minimum distance between distinct codewords; ``None`` when |C| < 2.

    For multisets a repeated word gives distance 0.
    """
    if isinstance(code, MultisetCode):
        if code.total < 2:
            return None
        if not code.is_set():
            return 0
        code = code.support()
    if len(code) < 2:
        return None
    arr = code.array()
    best = code.length
    for start, d in _chunked_pair_distances(arr, arr):
        rows = np.arange(d.shape[0])
        d[rows, rows + start] = code.length + 1
        best = min(best, int(d.min()))
        if best == 1:
            break
    return best


def has_min_distance(code: BinaryCode, d: int) -> bool:
    """True iff no two codewords are closer than ``d`` (probes balls of radius d-1)."""
    n = code.length
    members = code.members
    masks = [sum(1 << i for i in c) for r in range(1, d) for c in combinations(range(n), r)]
    for w in code.words:
        for m in masks:
            if (w ^ m) in members:
                return False
    return True


def weight_distribution(x, code: AnyCode) -> list[int]:
    """Entry ``l`` counts codewords (with multiplicity) at distance ``l`` from ``x``."""
    n = code.length
    xb = _word_bits(x, n)
    out = [0] * (n + 1)
    for w, k in code.entries():
        out[(w ^ xb).bit_count()] += k
    return out


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a length-2^n vector."""
    a = np.asarray(a, dtype=np.int64).ravel()
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2 * h)
        x, y = a[:, :h], a[:, h:]
        a = np.concatenate((x + y, x - y), axis=1)
        h *= 2
    return a.reshape(-1)


def _popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def distance_profile(code: AnyCode) -> np.ndarray:
    """Array ``P`` of shape (n+1, 2^n) with ``P[l, x] = A_l(x)`` for every vertex ``x``.

    Computed as XOR-convolutions of the code indicator with the distance shells.
    """
    n = code.length
    if n > _WHT_MAX_LENGTH:
        raise ValueError(f"distance profile over all of H^{n} is beyond the in-memory limit")
    ind = np.zeros(1 << n, dtype=np.int64)
    for w, k in code.entries():
        ind[w] += k
    f_hat = fwht(ind)
    wt = _popcounts(n)
    out = np.empty((n + 1, 1 << n), dtype=np.int64)
    for level in range(n + 1):
        g_hat = fwht((wt == level).astype(np.int64))
        out[level] = fwht(f_hat * g_hat) >> n
    return out


def _pairwise_tables(xs: Sequence[int], code: AnyCode) -> np.ndarray:
    n = code.length
    ws = np.fromiter((w for w, _ in code.entries()), dtype=np.int64)
    ks = np.fromiter((k for _, k in code.entries()), dtype=np.int64)
    xs_arr = np.asarray(xs, dtype=np.int64)
    out = np.zeros((len(xs_arr), n + 1), dtype=np.int64)
    for start, d in _chunked_pair_distances(xs_arr, ws, chunk=256):
        rows = np.repeat(np.arange(d.shape[0]), d.shape[1])
        flat = rows * (n + 1) + d.ravel()
        out[start:start + d.shape[0]] = np.bincount(
            flat, weights=np.tile(ks, d.shape[0]), minlength=d.shape[0] * (n + 1)
        ).reshape(d.shape[0], n + 1)
    return out


@dataclass(frozen=True)
class DistributionTable:
    """Per-word weight distributions of ``C_j`` seen from ``C_i`` and their exact means."""

    n: int
    per_word: Mapping[int, tuple[int, ...]] = field(repr=False)
    mean: tuple[Fraction, ...]
    size_i: int
    size_j: int


def mean_distribution(ci: BinaryCode, cj: AnyCode, profile: np.ndarray | None = None) -> DistributionTable:
    """Distribution of distances from words of ``ci`` to ``cj``.

    ``profile`` may be a precomputed :func:`distance_profile` of ``cj``.
    """
    _codes_same_length(ci, cj)
    if len(ci) == 0:
        raise ValueError("mean distribution needs a nonempty source code")
    n = ci.length
    xs = ci.array()
    if profile is None and n <= _WHT_MAX_LENGTH and len(ci) * cj.total > (n + 1) << n:
        profile = distance_profile(cj)
    if profile is not None:
        rows = profile[:, xs].T
    else:
        rows = _pairwise_tables(xs, cj)
    per_word = {int(x): tuple(int(v) for v in r) for x, r in zip(xs, rows)}
    sums = rows.sum(axis=0)
    mean = tuple(Fraction(int(s), len(ci)) for s in sums)
    return DistributionTable(n, per_word, mean, len(ci), cj.total)


def is_antipodal(code: AnyCode) -> tuple[bool, int | None]:
    """Check ``mult(x) == mult(x + 1)`` for all x; returns (ok, counterexample)."""
    ones = all_ones(code.length)
    bad = []
    for w, k in code.entries():
        if code.multiplicity(w ^ ones) != k:
            # the complement is the word whose multiplicity falls short
            a, b = (w ^ ones, w) if code.multiplicity(w ^ ones) < k else (w, w ^ ones)
            bad.append(a)
    if not bad:
        return True, None
    return False, min(bad, key=lambda w: lex_key(w, code.length))


# ---------------------------------------------------------------------------
# quaternary words


def qword_from_str(s: str) -> int:
    if not s or any(ch not in "0123" for ch in s):
        raise ValueError(f"not a quaternary word: {s!r}")
    out = 0
    for i, ch in enumerate(s):
        out |= int(ch) << (2 * i)
    return out


def qword_to_str(packed: int, m: int) -> str:
    return "".join(str((packed >> (2 * i)) & 3) for i in range(m))


def qdigits(packed: int, m: int) -> tuple[int, ...]:
    return tuple((packed >> (2 * i)) & 3 for i in range(m))


def qpack(digits: Iterable[int]) -> int:
    out = 0
    for i, d in enumerate(digits):
        if not 0 <= d <= 3:
            raise ValueError(f"digit {d} outside 0..3")
        out |= d << (2 * i)
    return out


def qlex_key(packed: int, m: int) -> tuple[int, ...]:
    return qdigits(packed, m)


@dataclass(frozen=True)
class QuaternaryWord:
    length: int
    digits_: int

    def __post_init__(self):
        _check_length(self.length, MAX_QUATERNARY_LENGTH)
        if self.digits_ < 0 or self.digits_ >> (2 * self.length):
            raise ValueError("digits set beyond the word length")

    @classmethod
    def from_str(cls, s: str) -> "QuaternaryWord":
        return cls(len(s), qword_from_str(s))

    @property
    def digits(self) -> tuple[int, ...]:
        return qdigits(self.digits_, self.length)

    def __str__(self) -> str:
        return qword_to_str(self.digits_, self.length)


@dataclass(frozen=True)
class QuaternaryCode:
    """A set of words of ``{0,1,2,3}^m``, kept in lexicographic order."""

    m: int
    words: tuple[int, ...]
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_length(self.m, MAX_QUATERNARY_LENGTH)
        ws = set(self.words)
        for w in ws:
            if w < 0 or w >> (2 * self.m):
                raise CodeFormatError(f"word {w:#x} does not fit length {self.m}")
        m = self.m
        object.__setattr__(self, "words", tuple(sorted(ws, key=lambda w: qlex_key(w, m))))
        object.__setattr__(self, "_members", frozenset(ws))

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "QuaternaryCode":
        strings = list(strings)
        if not strings:
            raise EmptyCodeError("no words")
        m = len(strings[0])
        if any(len(s) != m for s in strings):
            raise CodeFormatError("words of different lengths")
        return cls(m, tuple(qword_from_str(s) for s in strings))

    @classmethod
    def from_digits(cls, m: int, tuples: Iterable[Sequence[int]]) -> "QuaternaryCode":
        return cls(m, tuple(qpack(t) for t in tuples))

    @classmethod
    def from_indicator(cls, ind: np.ndarray) -> "QuaternaryCode":
        """From a boolean array of shape (4,)*m indexed by digit tuples."""
        m = ind.ndim
        return cls(m, tuple(qpack(idx) for idx in zip(*np.nonzero(ind))))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[int]:
        return iter(self.words)

    def __contains__(self, w) -> bool:
        if isinstance(w, QuaternaryWord):
            return w.length == self.m and w.digits_ in self._members
        if isinstance(w, tuple):
            return qpack(w) in self._members
        return w in self._members

    @property
    def members(self) -> frozenset:
        return self._members

    def digit_tuples(self) -> list[tuple[int, ...]]:
        return [qdigits(w, self.m) for w in self.words]

    def strings(self) -> list[str]:
        return [qword_to_str(w, self.m) for w in self.words]

    def indicator(self) -> np.ndarray:
        ind = np.zeros((4,) * self.m, dtype=np.int8)
        for t in self.digit_tuples():
            ind[t] = 1
        return ind

    def complement(self) -> "QuaternaryCode":
        return QuaternaryCode.from_indicator(self.indicator() == 0)

    def append_digit(self, d: int) -> "QuaternaryCode":
        return QuaternaryCode(self.m + 1, tuple(w | (d << (2 * self.m)) for w in self.words))

    def union(self, *others: "QuaternaryCode") -> "QuaternaryCode":
        ws = set(self.words)
        for o in others:
            if o.m != self.m:
                raise ValueError("length mismatch")
            ws.update(o.words)
        return QuaternaryCode(self.m, tuple(ws))

    def entries(self) -> Iterator[tuple[int, int]]:
        for w in self.words:
            yield w, 1


# ---------------------------------------------------------------------------
# file format


def parse_code(text: str, quaternary: bool = False) -> BinaryCode | MultisetCode | QuaternaryCode:
    """Parse the one-word-per-line format; ``#`` lines are comments, ``x<k>`` marks multiplicity."""
    alphabet = "0123" if quaternary else "01"
    counts: Counter = Counter()
    length = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) > 2:
            raise CodeFormatError(f"unexpected tokens in {raw!r}", lineno)
        word = parts[0]
        if any(ch not in alphabet for ch in word):
            raise CodeFormatError(f"invalid symbol in word {word!r}", lineno)
        mult = 1
        if len(parts) == 2:
            tok = parts[1]
            if not (tok.startswith("x") and tok[1:].isdigit()) or int(tok[1:]) < 2:
                raise CodeFormatError(f"bad multiplicity marker {tok!r}", lineno)
            mult = int(tok[1:])
        if length is None:
            length = len(word)
            limit = MAX_QUATERNARY_LENGTH if quaternary else MAX_BINARY_LENGTH
            if length > limit:
                raise CodeFormatError(f"word length {length} exceeds {limit}", lineno)
        elif len(word) != length:
            raise CodeFormatError(f"word length {len(word)} differs from {length}", lineno)
        counts[word] += mult
    if not counts:
        raise EmptyCodeError("code file contains no words")
    if quaternary:
        if any(k > 1 for k in counts.values()):
            raise CodeFormatError("quaternary codes cannot carry multiplicities")
        return QuaternaryCode.from_strings(counts)
    if all(k == 1 for k in counts.values()):
        return BinaryCode.from_strings(counts)
    return MultisetCode(length, tuple((word_from_str(w), k) for w, k in counts.items()))


def format_code(code: BinaryCode | MultisetCode | QuaternaryCode, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    if isinstance(code, QuaternaryCode):
        lines.extend(code.strings())
    else:
        for w, k in code.entries():
            s = word_to_str(w, code.length)
            lines.append(s if k == 1 else f"{s} x{k}")
    return "\n".join(lines) + "\n"


def read_code(path, quaternary: bool = False) -> BinaryCode | MultisetCode | QuaternaryCode:
    return parse_code(Path(path).read_text(encoding="utf-8"), quaternary=quaternary)


def write_code(code, path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(format_code(code, header), encoding="utf-8")


def binomial_row(n: int) -> list[int]:
    return [comb(n, l) for l in range(n + 1)]


@dataclass(frozen=True)
class Check:
    """Outcome of a verifier: truthy when the property holds, otherwise carries a witness."""

    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class PreconditionError(ValueError):
    """Input does not meet an operation's stated precondition."""
