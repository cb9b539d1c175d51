"""MDS and double-MDS codes in the quaternary cube, and the perfect codes built from them.

A line (4-clique) of ``Q^m`` is the set of four words agreeing outside one
position.  With the indicator of a code stored as an ``(4,)*m`` array, the
line counts along position ``p`` are a sum over axis ``p``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable

import numpy as np

from .core import (
    BinaryCode,
    Check,
    MultisetCode,
    PreconditionError,
    QuaternaryCode,
    qdigits,
    qword_to_str,
    word_from_str,
)
from .splitgraph import OddCycle, replay_cycle, split_code, two_color

P_TABLE = (("0000", "1111"), ("0011", "1100"), ("0101", "1010"), ("0110", "1001"))
P_PRIME_TABLE = (("000", "111"), ("011", "100"), ("101", "010"), ("110", "001"))
_P = tuple(tuple(word_from_str(s) for s in pair) for pair in P_TABLE)
_P_PRIME = tuple(tuple(word_from_str(s) for s in pair) for pair in P_PRIME_TABLE)


# ---------------------------------------------------------------------------
# line structure


@dataclass(frozen=True)
class Line:
    """Position (1-based) and the fixed digits elsewhere; printed with ``*`` at the free position."""

    position: int
    fixed: tuple[int, ...]
    count: int

    def __str__(self) -> str:
        digits = [str(d) for d in self.fixed]
        digits.insert(self.position - 1, "*")
        return "".join(digits) + f" ({self.count} codewords)"


def line_counts(code: QuaternaryCode) -> list[np.ndarray]:
    ind = code.indicator()
    return [ind.sum(axis=p) for p in range(code.m)]


def _line_check(code: QuaternaryCode, target: int) -> Check:
    for p, counts in enumerate(line_counts(code)):
        bad = np.argwhere(counts != target)
        if bad.size:
            fixed = tuple(int(v) for v in bad[0])
            return Check(False, Line(p + 1, fixed, int(counts[tuple(bad[0])])))
    return Check(True)


def is_mds(code: QuaternaryCode) -> Check:
    """Every line meets the code exactly once."""
    return _line_check(code, 1)


def is_double_mds(code: QuaternaryCode) -> Check:
    """Every line meets the code exactly twice."""
    return _line_check(code, 2)


def code_distance_q(code: QuaternaryCode) -> int | None:
    ts = np.array(code.digit_tuples())
    if len(ts) < 2:
        return None
    d = (ts[:, None, :] != ts[None, :, :]).sum(axis=2)
    np.fill_diagonal(d, code.m + 1)
    return int(d.min())


def _neighbours_q(code: QuaternaryCode) -> list[list[int]]:
    """Adjacency of words differing in exactly one position."""
    index = {w: i for i, w in enumerate(code.words)}
    adj: list[list[int]] = [[] for _ in code.words]
    for i, w in enumerate(code.words):
        for p in range(code.m):
            shift = 2 * p
            cur = (w >> shift) & 3
            for d in range(4):
                if d == cur:
                    continue
                j = index.get((w & ~(3 << shift)) | (d << shift))
                if j is not None:
                    adj[i].append(j)
        adj[i].sort()
    return adj


@dataclass
class MdsSplit:
    first: QuaternaryCode | None = None
    second: QuaternaryCode | None = None
    odd_cycle: tuple[int, ...] | None = None
    m: int = 0

    @property
    def ok(self) -> bool:
        return self.odd_cycle is None

    def __bool__(self) -> bool:
        return self.ok

    def cycle_strings(self) -> list[str]:
        return [qword_to_str(w, self.m) for w in self.odd_cycle or ()]


def split_double_mds(code: QuaternaryCode, shortest: bool = False) -> MdsSplit:
    """Two-colour the distance-1 graph; colour classes are the two MDS codes."""
    if not is_double_mds(code):
        raise PreconditionError("not a double-MDS code")
    color, cycle = two_color(_neighbours_q(code), shortest)
    if color is None:
        return MdsSplit(odd_cycle=tuple(code.words[v] for v in cycle), m=code.m)
    first = QuaternaryCode(code.m, tuple(w for w, c in zip(code.words, color) if c == 0))
    second = QuaternaryCode(code.m, tuple(w for w, c in zip(code.words, color) if c == 1))
    assert is_mds(first) and is_mds(second)
    return MdsSplit(first, second, m=code.m)


def is_splittable(code: QuaternaryCode) -> bool:
    return split_double_mds(code).ok


# ---------------------------------------------------------------------------
# S(M)


def _check_perfect_tail(m: int, c: BinaryCode) -> None:
    from .perfect import is_1perfect

    if m < 2:
        raise PreconditionError("S(M) needs m >= 2")
    if c.length != m - 1:
        raise PreconditionError(f"C must have length m-1 = {m - 1}, got {c.length}")
    if not is_1perfect(c):
        raise PreconditionError("C is not 1-perfect")


def _c_star(m: int, c: BinaryCode) -> list[int]:
    """``000c1 000c2 ... 000c_{m-1} 000``: c_k sits at coordinate 4k."""
    out = []
    for w in c.words:
        out.append(sum(((w >> k) & 1) << (4 * k + 3) for k in range(m - 1)))
    return out


def _block_products(mu: tuple[int, ...]) -> Iterable[int]:
    choices = [_P[d] for d in mu[:-1]] + [_P_PRIME[mu[-1]]]
    for pick in product(*choices):
        yield sum(word << (4 * k) for k, word in enumerate(pick))


def s_of_m_multiset(code: QuaternaryCode, c: BinaryCode) -> MultisetCode:
    """The union of ``P_mu1 ... P_mu(m-1) P'_mum + C*`` over M, with generation counts."""
    m = code.m
    _check_perfect_tail(m, c)
    if not len(code):
        raise PreconditionError("M is empty")
    stars = _c_star(m, c)
    counts: Counter = Counter()
    for mu in code.digit_tuples():
        for base in _block_products(mu):
            for s in stars:
                counts[base ^ s] += 1
    return MultisetCode(4 * m - 1, tuple(counts.items()))


def s_of_m(code: QuaternaryCode, c: BinaryCode) -> BinaryCode:
    """The code S(M) of length 4m-1; 1-perfect when M is MDS."""
    ms = s_of_m_multiset(code, c)
    out = ms.support()
    if code_distance_q(code) is not None and code_distance_q(code) >= 2:
        assert len(out) == len(code) * (1 << code.m) * len(c)
    return out


def representative(mu: tuple[int, ...], c_word: int, m: int) -> int:
    """Fixed word of the block of ``mu``: the element of each P-pair starting with 0, plus c*."""
    base = sum(_P[d][0] << (4 * k) for k, d in enumerate(mu[:-1])) | (_P_PRIME[mu[-1]][0] << (4 * (m - 1)))
    star = sum(((c_word >> k) & 1) << (4 * k + 3) for k in range(m - 1))
    return base ^ star


@dataclass
class TwofoldSM:
    code: MultisetCode
    twofold: Check
    m_split: MdsSplit
    s_splittable: bool
    halves: tuple[BinaryCode, BinaryCode] | None = None
    transported_cycle: OddCycle | None = None
    witness_ok: bool = False

    @property
    def consistent(self) -> bool:
        return self.m_split.ok == self.s_splittable and self.witness_ok


def s_of_m_twofold(code: QuaternaryCode, c: BinaryCode) -> TwofoldSM:
    """S(M) for a double-MDS M, with splittability compared against M's.

    A split of M is carried to ``S(M') + S(M'')``; an odd cycle of M is carried
    to the cycle of block representatives and replayed on S(M).
    """
    from .perfect import is_1perfect, is_twofold_1perfect, sweep_budget

    if not is_double_mds(code):
        raise PreconditionError("M is not a double-MDS code")
    ms = s_of_m_multiset(code, c)
    twofold = is_twofold_1perfect(ms) if ms.length <= sweep_budget() else Check(True, None, "sweep skipped")
    m_split = split_double_mds(code)
    s_split = split_code(ms)
    out = TwofoldSM(ms, twofold, m_split, s_split.ok)
    if m_split.ok:
        h1, h2 = s_of_m(m_split.first, c), s_of_m(m_split.second, c)
        out.halves = (h1, h2)
        recomposed = MultisetCode.from_codes(h1, h2) == ms
        perfect = ms.length > sweep_budget() or (bool(is_1perfect(h1)) and bool(is_1perfect(h2)))
        out.witness_ok = recomposed and perfect
    else:
        c0 = c.words[0]
        words = tuple(representative(qdigits(w, code.m), c0, code.m) for w in m_split.odd_cycle)
        cyc = OddCycle(ms.length, words)
        out.transported_cycle = cyc
        out.witness_ok = replay_cycle(cyc, {1, 2}) and all(w in ms for w in words) and len(set(words)) == len(words)
    return out


# ---------------------------------------------------------------------------
# control pipeline for the non-embeddability construction


def perfect_code_of_length(length: int) -> BinaryCode:
    """The 1-perfect code of the given length used as the C* tail (Hamming, or {0} for length 1)."""
    from .generators import hamming

    if length == 1:
        return BinaryCode(1, (0,))
    r = (length + 1).bit_length() - 1
    if (1 << r) - 1 != length:
        raise PreconditionError(f"no 1-perfect code of length {length}")
    return hamming(r)


@dataclass
class PipelineReport:
    k: int
    m: int
    c1: BinaryCode
    checks: dict[str, Check]
    hypothesis_met: bool
    equivalence: object = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def format(self) -> str:
        lines = [f"k={self.k} m={self.m} |C1|={len(self.c1)} length={self.c1.length}"]
        for name, chk in self.checks.items():
            lines.append(f"{name}: {'OK' if chk else 'FAIL'}" + (f" ({chk.detail})" if chk.detail else ""))
        lines.append(
            "hypothesis: " + ("met (M1 unsplittable, complement splittable)" if self.hypothesis_met
                              else "NOT met (M1 is splittable); control run")
        )
        lines.extend(self.notes)
        if self.equivalence is not None:
            lines.append(self.equivalence.format())
        return "\n".join(lines)


def theorem7_pipeline(m1: QuaternaryCode, k: int, run_equivalence: bool = True) -> tuple[BinaryCode, PipelineReport]:
    """Build C1 with ``C1 00`` inside S(M) from a double-MDS ``M1`` whose complement splits.

    ``M = M0 0 + M0 1 + M1 2 + M1 3``, ``D = S(M)``, ``C = S(M' 0 + M'' 1)`` and
    ``C1`` is the set of words x with ``x00`` in C.  The second half uses M''
    so that the quaternary code has distance 2.
    """
    from .partition import check_optimal_code
    from .perfect import build_D, equivalence_report, is_twofold_1perfect, sweep_budget

    if k < 3:
        raise PreconditionError("k must be at least 3")
    m = 1 << (k - 2)
    if m1.m != m - 1:
        raise PreconditionError(f"M1 must lie in Q^{m - 1} for k={k}")
    if not is_double_mds(m1):
        raise PreconditionError("M1 is not a double-MDS code")
    m0 = m1.complement()
    split0 = split_double_mds(m0)
    if not split0.ok:
        raise PreconditionError("the complement of M1 is not splittable")
    hypothesis_met = not is_splittable(m1)
    big_m = m0.append_digit(0).union(m0.append_digit(1), m1.append_digit(2), m1.append_digit(3))
    tail = perfect_code_of_length(m - 1)
    d = s_of_m_multiset(big_m, tail)
    c = s_of_m(split0.first.append_digit(0).union(split0.second.append_digit(1)), tail)
    n = 4 * m - 3
    low = (1 << n) - 1
    c1 = BinaryCode(n, tuple(w & low for w in c.words if w >> n == 0))

    checks: dict[str, Check] = {}
    expected = 1 << ((1 << k) - k - 3)
    checks["cardinality"] = Check(len(c1) == expected, len(c1), f"|C1|={len(c1)}, expected {expected}, |C|={len(c)}")
    try:
        check_optimal_code(c1)
        checks["parameters"] = Check(True)
    except PreconditionError as exc:
        checks["parameters"] = Check(False, None, str(exc))
    checks["double-MDS M"] = is_double_mds(big_m)
    checks["C1 00 in D"] = Check(all(w in d for w in c1.words))
    tail_word = word_from_str("11") << n
    checks["D closed under +0...011"] = Check(all((w ^ tail_word) in d for w in d))
    if d.length <= sweep_budget():
        checks["D twofold 1-perfect"] = is_twofold_1perfect(d)
    if checks["parameters"]:
        checks["D equals the unique D of C1"] = Check(build_D(c1) == d)
    report = PipelineReport(k, m, c1, checks, hypothesis_met)
    report.notes.append(f"|C| = {len(c)} = 2|C1|")
    if run_equivalence and checks["parameters"]:
        eq = equivalence_report(c1)
        report.equivalence = eq
        expected_verdict = eq.all_fail if hypothesis_met else eq.all_hold
        checks["equivalence verdict"] = Check(expected_verdict, None, "all four fail" if hypothesis_met else "all four hold")
    return c1, report


# ---------------------------------------------------------------------------
# latin hypercuboids


class LatinConversionError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class LatinHypercuboid:
    """Order-4 cuboid of shape ``4 x ... x 4 x p``; symbols differ along every axis."""

    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.int8)
        object.__setattr__(self, "cells", cells)
        if cells.ndim < 1 or any(s != 4 for s in cells.shape[:-1]) or cells.shape[-1] not in (2, 3, 4):
            raise ValueError(f"shape {cells.shape} is not 4 x ... x 4 x p")
        if cells.min() < 0 or cells.max() > 3:
            raise ValueError("symbols must lie in 0..3")
        for axis in range(cells.ndim):
            s = np.sort(cells, axis=axis)
            if (np.diff(s, axis=axis) == 0).any():
                raise LatinConversionError(f"repeated symbol along axis {axis + 1}")

    @property
    def p(self) -> int:
        return self.cells.shape[-1]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.cells.shape


def to_latin(code: QuaternaryCode) -> LatinHypercuboid:
    """MDS code in Q^m -> latin hypercube with m-1 indices; double-MDS -> 4^(m-1) x 2 cuboid.

    For a double-MDS code layer j holds the symbols of the j-th MDS code of
    its split; an unsplittable code has no such cuboid.
    """
    m = code.m
    if is_mds(code):
        if m < 2:
            raise LatinConversionError("an MDS code needs m >= 2")
        cells = np.argmax(code.indicator(), axis=m - 1)
        return LatinHypercuboid(cells)
    chk = is_double_mds(code)
    if not chk:
        raise LatinConversionError(f"line constraint violated at {chk.witness}", chk.witness)
    split = split_double_mds(code)
    if not split.ok:
        raise LatinConversionError("double-MDS code is unsplittable", split.cycle_strings())
    layers = [np.argmax(part.indicator(), axis=m - 1) for part in (split.first, split.second)]
    return LatinHypercuboid(np.stack(layers, axis=-1))


def from_latin(latin: LatinHypercuboid) -> QuaternaryCode:
    """p = 4: the graph ``{(i, f(i))}``, an MDS code; p = 2: the union of the two layers, double-MDS."""
    cells = latin.cells
    if latin.p == 4:
        d = cells.ndim
        tuples = [idx + (int(cells[idx]),) for idx in np.ndindex(cells.shape)]
        return QuaternaryCode.from_digits(d + 1, tuples)
    if latin.p == 2:
        d = cells.ndim
        tuples = [idx[:-1] + (int(cells[idx]),) for idx in np.ndindex(cells.shape)]
        return QuaternaryCode.from_digits(d, tuples)
    raise ValueError("only p = 2 or p = 4 convert to codes")


def complete_latin(latin: LatinHypercuboid) -> LatinHypercuboid | None:
    """Complete a ``4^(m-1) x 2`` cuboid to a latin hypercube via a split of the complement."""
    if latin.p != 2:
        raise ValueError("completion is defined for p = 2")
    double = from_latin(latin)
    split = split_double_mds(double.complement())
    if not split.ok:
        return None
    m = double.m
    extra = [np.argmax(part.indicator(), axis=m - 1) for part in (split.first, split.second)]
    return LatinHypercuboid(np.concatenate([latin.cells, np.stack(extra, axis=-1)], axis=-1))


# ---------------------------------------------------------------------------
# conjecture probe


def conjecture_predicate(code: QuaternaryCode) -> bool:
    """True for a counterexample: exactly one of M and its complement splits."""
    return is_splittable(code) != is_splittable(code.complement())


@dataclass
class SearchFindings:
    m: int
    count: int = 0
    nodes: int = 0
    complete: bool = False
    symmetry: bool = False
    hits: list[dict] = field(default_factory=list)
    splittable: int = 0
    complement_splittable: int = 0

    def format(self) -> str:
        return "\n".join(
            [
                f"m={self.m} symmetry={'on' if self.symmetry else 'off'}",
                f"double-MDS codes enumerated: {self.count}",
                f"splittable: {self.splittable}, complement splittable: {self.complement_splittable}",
                f"search nodes: {self.nodes}",
                f"status: {'COMPLETE' if self.complete else 'PARTIAL (budget exhausted)'}",
                f"hits: {len(self.hits)}",
            ]
        )


def _hit_record(code: QuaternaryCode) -> dict:
    own, comp = split_double_mds(code), split_double_mds(code.complement())
    witness = own.cycle_strings() if not own.ok else comp.cycle_strings()
    return {
        "words": code.strings(),
        "splittable": own.ok,
        "complement_splittable": comp.ok,
        "witness": witness,
    }


def search_double_mds(
    m: int,
    predicate: Callable[[QuaternaryCode], bool] | None = conjecture_predicate,
    budget: int = 10_000_000,
    symmetry: bool = False,
    log_path=None,
    max_hits: int = 100,
) -> SearchFindings:
    """Enumerate double-MDS codes of Q^m by cell-by-cell backtracking.

    Cells are visited in lexicographic order; every line keeps a count of
    chosen cells and of undecided cells, which prunes both choices.  With
    ``symmetry`` the first line is fixed to symbols {0, 1}, which keeps one
    representative per orbit of symbol permutations of the last coordinate.
    ``budget`` caps the number of search nodes; exceeding it returns with
    ``complete=False``.
    """
    if m not in (2, 3):
        raise ValueError("search is supported for m in {2, 3}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    cells = list(np.ndindex(*(4,) * m))
    line_id: dict[tuple[int, tuple[int, ...]], int] = {}
    cell_lines: list[list[int]] = []
    for t in cells:
        ids = []
        for p in range(m):
            key = (p, t[:p] + t[p + 1:])
            ids.append(line_id.setdefault(key, len(line_id)))
        cell_lines.append(ids)
    chosen = [0] * len(line_id)
    free = [4] * len(line_id)
    state = [0] * len(cells)
    findings = SearchFindings(m, symmetry=symmetry)
    forced = {0: 1, 1: 1, 2: 0, 3: 0} if symmetry else {}
    log = open(log_path, "a", encoding="utf-8") if log_path else None

    def feasible(i: int, v: int) -> bool:
        for lid in cell_lines[i]:
            c = chosen[lid] + v
            if c > 2 or c + free[lid] - 1 < 2:
                return False
        return True

    def place(i: int, v: int, sign: int) -> None:
        for lid in cell_lines[i]:
            chosen[lid] += sign * v
            free[lid] -= sign

    exhausted = False

    def leaf() -> None:
        code = QuaternaryCode.from_digits(m, [cells[i] for i in range(len(cells)) if state[i]])
        findings.count += 1
        own = is_splittable(code)
        comp = is_splittable(code.complement())
        findings.splittable += own
        findings.complement_splittable += comp
        if predicate is not None and predicate(code) and len(findings.hits) < max_hits:
            rec = _hit_record(code)
            findings.hits.append(rec)
            if log:
                log.write(json.dumps(rec) + "\n")

    def rec(i: int) -> None:
        nonlocal exhausted
        if exhausted:
            return
        if i == len(cells):
            leaf()
            return
        options = (forced[i],) if i in forced else (1, 0)
        for v in options:
            findings.nodes += 1
            if findings.nodes > budget:
                exhausted = True
                return
            if not feasible(i, v):
                continue
            state[i] = v
            place(i, v, 1)
            rec(i + 1)
            place(i, v, -1)
            state[i] = 0
            if exhausted:
                return

    try:
        rec(0)
    finally:
        if log:
            log.close()
    findings.complete = not exhausted
    return findings
