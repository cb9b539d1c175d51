"""1-perfect and twofold 1-perfect codes: sweeps, lengthening, twofold embeddings."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    AnyCode,
    BinaryCode,
    Check,
    MultisetCode,
    PreconditionError,
    has_min_distance,
    is_antipodal,
    lex_keys,
    word_from_str,
    word_to_str,
)
from .partition import Partition, derive_partition, extend_partition, merge_parts
from .splitgraph import OddCycle, build_graph, bipartition, split_code

DEFAULT_SWEEP_LENGTH = 25


class BudgetError(RuntimeError):
    """An exhaustive sweep would exceed the configured length budget."""


def sweep_budget() -> int:
    """Largest length swept exhaustively; ``PERFCODE_BUDGET`` overrides the default."""
    raw = os.environ.get("PERFCODE_BUDGET")
    if raw is None:
        return DEFAULT_SWEEP_LENGTH
    try:
        return int(raw)
    except ValueError:
        raise BudgetError(f"PERFCODE_BUDGET must be an integer, got {raw!r}") from None


def _entry_arrays(code: AnyCode) -> tuple[np.ndarray, np.ndarray]:
    ents = list(code.entries())
    ws = np.fromiter((w for w, _ in ents), dtype=np.int64, count=len(ents))
    ks = np.fromiter((k for _, k in ents), dtype=np.int32, count=len(ents))
    return ws, ks


def coverage(code: AnyCode, threads: int = 1) -> np.ndarray:
    """Number of codewords (with multiplicity) within distance one of every vertex."""
    n = code.length
    if n > sweep_budget():
        raise BudgetError(f"sweep over H^{n} exceeds the budget of length {sweep_budget()}")
    ws, ks = _entry_arrays(code)

    def partial(lo: int, hi: int) -> np.ndarray:
        cov = np.zeros(1 << n, dtype=np.int32)
        w, k = ws[lo:hi], ks[lo:hi]
        # words are distinct, so each fancy-index update has no repeats
        cov[w] += k
        for i in range(n):
            cov[w ^ (1 << i)] += k
        return cov

    if threads <= 1 or len(ws) < 2 * threads:
        return partial(0, len(ws))
    bounds = np.linspace(0, len(ws), threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda ab: partial(*ab), zip(bounds[:-1], bounds[1:])))
    return np.sum(parts, axis=0)


def _coverage_check(code: AnyCode, target: int, threads: int) -> Check:
    cov = coverage(code, threads)
    bad = np.flatnonzero(cov != target)
    if bad.size == 0:
        return Check(True)
    v = int(bad[np.argmin(lex_keys(bad, code.length))])
    return Check(False, v, f"vertex {word_to_str(v, code.length)} covered {int(cov[v])} times, expected {target}")


def is_1perfect(code: AnyCode, threads: int = 1) -> Check:
    """Every vertex is within distance one of exactly one codeword."""
    return _coverage_check(code, 1, threads)


def is_twofold_1perfect(code: AnyCode, threads: int = 1) -> Check:
    """Every vertex is within distance one of exactly two codewords, counted with multiplicity."""
    return _coverage_check(code, 2, threads)


# ---------------------------------------------------------------------------
# shortening


def shorten_at(code: BinaryCode, coords: Sequence[int]) -> BinaryCode:
    """Keep words that are zero at the given 1-based coordinates, then delete them."""
    n = code.length
    coords = sorted(set(coords))
    if not coords or coords[0] < 1 or coords[-1] > n or len(coords) >= n:
        raise ValueError(f"cannot shorten length {n} at {coords}")
    mask = sum(1 << (c - 1) for c in coords)
    keep = [i for i in range(n) if not (mask >> i) & 1]
    out = []
    for w in code.words:
        if w & mask:
            continue
        out.append(sum(((w >> i) & 1) << j for j, i in enumerate(keep)))
    return BinaryCode(n - len(coords), tuple(out))


def shorten(code: BinaryCode) -> BinaryCode:
    return shorten_at(code, [code.length])


def double_shorten(code: BinaryCode) -> BinaryCode:
    return shorten_at(code, [code.length - 1, code.length])


# ---------------------------------------------------------------------------
# lengthening and twofold codes


def _validate_split(c4: BinaryCode, first: BinaryCode, second: BinaryCode) -> None:
    if first.members & second.members or first.members | second.members != c4.members:
        raise PreconditionError("the pair is not a partition of the fourth part")
    for piece in (first, second):
        if not has_min_distance(piece, 3):
            raise PreconditionError("a piece of the split has code distance below 3")


def lengthen(c1: BinaryCode, split: tuple[BinaryCode, BinaryCode], partition: Partition | None = None) -> BinaryCode:
    """``C1 00 + C2 11 + C' 01 + C'' 10``, a 1-perfect code of length n+2."""
    p = partition or derive_partition(c1)
    first, second = split
    _validate_split(p.parts[3], first, second)
    return p.parts[0].append("00").union(p.parts[1].append("11"), first.append("01"), second.append("10"))


def build_B(c1: BinaryCode, partition: Partition | None = None) -> MultisetCode:
    """``2*C1 00 + 2*C2 11 + C4 01 + C4 10``."""
    p = partition or derive_partition(c1)
    c1_, c2, _, c4 = p.parts
    return MultisetCode.from_codes(
        c1_.append("00"), c2.append("11"), c4.append("01"), c4.append("10"), multiplicities=[2, 2, 1, 1]
    )


def build_D(c1: BinaryCode, partition: Partition | None = None) -> MultisetCode:
    """``C1 00 + C2 00 + C1 11 + C2 11 + C4 01 + C4 10``."""
    p = partition or derive_partition(c1)
    c1_, c2, _, c4 = p.parts
    return MultisetCode.from_codes(
        c1_.append("00"), c2.append("00"), c1_.append("11"), c2.append("11"), c4.append("01"), c4.append("10")
    )


def _tail(n: int) -> int:
    """The word 0...011 of length n+2."""
    return word_from_str("11") << n


def check_B_properties(b: MultisetCode, c1: BinaryCode) -> Check:
    """Multiplicity two on ``C1 00`` and closure of 01/10 words under ``+ 0...011``."""
    n = c1.length
    tail = _tail(n)
    for w in c1.words:
        if b.multiplicity(w) != 2:
            return Check(False, w, "word of C1 00 without multiplicity 2")
    for w in b:
        suffix = w >> n
        if suffix in (1, 2) and (w ^ tail) not in b:
            return Check(False, w, "01/10 word whose +0...011 translate is missing")
    return Check(True)


def check_D_properties(d: MultisetCode, c1: BinaryCode) -> Check:
    """Set-valued, contains ``C1 00`` and closed under ``+ 0...011``."""
    n = c1.length
    tail = _tail(n)
    if not d.is_set():
        return Check(False, None, "repeated word")
    for w in c1.words:
        if w not in d:
            return Check(False, w, "word of C1 00 missing")
    for w in d:
        if (w ^ tail) not in d:
            return Check(False, w, "translate by 0...011 missing")
    return Check(True)


@dataclass
class TwofoldSplit:
    halves: tuple[BinaryCode, BinaryCode] | None = None
    odd_cycle: OddCycle | None = None
    verified: bool = False

    @property
    def ok(self) -> bool:
        return self.halves is not None

    def __bool__(self) -> bool:
        return self.ok


def split_twofold(t: MultisetCode, c1: BinaryCode, variant: str, threads: int = 1) -> TwofoldSplit:
    """Split the B or D embedding of ``C1`` into two 1-perfect codes via a split of C4."""
    variant = variant.upper()
    if variant not in ("B", "D"):
        raise ValueError("variant must be 'B' or 'D'")
    p = derive_partition(c1)
    expected = build_B(c1, p) if variant == "B" else build_D(c1, p)
    if expected != t:
        raise PreconditionError(f"the multiset is not the {variant} code of the given C1")
    res = split_code(p.parts[3])
    if not res.ok:
        return TwofoldSplit(odd_cycle=res.odd_cycle)
    c1_, c2 = p.parts[0], p.parts[1]
    a, b = res.first, res.second
    h1 = c1_.append("00").union(c2.append("11"), a.append("01"), b.append("10"))
    if variant == "B":
        h2 = c1_.append("00").union(c2.append("11"), a.append("10"), b.append("01"))
    else:
        h2 = c2.append("00").union(c1_.append("11"), a.append("10"), b.append("01"))
    union = MultisetCode.from_codes(h1, h2)
    if union != t:
        raise AssertionError("halves do not recompose the twofold code")
    verified = False
    if h1.length <= sweep_budget():
        verified = bool(is_1perfect(h1, threads)) and bool(is_1perfect(h2, threads))
        if not verified:
            raise AssertionError("a half of a split twofold code is not 1-perfect")
    return TwofoldSplit((h1, h2), verified=verified)


# ---------------------------------------------------------------------------
# equivalence of the four statements


HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"


@dataclass
class TwofoldWitnessReport:
    n: int
    verdicts: dict[str, str]
    witnesses: dict[str, object] = field(default_factory=dict)
    nu: int | None = None

    @property
    def all_hold(self) -> bool:
        return all(v == HOLDS for v in self.verdicts.values())

    @property
    def all_fail(self) -> bool:
        return all(v == FAILS for v in self.verdicts.values())

    def format(self) -> str:
        labels = {
            "a": "C1 00 lies in a 1-perfect code",
            "b": "C4 is splittable",
            "c": "B is splittable",
            "d": "D is splittable",
        }
        lines = [f"STATEMENT {k}: {self.verdicts[k].upper()}  ({labels[k]})" for k in "abcd"]
        if self.nu is not None:
            lines.append(f"components: {self.nu}")
        cyc = self.witnesses.get("b")
        if isinstance(cyc, OddCycle):
            lines.append(cyc.format().rstrip())
        return "\n".join(lines)


def equivalence_report(c1: BinaryCode, threads: int = 1) -> TwofoldWitnessReport:
    """Evaluate the four equivalent statements independently and insist they agree.

    b) bipartition of C4; c), d) bipartition of the B and D multisets
    themselves; a) the lengthened code built from b)'s split, swept.
    """
    p = derive_partition(c1)
    n = p.n
    verdicts: dict[str, str] = {}
    witnesses: dict[str, object] = {}

    res_b = split_code(p.parts[3])
    verdicts["b"] = HOLDS if res_b.ok else FAILS
    witnesses["b"] = (res_b.first, res_b.second) if res_b.ok else res_b.odd_cycle

    for key, builder in (("c", build_B), ("d", build_D)):
        res = bipartition(build_graph(builder(c1, p)))
        if not res.ok:
            verdicts[key] = FAILS
            witnesses[key] = res.odd_cycle
            continue
        witnesses[key] = (res.first, res.second)
        if n + 2 > sweep_budget():
            verdicts[key] = HOLDS
            continue
        good = all(is_1perfect(h, threads) for h in (res.first, res.second))
        verdicts[key] = HOLDS if good else FAILS

    if res_b.ok:
        code = lengthen(c1, (res_b.first, res_b.second), p)
        witnesses["a"] = code
        if n + 2 > sweep_budget():
            verdicts["a"] = UNKNOWN
        else:
            verdicts["a"] = HOLDS if is_1perfect(code, threads) else FAILS
    else:
        verdicts["a"] = FAILS
        witnesses["a"] = res_b.odd_cycle

    known = {v for v in verdicts.values() if v != UNKNOWN}
    if len(known) > 1:
        raise AssertionError(f"statements disagree: {verdicts}")
    return TwofoldWitnessReport(n, dict(sorted(verdicts.items())), witnesses, res_b.nu if res_b.ok else None)


# ---------------------------------------------------------------------------
# code-generating factorization


def factorization_check(
    g1_split: tuple[BinaryCode, BinaryCode], g4_split: tuple[BinaryCode, BinaryCode], n_ext: int, threads: int = 1
) -> Check:
    """``G1' 0 + G1'' 1 + G4' 0 + G4'' 1`` is 1-perfect in H^(n'+1); witness is the code."""
    pieces = (*g1_split, *g4_split)
    if any(piece.length != n_ext for piece in pieces):
        raise PreconditionError(f"all pieces must have length {n_ext}")
    for piece in pieces:
        if not has_min_distance(piece, 3):
            raise PreconditionError("a piece has code distance below 3")
    if g1_split[0].members & g1_split[1].members or g4_split[0].members & g4_split[1].members:
        raise PreconditionError("split pieces intersect")
    code = g1_split[0].append("0").union(g1_split[1].append("1"), g4_split[0].append("0"), g4_split[1].append("1"))
    check = is_1perfect(code, threads)
    return Check(check.ok, code, check.detail)


def factorization_from_code(c1: BinaryCode, threads: int = 1) -> tuple[Partition, Check]:
    """Merge C1 and C2, extend, split G1 and G4 and run :func:`factorization_check`."""
    p = derive_partition(c1)
    ext = extend_partition(merge_parts(p, 0, 1))
    s1, s4 = split_code(ext.parts[0]), split_code(ext.parts[3])
    if not (s1.ok and s4.ok):
        return ext, Check(False, s1.odd_cycle or s4.odd_cycle, "G1 or G4 is unsplittable")
    return ext, factorization_check((s1.first, s1.second), (s4.first, s4.second), ext.n, threads)


def is_perfect_summary(code: BinaryCode) -> Check:
    """Cardinality 2^n/(n+1), distance 3, antipodal and the exhaustive sweep."""
    n = code.length
    if (n + 1) & n or len(code) * (n + 1) != 1 << n:
        return Check(False, None, "cardinality is not 2^n/(n+1)")
    if not has_min_distance(code, 3):
        return Check(False, None, "code distance below 3")
    anti, w = is_antipodal(code)
    if not anti:
        return Check(False, w, "not antipodal")
    return is_1perfect(code)


def translate_to_zero(code: MultisetCode, word: int | None = None) -> MultisetCode:
    """Translate so that ``word`` (default: first word of top multiplicity) becomes 0."""
    if word is None:
        top = max(k for _, k in code.entries())
        word = next(w for w, k in code.entries() if k == top)
    return code.translate(word)

