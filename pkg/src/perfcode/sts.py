"""Steiner triple systems and twofold STS read off (twofold) perfect codes."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations

from .core import AnyCode, Check, MultisetCode, PreconditionError, parse_code, word_from_str
from .splitgraph import SplitResult, bipartition, build_graph, replay_cycle

PAPER_EXAMPLE = "twofold_sts15.code"
# two blocks conflict inside one STS when they share a pair (distance 2) or coincide
CONFLICT_DISTANCES = frozenset({0, 2})


@dataclass(frozen=True)
class TripleSystem:
    points: int
    blocks: MultisetCode
    fold: int

    @property
    def block_count(self) -> int:
        return self.blocks.total


def extract_sts(code: AnyCode) -> TripleSystem:
    """Weight-3 codewords of a code containing the zero word.

    The fold is the multiplicity of the zero word (1 for 1-perfect codes,
    2 for twofold ones).
    """
    fold = code.multiplicity(0)
    if fold == 0:
        raise PreconditionError("the zero word is not a codeword")
    blocks = [(w, k) for w, k in code.entries() if w.bit_count() == 3]
    if not blocks:
        raise PreconditionError("no weight-3 codewords")
    return TripleSystem(code.length, MultisetCode(code.length, tuple(blocks)), fold)


def verify_triple_system(t: TripleSystem) -> Check:
    """Every pair of points lies in exactly ``fold`` blocks; witness is the first bad pair (1-based)."""
    v = t.points
    cover = {}
    for w, k in t.blocks.entries():
        if w.bit_count() != 3:
            return Check(False, w, "block without weight 3")
        pts = [i for i in range(v) if (w >> i) & 1]
        for pair in combinations(pts, 2):
            cover[pair] = cover.get(pair, 0) + k
    for pair in combinations(range(v), 2):
        got = cover.get(pair, 0)
        if got != t.fold:
            a, b = pair
            return Check(False, (a + 1, b + 1), f"pair {{{a + 1},{b + 1}}} covered {got} times, expected {t.fold}")
    expected_blocks = t.fold * v * (v - 1) // 6
    if t.block_count != expected_blocks:
        return Check(False, None, f"{t.block_count} blocks, expected {expected_blocks}")
    return Check(True)


def split_triple_system(t: TripleSystem, shortest: bool = True) -> SplitResult:
    """Partition the blocks into two STS, or exhibit an odd cycle of conflicts."""
    return bipartition(build_graph(t.blocks, CONFLICT_DISTANCES), shortest=shortest)


def paper_example() -> MultisetCode:
    text = resources.files("perfcode").joinpath("data").joinpath(PAPER_EXAMPLE).read_text(encoding="utf-8")
    code = parse_code(text)
    assert isinstance(code, MultisetCode)
    return code


@dataclass
class StsReport:
    distinct: int
    total: int
    checks: dict[str, Check]
    split: SplitResult

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def format(self) -> str:
        lines = [f"words: {self.distinct} distinct, total multiplicity {self.total}"]
        for name, c in self.checks.items():
            lines.append(f"{name}: {'OK' if c else 'FAIL'}" + (f"  ({c.detail})" if c.detail else ""))
        if self.split.odd_cycle is not None:
            lines.append(self.split.odd_cycle.format().rstrip())
        return "\n".join(lines)


def _suffix_checks(code: MultisetCode) -> tuple[Check, Check]:
    n = code.length
    top = n - 2
    mixed = (word_from_str("01") << top, word_from_str("10") << top)
    swap = word_from_str("11") << top
    for w, k in code.entries():
        suffix = w >> top
        want = 1 if suffix in (1, 2) else 2
        if k != want:
            prop_a = Check(False, w, f"multiplicity {k}, expected {want}")
            break
    else:
        prop_a = Check(True)
    prop_b = Check(True)
    for w in code:
        if (w & swap) in mixed and (w ^ swap) not in code:
            prop_b = Check(False, w, "partner with swapped 01/10 suffix missing")
            break
    return prop_a, prop_b


def check_paper_example(code: MultisetCode | None = None) -> StsReport:
    """Twofold STS property, suffix properties a) and b), and unsplittability."""
    code = code or paper_example()
    t = TripleSystem(code.length, code, 2)
    prop_a, prop_b = _suffix_checks(code)
    split = split_triple_system(t)
    if split.odd_cycle is None:
        unsplit = Check(False, None, "blocks split into two STS")
    else:
        cyc = split.odd_cycle
        unsplit = Check(replay_cycle(cyc, CONFLICT_DISTANCES), cyc, f"odd cycle of length {len(cyc)}")
    checks = {
        "TWOFOLD STS": verify_triple_system(t),
        "PROPERTY a": prop_a,
        "PROPERTY b": prop_b,
        "UNSPLITTABLE": unsplit,
    }
    return StsReport(len(code), code.total, checks, split)

