"""The four-part equitable partition generated by an optimal distance-3 code.

Given a ``(2^m - 3, 2^(n-m), 3)`` code ``C1`` the parts are ``C2 = C1 + 1``,
``C3`` = words at distance one from ``C1`` (minus ``C2``) and ``C4`` = the rest.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .core import (
    BinaryCode,
    Check,
    DistributionTable,
    PreconditionError,
    all_ones,
    distance_profile,
    format_code,
    has_min_distance,
    lex_keys,
    mean_distribution,
    parse_code,
    word_to_str,
)


def theorem_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    return ((0, 1, n - 1, 0), (1, 0, n - 1, 0), (1, 1, n - 4, 2), (0, 0, n - 1, 1))


def merged_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    return ((1, n - 1, 0), (2, n - 4, 2), (0, n - 1, 1))


def refined_matrix(n: int) -> tuple[tuple[int, ...], ...]:
    return (
        (0, 1, n - 1, 0, 0),
        (1, 0, n - 1, 0, 0),
        (1, 1, n - 4, 1, 1),
        (0, 0, n - 1, 0, 1),
        (0, 0, n - 1, 1, 0),
    )


def extended_matrix(n_ext: int) -> tuple[tuple[int, ...], ...]:
    return ((0, n_ext, 0, 0), (2, 0, n_ext - 2, 0), (0, n_ext - 2, 0, 2), (0, 0, n_ext, 0))


@dataclass(frozen=True)
class ParameterMatrix:
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("parameter matrix must be square")
        if any(sum(r) != self.n for r in rows):
            raise ValueError(f"row sums must equal n={self.n}")

    @property
    def r(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def transposed(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.rows))

    def permuted(self, order: Sequence[int]) -> "ParameterMatrix":
        return ParameterMatrix(self.n, tuple(tuple(self.rows[i][j] for j in order) for i in order))

    def format(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.rows)


@dataclass(frozen=True)
class NonEquitable:
    """Lexicographically first vertex whose neighbour counts disagree with its part."""

    vertex: int
    part: int
    observed: tuple[int, ...]
    expected: tuple[int, ...]
    n: int

    def __str__(self) -> str:
        return (
            f"vertex {word_to_str(self.vertex, self.n)} in part {self.part + 1}: "
            f"neighbours {self.observed}, expected {self.expected}"
        )


@dataclass(frozen=True)
class Partition:
    n: int
    parts: tuple[BinaryCode, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) < 2:
            raise PreconditionError("a partition needs at least two parts")
        seen = np.zeros(1 << self.n, dtype=np.int8)
        for k, p in enumerate(parts):
            if p.length != self.n:
                raise PreconditionError(f"part {k + 1} has length {p.length}, expected {self.n}")
            if len(p) == 0:
                raise PreconditionError(f"part {k + 1} is empty")
            np.add.at(seen, p.array(), 1)
        if (seen > 1).any():
            raise PreconditionError("parts overlap")
        if (seen == 0).any():
            raise PreconditionError("parts do not cover all vertices")

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> BinaryCode:
        return self.parts[i]

    def labels(self) -> np.ndarray:
        lab = np.empty(1 << self.n, dtype=np.int8)
        for k, p in enumerate(self.parts):
            lab[p.array()] = k
        return lab

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)


def _parameters_of(n: int) -> tuple[int, int]:
    """Return (m, expected cardinality) for a length n = 2^m - 3, else raise."""
    m = (n + 3).bit_length() - 1
    if m < 3 or (1 << m) - 3 != n:
        raise PreconditionError(f"length {n} is not of the form 2^m - 3 with m >= 3")
    return m, 1 << (n - m)


def check_optimal_code(c1: BinaryCode) -> int:
    """Validate a (2^m-3, 2^(n-m), 3) code and return m."""
    m, size = _parameters_of(c1.length)
    if len(c1) != size:
        raise PreconditionError(f"cardinality {len(c1)} differs from 2^(n-m) = {size}")
    if not has_min_distance(c1, 3):
        raise PreconditionError("code distance is less than 3")
    return m


def derive_partition(c1: BinaryCode) -> Partition:
    """Build {C1, C2, C3, C4} from an optimal distance-3 code."""
    check_optimal_code(c1)
    n = c1.length
    ones = all_ones(n)
    arr = c1.array()
    in1 = np.zeros(1 << n, dtype=bool)
    in1[arr] = True
    in2 = np.zeros(1 << n, dtype=bool)
    in2[arr ^ ones] = True
    if (in1 & in2).any():
        raise PreconditionError("C1 and C1 + 1 intersect")
    near = np.zeros(1 << n, dtype=bool)
    for i in range(n):
        near[arr ^ (1 << i)] = True
    in3 = near & ~in1 & ~in2
    in4 = ~(in1 | in2 | in3)
    parts = [BinaryCode.from_array(n, np.flatnonzero(mask)) for mask in (in1, in2, in3, in4)]
    return Partition(n, tuple(parts))


def neighbour_counts(p: Partition) -> np.ndarray:
    """Array of shape (2^n, r): neighbours of each vertex in each part."""
    lab = p.labels()
    size = 1 << p.n
    idx = np.arange(size)
    counts = np.zeros((size, len(p)), dtype=np.int32)
    for i in range(p.n):
        counts[idx, lab[idx ^ (1 << i)]] += 1
    return counts


def _first_violation(p: Partition, counts: np.ndarray, reference: np.ndarray) -> NonEquitable | None:
    lab = p.labels()
    bad = np.flatnonzero((counts != reference[lab]).any(axis=1))
    if bad.size == 0:
        return None
    v = int(bad[np.argmin(lex_keys(bad, p.n))])
    part = int(lab[v])
    return NonEquitable(v, part, tuple(int(c) for c in counts[v]), tuple(int(c) for c in reference[part]), p.n)


def compute_parameters(p: Partition) -> ParameterMatrix | NonEquitable:
    """Parameter matrix if the partition is equitable, else the first violating vertex.

    Each part's reference row is taken from its lexicographically smallest vertex.
    """
    counts = neighbour_counts(p)
    reference = np.array([counts[part.words[0]] for part in p.parts])
    bad = _first_violation(p, counts, reference)
    if bad is not None:
        return bad
    return ParameterMatrix(p.n, tuple(tuple(r) for r in reference))


def verify_equitable(p: Partition, expected) -> Check:
    rows = expected.rows if isinstance(expected, ParameterMatrix) else tuple(tuple(r) for r in expected)
    if len(rows) != len(p) or any(len(r) != len(p) for r in rows):
        raise ValueError(f"matrix is {len(rows)}x{len(rows[0]) if rows else 0}, partition has {len(p)} parts")
    counts = neighbour_counts(p)
    bad = _first_violation(p, counts, np.array(rows))
    return Check(bad is None, bad)


def merge_parts(p: Partition, i: int, j: int) -> Partition:
    """Replace parts ``i`` and ``j`` (0-based) by their union, placed first."""
    r = len(p)
    if not (0 <= i < r and 0 <= j < r) or i == j:
        raise IndexError(f"cannot merge parts {i} and {j} of {r}")
    merged = p.parts[i].union(p.parts[j])
    rest = [q for k, q in enumerate(p.parts) if k not in (i, j)]
    return Partition(p.n, (merged, *rest))


def split_refine(p: Partition, c_a: BinaryCode, c_b: BinaryCode) -> Partition:
    """{C1, C2, C3, C', C''} from a split of the fourth part.

    Only the set condition is enforced; whether the pieces are distance-3
    codes shows up when the result is verified.
    """
    if len(p) != 4:
        raise PreconditionError("split_refine expects the four-part partition")
    c4 = p.parts[3]
    if c_a.members & c_b.members:
        raise PreconditionError("the two pieces intersect")
    if c_a.members | c_b.members != c4.members:
        raise PreconditionError("the pieces do not cover the fourth part exactly")
    return Partition(p.n, (*p.parts[:3], c_a, c_b))


def _parity(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr.astype(np.uint64)).astype(np.int64) & 1


def extend_partition(p: Partition) -> Partition:
    """{G1, G2, G3, G4} in H^(n+1) from the merged partition {C12, C3, C4}.

    G1 and G4 are parity / anti-parity extensions of C12 and C4; G2 and G3
    are the vertices at distance one from G1 and from G4.
    """
    if len(p) != 3:
        raise PreconditionError("extend_partition expects the merged three-part partition")
    if not verify_equitable(p, merged_matrix(p.n)):
        raise PreconditionError("input is not equitable with the merged parameters")
    n, ne = p.n, p.n + 1
    c12, c4 = p.parts[0].array(), p.parts[2].array()
    g1 = c12 | (_parity(c12) << n)
    g4 = c4 | ((_parity(c4) ^ 1) << n)

    def ball_shell(arr):
        out = np.zeros(1 << ne, dtype=bool)
        for i in range(ne):
            out[arr ^ (1 << i)] = True
        return np.flatnonzero(out)

    g2, g3 = ball_shell(g1), ball_shell(g4)
    parts = tuple(BinaryCode.from_array(ne, a) for a in (g1, g2, g3, g4))
    return Partition(ne, parts)


# ---------------------------------------------------------------------------
# distance distributions


def distribution_tables(p: Partition) -> dict[tuple[int, int], DistributionTable]:
    """All tables keyed by 1-based (i, j)."""
    profiles = [distance_profile(part) for part in p.parts]
    return {
        (i + 1, j + 1): mean_distribution(ci, p.parts[j], profiles[j])
        for i, ci in enumerate(p.parts)
        for j in range(len(p))
    }


def _at(vec: Sequence[Fraction], l: int) -> Fraction:
    return vec[l] if 0 <= l < len(vec) else Fraction(0)


@dataclass
class RelationsReport:
    n: int
    checked: int
    failures: list[tuple[str, int, int, Fraction, Fraction]]
    tables: dict

    @property
    def ok(self) -> bool:
        return not self.failures

    def format(self) -> str:
        lines = [f"relations checked: {self.checked}", f"failures: {len(self.failures)}"]
        for name, i, l, lhs, rhs in self.failures[:20]:
            lines.append(f"  {name} i={i} l={l}: {lhs} != {rhs}")
        return "\n".join(lines)


def relations_from_tables(n: int, tables: dict, sizes: Sequence[int]) -> RelationsReport:
    """Check the four identities linking the mean distributions of the parts."""
    failures = []
    checked = 0

    def expect(name, i, l, lhs, rhs):
        nonlocal checked
        checked += 1
        if lhs != rhs:
            failures.append((name, i, l, lhs, rhs))

    for i in range(1, 5):
        a1, a2, a3, a4 = (tables[i, j].mean for j in range(1, 5))
        for l in range(n + 1):
            expect("antipode", i, l, a2[l], a1[n - l])
            expect("neighbours", i, l, a3[l], (n - l + 1) * _at(a1, l - 1) + (l + 1) * _at(a1, l + 1) - a2[l])
            expect("complement", i, l, a4[l], comb(n, l) - a1[l] - a2[l] - a3[l])
            for j in range(1, 5):
                expect("symmetry", i, l, sizes[i - 1] * tables[i, j].mean[l], sizes[j - 1] * tables[j, i].mean[l])
    return RelationsReport(n, checked, failures, tables)


def check_distribution_relations(c1: BinaryCode) -> RelationsReport:
    p = derive_partition(c1)
    return relations_from_tables(p.n, distribution_tables(p), p.sizes())


@dataclass
class PropositionValues:
    a11_n: Fraction
    a11_n1: Fraction
    a24_1: Fraction
    a42_1: Fraction
    a44_1: Fraction
    a34_1: Fraction
    c3_min: int
    c3_max: int

    @property
    def ok(self) -> bool:
        return (
            self.a11_n == 0
            and self.a11_n1 == 1
            and self.a24_1 == 0
            and self.a42_1 == 0
            and self.a44_1 == 1
            and self.a34_1 == 2
            and self.c3_min == self.c3_max == 2
        )


def proposition_values(tables: dict, n: int) -> PropositionValues:
    a4_1 = [row[1] for row in tables[3, 4].per_word.values()]
    return PropositionValues(
        a11_n=tables[1, 1].mean[n],
        a11_n1=tables[1, 1].mean[n - 1],
        a24_1=tables[2, 4].mean[1],
        a42_1=tables[4, 2].mean[1],
        a44_1=tables[4, 4].mean[1],
        a34_1=tables[3, 4].mean[1],
        c3_min=min(a4_1),
        c3_max=max(a4_1),
    )


def invariance_check(codes: Sequence[BinaryCode]) -> Check:
    """All 16 mean distributions agree exactly across the given codes.

    The witness is ``(code index, i, j, l, reference value, value)``.
    """
    if not codes:
        raise ValueError("no codes given")
    params = {(c.length, len(c)) for c in codes}
    if len(params) != 1:
        raise ValueError(f"codes have different parameters: {sorted(params)}")
    reference = None
    for k, c in enumerate(codes):
        tables = distribution_tables(derive_partition(c))
        means = {key: t.mean for key, t in tables.items()}
        if reference is None:
            reference = means
            continue
        for key in sorted(means):
            for l, (a, b) in enumerate(zip(reference[key], means[key])):
                if a != b:
                    return Check(False, (k, key[0], key[1], l, a, b))
    return Check(True)


# ---------------------------------------------------------------------------
# serialization


def format_partition(p: Partition) -> str:
    chunks = []
    for k, part in enumerate(p.parts, start=1):
        chunks.append(f"## part {k}\n" + format_code(part))
    return "".join(chunks)


def parse_partition(text: str) -> Partition:
    blocks: list[list[str]] = []
    for line in text.splitlines():
        if line.startswith("## part"):
            blocks.append([])
        elif blocks:
            blocks[-1].append(line)
        elif line.strip() and not line.startswith("#"):
            raise ValueError("partition text must start with a '## part' separator")
    parts = tuple(parse_code("\n".join(b)) for b in blocks)
    if any(not isinstance(p, BinaryCode) for p in parts):
        raise ValueError("partition parts cannot carry multiplicities")
    return Partition(parts[0].length, parts)
