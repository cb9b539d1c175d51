"""Deterministic constructions of test inputs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .core import BinaryCode, PreconditionError, QuaternaryCode
from .mds import is_double_mds, is_mds, perfect_code_of_length, s_of_m
from .perfect import is_1perfect, shorten_at, sweep_budget

KINDS = ("hamming", "double-shortened-hamming", "linear-mds", "permuted-mds", "phelps-perfect")


def hamming(m: int) -> BinaryCode:
    """Hamming code of length 2^m - 1; coordinate i has parity-check column bin(i)."""
    if not 2 <= m <= 5:
        raise PreconditionError(f"m must lie in 2..5, got {m}")
    n = (1 << m) - 1
    free = [c for c in range(1, n + 1) if c & (c - 1)]
    t = np.arange(1 << len(free), dtype=np.int64)
    words = np.zeros_like(t)
    syndrome = np.zeros_like(t)
    for j, c in enumerate(free):
        bit = (t >> j) & 1
        words |= bit << (c - 1)
        syndrome ^= bit * c
    for b in range(m):
        words |= ((syndrome >> b) & 1) << ((1 << b) - 1)
    return BinaryCode.from_array(n, words)


def double_shortened_hamming(m: int, coords: Sequence[int] | None = None) -> BinaryCode:
    """Shorten the Hamming code at two coordinates (default: the last two)."""
    code = hamming(m)
    n = code.length
    coords = tuple(coords) if coords is not None else (n - 1, n)
    if len(set(coords)) != 2:
        raise PreconditionError("need two distinct coordinates")
    return shorten_at(code, coords)


def linear_mds(m: int, structure: str = "Z4") -> QuaternaryCode:
    """Words whose digit sum is zero in Z4 or in Z2xZ2 (digits read as 2-bit vectors)."""
    if m < 2:
        raise PreconditionError("m must be at least 2")
    if structure not in ("Z4", "Z2xZ2"):
        raise PreconditionError(f"unknown structure {structure!r}")
    tuples = []
    for head in product(range(4), repeat=m - 1):
        if structure == "Z4":
            last = -sum(head) % 4
        else:
            last = 0
            for d in head:
                last ^= d
        tuples.append(head + (last,))
    return QuaternaryCode.from_digits(m, tuples)


def _check_perm(perm: Sequence[int], size: int) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != list(range(size)):
        raise ValueError(f"{perm} is not a permutation of 0..{size - 1}")
    return perm


def permute_symbols(code: QuaternaryCode, perms: Sequence[Sequence[int]]) -> QuaternaryCode:
    """Apply ``perms[i]`` to the digit at position i+1."""
    if len(perms) != code.m:
        raise ValueError(f"need {code.m} permutations, got {len(perms)}")
    perms = [_check_perm(p, 4) for p in perms]
    return QuaternaryCode.from_digits(
        code.m, [tuple(perms[i][d] for i, d in enumerate(t)) for t in code.digit_tuples()]
    )


def permute_coordinates(code: QuaternaryCode, perm: Sequence[int]) -> QuaternaryCode:
    """Position i of the result holds position ``perm[i]`` of the input (0-based)."""
    perm = _check_perm(perm, code.m)
    return QuaternaryCode.from_digits(code.m, [tuple(t[p] for p in perm) for t in code.digit_tuples()])


def permute_binary_coordinates(code: BinaryCode, perm: Sequence[int]) -> BinaryCode:
    """Coordinate i of the result holds coordinate ``perm[i]`` of the input (0-based)."""
    perm = _check_perm(perm, code.length)
    out = [sum(((w >> p) & 1) << i for i, p in enumerate(perm)) for w in code.words]
    return BinaryCode(code.length, tuple(out))


def phelps_perfect(m: int, mds: QuaternaryCode, c: BinaryCode | None = None) -> BinaryCode:
    """The 1-perfect code S(M) of length 4m-1 from an MDS code M in Q^m."""
    if mds.m != m:
        raise PreconditionError(f"M has length {mds.m}, expected {m}")
    chk = is_mds(mds)
    if not chk:
        raise PreconditionError(f"M is not MDS: line {chk.witness}")
    if c is None:
        c = perfect_code_of_length(m - 1)
    code = s_of_m(mds, c)
    if code.length <= sweep_budget():
        assert is_1perfect(code), "S(M) failed the 1-perfect sweep"
    return code


def random_symbol_perms(m: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    out = []
    for _ in range(m):
        p = list(range(4))
        rng.shuffle(p)
        out.append(tuple(p))
    return out


@dataclass(frozen=True)
class GeneratorSpec:
    """What to build; seeds fix every permutation so outputs are reproducible."""

    kind: str
    m: int
    coords: tuple[int, ...] | None = None
    structure: str = "Z4"
    seed: int | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind in ("permuted-mds",) and self.seed is None:
            raise ValueError("permuted-mds needs a seed")

    def describe(self) -> str:
        parts = [f"kind={self.kind}", f"m={self.m}"]
        if self.coords:
            parts.append("coords=" + ",".join(map(str, self.coords)))
        if self.kind in ("linear-mds", "permuted-mds", "phelps-perfect"):
            parts.append(f"structure={self.structure}")
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return " ".join(parts)

    def build(self) -> BinaryCode | QuaternaryCode:
        if self.kind == "hamming":
            return hamming(self.m)
        if self.kind == "double-shortened-hamming":
            return double_shortened_hamming(self.m, self.coords)
        base = linear_mds(self.m, self.structure)
        if self.seed is not None:
            base = permute_symbols(base, random_symbol_perms(self.m, self.seed))
        if self.kind in ("linear-mds", "permuted-mds"):
            assert is_mds(base)
            return base
        code = phelps_perfect(self.m, base)
        if self.coords:
            code = shorten_at(code, self.coords)
        return code


def diagonal_mds() -> QuaternaryCode:
    """{x in Q^2 : x1 = x2}."""
    return QuaternaryCode.from_digits(2, [(d, d) for d in range(4)])


def shifted_diagonal(shift: int) -> QuaternaryCode:
    return QuaternaryCode.from_digits(2, [(d, (d + shift) % 4) for d in range(4)])


def product_double_mds(m: int) -> QuaternaryCode:
    """Splittable double-MDS code: the Z4 linear code and its +1 translate in the last digit."""
    a = linear_mds(m, "Z4")
    b = QuaternaryCode.from_digits(m, [t[:-1] + ((t[-1] + 1) % 4,) for t in a.digit_tuples()])
    out = a.union(b)
    assert is_double_mds(out)
    return out


__all__ = [
    "GeneratorSpec",
    "diagonal_mds",
    "double_shortened_hamming",
    "hamming",
    "linear_mds",
    "permute_binary_coordinates",
    "permute_coordinates",
    "permute_symbols",
    "phelps_perfect",
    "product_double_mds",
    "random_symbol_perms",
    "shifted_diagonal",
]
