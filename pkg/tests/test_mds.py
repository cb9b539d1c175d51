import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import count_double_mds_q2, count_double_mds_q3, is_mds_by_lines, min_distance
from perfcode.core import BinaryCode, PreconditionError, QuaternaryCode, qdigits
from perfcode.generators import (
    diagonal_mds,
    hamming,
    linear_mds,
    permute_coordinates,
    permute_symbols,
    product_double_mds,
    shifted_diagonal,
)
from perfcode.mds import (
    LatinConversionError,
    LatinHypercuboid,
    Line,
    complete_latin,
    from_latin,
    is_double_mds,
    is_mds,
    is_splittable,
    perfect_code_of_length,
    representative,
    s_of_m,
    s_of_m_multiset,
    s_of_m_twofold,
    search_double_mds,
    split_double_mds,
    theorem7_pipeline,
    to_latin,
)
from perfcode.perfect import is_1perfect, is_twofold_1perfect
from perfcode.splitgraph import replay_cycle

# found by the Q^3 search: double-MDS, and its distance-1 graph has an odd cycle
UNSPLITTABLE_Q3 = (
    "000 001 010 011 022 023 032 033 100 101 112 113 120 121 132 133 "
    "202 203 210 212 221 223 230 231 302 303 311 313 320 322 330 331"
).split()


def _words(code: QuaternaryCode) -> set:
    return set(code.digit_tuples())


def _lift(m0: QuaternaryCode, m1: QuaternaryCode) -> QuaternaryCode:
    return m0.append_digit(0).union(m0.append_digit(1), m1.append_digit(2), m1.append_digit(3))


@pytest.fixture(scope="module")
def unsplittable():
    return QuaternaryCode.from_strings(UNSPLITTABLE_Q3)


def test_is_mds_examples():
    assert is_mds(diagonal_mds())
    full = QuaternaryCode.from_digits(2, list(product(range(4), repeat=2)))
    res = is_mds(full)
    assert not res and isinstance(res.witness, Line) and res.witness.count == 4
    assert is_mds(linear_mds(4))
    assert is_mds_by_lines(_words(linear_mds(4)), 4)
    assert not is_mds_by_lines(_words(full), 2)


def test_line_witness_format():
    res = is_mds(QuaternaryCode.from_strings(["00", "01"]))
    # lines along position 1 are scanned first; x2 = 2 meets no codeword
    assert str(res.witness) == "*2 (0 codewords)"


@pytest.mark.parametrize("m", [2, 3])
def test_double_mds_examples(m):
    a = linear_mds(m)
    d = product_double_mds(m)
    assert is_double_mds(d) and is_mds_by_lines(_words(d), m, 2)
    assert is_double_mds(d.complement())
    assert not is_double_mds(a)
    assert is_double_mds(_lift(d, d.complement()))


def test_split_diagonals():
    union = diagonal_mds().union(shifted_diagonal(1))
    res = split_double_mds(union)
    assert res.ok
    assert {res.first, res.second} == {diagonal_mds(), shifted_diagonal(1)}


def test_split_requires_double_mds():
    with pytest.raises(PreconditionError):
        split_double_mds(diagonal_mds())


def test_unsplittable_q3(unsplittable):
    assert is_double_mds(unsplittable)
    assert is_mds_by_lines(_words(unsplittable), 3, 2)
    res = split_double_mds(unsplittable, shortest=True)
    assert not res.ok
    cyc = res.odd_cycle
    assert len(cyc) % 2 == 1
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert sum(x != y for x, y in zip(qdigits(a, 3), qdigits(b, 3))) == 1
    assert res.cycle_strings()[0] in UNSPLITTABLE_Q3


def test_search_q2_matches_oracle():
    golden = count_double_mds_q2()
    assert golden == 90
    found = search_double_mds(2)
    assert found.complete and found.count == golden
    assert found.splittable == found.complement_splittable == golden
    assert found.hits == []
    reduced = search_double_mds(2, symmetry=True)
    assert reduced.complete and reduced.count * 6 == golden


def test_search_q3_symmetric_complete():
    golden = count_double_mds_q3()
    found = search_double_mds(3, symmetry=True, budget=10**8)
    assert found.complete
    # fixing the first line to {0,1} keeps one code from each orbit of size 6
    assert found.count * 6 == golden == 51678
    assert found.splittable < found.count
    assert found.hits == []


def test_search_budget_partial_and_log(tmp_path):
    log = tmp_path / "hits.jsonl"
    found = search_double_mds(3, predicate=lambda c: not is_splittable(c), budget=20_000, log_path=log, max_hits=3)
    assert not found.complete
    assert "PARTIAL" in found.format()
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert len(records) == len(found.hits) <= 3
    for rec in records:
        assert rec["splittable"] is False and len(rec["witness"]) % 2 == 1
        assert is_double_mds(QuaternaryCode.from_strings(rec["words"]))


def test_search_rejects_bad_arguments():
    with pytest.raises(ValueError):
        search_double_mds(4)
    with pytest.raises(ValueError):
        search_double_mds(2, budget=0)


def test_s_of_m_m2_diagonal():
    code = s_of_m(diagonal_mds(), perfect_code_of_length(1))
    assert code.length == 7 and len(code) == 16
    assert 0 in code and 127 in code
    assert is_1perfect(code)
    assert min_distance(code.words) == 3


def test_s_of_m_m4_linear():
    code = s_of_m(linear_mds(4), hamming(2))
    assert len(code) == 2048 == 4**3 * 2**4 * 2
    assert is_1perfect(code)


def test_s_of_m_rejects_bad_tail():
    with pytest.raises(PreconditionError):
        s_of_m(linear_mds(3), BinaryCode(2, (0,)))
    with pytest.raises(PreconditionError):
        s_of_m(linear_mds(3), BinaryCode(1, (0,)))


def test_representative_lies_in_s_of_m():
    m = 4
    tail = hamming(2)
    code = linear_mds(m)
    s = s_of_m(code, tail)
    for mu in code.digit_tuples():
        for c in tail.words:
            assert representative(mu, c, m) in s


def _block_perm(perm, m):
    out = []
    for i in range(4 * m - 1):
        blk, r = divmod(i, 4)
        out.append(4 * perm[blk] + r if blk < m - 1 else i)
    return out


@settings(max_examples=6, deadline=None)
@given(st.permutations(range(3)), st.integers(0, 10**6))
def test_s_of_m_block_symmetry(perm, seed):
    rng = np.random.default_rng(seed)
    symbol_perms = [tuple(int(v) for v in rng.permutation(4)) for _ in range(4)]
    code = permute_symbols(linear_mds(4), symbol_perms)
    tail = hamming(2)
    full = list(perm) + [3]
    direct = s_of_m(permute_coordinates(code, full), tail)
    bits = _block_perm(full, 4)
    moved = {sum(((w >> b) & 1) << i for i, b in enumerate(bits)) for w in s_of_m(code, tail).words}
    assert set(direct.words) == moved


def test_multiset_cardinality_counts_generation():
    d = product_double_mds(2)
    ms = s_of_m_multiset(d, perfect_code_of_length(1))
    assert ms.total == len(d) * 4
    assert is_twofold_1perfect(ms)


def test_twofold_splittable_m2():
    d = diagonal_mds().union(shifted_diagonal(1))
    res = s_of_m_twofold(d, perfect_code_of_length(1))
    assert res.twofold and res.m_split.ok and res.s_splittable
    assert res.consistent
    h1, h2 = res.halves
    assert is_1perfect(h1) and is_1perfect(h2)


def test_twofold_unsplittable_transports_cycle(unsplittable):
    big = _lift(unsplittable.complement(), unsplittable)
    res = s_of_m_twofold(big, hamming(2))
    assert res.twofold
    assert not res.m_split.ok and not res.s_splittable
    cyc = res.transported_cycle
    assert len(cyc) == len(res.m_split.odd_cycle) and len(cyc) % 2 == 1
    assert replay_cycle(cyc, {1, 2})
    assert res.consistent


def test_latin_round_trip_mds():
    code = linear_mds(3)
    latin = to_latin(code)
    assert latin.shape == (4, 4)
    assert from_latin(latin) == code


def test_z4_table_is_latin():
    table = np.array([[(i + j) % 4 for j in range(4)] for i in range(4)])
    latin = LatinHypercuboid(table)
    code = from_latin(latin)
    assert is_mds(code) and to_latin(code).cells.tolist() == table.tolist()


def test_latin_cuboid_from_double_mds_completes():
    d = product_double_mds(3)
    cub = to_latin(d)
    assert cub.shape == (4, 4, 2)
    assert from_latin(cub) == d
    full = complete_latin(cub)
    assert full is not None and full.p == 4
    code = from_latin(full)
    assert code.m == 4 and is_mds(code)


def test_latin_rejects_unsplittable(unsplittable):
    with pytest.raises(LatinConversionError) as info:
        to_latin(unsplittable)
    assert len(info.value.witness) % 2 == 1


def test_latin_rejects_repeated_symbol():
    with pytest.raises(LatinConversionError):
        LatinHypercuboid(np.zeros((4, 4), dtype=int))
    with pytest.raises(LatinConversionError):
        to_latin(QuaternaryCode.from_strings(["00", "01"]))


def test_pipeline_control_run():
    c1, report = theorem7_pipeline(product_double_mds(3), 4)
    assert report.ok
    assert len(c1) == 512 and c1.length == 13
    assert not report.hypothesis_met
    assert "NOT met" in report.format()
    assert report.equivalence.all_hold


def test_pipeline_preconditions(unsplittable):
    with pytest.raises(PreconditionError):
        theorem7_pipeline(product_double_mds(2), 4)
    with pytest.raises(PreconditionError):
        theorem7_pipeline(linear_mds(3), 4)
    if not is_splittable(unsplittable.complement()):
        with pytest.raises(PreconditionError):
            theorem7_pipeline(unsplittable.complement(), 4)
