from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dist, hamming_by_definition, min_distance
from perfcode.core import (
    BinaryCode,
    BinaryWord,
    CodeFormatError,
    EmptyCodeError,
    MultisetCode,
    QuaternaryCode,
    code_distance,
    distance_profile,
    format_code,
    hamming_distance,
    is_antipodal,
    lex_key,
    mean_distribution,
    parse_code,
    read_code,
    weight_distribution,
    word_from_str,
    word_to_str,
    write_code,
)
from perfcode.generators import double_shortened_hamming, hamming


def test_word_string_round_trip_and_bit_order():
    assert word_from_str("100") == 1
    assert word_to_str(1, 3) == "100"
    assert BinaryWord.from_str("0110")[2] == 1


def test_hamming_distance_examples():
    assert hamming_distance(BinaryWord.from_str("0000"), BinaryWord.from_str("0000")) == 0
    assert hamming_distance(BinaryWord.from_str("0011"), BinaryWord.from_str("0101")) == 2
    x = BinaryWord.from_str("10110")
    assert hamming_distance(x, x + BinaryWord.ones(5)) == 5


def test_hamming_distance_length_mismatch():
    with pytest.raises(ValueError):
        hamming_distance(BinaryWord.from_str("01"), BinaryWord.from_str("011"))


@settings(max_examples=200)
@given(st.integers(1, 20).flatmap(lambda n: st.tuples(st.just(n), *[st.integers(0, (1 << n) - 1)] * 3)))
def test_hamming_distance_is_a_metric(args):
    n, a, b, c = args
    x, y, z = (BinaryWord(n, v) for v in (a, b, c))
    assert hamming_distance(x, y) == hamming_distance(y, x)
    assert (hamming_distance(x, y) == 0) == (a == b)
    assert hamming_distance(x, z) <= hamming_distance(x, y) + hamming_distance(y, z)


def test_code_distance_examples():
    h7 = hamming(3)
    assert code_distance(h7) == 3
    assert code_distance(BinaryCode.from_strings(["00000", "11111"])) == 5
    c5 = double_shortened_hamming(3)
    assert len(c5) == 4
    assert code_distance(c5) == min_distance(c5.words) == 3


def test_code_distance_undefined_for_small_codes():
    assert code_distance(BinaryCode.from_strings(["0101"])) is None


def test_code_distance_of_repeated_word_is_zero():
    assert code_distance(MultisetCode(3, ((0, 2), (7, 1)))) == 0


def test_binary_code_is_sorted_and_deduplicated():
    c = BinaryCode.from_strings(["110", "001", "110", "000"])
    assert c.strings() == ["000", "001", "110"]
    assert [lex_key(w, 3) for w in c.words] == sorted(lex_key(w, 3) for w in c.words)


def test_weight_distribution_examples():
    h7 = hamming(3)
    wd = weight_distribution(0, h7)
    assert wd[0] == 1
    assert wd[3] == sum(1 for w in hamming_by_definition(3) if bin(w).count("1") == 3) == 7
    assert sum(wd) == 16


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=30), st.integers(0, 255))
def test_weight_distribution_sums_to_total(words, x):
    code = MultisetCode.from_codes(*(BinaryCode(8, (w,)) for w in words))
    wd = weight_distribution(x, code)
    assert sum(wd) == code.total == len(words)
    assert wd == [sum(1 for w in words if dist(w, x) == l) for l in range(9)]


def test_distance_profile_matches_pairwise():
    c = BinaryCode.from_strings(["00000", "11100", "00111", "10101"])
    prof = distance_profile(c)
    for x in range(32):
        assert [int(prof[l, x]) for l in range(6)] == [sum(1 for w in c.words if dist(w, x) == l) for l in range(6)]


def test_mean_distribution_self_and_golden_n13():
    c1 = double_shortened_hamming(4)
    t = mean_distribution(c1, c1)
    # frozen from the all-pairs oracle over 512^2 pairs, divided by 512
    assert t.mean == tuple(Fraction(v) for v in (1, 0, 0, 22, 55, 72, 96, 116, 87, 40, 16, 6, 1, 0))
    assert t.mean[12] == 1 and t.mean[13] == 0


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(0, 63), min_size=1, max_size=20), st.sets(st.integers(0, 63), min_size=1, max_size=20))
def test_mean_distribution_double_counting(a, b):
    ci, cj = BinaryCode(6, tuple(a)), BinaryCode(6, tuple(b))
    tij, tji = mean_distribution(ci, cj), mean_distribution(cj, ci)
    for l in range(7):
        assert len(ci) * tij.mean[l] == len(cj) * tji.mean[l]


def test_mean_distribution_empty_rejected():
    with pytest.raises(ValueError):
        mean_distribution(BinaryCode(3, ()), BinaryCode(3, (0,)))


def test_is_antipodal_examples():
    assert is_antipodal(hamming(3).as_multiset())[0]
    ok, witness = is_antipodal(BinaryCode.from_strings(["000"]))
    assert not ok and word_to_str(witness, 3) == "111"


def test_parse_multiplicity_marker():
    code = parse_code("# comment\n0000000000000111 x2\n")
    assert isinstance(code, MultisetCode)
    assert code.multiplicity(word_from_str("0000000000000111")) == 2


@pytest.mark.parametrize(
    "text",
    ["0101\n011\n", "01a1\n", "0101 x1\n", "0101 y2\n", "0101 x2 extra\n"],
)
def test_parse_errors_report_line(text):
    with pytest.raises(CodeFormatError) as info:
        parse_code(text)
    assert info.value.lineno in (1, 2)


def test_parse_empty_file():
    with pytest.raises(EmptyCodeError):
        parse_code("# nothing here\n")


def test_quaternary_parse_and_order():
    q = parse_code("31\n00\n13\n22\n", quaternary=True)
    assert isinstance(q, QuaternaryCode)
    assert q.strings() == ["00", "13", "22", "31"]


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(0, 2**10 - 1), st.integers(1, 3), min_size=1, max_size=25))
def test_write_read_round_trip(tmp_path_factory, entries):
    code = MultisetCode(10, tuple(entries.items()))
    if code.is_set():
        code = code.support()
    path = tmp_path_factory.mktemp("rt") / "c.code"
    write_code(code, path, header=["round trip"])
    assert read_code(path) == code
    assert format_code(read_code(path), ["round trip"]) == path.read_text()


def test_length_cap_enforced():
    with pytest.raises(ValueError):
        BinaryCode(64, (0,))
    with pytest.raises(CodeFormatError):
        parse_code("0" * 64 + "\n")
