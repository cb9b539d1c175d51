import pytest

from oracles import ball_coverage, min_distance
from perfcode.core import BinaryCode, MultisetCode, PreconditionError, is_antipodal, word_from_str
from perfcode.generators import diagonal_mds, double_shortened_hamming, hamming
from perfcode.mds import perfect_code_of_length, s_of_m
from perfcode.partition import derive_partition, extend_partition, merge_parts
from perfcode.perfect import (
    BudgetError,
    FAILS,
    HOLDS,
    build_B,
    build_D,
    check_B_properties,
    check_D_properties,
    coverage,
    double_shorten,
    equivalence_report,
    factorization_check,
    factorization_from_code,
    is_1perfect,
    is_perfect_summary,
    is_twofold_1perfect,
    lengthen,
    shorten,
    split_twofold,
)
from perfcode.splitgraph import enumerate_splits, split_code


@pytest.fixture(scope="module")
def c13():
    return double_shortened_hamming(4)


@pytest.fixture(scope="module")
def c5():
    return double_shortened_hamming(3)


def test_coverage_matches_oracle():
    b = MultisetCode.from_codes(hamming(3), BinaryCode.from_strings(["1010101", "0000000"]))
    assert list(coverage(b)) == ball_coverage(b.entries(), 7)


def test_is_1perfect_examples():
    h7 = hamming(3)
    assert is_1perfect(h7)
    trimmed = BinaryCode(7, h7.words[1:])
    res = is_1perfect(trimmed)
    assert not res and res.witness == h7.words[0] == 0
    assert is_1perfect(s_of_m(diagonal_mds(), perfect_code_of_length(1)))


def test_is_twofold_examples():
    h7 = hamming(3)
    assert is_twofold_1perfect(MultisetCode.from_codes(h7, h7))
    assert is_twofold_1perfect(MultisetCode.from_codes(h7, h7.translate(1)))
    assert not is_twofold_1perfect(h7)


def test_budget_error(monkeypatch):
    monkeypatch.setenv("PERFCODE_BUDGET", "5")
    with pytest.raises(BudgetError):
        is_1perfect(hamming(3))
    monkeypatch.setenv("PERFCODE_BUDGET", "many")
    with pytest.raises(BudgetError):
        is_1perfect(hamming(3))


def test_threads_give_same_coverage():
    h = hamming(4)
    assert (coverage(h, threads=4) == coverage(h)).all()


def test_shortening_cardinalities():
    h15 = hamming(4)
    assert len(shorten(h15)) == 1024
    assert len(double_shorten(h15)) == 512
    assert double_shorten(h15) == shorten(shorten(h15))
    c5 = double_shorten(hamming(3))
    assert len(c5) == 4 and min_distance(c5.words) == 3


@pytest.mark.parametrize("m", [3, 4])
def test_lengthen(m):
    c1 = double_shortened_hamming(m)
    p = derive_partition(c1)
    res = split_code(p.parts[3])
    code = lengthen(c1, (res.first, res.second), p)
    assert len(code) == 4 * len(c1) == 2 ** (2 ** m - 1 - m)
    assert is_1perfect(code)
    assert is_perfect_summary(code)
    assert all(w in code for w in c1.words)
    assert set(ball_coverage(code.entries(), code.length)) == {1}


def test_lengthen_rejects_invalid_split(c5):
    p = derive_partition(c5)
    res = split_code(p.parts[3])
    with pytest.raises(PreconditionError):
        lengthen(c5, (res.first, BinaryCode(5, res.second.words[1:])), p)


def test_all_lengthenings_n13_distinct(c13):
    p = derive_partition(c13)
    codes = [lengthen(c13, s, p) for s in enumerate_splits(p.parts[3], cap=16)]
    assert len({c.words for c in codes}) == 16
    assert all(is_1perfect(c) for c in codes)


def test_build_B_n13(c13):
    b = build_B(c13)
    assert b.total == 8 * 512 == 4096
    assert is_twofold_1perfect(b)
    assert is_antipodal(b)[0]
    assert check_B_properties(b, c13)
    assert all(b.multiplicity(w) == 2 for w in c13.words)


def test_build_D_n13(c13):
    d = build_D(c13)
    assert d.is_set() and len(d) == 4096
    assert is_twofold_1perfect(d)
    assert is_antipodal(d)[0]
    assert check_D_properties(d, c13)


def test_B_and_D_agree_on_suffix_01(c13):
    p = derive_partition(c13)
    n = c13.length
    suffix = word_from_str("01") << n
    for t in (build_B(c13, p), build_D(c13, p)):
        sub = {w for w in t if (w >> n) << n == suffix}
        assert sub == set(p.parts[3].append("01").words)


def test_property_checks_catch_corruption(c13):
    b = build_B(c13)
    w = c13.words[3]
    broken = MultisetCode(b.length, tuple((x, 1 if x == w else k) for x, k in b.entries()))
    res = check_B_properties(broken, c13)
    assert not res and res.witness == w


@pytest.mark.parametrize("variant", ["B", "D"])
@pytest.mark.parametrize("m", [3, 4])
def test_split_twofold(m, variant):
    c1 = double_shortened_hamming(m)
    t = build_B(c1) if variant == "B" else build_D(c1)
    s = split_twofold(t, c1, variant)
    assert s.ok and s.verified
    h1, h2 = s.halves
    assert MultisetCode.from_codes(h1, h2) == t
    in_halves = [all(w in h for w in c1.words) for h in (h1, h2)]
    assert in_halves == ([True, True] if variant == "B" else [True, False])


def test_split_twofold_rejects_foreign_multiset(c13):
    with pytest.raises(PreconditionError):
        split_twofold(build_B(c13), c13, "D")


def test_equivalence_report(c13):
    rep = equivalence_report(c13)
    assert rep.all_hold and rep.verdicts == {k: HOLDS for k in "abcd"}
    assert rep.nu == 8
    assert rep.format() == equivalence_report(c13).format()
    assert FAILS not in rep.verdicts.values()


@pytest.mark.parametrize("m", [3, 4])
def test_factorization(m):
    c1 = double_shortened_hamming(m)
    ext, chk = factorization_from_code(c1)
    assert chk and chk.witness.length == c1.length + 2
    s1, s4 = split_code(ext.parts[0]), split_code(ext.parts[3])
    swapped = factorization_check((s1.second, s1.first), (s4.first, s4.second), ext.n)
    assert swapped


def test_factorization_rejects_bad_pieces(c5):
    ext = extend_partition(merge_parts(derive_partition(c5), 0, 1))
    g1 = ext.parts[0]
    with pytest.raises(PreconditionError):
        factorization_check((g1, g1), (g1, g1), ext.n)
