from itertools import product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dist, split_graph
from perfcode.core import BinaryCode, MultisetCode, code_distance, parse_code
from perfcode.generators import double_shortened_hamming, hamming
from perfcode.partition import derive_partition
from perfcode.perfect import build_B
from perfcode.splitgraph import (
    OddCycle,
    bipartition,
    build_graph,
    component_stats,
    enumerate_splits,
    replay_cycle,
    split_code,
    two_color,
    write_split,
)


@pytest.fixture(scope="module")
def c4_13():
    return derive_partition(double_shortened_hamming(4)).parts[3]


@pytest.fixture(scope="module")
def c4_5():
    return derive_partition(double_shortened_hamming(3)).parts[3]


def test_c4_n5_every_vertex_has_neighbour(c4_5):
    g = build_graph(c4_5, {1, 2})
    assert len(g) == 8
    assert all(g.adjacency)


def test_antipodal_matching():
    h7 = hamming(3)
    g = build_graph(h7, {7})
    assert all(len(nbrs) == 1 for nbrs in g.adjacency)
    for u, v in g.edges():
        assert g.word(u) ^ g.word(v) == 127


def test_graph_matches_oracle(c4_5):
    g = build_graph(c4_5, {1, 2})
    oracle = split_graph(list(c4_5.words))
    mine = {(g.word(u), g.word(v)) for u, v in g.edges()}
    assert {tuple(sorted(e)) for e in mine} == {tuple(sorted(e)) for e in oracle.edges()}


def test_split_c4_n5(c4_5):
    res = split_code(c4_5)
    assert res.ok
    assert len(res.first) == len(res.second) == 4
    assert res.nu == nx.number_connected_components(split_graph(list(c4_5.words))) == 1


def test_split_c4_n13(c4_13):
    res = split_code(c4_13)
    assert res.ok
    assert len(res.first) == len(res.second) == 512
    assert code_distance(res.first) >= 3 and code_distance(res.second) >= 3


def test_nu_and_components_n13(c4_13):
    res = split_code(c4_13)
    oracle = split_graph(list(c4_13.words))
    assert nx.is_bipartite(oracle)
    # golden values frozen from the networkx oracle
    assert res.nu == nx.number_connected_components(oracle) == 8
    stats = component_stats(res.graph)
    assert stats.min_size == 128 >= 64
    assert stats.histogram == {128: 8}
    assert res.nu >= 3


def test_canonical_orientation(c4_13):
    res = split_code(c4_13)
    g = res.graph
    for members in g.component_members():
        assert g.coloring[min(members)] == 0
    assert c4_13.words[0] in res.first


def test_single_vertex():
    res = split_code(BinaryCode.from_strings(["0101"]))
    assert res.ok and res.nu == 1 and len(res.second) == 0


def test_triangle_witness():
    code = BinaryCode.from_strings(["0000", "1000", "0100"])
    res = split_code(code)
    assert not res.ok
    assert len(res.odd_cycle) == 3
    assert replay_cycle(res.odd_cycle, {1, 2})
    assert res.odd_cycle.format().startswith("ODD_CYCLE 3\n")


def test_repeated_word_copies_are_separated():
    res = split_code(MultisetCode(3, ((0, 2), (7, 1))))
    assert res.ok
    assert 0 in res.first and 0 in res.second


def test_triply_repeated_word_is_odd_cycle():
    res = split_code(MultisetCode(3, ((0, 3),)))
    assert not res.ok and len(res.odd_cycle) == 3


def test_double_words_of_B_are_isolated():
    c1 = double_shortened_hamming(4)
    b = build_B(c1)
    g = build_graph(b, {1, 2})
    for v, (w, k) in enumerate(g.vertices):
        if k == 2:
            assert g.adjacency[v] == []


def test_enumerate_splits_count_n5(c4_5):
    splits = list(enumerate_splits(c4_5))
    assert len(splits) == 2
    assert splits[1] == (splits[0][1], splits[0][0])


def test_enumerate_splits_n13(c4_13):
    splits = list(enumerate_splits(c4_13))
    assert len(splits) == 2 ** 8 == len({a.words for a, _ in splits})
    for a, b in splits[:: 16]:
        assert code_distance(a) >= 3 and code_distance(b) >= 3
    first, last = splits[0], splits[-1]
    assert last == (first[1], first[0])
    assert len(list(enumerate_splits(c4_13, cap=5))) == 5
    with pytest.raises(ValueError):
        list(enumerate_splits(c4_13, cap=0))


def _all_proper_colorings(words, dists):
    g = split_graph(words, dists)
    count = 0
    for colors in product((0, 1), repeat=len(words)):
        col = dict(zip(words, colors))
        if all(col[a] != col[b] for a, b in g.edges()):
            count += 1
    return count


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 63), min_size=1, max_size=10))
def test_bipartite_colorings_count_is_two_to_nu(words):
    code = BinaryCode(6, tuple(words))
    res = split_code(code)
    oracle = split_graph(sorted(words))
    assert res.ok == nx.is_bipartite(oracle)
    if res.ok:
        assert res.nu == nx.number_connected_components(oracle)
        assert _all_proper_colorings(sorted(words), (1, 2)) == 2 ** res.nu
        col = res.graph.coloring
        assert all(col[u] != col[v] for u, v in res.graph.edges())
    else:
        assert replay_cycle(res.odd_cycle, {1, 2})
        assert len(res.odd_cycle) % 2 == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=2, max_size=40, unique=True), st.randoms())
def test_nu_independent_of_insertion_order(words, rnd):
    shuffled = list(words)
    rnd.shuffle(shuffled)
    a = split_code(BinaryCode(8, tuple(words)))
    b = split_code(BinaryCode(8, tuple(shuffled)))
    assert a.ok == b.ok and a.nu == b.nu


def test_shortest_odd_cycle():
    # 9-cycle 0..8 whose closing edge 4-5 also lies on the triangle 4-5-9
    adjacency = [sorted({(v - 1) % 9, (v + 1) % 9}) for v in range(9)] + [[4, 5]]
    adjacency[4].append(9)
    adjacency[5].append(9)
    colors, cycle = two_color(adjacency)
    assert colors is None and len(cycle) == 9
    colors, cycle = two_color(adjacency, shortest=True)
    assert colors is None and sorted(cycle) == [4, 5, 9]


def test_odd_cycle_replay_rejects_bad_cycles():
    assert not replay_cycle(OddCycle(4, (0, 1, 3, 7)), {1, 2})
    assert not replay_cycle(OddCycle(4, (0, 15, 1)), {1, 2})


def test_write_split(tmp_path, c4_5):
    res = split_code(c4_5)
    a, b = write_split(res, tmp_path / "c4")
    assert parse_code(open(a).read()) == res.first
    assert parse_code(open(b).read()) == res.second


def test_distances_in_graph_are_exact(c4_5):
    g = build_graph(c4_5, {2})
    for u, v in g.edges():
        assert dist(g.word(u), g.word(v)) == 2
    bip = bipartition(g)
    assert bip.graph is g
