"""Distance graphs of codes, two-colourings and odd-cycle witnesses.

A (multi)set of words splits into two distance-3 codes exactly when the
graph joining words at distance 1 or 2 is bipartite.  Repeated words are
expanded into separate vertices joined at distance 0, so the two copies
are forced into different halves.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

from .core import AnyCode, BinaryCode, code_distance, word_to_str, write_code

SPLIT_DISTANCES = frozenset({0, 1, 2})


@dataclass
class DistanceGraph:
    """Vertices are word copies in lexicographic order, ``(word, multiplicity)``."""

    length: int
    vertices: list[tuple[int, int]]
    distances: frozenset[int]
    adjacency: list[list[int]]
    components: list[int]
    coloring: list[int] | None = None

    def __len__(self) -> int:
        return len(self.adjacency)

    def word(self, v: int) -> int:
        return self.vertices[v][0]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    @property
    def component_count(self) -> int:
        return max(self.components) + 1 if self.components else 0

    def component_members(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.component_count)]
        for v, c in enumerate(self.components):
            out[c].append(v)
        return out


@dataclass(frozen=True)
class OddCycle:
    """Closed walk of odd length; consecutive words (and last/first) are adjacent."""

    length_: int
    words: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.words)

    def format(self) -> str:
        lines = [f"ODD_CYCLE {len(self.words)}"]
        lines.extend(word_to_str(w, self.length_) for w in self.words)
        return "\n".join(lines) + "\n"


@dataclass
class SplitResult:
    first: BinaryCode | None = None
    second: BinaryCode | None = None
    nu: int = 0
    odd_cycle: OddCycle | None = None
    graph: DistanceGraph | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.odd_cycle is None

    def __bool__(self) -> bool:
        return self.ok


def _masks(n: int, distances: Iterable[int]) -> list[int]:
    return [sum(1 << i for i in c) for d in sorted(distances) if d > 0 for c in combinations(range(n), d)]


def build_graph(code: AnyCode, distances: Iterable[int] = SPLIT_DISTANCES) -> DistanceGraph:
    """Graph on the (expanded) codewords with edges at the given distances.

    Neighbours are found by probing Hamming balls when that is cheaper than
    comparing all pairs.
    """
    distances = frozenset(distances)
    n = code.length
    vertices: list[tuple[int, int]] = []
    first_copy: dict[int, int] = {}
    for w, k in code.entries():
        first_copy[w] = len(vertices)
        vertices.extend((w, k) for _ in range(k))
    adjacency: list[list[int]] = [[] for _ in vertices]
    probes = sum(comb(n, d) for d in distances if d > 0)
    if probes <= len(first_copy):
        masks = _masks(n, distances)
        for w, k in code.entries():
            for mask in masks:
                j = first_copy.get(w ^ mask)
                if j is None:
                    continue
                kj = vertices[j][1]
                for a in range(first_copy[w], first_copy[w] + k):
                    adjacency[a].extend(range(j, j + kj))
    else:
        entries = list(code.entries())
        for a_idx, (w, k) in enumerate(entries):
            for u, ku in entries[a_idx + 1:]:
                if (w ^ u).bit_count() in distances:
                    for a in range(first_copy[w], first_copy[w] + k):
                        for b in range(first_copy[u], first_copy[u] + ku):
                            adjacency[a].append(b)
                            adjacency[b].append(a)
    if 0 in distances:
        for w, k in code.entries():
            base = first_copy[w]
            for a in range(base, base + k):
                adjacency[a].extend(b for b in range(base, base + k) if b != a)
    for nbrs in adjacency:
        nbrs.sort()
    return DistanceGraph(n, vertices, distances, adjacency, _components(adjacency))


def _components(adjacency: list[list[int]]) -> list[int]:
    comp = [-1] * len(adjacency)
    c = 0
    for s in range(len(adjacency)):
        if comp[s] >= 0:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if comp[v] < 0:
                    comp[v] = c
                    stack.append(v)
        c += 1
    return comp


def _tree_cycle(parent: list[int], depth: list[int], u: int, v: int) -> list[int]:
    left, right = [u], [v]
    a, b = u, v
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return left + right[::-1]


def _bfs_tree(adjacency: list[list[int]], s: int) -> tuple[list[int], list[int]]:
    parent = [-1] * len(adjacency)
    depth = [-1] * len(adjacency)
    parent[s], depth[s] = s, 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                parent[v] = u
                queue.append(v)
    return parent, depth


def shortest_odd_cycle(g: DistanceGraph, component: int | None = None) -> list[int] | None:
    """Vertex indices of a shortest odd cycle, by BFS from every vertex.

    Quadratic in the component size; meant for small witnesses.
    """
    best = None
    for s in range(len(g)):
        if component is not None and g.components[s] != component:
            continue
        parent, depth = _bfs_tree(g.adjacency, s)
        for u in range(len(g)):
            if depth[u] < 0 or (best is not None and 2 * depth[u] + 1 >= len(best)):
                continue
            for v in g.adjacency[u]:
                if depth[v] == depth[u]:
                    cyc = _tree_cycle(parent, depth, u, v)
                    if best is None or len(cyc) < len(best):
                        best = cyc
    return best


def two_color(adjacency: list[list[int]], shortest: bool = False) -> tuple[list[int] | None, list[int] | None]:
    """BFS two-colouring seeded at the smallest uncoloured vertex of each component.

    Returns ``(colors, None)`` or ``(None, odd_cycle_vertices)``.
    """
    size = len(adjacency)
    color = [-1] * size
    parent = [-1] * size
    depth = [0] * size
    for s in range(size):
        if color[s] >= 0:
            continue
        color[s] = 0
        parent[s] = s
        depth[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    queue.append(v)
                elif color[v] == color[u]:
                    cycle = _tree_cycle(parent, depth, u, v)
                    if shortest:
                        g = DistanceGraph(0, [], frozenset(), adjacency, _components(adjacency))
                        cycle = shortest_odd_cycle(g, g.components[u]) or cycle
                    return None, cycle
    return color, None


def bipartition(g: DistanceGraph, shortest: bool = False) -> SplitResult:
    """Two-colour the graph; colour 0 holds each component's smallest vertex.

    On failure the odd cycle is read off the BFS tree; with ``shortest=True``
    a shortest odd cycle of the offending component is returned instead.
    """
    color, cycle = two_color(g.adjacency, shortest)
    if color is None:
        words = tuple(g.word(x) for x in cycle)
        return SplitResult(odd_cycle=OddCycle(g.length, words), graph=g)
    g.coloring = color
    first = BinaryCode(g.length, tuple(g.word(v) for v in range(len(g)) if color[v] == 0))
    second = BinaryCode(g.length, tuple(g.word(v) for v in range(len(g)) if color[v] == 1))
    return SplitResult(first, second, g.component_count, graph=g)


def replay_cycle(cycle: OddCycle, distances: Iterable[int]) -> bool:
    """Odd length at least 3 and every consecutive distance in ``distances``."""
    ds = set(distances)
    ws = cycle.words
    if len(ws) < 3 or len(ws) % 2 == 0:
        return False
    return all((ws[i] ^ ws[(i + 1) % len(ws)]).bit_count() in ds for i in range(len(ws)))


def split_code(code: AnyCode, shortest: bool = False) -> SplitResult:
    """Split into two distance-3 codes, or return an odd-cycle witness."""
    g = build_graph(code, SPLIT_DISTANCES)
    result = bipartition(g, shortest=shortest)
    if result.ok:
        for part in (result.first, result.second):
            d = code_distance(part)
            assert d is None or d >= 3, f"colour class has distance {d}"
    return result


def enumerate_splits(code: AnyCode, cap: int | None = None, graph: DistanceGraph | None = None) -> Iterator[tuple[BinaryCode, BinaryCode]]:
    """All ordered splits, obtained by flipping the colouring per component.

    Flips are enumerated as a binary counter over components ordered by
    their smallest vertex (component 0 is the least significant bit).
    """
    if cap is not None and cap < 1:
        raise ValueError("cap must be at least 1")
    if graph is None or graph.coloring is None:
        result = split_code(code)
        if not result.ok:
            raise ValueError("code is not splittable")
        graph = result.graph
    color = graph.coloring
    comps = graph.components
    nu = graph.component_count
    total = 1 << nu
    limit = total if cap is None else min(cap, total)
    n = graph.length
    for mask in range(limit):
        a, b = [], []
        for v, (w, _) in enumerate(graph.vertices):
            side = color[v] ^ ((mask >> comps[v]) & 1)
            (a if side == 0 else b).append(w)
        yield BinaryCode(n, tuple(a)), BinaryCode(n, tuple(b))


@dataclass(frozen=True)
class ComponentStats:
    nu: int
    min_size: int
    histogram: dict[int, int]

    def format(self) -> str:
        hist = ", ".join(f"{size}:{count}" for size, count in sorted(self.histogram.items()))
        return f"components {self.nu}, smallest {self.min_size}, sizes {{{hist}}}"


def component_stats(g: DistanceGraph) -> ComponentStats:
    sizes = Counter(g.components)
    hist = Counter(sizes.values())
    return ComponentStats(len(sizes), min(sizes.values()) if sizes else 0, dict(sorted(hist.items())))


def write_split(result: SplitResult, base_path) -> tuple[str, str]:
    a, b = f"{base_path}.partA", f"{base_path}.partB"
    write_code(result.first, a, header=[f"split part A, components {result.nu}"])
    if len(result.second):
        write_code(result.second, b, header=[f"split part B, components {result.nu}"])
    else:
        with open(b, "w", encoding="utf-8") as fh:
            fh.write(f"# split part B, components {result.nu}\n")
    return a, b

