"""Shared brute-force oracles and small builders for the test suite.

The oracles here deliberately avoid the library's algorithms: component
counts by path search, bridges by per-edge removal, stability by scanning
every subset (not only connected ones), matrix rank by minor expansion.
Expected values frozen in the tests were computed with these.
"""

from __future__ import annotations

import itertools
import random

import pytest

from nodaltheta.dual_graph import DualGraph
from nodaltheta.graph_curve import INFINITY, GraphCurve


def brute_component_count(graph: DualGraph) -> int:
    seen = set()
    count = 0
    for start in range(graph.num_vertices):
        if start in seen:
            continue
        count += 1
        frontier = [start]
        while frontier:
            v = frontier.pop()
            if v in seen:
                continue
            seen.add(v)
            for a, b in graph.edges:
                if a == v and b not in seen:
                    frontier.append(b)
                elif b == v and a not in seen:
                    frontier.append(a)
    return count


def brute_bridges(graph: DualGraph) -> tuple:
    base = brute_component_count(graph)
    return tuple(
        e for e in range(graph.num_edges)
        if brute_component_count(graph.delete_edges({e})) > base
    )


def brute_is_semistable(graph: DualGraph, d) -> bool:
    """Subcurve scan over ALL nonempty subsets, connected or not."""
    if sum(d) != graph.arithmetic_genus() - 1:
        return False
    n = graph.num_vertices
    for bits in range(1, 1 << n):
        sub = [v for v in range(n) if bits >> v & 1]
        if sum(d[v] for v in sub) < graph.arithmetic_genus(sub) - 1:
            return False
    return True


def brute_is_stable(graph: DualGraph, d) -> bool:
    """Strict scan over all proper nonempty subsets of each component,
    with per-component totals; matches the disconnected convention."""
    comps = [frozenset(c) for c in graph.connected_components()]
    for comp in comps:
        if sum(d[v] for v in comp) != graph.arithmetic_genus(comp) - 1:
            return False
    n = graph.num_vertices
    for bits in range(1, 1 << n):
        sub = frozenset(v for v in range(n) if bits >> v & 1)
        if any(sub < comp for comp in comps):
            if sum(d[v] for v in sub) < graph.arithmetic_genus(sub):
                return False
        elif len(comps) == 1 and len(sub) < n:
            if sum(d[v] for v in sub) < graph.arithmetic_genus(sub):
                return False
    return True


def brute_rank(rows, p: int) -> int:
    """Rank over F_p by scanning square minors (tiny matrices only)."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])

    def det(idx_r, idx_c):
        k = len(idx_r)
        if k == 1:
            return rows[idx_r[0]][idx_c[0]] % p
        total = 0
        sign = 1
        for j, c in enumerate(idx_c):
            sub = det(idx_r[1:], idx_c[:j] + idx_c[j + 1:])
            total = (total + sign * rows[idx_r[0]][c] * sub) % p
            sign = -sign
        return total % p

    for k in range(min(m, n), 0, -1):
        for idx_r in itertools.combinations(range(m), k):
            for idx_c in itertools.combinations(range(n), k):
                if det(idx_r, idx_c) != 0:
                    return k
    return 0


# -- curve builders -----------------------------------------------------

def cycle_curve(length: int, prime: int) -> GraphCurve:
    edges = tuple((i, (i + 1) % length) for i in range(length))
    graph = DualGraph((0,) * length, edges)
    branch = {}
    for e in range(length):
        branch[(e, 1)] = (0, 1)
        branch[(e, 2)] = (1, 1)
    return GraphCurve(graph, prime, branch)


def theta_curve(prime: int) -> GraphCurve:
    graph = DualGraph((0, 0), ((0, 1), (0, 1), (0, 1)))
    branch = {(0, 1): (0, 1), (0, 2): (0, 1),
              (1, 1): (1, 1), (1, 2): (1, 1),
              (2, 1): (2, 1), (2, 2): (2, 1)}
    return GraphCurve(graph, prime, branch)


def two_cycle_curve(prime: int) -> GraphCurve:
    graph = DualGraph((0, 0), ((0, 1), (0, 1)))
    branch = {(0, 1): (0, 1), (0, 2): (0, 1),
              (1, 1): INFINITY, (1, 2): INFINITY}
    return GraphCurve(graph, prime, branch)


def random_rational_curve(rng: random.Random, prime=11, max_v=3, max_e=4) -> GraphCurve:
    """Random small connected all-rational curve with distinct branch points."""
    while True:
        n = rng.randrange(1, max_v + 1)
        edges = [(rng.randrange(v), v) for v in range(1, n)]
        for _ in range(rng.randrange(0 if edges else 1, max_e - len(edges) + 1)):
            u, v = rng.randrange(n), rng.randrange(n)
            edges.append((min(u, v), max(u, v)))
        if not edges:
            continue
        graph = DualGraph((0,) * n, tuple(edges))
        if any(graph.valency(v) > prime for v in range(n)):
            continue
        branch = {}
        used = [set() for _ in range(n)]
        ok = True
        for e, (u, v) in enumerate(graph.edges):
            for side, vert in ((1, u), (2, v)):
                free = [(a, 1) for a in range(prime) if (a, 1) not in used[vert]]
                if INFINITY not in used[vert]:
                    free.append(INFINITY)
                if not free:
                    ok = False
                    break
                pt = rng.choice(free)
                used[vert].add(pt)
                branch[(e, side)] = pt
            if not ok:
                break
        if ok:
            return GraphCurve(graph, prime, branch)


@pytest.fixture
def rng():
    return random.Random(987654321)
