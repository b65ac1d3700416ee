"""Genus-decorated dual multigraphs of nodal curves.

A nodal curve is encoded by its dual graph: one vertex per irreducible
component, decorated with the geometric genus of that component, and one
edge per node.  A node lying on a single component is a loop.  Everything
here is exact integer combinatorics; graphs are immutable values and all
operations are read-only.

The arithmetic genus of a (possibly disconnected) decorated graph is

    g = sum(genera) + #edges - #vertices + 1

and the same formula applied to an induced subgraph gives the arithmetic
genus of the corresponding subcurve.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


class GraphTooLargeError(ValueError):
    """An exhaustive enumeration would exceed the hard size cap."""


#: Hard cap on vertex count for operations that enumerate vertex subsets.
MAX_SUBSET_VERTICES = 14

#: Hard cap on edge count for operations that enumerate edge subsets.
MAX_SUBSET_EDGES = 20


@dataclass(frozen=True)
class DualGraph:
    """Immutable multigraph with nonnegative integer genus per vertex.

    ``genera[v]`` is the geometric genus of component ``v``; ``edges[e]``
    is an unordered pair ``(u, v)`` of vertex indices, ``u == v`` for a
    loop.  The stored order of the pair fixes the two half-edge sides:
    side 1 attaches to ``edges[e][0]``, side 2 to ``edges[e][1]``.
    """

    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.genera) == 0:
            raise ValueError("empty subcurve: a graph needs at least one vertex")
        for v, g in enumerate(self.genera):
            if not isinstance(g, int) or g < 0:
                raise ValueError(f"vertex {v}: genus must be a nonnegative integer")
        n = len(self.genera)
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {e}: endpoint out of range")

    # -- basic counts -------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def valency(self, v: int, count_loops_twice: bool = True) -> int:
        """Number of half-edges at ``v`` (or incident edges if not twice)."""
        total = 0
        for a, b in self.edges:
            if a == v and b == v:
                total += 2 if count_loops_twice else 1
            elif a == v or b == v:
                total += 1
        return total

    def loops_at(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == v and b == v)

    def nonloop_valency(self, v: int) -> int:
        return sum(1 for a, b in self.edges if (a == v) != (b == v))

    # -- genus --------------------------------------------------------

    def arithmetic_genus(self, vertices=None) -> int:
        """Arithmetic genus of the graph or of an induced subgraph.

        The formula ``sum(genus) + #edges - #vertices + 1`` is used as is;
        it is valid whether or not the (sub)graph is connected.
        """
        if vertices is None:
            return sum(self.genera) + self.num_edges - self.num_vertices + 1
        sub = frozenset(vertices)
        if not sub:
            raise ValueError("empty subcurve")
        if not sub <= frozenset(range(self.num_vertices)):
            raise ValueError("subcurve contains invalid vertex indices")
        genus_sum = sum(self.genera[v] for v in sub)
        inner = sum(1 for u, v in self.edges if u in sub and v in sub)
        return genus_sum + inner - len(sub) + 1

    def induced_edges(self, vertices) -> tuple[int, ...]:
        """Edges with both endpoints in ``vertices`` (loops included)."""
        sub = frozenset(vertices)
        return tuple(e for e, (u, v) in enumerate(self.edges) if u in sub and v in sub)

    def cut_edges(self, vertices) -> tuple[int, ...]:
        """Non-loop edges with exactly one endpoint in ``vertices``."""
        sub = frozenset(vertices)
        return tuple(
            e for e, (u, v) in enumerate(self.edges) if (u in sub) != (v in sub)
        )

    # -- connectivity -------------------------------------------------

    def adjacency(self):
        """Per-vertex list of ``(edge_index, other_endpoint)``, loops twice."""
        adj = [[] for _ in range(self.num_vertices)]
        for e, (u, v) in enumerate(self.edges):
            adj[u].append((e, v))
            adj[v].append((e, u))
        return adj

    def connected_components(self) -> tuple[tuple[int, ...], ...]:
        """Partition of the vertices, each component sorted, ordered by minimum."""
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: dict[int, list[int]] = {}
        for v in range(self.num_vertices):
            groups.setdefault(find(v), []).append(v)
        return tuple(tuple(sorted(g)) for _, g in sorted(groups.items()))

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def bridges(self) -> tuple[int, ...]:
        """Edges whose removal increases the component count (separating nodes).

        Lowlink depth-first search; a tree edge is a bridge unless a back
        edge (including a parallel copy of the tree edge itself) jumps over
        it.  Loops are never bridges.
        """
        disc = [-1] * self.num_vertices
        low = [0] * self.num_vertices
        out: list[int] = []
        adj = self.adjacency()
        counter = itertools.count()
        for root in range(self.num_vertices):
            if disc[root] != -1:
                continue
            # iterative DFS; each stack frame remembers the edge it came by
            stack = [(root, -1, iter(adj[root]))]
            disc[root] = low[root] = next(counter)
            while stack:
                v, in_edge, it = stack[-1]
                advanced = False
                for e, w in it:
                    if e == in_edge or self.is_loop(e):
                        continue
                    if disc[w] == -1:
                        disc[w] = low[w] = next(counter)
                        stack.append((w, e, iter(adj[w])))
                        advanced = True
                        break
                    low[v] = min(low[v], disc[w])
                if not advanced:
                    stack.pop()
                    if stack:
                        u = stack[-1][0]
                        low[u] = min(low[u], low[v])
                        if low[v] > disc[u]:
                            out.append(in_edge)
        return tuple(sorted(out))

    # -- derived graphs -----------------------------------------------

    def delete_edges(self, edge_subset) -> "DualGraph":
        """Normalization at the nodes in ``edge_subset``: drop those edges.

        Vertices and genera are unchanged; the remaining edges keep their
        relative order (new index = rank among kept edges).
        """
        s = frozenset(edge_subset)
        for e in s:
            if not (0 <= e < self.num_edges):
                raise ValueError(f"invalid edge index {e}")
        kept = tuple(self.edges[e] for e in range(self.num_edges) if e not in s)
        return DualGraph(self.genera, kept)

    def blow_up(self, edge_subset) -> tuple["DualGraph", dict[int, int]]:
        """Replace each edge in the subset by a genus-0 vertex with two edges.

        For an edge ``(u, v)`` the new vertex ``w`` gets edges ``(u, w)`` and
        ``(w, v)``; side 1 of the first and side 2 of the second keep the
        original attachment.  A loop becomes two parallel edges to ``w``.
        Arithmetic genus and component count are preserved.

        Returns the new graph and a map ``old edge -> exceptional vertex``.
        """
        s = sorted(frozenset(edge_subset))
        for e in s:
            if not (0 <= e < self.num_edges):
                raise ValueError(f"invalid edge index {e}")
        genera = list(self.genera)
        new_edges = [self.edges[e] for e in range(self.num_edges) if e not in s]
        exceptional: dict[int, int] = {}
        for e in s:
            u, v = self.edges[e]
            w = len(genera)
            genera.append(0)
            exceptional[e] = w
            new_edges.append((u, w))
            new_edges.append((w, v))
        return DualGraph(tuple(genera), tuple(new_edges)), exceptional

    def spanning_forest(self) -> tuple[int, ...]:
        """Lowest-index maximal cycle-free edge set (greedy union-find)."""
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        forest = []
        for e, (u, v) in enumerate(self.edges):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
                forest.append(e)
        return tuple(forest)

    def strip(self, mode: str) -> "DualGraph":
        """Remove loops, and with mode ``loops_and_bridges`` also bridges."""
        if mode not in ("loops_and_bridges", "loops_only"):
            raise ValueError(f"unknown strip mode {mode!r}")
        drop = {e for e in range(self.num_edges) if self.is_loop(e)}
        if mode == "loops_and_bridges":
            drop.update(self.bridges())
        return self.delete_edges(drop)


# -- half-edges -------------------------------------------------------

def half_edges(graph: DualGraph) -> tuple[tuple[int, int], ...]:
    """All half-edges as ``(edge, side)`` pairs, side in {1, 2}."""
    return tuple((e, s) for e in range(graph.num_edges) for s in (1, 2))


def half_edge_vertex(graph: DualGraph, half_edge: tuple[int, int]) -> int:
    """Vertex the half-edge attaches to; side 1 is ``edges[e][0]``."""
    e, side = half_edge
    if side not in (1, 2):
        raise ValueError(f"half-edge side must be 1 or 2, got {side}")
    return graph.edges[e][side - 1]


# -- subcurve enumeration ---------------------------------------------

@lru_cache(maxsize=4096)
def connected_subsets(graph: DualGraph) -> tuple[frozenset, ...]:
    """All nonempty vertex subsets whose induced subgraph is connected.

    Exhaustive over subsets, so the graph must stay within the vertex cap;
    there is deliberately no sampling fallback.
    """
    n = graph.num_vertices
    if n > MAX_SUBSET_VERTICES:
        raise GraphTooLargeError(
            f"{n} vertices exceed the exhaustive subset cap of {MAX_SUBSET_VERTICES}"
        )
    nonloop = [(u, v) for u, v in graph.edges if u != v]
    out = []
    for bits in range(1, 1 << n):
        members = [v for v in range(n) if bits >> v & 1]
        if len(members) == 1:
            out.append(frozenset(members))
            continue
        # union-find restricted to the subset
        idx = {v: i for i, v in enumerate(members)}
        parent = list(range(len(members)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in nonloop:
            if u in idx and v in idx:
                ru, rv = find(idx[u]), find(idx[v])
                if ru != rv:
                    parent[ru] = rv
        if len({find(i) for i in range(len(members))}) == 1:
            out.append(frozenset(members))
    return tuple(out)
