"""Stratification of the compactified degree-(g-1) Picard variety and of
its theta divisor, by pairs (node subset, stable multidegree).

A stratum is indexed by a subset ``S`` of the nodes together with a stable
multidegree on the normalization at ``S``; its dimension is
``g - #S + (#components of the normalization) - 1``.  The theta divisor
shares the same index set, with stratum dimensions given by the effective
locus on the normalization.

Closure between strata is only ever reported as a *candidate* relation:
the implemented conditions are necessary, not known to be sufficient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

from .dual_graph import DualGraph, GraphTooLargeError, MAX_SUBSET_EDGES
from .multidegree import enumerate_stable


@dataclass(frozen=True)
class Stratum:
    nodes: tuple[int, ...]    # removed node subset S, sorted edge indices
    degree: tuple[int, ...]   # stable multidegree on the S-normalization
    dim: int
    kind: str                 # "picard" or "theta"


@dataclass(frozen=True)
class ThetaSummary:
    """Component bookkeeping for the theta divisor.

    ``pieces`` counts the connected components after normalizing at every
    separating node (bridges + 1 on a connected graph); ``stable_classes``
    counts the stable multidegrees of that normalization.  The product
    ``component_count`` is the classical count, valid when every piece has
    positive arithmetic genus; ``effective_component_count`` drops the
    genus-0 pieces, whose effective loci are empty.
    """

    pieces: int
    stable_classes: int
    component_count: int
    positive_genus_pieces: int
    effective_component_count: int


def _edge_subsets(graph: DualGraph):
    if graph.num_edges > MAX_SUBSET_EDGES:
        raise GraphTooLargeError(
            f"{graph.num_edges} edges exceed the edge-subset cap of {MAX_SUBSET_EDGES}"
        )
    n = graph.num_edges
    subsets = []
    for bits in range(1 << n):
        subsets.append(tuple(e for e in range(n) if bits >> e & 1))
    subsets.sort(key=lambda s: (len(s), s))
    return subsets


def enumerate_picard_strata(graph: DualGraph) -> list[Stratum]:
    """One stratum per (node subset, stable multidegree on the normalization).

    Subsets whose normalization has no stable multidegree contribute
    nothing.  Output is sorted by (subset size, subset, degree).
    """
    g = graph.arithmetic_genus()
    out = []
    for s in _edge_subsets(graph):
        normalized = graph.delete_edges(s)
        degrees = enumerate_stable(normalized)
        if not degrees:
            continue
        dim = g - len(s) + len(normalized.connected_components()) - 1
        for d in degrees:
            out.append(Stratum(nodes=s, degree=d, dim=dim, kind="picard"))
    return out


def smooth_locus_strata(graph: DualGraph) -> list[Stratum]:
    """The strata indexed by exactly the separating nodes; these are the
    top-dimensional (dimension g) ones, and there are ``stable_classes``
    of them."""
    bridges = graph.bridges()
    g = graph.arithmetic_genus()
    normalized = graph.delete_edges(bridges)
    dim = g - len(bridges) + len(normalized.connected_components()) - 1
    return [
        Stratum(nodes=bridges, degree=d, dim=dim, kind="picard")
        for d in enumerate_stable(normalized)
    ]


def closure_candidate(graph: DualGraph, s1: Stratum, s2: Stratum) -> bool:
    """Necessary conditions for ``s2`` to lie in the closure of ``s1``.

    Checks, for distinct strata: strict containment of node subsets,
    componentwise decrease of the degree, total drop equal to the number
    of added nodes, and a per-component branch-count bound: the degree on
    a component cannot drop by more than the number of branches the added
    nodes have on it.  The exact per-component equality reading of the
    branch count is ambiguous for nodes joining two components, so only
    this weaker, consistent form is enforced.
    """
    n = graph.num_vertices
    for s in (s1, s2):
        if len(s.degree) != n or any(not 0 <= e < graph.num_edges for e in s.nodes):
            raise ValueError("stratum does not belong to this graph")
    if s1 == s2:
        return False
    set1, set2 = frozenset(s1.nodes), frozenset(s2.nodes)
    if not set1 < set2:
        return False
    added = set2 - set1
    drop = [a - b for a, b in zip(s1.degree, s2.degree)]
    if any(x < 0 for x in drop):
        return False
    if sum(drop) != len(added):
        return False
    branches = [0] * n
    for e in added:
        u, v = graph.edges[e]
        branches[u] += 1
        if v != u:
            branches[v] += 1
        else:
            branches[u] += 1
    return all(drop[v] <= branches[v] for v in range(n))


def _theta_dim(normalized: DualGraph) -> int:
    """Dimension of the effective locus of a stable multidegree on the
    normalization: sum of per-component arithmetic genera minus one, or
    -1 when every component has genus 0 (empty locus)."""
    comps = normalized.connected_components()
    genera = [normalized.arithmetic_genus(c) for c in comps]
    if all(g == 0 for g in genera):
        return -1
    return sum(genera) - 1


def theta_strata(graph: DualGraph) -> tuple[list[Stratum], ThetaSummary]:
    """Theta strata (same index set as the Picard strata) plus the
    component-count summary."""
    out = []
    for s in enumerate_picard_strata(graph):
        normalized = graph.delete_edges(s.nodes)
        out.append(
            Stratum(nodes=s.nodes, degree=s.degree, dim=_theta_dim(normalized),
                    kind="theta")
        )
    bridges = graph.bridges()
    pieces_graph = graph.delete_edges(bridges)
    comps = pieces_graph.connected_components()
    pieces = len(comps)
    stable_classes = sum(1 for s in out if s.nodes == bridges)
    positive = sum(1 for c in comps if pieces_graph.arithmetic_genus(c) >= 1)
    return out, ThetaSummary(
        pieces=pieces,
        stable_classes=stable_classes,
        component_count=pieces * stable_classes,
        positive_genus_pieces=positive,
        effective_component_count=positive * stable_classes,
    )


def is_picard_irreducible(graph: DualGraph) -> bool:
    """Whether the compactified Picard variety is irreducible.

    The ground truth from the stratification: irreducible exactly when the
    normalization at the bridges has a single stable multidegree.  The
    valency shortcut (see :func:`picard_valency_criterion`) agrees in one
    direction only; see its docstring for the counterexamples.
    """
    return len(enumerate_stable(graph.delete_edges(graph.bridges()))) == 1


def picard_valency_criterion(graph: DualGraph) -> bool:
    """Valency-based shortcut: after stripping loops and bridges, every
    vertex has valency 0 or 2.

    This is sufficient for irreducibility of the compactified Picard
    variety but, despite the classical claim, not necessary: in a star of
    bananas (one central component meeting each of k >= 2 others in
    exactly 2 nodes) the central vertex has valency 2k yet there is
    exactly one stable multidegree, because each 2-node cut forces one
    unit of degree in both orientations.  Exhaustive enumeration over
    small graphs confirms the gap; the test suite records it.
    """
    stripped = graph.strip("loops_and_bridges")
    return all(
        stripped.valency(v) in (0, 2) for v in range(stripped.num_vertices)
    )


def is_theta_irreducible(graph: DualGraph) -> bool:
    """Whether the theta divisor is irreducible: no separating nodes and a
    single stable class (so exactly one component of dimension g - 1)."""
    _, summary = theta_strata(graph)
    return summary.pieces == 1 and summary.stable_classes == 1


def theta_valency_criterion(graph: DualGraph) -> bool:
    """Valency-based shortcut for theta irreducibility: the loop-stripped
    graph is a point or has every valency 2.  Sufficient but not
    necessary, for the same reason as :func:`picard_valency_criterion`."""
    stripped = graph.strip("loops_only")
    return stripped.num_vertices == 1 or all(
        stripped.valency(v) == 2 for v in range(stripped.num_vertices)
    )


def strata_irreducible_curve(graph: DualGraph, d: int) -> list[Stratum]:
    """Stratification of the compactified degree-``d`` Picard variety of an
    irreducible curve: one stratum per subset of the loops, with degree
    ``d - #S`` on the normalization and dimension ``g - #S``."""
    if graph.num_vertices != 1:
        raise ValueError("irreducible-curve stratification needs a single vertex")
    g = graph.arithmetic_genus()
    out = []
    for s in _edge_subsets(graph):
        out.append(
            Stratum(nodes=s, degree=(d - len(s),), dim=g - len(s), kind="picard")
        )
    return out


# -- emitters -----------------------------------------------------------

def strata_to_json(strata, summary: ThetaSummary | None = None) -> str:
    payload = {"strata": [asdict(s) for s in strata]}
    if summary is not None:
        payload["theta_summary"] = asdict(summary)
    return json.dumps(payload, sort_keys=True, indent=2)


def _label(s: Stratum) -> str:
    nodes = ",".join(str(e) for e in s.nodes)
    deg = ",".join(str(x) for x in s.degree)
    return f"S={{{nodes}}} d=({deg}) dim={s.dim}"


def strata_poset_dot(graph: DualGraph, strata) -> str:
    """GraphViz rendering of the candidate-closure poset."""
    lines = ["digraph strata {"]
    for i, s in enumerate(strata):
        lines.append(f'  n{i} [label="{_label(s)}"];')
    for i, s1 in enumerate(strata):
        for j, s2 in enumerate(strata):
            if i != j and closure_candidate(graph, s1, s2):
                lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
