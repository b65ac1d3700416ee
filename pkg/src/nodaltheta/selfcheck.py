"""Invariant battery behind the ``selfcheck`` command.

Each check pits an operation against an independent brute-force oracle or
a second implementation, at parameters small enough for a fresh checkout
to finish in seconds (``fast=True``) or somewhat larger ones.  A failure
means a bug, never bad user input.
"""

from __future__ import annotations

import itertools
import random

from . import dual_graph as dg
from . import multidegree as md
from . import strata as st
from . import graph_curve as gc
from .dual_graph import DualGraph
from .families import (
    connected_multigraphs,
    genus_decorations,
    orientation_multidegree_sets,
    translate,
)


def _brute_components(graph: DualGraph) -> int:
    """Component count by path search, independent of union-find."""
    n = graph.num_vertices
    seen = set()
    count = 0
    for start in range(n):
        if start in seen:
            continue
        count += 1
        stack = [start]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            for u, w in graph.edges:
                if u == v and w not in seen:
                    stack.append(w)
                elif w == v and u not in seen:
                    stack.append(u)
    return count


def _brute_bridges(graph: DualGraph):
    base = _brute_components(graph)
    out = []
    for e in range(graph.num_edges):
        if _brute_components(graph.delete_edges({e})) > base:
            out.append(e)
    return tuple(out)


def _random_graph(rng: random.Random, max_v=5, max_e=7) -> DualGraph:
    n = rng.randrange(1, max_v + 1)
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v))  # keep it connected
    for _ in range(rng.randrange(0, max_e - len(edges) + 1)):
        u = rng.randrange(n)
        v = rng.randrange(n)
        edges.append((min(u, v), max(u, v)))
    genera = tuple(rng.randrange(0, 3) for _ in range(n))
    return DualGraph(genera, tuple(edges))


def _random_curve(rng: random.Random, prime=11, max_v=3, max_e=4):
    while True:
        g = _random_graph(rng, max_v, max_e)
        g = DualGraph((0,) * g.num_vertices, g.edges)
        if g.num_edges == 0:
            continue
        if any(g.valency(v) > prime - 1 for v in range(g.num_vertices)):
            continue
        branch = {}
        used = [set() for _ in range(g.num_vertices)]
        ok = True
        for e, (u, v) in enumerate(g.edges):
            for side, vert in ((1, u), (2, v)):
                free = [(a, 1) for a in range(prime) if (a, 1) not in used[vert]]
                free += [gc.INFINITY] if gc.INFINITY not in used[vert] else []
                if not free:
                    ok = False
                    break
                pt = rng.choice(free)
                used[vert].add(pt)
                branch[(e, side)] = pt
            if not ok:
                break
        if ok:
            return gc.GraphCurve(g, prime, branch)


def _check_genus_identities(rng, n_instances):
    for _ in range(n_instances):
        g = _random_graph(rng)
        subset = frozenset(
            e for e in range(g.num_edges) if rng.random() < 0.5
        )
        if g.arithmetic_genus(range(g.num_vertices)) != g.arithmetic_genus():
            return False, "full-subcurve genus mismatch"
        if g.delete_edges(subset).arithmetic_genus() != g.arithmetic_genus() - len(subset):
            return False, f"genus drop failed on {g}"
        blown, _ = g.blow_up(subset)
        if blown.arithmetic_genus() != g.arithmetic_genus():
            return False, f"blow-up changed the genus on {g}"
        if _brute_components(blown) != _brute_components(g):
            return False, f"blow-up changed the component count on {g}"
    return True, f"{n_instances} random graphs"


def _check_bridges(fast):
    checked = 0
    for g in connected_multigraphs(3 if fast else 4, 4 if fast else 6):
        if g.bridges() != _brute_bridges(g):
            return False, f"bridge mismatch on {g.edges}"
        checked += 1
    return True, f"{checked} graphs vs removal oracle"


def _check_spanning_forest(rng, n_instances):
    for _ in range(n_instances):
        g = _random_graph(rng)
        forest = g.spanning_forest()
        sub = DualGraph(g.genera, tuple(g.edges[e] for e in forest))
        # acyclic: edges = vertices - components; spanning: same components
        if len(forest) != g.num_vertices - _brute_components(sub):
            return False, f"forest has a cycle on {g.edges}"
        if _brute_components(sub) != _brute_components(g):
            return False, f"forest does not span {g.edges}"
        if any(sub.edges[i][0] == sub.edges[i][1] for i in range(sub.num_edges)):
            return False, "forest contains a loop"
    return True, f"{n_instances} random graphs"


def _definition_equivalence_family(fast):
    max_v, max_e, max_genus = (3, 5, 1) if fast else (4, 6, 2)
    for g in connected_multigraphs(max_v, max_e):
        all_d, stable_d = orientation_multidegree_sets(g)
        for dec in genus_decorations(g, max_genus):
            yield dec, all_d, stable_d


def _check_definition_equivalence(fast):
    checked = 0
    for dec, all_d, stable_d in _definition_equivalence_family(fast):
        genera = dec.genera
        if sorted(translate(d, genera) for d in all_d) != md.enumerate_semistable(dec):
            return False, f"semistable sets differ on {dec}"
        if sorted(translate(d, genera) for d in stable_d) != md.enumerate_stable(dec):
            return False, f"stable sets differ on {dec}"
        checked += 1
    return True, f"{checked} decorated graphs"


def _check_single_predicates(fast, rng):
    # spot-check the scalar predicates against the enumerations
    checked = 0
    for dec, all_d, stable_d in _definition_equivalence_family(fast):
        if rng.random() > 0.05:
            continue
        genera = dec.genera
        ss = {translate(d, genera) for d in all_d}
        stable = {translate(d, genera) for d in stable_d}
        box = md.degree_box(dec)
        g1 = dec.arithmetic_genus() - 1
        for d in itertools.product(*(range(lo, hi + 1) for lo, hi in box)):
            if sum(d) != g1:
                continue
            if md.is_semistable(dec, d) != (d in ss):
                return False, f"is_semistable disagrees at {d} on {dec}"
            if md.is_stable(dec, d) != (d in stable):
                return False, f"is_stable disagrees at {d} on {dec}"
            checked += 1
    return True, f"{checked} box points"


def _check_bridge_dichotomy(fast):
    checked = 0
    for g in connected_multigraphs(3 if fast else 4, 5 if fast else 6):
        for dec in genus_decorations(g, 1):
            empty = not md.enumerate_stable(dec)
            if empty != bool(dec.bridges()):
                return False, f"stable classes vs bridges on {dec}"
            checked += 1
    return True, f"{checked} decorated graphs"


def _check_stable_nonnegative(fast):
    # the one exception is the trivial curve: a single genus-0 vertex has
    # the lone stable class (-1,), so the claim needs arithmetic genus >= 1
    checked = 0
    for g in connected_multigraphs(3 if fast else 4, 5 if fast else 6):
        for dec in genus_decorations(g, 1):
            if dec.arithmetic_genus() < 1:
                continue
            for d in md.enumerate_stable(dec):
                if any(x < 0 for x in d):
                    return False, f"negative stable degree {d} on {dec}"
                checked += 1
    return True, f"{checked} stable classes"


def _check_orientation_totals(rng, n_instances):
    for _ in range(n_instances):
        g = _random_graph(rng)
        orientation = tuple(rng.randrange(2) for _ in range(g.num_edges))
        d = md.multidegree_of_orientation(g, orientation)
        if sum(d) != g.arithmetic_genus() - 1:
            return False, f"orientation total off on {g}"
    return True, f"{n_instances} random orientations"


def _check_stabilize(fast):
    checked = 0
    for g in connected_multigraphs(3, 5):
        for dec in genus_decorations(g, 1):
            for d in md.enumerate_semistable(dec):
                result = md.stabilize(dec, d)
                normalized = dec.delete_edges(result.destabilizing_set)
                if not md.is_stable(normalized, result.stable_degree):
                    return False, f"stabilize output not stable on {dec}, {d}"
                if sum(result.stable_degree) != sum(d) - len(result.destabilizing_set):
                    return False, f"stabilize total off on {dec}, {d}"
                if bool(result.destabilizing_set) == md.is_stable(dec, d):
                    return False, f"destabilizing set vs stability on {dec}, {d}"
                checked += 1
    return True, f"{checked} semistable classes"


def _check_irreducibility_predicates(fast):
    checked = 0
    for g in connected_multigraphs(3 if fast else 4, 5 if fast else 6):
        for dec in genus_decorations(g, 1):
            tilde = dec.delete_edges(dec.bridges())
            b = len(md.enumerate_stable(tilde))
            c = len(tilde.connected_components())
            if st.is_picard_irreducible(dec) != (b == 1):
                return False, f"picard predicate vs class count on {dec}"
            if st.is_theta_irreducible(dec) != (c == 1 and b == 1):
                return False, f"theta predicate vs counting on {dec}"
            # the valency shortcuts are sufficient conditions
            if st.picard_valency_criterion(dec) and b != 1:
                return False, f"valency shortcut overclaims on {dec}"
            if st.theta_valency_criterion(dec) and not (c == 1 and b == 1):
                return False, f"theta valency shortcut overclaims on {dec}"
            checked += 1
    return True, f"{checked} decorated graphs, both predicates"


def _check_theta_bookkeeping(fast):
    checked = 0
    for g in connected_multigraphs(3, 5):
        for dec in genus_decorations(g, 1):
            strata, summary = st.theta_strata(dec)
            bridges = dec.delete_edges(dec.bridges())
            b = len(md.enumerate_stable(bridges))
            c = len(bridges.connected_components())
            if summary.component_count != c * b:
                return False, f"component count off on {dec}"
            g_total = dec.arithmetic_genus()
            for s in st.enumerate_picard_strata(dec):
                normalized = dec.delete_edges(s.nodes)
                expected = (g_total - len(s.nodes)
                            + len(normalized.connected_components()) - 1)
                if s.dim != expected:
                    return False, f"stratum dimension off on {dec}"
            checked += 1
    return True, f"{checked} decorated graphs"


def _check_cycle_uniqueness(fast):
    primes = (5, 7) if fast else (5, 7, 11, 13)
    checked = 0
    for p in primes:
        for length in range(2, 5):
            edges = tuple((i, (i + 1) % length) for i in range(length))
            graph = DualGraph((0,) * length, edges)
            branch = {}
            for e in range(length):
                branch[(e, 1)] = (0, 1)
                branch[(e, 2)] = (1, 1)
            curve = gc.GraphCurve(graph, p, branch)
            result = gc.w_count(curve, (0,) * length)
            if result.count != 1:
                return False, f"cycle length {length}, p={p}: count {result.count}"
            checked += 1
    return True, f"{checked} cycle curves, trivial bundle unique"


def _check_h0_bounds_and_blowup(rng, n_instances, prime=11):
    for _ in range(n_instances):
        curve = _random_curve(rng, prime)
        E = curve.graph.num_edges
        degrees = tuple(rng.randrange(-1, 3) for _ in range(curve.graph.num_vertices))
        gluing = tuple(rng.randrange(1, prime) for _ in range(E))
        bundle = gc.GluedLineBundle(degrees, gluing)
        value = gc.h0(curve, bundle)
        upper = gc.normalization_h0(degrees)
        if not (upper - E <= value <= upper):
            return False, f"h0 bounds violated: {value} vs {upper}, {E}"
        subset = tuple(e for e in range(E) if rng.random() < 0.5)
        exc = {e: (rng.randrange(1, prime), rng.randrange(1, prime)) for e in subset}
        blown = gc.h0_blowup(curve, subset, bundle, exc)
        direct = gc.h0(gc.delete_edges(curve, subset),
                       gc.restrict_bundle(curve, bundle, subset))
        if blown != direct:
            return False, f"blow-up h0 {blown} != normalization h0 {direct}"
    return True, f"{n_instances} random curve/bundle pairs"


def _check_torus_invariance(rng, n_instances, prime=11):
    for _ in range(n_instances):
        curve = _random_curve(rng, prime)
        degrees = tuple(rng.randrange(-1, 3) for _ in range(curve.graph.num_vertices))
        gluing = tuple(rng.randrange(1, prime) for _ in range(curve.graph.num_edges))
        bundle = gc.GluedLineBundle(degrees, gluing)
        scalars = tuple(rng.randrange(1, prime) for _ in range(curve.graph.num_vertices))
        if gc.h0(curve, bundle) != gc.h0(curve, gc.torus_rescale(curve, bundle, scalars)):
            return False, "h0 changed under a torus rescale"
    return True, f"{n_instances} random rescalings"


def _check_semistable_h0_identity(fast):
    # on all-rational curves, a semistable multidegree of total g-1 has
    # normalization h0 equal to the number of nodes
    checked = 0
    for g in connected_multigraphs(3, 5):
        for d in md.enumerate_semistable(g):
            if gc.normalization_h0(d) != g.num_edges:
                return False, f"sum(d+1) != nodes for {d} on {g.edges}"
            checked += 1
    return True, f"{checked} semistable classes"


def _check_one_node_cases(rng, attempts=250, prime=13):
    seen: dict[str, int] = {}
    for _ in range(attempts):
        curve = _random_curve(rng, prime)
        edge = rng.randrange(curve.graph.num_edges)
        degrees = tuple(rng.randrange(-1, 3) for _ in range(curve.graph.num_vertices))
        gluing = tuple(rng.randrange(1, prime) for _ in range(curve.graph.num_edges))
        bundle = gc.GluedLineBundle(degrees, gluing)
        # the classifier raises InternalConsistencyError on any scan mismatch
        report = gc.classify_one_node(curve, edge, bundle, r=0)
        seen[report.case] = seen.get(report.case, 0) + 1
    if len(seen) < 3:
        return False, f"random search hit too few cases: {sorted(seen)}"
    return True, f"{attempts} instances over cases {sorted(seen)}"


def _check_abel_images(rng, n_instances, prime=11):
    for _ in range(n_instances):
        curve = _random_curve(rng, prime)
        stable = md.enumerate_stable(curve.graph)
        if not stable:
            continue
        d = rng.choice(stable)
        if any(x < 0 for x in d):
            continue
        points = []
        ok = True
        for v, dv in enumerate(d):
            avail = curve.smooth_points_of(v)
            if len(avail) < dv:
                ok = False
                break
            points.extend((v, pt) for pt in rng.sample(avail, dv))
        if not ok:
            continue
        bundle = gc.abel_image(curve, points)
        if gc.h0(curve, bundle) < 1:
            return False, "Abel image without sections"
        forced = gc.forced_vanishing_nodes(curve, bundle,
                                           range(curve.graph.num_edges))
        if forced.nodes:
            return False, f"stable Abel image with forced vanishing {forced.nodes}"
    return True, f"{n_instances} sampled Abel images"


def run_selfcheck(fast: bool = False):
    """Run every invariant; returns (name, ok, detail) triples."""
    rng = random.Random(20260810)
    small = 100 if fast else 400
    checks = [
        ("genus-identities", lambda: _check_genus_identities(rng, small)),
        ("bridges-vs-removal-oracle", lambda: _check_bridges(fast)),
        ("spanning-forest", lambda: _check_spanning_forest(rng, small)),
        ("definition-equivalence", lambda: _check_definition_equivalence(fast)),
        ("scalar-predicates", lambda: _check_single_predicates(fast, rng)),
        ("stable-empty-iff-bridge", lambda: _check_bridge_dichotomy(fast)),
        ("stable-nonnegative", lambda: _check_stable_nonnegative(fast)),
        ("orientation-totals", lambda: _check_orientation_totals(rng, small)),
        ("stabilization", lambda: _check_stabilize(fast)),
        ("irreducibility-predicates",
         lambda: _check_irreducibility_predicates(fast)),
        ("theta-bookkeeping", lambda: _check_theta_bookkeeping(fast)),
        ("cycle-trivial-bundle-unique", lambda: _check_cycle_uniqueness(fast)),
        ("h0-bounds-and-blowup",
         lambda: _check_h0_bounds_and_blowup(rng, small)),
        ("torus-invariance", lambda: _check_torus_invariance(rng, small)),
        ("semistable-h0-identity", lambda: _check_semistable_h0_identity(fast)),
        ("one-node-case-oracle", lambda: _check_one_node_cases(rng)),
        ("abel-images", lambda: _check_abel_images(rng, 60 if fast else 200)),
    ]
    results = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a raised invariant is a failure, not a crash
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
