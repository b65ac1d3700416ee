"""Stratifying the compactified Picard variety and its theta divisor.

Strata are indexed by a node subset S together with a stable multidegree
on the normalization at S; their dimensions follow the closed formula
g - #S + #components - 1.  The theta divisor shares the index set, with
dimensions given by the effective loci.
"""

from nodaltheta.dual_graph import DualGraph
from nodaltheta.strata import (
    closure_candidate,
    enumerate_picard_strata,
    is_picard_irreducible,
    is_theta_irreducible,
    picard_valency_criterion,
    smooth_locus_strata,
    strata_irreducible_curve,
    strata_poset_dot,
    theta_strata,
)

graph = DualGraph((1, 2), ((0, 1), (0, 1), (0, 1)))
g = graph.arithmetic_genus()
print(f"two components, three nodes, arithmetic genus {g}")
print(f"{'S':<12}{'degree':<12}{'dim':<6}codim")
for s in enumerate_picard_strata(graph):
    print(f"{str(s.nodes):<12}{str(s.degree):<12}{s.dim:<6}{g - s.dim}")

print("\ntop-dimensional strata (the smooth locus):")
for s in smooth_locus_strata(graph):
    print(" ", s)

strata, summary = theta_strata(graph)
print("\ntheta divisor:", summary.component_count, "components "
      f"(= {summary.pieces} separating pieces x {summary.stable_classes} "
      "stable classes), all of dimension", g - 1)

# Closure between strata is reported as a candidate relation only: the
# conditions are necessary (subset containment, componentwise drop with
# the right total, branch-count bounds), not known sufficient.
s0, s1 = strata[0], strata[2]
print("closure candidate", (s0.nodes, s0.degree), "->",
      (s1.nodes, s1.degree), ":", closure_candidate(graph, s0, s1))

# Compact type: a single separating node doubles the component count
# unless a piece has genus 0.
for g1, g2 in ((1, 2), (0, 2)):
    ct = DualGraph((g1, g2), ((0, 1),))
    _, summary = theta_strata(ct)
    print(f"\ncompact type ({g1},{g2}): product count "
          f"{summary.component_count}, effective "
          f"{summary.effective_component_count}")

# Irreducibility: the class count is the ground truth.  The classical
# valency shortcut is sufficient but not necessary: a star of bananas has
# a valency-4 vertex yet a unique stable class.
star = DualGraph((0, 0, 0), ((0, 1), (0, 1), (0, 2), (0, 2)))
print("\nstar of bananas: picard irreducible", is_picard_irreducible(star),
      "| valency shortcut", picard_valency_criterion(star))
print("theta irreducible:", is_theta_irreducible(star))

# Irreducible curves have strata in every degree d: one per node subset.
rose = DualGraph((1,), ((0, 0), (0, 0)))
print("\nirreducible curve with two nodes, degree 5 strata:")
for s in strata_irreducible_curve(rose, 5):
    print(" ", s)

# A DOT rendering of the candidate-closure poset:
print("\n" + strata_poset_dot(graph, enumerate_picard_strata(graph)))
