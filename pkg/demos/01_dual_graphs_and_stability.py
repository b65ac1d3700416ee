"""Dual graphs and stability of multidegrees, from scratch.

A nodal curve is encoded by its dual multigraph: one genus-decorated
vertex per component, one edge per node, loops allowed.  This walkthrough
builds a few classics, computes their invariants, and shows the two
equivalent faces of stability: subcurve inequalities and orientations.
"""

from nodaltheta.dual_graph import DualGraph
from nodaltheta.multidegree import (
    destabilizing_nodes,
    enumerate_semistable,
    enumerate_stable,
    find_stable_orientation,
    is_stable,
    multidegree_of_orientation,
    stabilize,
)

# Two smooth components of genus 1 and 2 meeting in three nodes.
theta = DualGraph((1, 2), ((0, 1), (0, 1), (0, 1)))
print("theta-like graph: genus", theta.arithmetic_genus(),
      "bridges", theta.bridges())

# Stable multidegrees all live in total degree g - 1 = 4.
print("stable classes:   ", enumerate_stable(theta))
print("semistable classes:", enumerate_semistable(theta))

# Orientations realize exactly the semistable classes: d_v = g_v - 1 + b_v
# with b_v ending half-edges at v.  A strongly connected orientation
# realizes a stable class.
orientation = find_stable_orientation(theta)
d = multidegree_of_orientation(theta, orientation)
print("stable orientation", orientation, "realizes", d,
      "stable:", is_stable(theta, d))

# A separating node (bridge) kills stability outright...
bridge = DualGraph((1, 2), ((0, 1),))
print("\nbridge graph stable classes:", enumerate_stable(bridge), "(none)")
print("but semistable ones exist:   ", enumerate_semistable(bridge))

# ...and each strictly semistable class slides to the same stable class on
# the normalization: subtract one unit at the ending half of each
# destabilizing node.
for d in enumerate_semistable(bridge):
    result = stabilize(bridge, d)
    print(f"  {d}: destabilizing nodes {result.destabilizing_set},"
          f" stable degree {result.stable_degree} on the normalization")

# The equality subcurve forces the direction of every destabilizing edge,
# so the stable degree never depends on the witness orientation.
theta00 = DualGraph((0, 0), ((0, 1), (0, 1), (0, 1)))
print("\nrational theta graph, class (-1, 2):")
print("  destabilizing nodes:", destabilizing_nodes(theta00, (-1, 2)))
print("  stabilized:", stabilize(theta00, (-1, 2)).stable_degree)
