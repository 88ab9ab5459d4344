"""Directed distances on two grids joined by a bridge vertex.

Raising the absorption rate on part of the left grid pulls distances on that
side apart while the right side stays compact.
"""

import numpy as np

from absorption_inverse import absorption_inverse, bridge_graph, distance_matrix, laplacian

g = bridge_graph()
left, right = list(range(9)), list(range(10, 19))

Ld = absorption_inverse(laplacian(g)).Ld
off = ~np.eye(9, dtype=bool)
within = min(Ld[np.ix_(left, left)][off].min(), Ld[np.ix_(right, right)][off].min())
across = max(Ld[np.ix_(left, right)].max(), Ld[np.ix_(right, left)].max())
print("equal rates: Ld is positive inside each grid and negative across the bridge")
print(f"  smallest within-grid entry {within:.3f}")
print(f"  largest cross-bridge entry {across:.3f}")

d = np.ones(g.n)
d[3:6] = 10.0
R = distance_matrix(absorption_inverse(laplacian(g.with_absorption(d))).Ld).R
print("\nrates 10 on vertices 4-6:")
print(f"  mean distance from vertex 1  {R[0].mean():.3f}")
print(f"  mean distance from vertex 17 {R[16].mean():.3f}")
print(f"  mean within left grid  {R[np.ix_(left, left)].mean():.3f}")
print(f"  mean within right grid {R[np.ix_(right, right)].mean():.3f}")
