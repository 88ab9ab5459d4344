"""Spectral bipartition of the 8-path as the rate on vertex 3 grows.

The split moves from the middle {1..4 | 5..8} to {1..3 | 4..8}; the sweep
brackets the rate at which vertex 4 changes sides.
"""

import numpy as np

from absorption_inverse import absorption_inverse, laplacian, locate_partition_changes, partition, path_graph

g = path_graph(8)
for d3 in (1.0, 5.0, 6.0, 10.0):
    d = np.ones(8)
    d[2] = d3
    p = partition(absorption_inverse(laplacian(g), d).Ld)
    g1, g2 = p.groups()
    print(f"d3 = {d3:4.1f}: {[int(v) + 1 for v in g1]} | {[int(v) + 1 for v in g2]}")

values = np.round(np.arange(1.0, 10.0 + 1e-9, 0.1), 10)
for lo, hi in locate_partition_changes(g, 2, values):
    print(f"vertex 4 changes sides for d3 in [{lo:.4f}, {hi:.4f}]")
