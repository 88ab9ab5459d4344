"""Absorption-aware PageRank on a 7-vertex star (hub is vertex 7).

Scores are the row sums of Ld.  A vertex that absorbs strongly ranks low,
and with equal rates every score vanishes.
"""

import numpy as np

from absorption_inverse import absorption_inverse, laplacian, pagerank, quasi_stationary, star_graph


def show(d):
    b = laplacian(star_graph(7, d=d))
    c = pagerank(absorption_inverse(b).Ld)
    print("d      =", d)
    print("scores =", np.round(c.scores, 4))
    print("ranking (most central first):", [int(v) + 1 for v in c.ranking])
    print("quasi-stationary p =", np.round(quasi_stationary(b), 4), "\n")


show([1, 2] + [0.1] * 5)
show([0.2] + [0.1] * 5 + [0.2])
show([0.7] * 7)
