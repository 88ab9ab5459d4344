"""Several constructions of the absorption inverse give the same matrix.

Run with ``python3 demos/routes.py``.
"""

import numpy as np

from absorption_inverse import (
    ROUTES, absorption_inverse, check_equivalences, defining_residuals, laplacian,
    random_strongly_connected,
)

rng = np.random.default_rng(7)
g = random_strongly_connected(6, rng)
b = laplacian(g)
print(f"random strongly connected digraph, n={g.n}, balanced={b.balanced}")
print("absorption rates d =", np.round(b.d, 3))

# every algebraic route projects a different generalized inverse onto the same answer
ref = absorption_inverse(b).Ld
for route in ROUTES:
    Ld = absorption_inverse(b, route=route).Ld
    print(f"  {route:12s} max |difference| from bottleneck route: {np.abs(Ld - ref).max():.1e}")

res = defining_residuals(b, ref)
print("defining identities, worst residual:", f"{max(res.values()):.1e}")

# with unequal rates the group inverse and pseudoinverse are different matrices
eq = check_equivalences(b)
print(f"|Ld - L#| = {eq['group']['norm']:.3f}, |Ld - L+| = {eq['pinv']['norm']:.3f}")

# equal rates collapse Ld onto the group inverse
same = laplacian(g.with_absorption(np.full(g.n, 2.0)))
eq = check_equivalences(same)
print(f"equal d: |Ld - L#| = {eq['group']['norm']:.1e}")
