"""
When are two crooked planes disjoint?
=====================================

Two crooked planes are disjoint exactly when their directions can be
signed to be consistently oriented and the vertex displacement lies inside
the cone spanned by four null vectors.
"""

import numpy as np

from crooked import CrookedPlane, cone_A, cone_contains, crooked_disjoint, orient_pair

c1, s1 = np.cosh(1.0), np.sinh(1.0)
P = CrookedPlane([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
u2 = np.array([-c1, 0.0, s1])

#%%
# The directions are ultraparallel, and the identity signs already work.
signs = orient_pair(P.direction, u2)
hull = cone_A(signs.eps1 * P.direction, signs.eps2 * u2)
print("signs:", signs)
print("generators:\n", hull.generators)

#%%
# Moving the second vertex by the generator sum lands strictly inside.
Q = CrookedPlane(hull.generators.sum(axis=0), u2)
print("displacement", Q.vertex, "->", cone_contains(hull, Q.vertex - P.vertex).value)
print("verdict:", crooked_disjoint(P, Q).value)

#%%
# Moving it straight up in time does not.
print("verdict for (0, 0, 3):", crooked_disjoint(P, CrookedPlane([0, 0, 3], u2)).value)

#%%
# Crossing directions always intersect, wherever the vertices are.
for v in ([0, 0, 0], [5, -3, 2]):
    print("crossing at", v, "->", crooked_disjoint(P, CrookedPlane(v, [0, 1, 0])).value)
