"""
Checking verdicts by brute force
================================

The oracle meshes both planes inside a ball and intersects triangles. It
cannot prove disjointness of unbounded surfaces, but it can find witnesses
and it agrees with the exact predicate on random pairs.
"""

import numpy as np

from crooked import CrookedPlane, Verdict, crooked_disjoint, crooked_intersect_oracle, unit_spacelike

c1, s1 = np.cosh(1.0), np.sinh(1.0)
P = CrookedPlane([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
Q = CrookedPlane([0.0, 0.0, 3.0], [-c1, 0.0, s1])

w = crooked_intersect_oracle(P, Q, radius=20.0, resolution=64)
print("witness", w.point, w.piece_a.piece.value, w.piece_b.piece.value, "separation", w.separation)

#%%
# A small random comparison. A missing witness only means "nothing inside
# the ball": intersections of nearly parallel wings can lie far out, and a
# bigger ball finds them.
rng = np.random.default_rng(0)
agree = 0
for _ in range(20):
    A = CrookedPlane(rng.uniform(-2, 2, 3), unit_spacelike(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1)))
    B = CrookedPlane(rng.uniform(-2, 2, 3), unit_spacelike(rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1)))
    v = crooked_disjoint(A, B)
    hit = crooked_intersect_oracle(A, B, 20.0, 48)
    if (v is Verdict.INTERSECT) == (hit is not None):
        agree += 1
        continue
    far = crooked_intersect_oracle(A, B, 50.0, 256)
    print("missed inside radius 20; radius 50 finds", far.point,
          "at distance", round(float(np.linalg.norm(far.point - A.vertex)), 1))
print(f"{agree} / 20 verdicts confirmed inside radius 20")
