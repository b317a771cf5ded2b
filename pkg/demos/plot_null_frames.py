"""
Null frames of spacelike vectors
================================

Every unit spacelike vector u in Minkowski 3-space has two null companions
u^- and u^+ with u x u^+ = u^+ and u x u^- = -u^-.
"""

import numpy as np

from crooked import lorentz_cross, lorentz_dot, null_frame, unit_spacelike

#%%
# The frame of e1 is built from the two null lines of the plane x = 0.
f = null_frame([1.0, 0.0, 0.0])
print("u^- =", f.minus)
print("u^+ =", f.plus)
print("u^- . u^+ =", lorentz_dot(f.minus, f.plus))

#%%
# Boosting u keeps the identities exact up to rounding, even far out on
# the hyperboloid.
for a in (0.0, 1.0, 3.0):
    u = unit_spacelike(0.7, a)
    u, m, p = null_frame(u)
    defect = max(np.abs(lorentz_cross(u, p) - p).max(), np.abs(lorentz_cross(m, p) - u).max())
    print(f"rapidity {a}: third coordinate {m[2]:.4f}, cross defect {defect:.1e}")

#%%
# Negating u swaps the two null vectors.
g = null_frame(-f.u)
print("frame of -e1 swaps:", np.allclose(g.minus, f.plus), np.allclose(g.plus, f.minus))
