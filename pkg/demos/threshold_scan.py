"""
Where does a face degenerate?
=============================

The degenerate region of one corner is an interval of that corner's
radius (Euclidean) or factor (hyperbolic) with an explicit endpoint.  Here
we compare the closed-form endpoint with a plain sign scan of Q, and then
check the sign pattern of the h-values on both sides.
"""

import numpy as np

from dcstruct import euclid, hyper
from dcstruct.oracle import scan_admissible
from dcstruct.weights import WeightScheme, h_local

# eta_jk = 2 on the edge opposite corner 0, everything else 1
scheme = WeightScheme(np.ones(3), {(1, 2): 2.0, (0, 2): 1.0, (0, 1): 1.0})
face = (0, 1, 2)
eps, eta = scheme.face_local(face)

T = euclid.degenerate_interval_e(scheme, face, 0, 1.0, 1.0)
scan = scan_admissible(scheme, face, "euclidean", 0, [1.0, 1.0, 1.0], 1e-3, 2.0, 4001)
print(f"euclidean threshold {T:.10f}, scan crossing {scan.crossings[0]:.10f}")

# with eta = 2 on every edge the threshold has a closed form
uniform = WeightScheme(np.ones(3), {(1, 2): 2.0, (0, 2): 2.0, (0, 1): 2.0})
T2 = euclid.degenerate_interval_e(uniform, face, 0, 1.0, 1.0)
print(f"eta = 2 everywhere: threshold {T2:.10f}, 6 / (24 + 18 sqrt 2) = "
      f"{6 / (24 + 18 * np.sqrt(2)):.10f}")

for r0 in (0.5 * T, 2.0 * T):
    r = np.array([r0, 1.0, 1.0])
    h = h_local(1.0 / r, eps, eta)
    print(f"  r_0 = {r0:.4f}: Q = {euclid.q_local(r, eps, eta):+.4f}, h = {np.round(h, 4)}")

Th = hyper.degenerate_interval_h(scheme, face, 0, 0.0, 0.0)
scan = scan_admissible(scheme, face, "hyperbolic", 0, [0.0, 0.0, 0.0], -6.0, 3.0, 4001)
print(f"hyperbolic threshold f_0 = {Th:.10f}, scan crossing {scan.crossings[0]:.10f}")
