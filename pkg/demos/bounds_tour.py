"""Tour of the geometric bound calculators at sphere reference inputs."""

import numpy as np

from dmaplab import (BoundConstants, croke_constant, eigen_lower_power,
                     eps_cap, geodesic_euclid_bounds, heat_lower_diag,
                     heat_upper, li_yau_upper, r1_value, s1_min,
                     s2_heat_kernel, star_check, weyl_estimate)

consts = BoundConstants()
t0, d, kappa = 0.25, 2, 0.0
area = 4.0 * np.pi

print("heat-kernel sandwich on S^2 at t=%g (diagonal):" % t0)
diag = s2_heat_kernel(t0, 1.0, 2)
print("  flat lower bound   %.6f" % heat_lower_diag(t0, d, kappa))
print("  truncated kernel   %.6f" % diag)
print("  Gaussian upper     %.6f" % heat_upper(t0, 0.0, d, kappa, consts))

print("eigenvalue growth:")
print("  Li-Yau upper bound on lambda_8:   %.4f  (true value 12)"
      % li_yau_upper(8, d, area, kappa))
print("  power lower bound on lambda_6:    %.4f  (true value 6, "
      "unit normalization)" % eigen_lower_power(6, d, kappa, np.pi, 1.0))
print("  Weyl count at lambda=110:         %.1f  (true count 100)"
      % weyl_estimate(110.0, d, area))

print("injectivity-scale quantities at t0=%g:" % t0)
print("  Croke constant c(%d) = %.6f" % (d, croke_constant(d)))
print("  r1       = %.6f" % r1_value(t0, d, kappa))
print("  s1_min   = %.6f" % s1_min(t0, d, kappa, consts))
print("  eps cap  = %.6f" % eps_cap(d))

res = star_check(0.646924, t0, 0.05, d, kappa, consts)
print("radius inequality: lhs %.5f  <->  rhs %.5f  holds=%s"
      % (res.lhs, res.rhs, res.holds))

gb = geodesic_euclid_bounds(1.0, 1.0)
print("chord length for unit arc at unit reach: [%.6f, %.6f], "
      "short arc: %s" % (gb.lo, gb.hi, gb.short_arc))
