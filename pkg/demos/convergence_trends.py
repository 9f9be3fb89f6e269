"""Convergence studies over sample size: spectral pipeline errors and
tangent-fit angles, printed with measured slopes next to theoretical
rate exponents.

Runs the full default grids (about two and a half minutes).  Pass
--quick for a reduced grid with 3 seeds.
"""

import sys

from dmaplab import (ExperimentConfig, convergence_study,
                     format_convergence, format_tangent_study,
                     tangent_study)

if "--quick" in sys.argv[1:]:
    cfg = ExperimentConfig(n_grid=(250, 500, 1000), seeds=(1, 2, 3),
                           ntilde_grid=(250, 500, 1000))
else:
    cfg = ExperimentConfig()

print("spectral pipeline over n = %s, seeds %s" % (cfg.n_grid, cfg.seeds))
print(format_convergence(convergence_study(cfg)))
print()
print("tangent fits on the oracle embedding over ntilde = %s"
      % (cfg.ntilde_grid,))
print(format_tangent_study(tangent_study(cfg)))
