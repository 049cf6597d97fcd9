"""csdlab: a characteristic-lattice laboratory for the Chern-Simons-Dirac
system on a periodic 1+1 dimensional domain.

Subpackages:

* :mod:`csdlab.lattice`     grid, field state, initial data
* :mod:`csdlab.solver`      characteristic predictor-corrector evolution
* :mod:`csdlab.spaces`      Sobolev / Besov / space-time norm toolkit
* :mod:`csdlab.probes`      randomized inequality probes
* :mod:`csdlab.oracles`     slow direct-summation reference norms
* :mod:`csdlab.experiments` configs, scenarios, and the ``csd`` CLI
"""

from .lattice import (DataSpec, FieldState, GridSpec, LatticeError, charge,
                      from_physical, load_field, make_grid, make_state, save_field,
                      to_physical)
from .solver import (BlowUpError, DelgadoRun, DelgadoState, NonFiniteFieldError,
                     PicardDivergenceError, PicardResult, SolverError, Trajectory,
                     constraint_residual, evolve, evolve_delgado, exact_phase_evolve,
                     gauge_bound_report, picard_iterate, step, time_reversal,
                     trajectory_distance)
from .spaces import (NormSpec, SpaceTimeBlock, SpectralFunction, besov_half_norm,
                     bracket, bump, dyadic_blocks, forward_transform, inverse_transform,
                     l2_norm, lp_project, make_block, prec_condition, random_sobolev_field,
                     sobolev_norm, y_norm, z_norm)

__version__ = "0.1.0"
