"""Resonance computations for hyperbolic model spaces and cusp ends."""
from .counting import canonical_product, counting_curve, cusp_pole_lattice, hyperbolic_resonances, theorem_bound, zero_count_disk
from .cusp import AngleSpec, CuspGroup, Mode, enumerate_modes, make_group, min_positive_b, mode_resolvent_kernel
from .dioph import WorstCaseSpec, check_diophantine, lambda_growth, lambda_x, worst_case_angle, worst_case_group
from .hyperbolic import HalfSpacePoint, harmonic_dim, mell_kernel, residue_kernel, resolvent_kernel
from .specfn import PrecisionContext, bessel_i, bessel_ik, bessel_j, bessel_k, gauss_2f1, log_gamma
from .verify import (BoundReport, build_coefficients, verify_bessel_bounds, verify_beta_bounds, verify_boundary_identity,
                     verify_f_bound, verify_resolvent_consistency, verify_wronskian)

__version__ = "0.1.0"
