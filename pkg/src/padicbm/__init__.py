"""Brownian motion on Q_p^d: closed-form laws and exact-increment Monte Carlo."""

from .core import (Ball, PadicScalar, PadicVector, Sphere, add, from_int,
                   in_ball, in_sphere, negate, parse_scalar, render_scalar,
                   zero, zero_vector)
from .laws import (ProcessParams, RadialLaw, SeriesConvergenceError,
                   SeriesTolerance, adaptive_radial_law, ball_measure,
                   ball_probability, character_ball_integral,
                   conditional_ball_probability, conditional_profile,
                   conditional_uniformity_constant, density, density_at_level,
                   density_at_origin, exit_rate_factor, radial_law,
                   sphere_measure, survival_maxnorm, survival_product,
                   tail_sum)
from .sampling import (TAIL_HIGH, TAIL_LOW, ZERO_LEVEL, RngStream,
                       sample_increment, sample_radius, uniform_ball_scalar,
                       uniform_sphere_vector)
from .simulate import (CondEstimate, ExitEstimate, PathSample,
                       estimate_conditional, estimate_exit_survival,
                       marginal_radial_histogram, simulate_maxnorm_path,
                       simulate_product_path)
from .stats import (TestVerdict, binomial_ci, chi2_critical_999,
                    chi_square_gof, compare_to_closed_form)

__version__ = "0.1.0"

__all__ = [
    "Ball", "PadicScalar", "PadicVector", "Sphere", "add", "from_int",
    "in_ball", "in_sphere", "negate", "parse_scalar", "render_scalar",
    "zero", "zero_vector",
    "ProcessParams", "RadialLaw", "SeriesConvergenceError", "SeriesTolerance",
    "adaptive_radial_law", "ball_measure", "ball_probability",
    "character_ball_integral", "conditional_ball_probability",
    "conditional_profile", "conditional_uniformity_constant", "density",
    "density_at_level", "density_at_origin", "exit_rate_factor", "radial_law",
    "sphere_measure", "survival_maxnorm", "survival_product", "tail_sum",
    "TAIL_HIGH", "TAIL_LOW", "ZERO_LEVEL", "RngStream", "sample_increment",
    "sample_radius", "uniform_ball_scalar", "uniform_sphere_vector",
    "CondEstimate", "ExitEstimate", "PathSample", "estimate_conditional",
    "estimate_exit_survival", "marginal_radial_histogram",
    "simulate_maxnorm_path", "simulate_product_path",
    "TestVerdict", "binomial_ci", "chi2_critical_999", "chi_square_gof",
    "compare_to_closed_form",
]
