"""Nontangential limits of Cauchy transforms and P^2(mu) tooling."""

__version__ = "0.1.0"

from .cauchy import CauchyValue, cauchy_eps, cauchy_max, cauchy_pv  # noqa: E402
from .measure import (ComplexMeasure, atom, bergman, lebesgue_circle, measure, moment,  # noqa: E402
                      moment_matrix, multiply_density, restrict, variation_bound)
