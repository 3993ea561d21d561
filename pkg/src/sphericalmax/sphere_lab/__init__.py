"""Numerical spherical averages over explicit regions in R^2 and R^3."""

from .quadrature import maximal_function, quadrature_rule, spherical_average, spherical_averages
from .regions import Ball, Cylinder, KnappConfig, ShellCap, knapp_setup
from .experiments import (ball_test_experiment, geometry_inclusion_test, lower_bound_experiment,
                          scaling_invariance_test, weighted_norm)

__all__ = [
    "quadrature_rule", "spherical_average", "spherical_averages", "maximal_function",
    "Ball", "Cylinder", "ShellCap", "KnappConfig", "knapp_setup",
    "weighted_norm", "geometry_inclusion_test", "lower_bound_experiment",
    "scaling_invariance_test", "ball_test_experiment",
]
