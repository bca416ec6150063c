"""Oscillation, difference, and Littlewood-Paley quasi-norms of Besov-Morrey
and Besov-type spaces for grid-sampled functions."""

try:
    from ._core import (
        ConfigurationError,
        DomainSpec,
        GridFunction,
        SpaceParams,
        TestFunctionSpec,
        delta,
        diff_ball_mean,
        full_norm,
        lp_norm,
        morrey_ball_norm,
        oscillation,
        regularity_scan,
        run_acceptance,
        run_experiment,
        sample,
        set_threads,
    )
except ImportError:  # build-tree layout: _core.so next to the package dir
    from _core import (
        ConfigurationError,
        DomainSpec,
        GridFunction,
        SpaceParams,
        TestFunctionSpec,
        delta,
        diff_ball_mean,
        full_norm,
        lp_norm,
        morrey_ball_norm,
        oscillation,
        regularity_scan,
        run_acceptance,
        run_experiment,
        sample,
        set_threads,
    )

__all__ = [
    "ConfigurationError",
    "DomainSpec",
    "GridFunction",
    "SpaceParams",
    "TestFunctionSpec",
    "delta",
    "diff_ball_mean",
    "full_norm",
    "lp_norm",
    "morrey_ball_norm",
    "oscillation",
    "regularity_scan",
    "run_acceptance",
    "run_experiment",
    "sample",
    "set_threads",
]
