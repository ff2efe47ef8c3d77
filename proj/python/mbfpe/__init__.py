"""Similarity solutions of Fokker-Planck equations with moving boundaries."""

from ._core import (
    ClassI,
    ClassII,
    ClassIII,
    ClassKind,
    SolutionClass,
    SimilaritySolution,
    beta,
    boundary_positions,
    build_solution,
    class_info,
    coefficients,
    current,
    density,
    figure_preset,
    format_config,
    kummer_1f1,
    ln_gamma,
    mirror,
    moment,
    parse_config,
    preset_names,
    sample_paths,
    tricomi_u,
    verify,
    whittaker_w,
)

__all__ = [
    "ClassI",
    "ClassII",
    "ClassIII",
    "ClassKind",
    "SolutionClass",
    "SimilaritySolution",
    "beta",
    "boundary_positions",
    "build_solution",
    "class_info",
    "coefficients",
    "current",
    "density",
    "figure_preset",
    "format_config",
    "kummer_1f1",
    "ln_gamma",
    "mirror",
    "moment",
    "parse_config",
    "preset_names",
    "sample_paths",
    "tricomi_u",
    "verify",
    "whittaker_w",
]
