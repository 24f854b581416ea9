"""Constrained gradient flows of knot energies on the unit-speed tangent torus."""

import json

from ._core import (
    KnotflowError,
    average_crossing_number,
    constraint_errors,
    crossing_integral,
    curve_points,
    distortion,
    energies,
    equilibrium_residual,
    generate,
    kernel_name,
    project,
    set_threads,
    simulate,
    spectrum_json,
)

KnotflowError.kind = property(lambda self: self.args[1] if len(self.args) > 1 else None)


def spectrum(kernel="distortion:q=1", k_max=64):
    """Linearisation spectrum at the round circle as a dict (same layout as the CLI)."""
    return json.loads(spectrum_json(kernel, k_max))


__all__ = [
    "KnotflowError",
    "average_crossing_number",
    "constraint_errors",
    "crossing_integral",
    "curve_points",
    "distortion",
    "energies",
    "equilibrium_residual",
    "generate",
    "kernel_name",
    "project",
    "set_threads",
    "simulate",
    "spectrum",
]
