"""Boundary elements for 2D scattering by open arcs."""

import json

import numpy as np

from . import _arcbem
from ._arcbem import (
    ConfigError,
    Error,
    GeometryError,
    NumericalError,
    convergence,
    mathieu_a,
    mathieu_b,
    pade_error_bound,
    pade_sqrt,
    pade_sweep,
    parse_quantity,
    table,
    table_ids,
)

__all__ = [
    "ConfigError",
    "Error",
    "GeometryError",
    "NumericalError",
    "convergence",
    "field",
    "mathieu_a",
    "mathieu_b",
    "normalize_scenario",
    "pade_error_bound",
    "pade_sqrt",
    "pade_sweep",
    "parse_quantity",
    "solve",
    "table",
    "table_ids",
]


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def normalize_scenario(scenario):
    """Scenario dict with every default filled in."""
    return json.loads(_arcbem.normalize_scenario(_text(scenario)))


def solve(scenario):
    """Run a scenario (dict or JSON text). Returns (report dict, density array, breakpoints)."""
    out = _arcbem.solve_json(_text(scenario))
    return json.loads(out["report"]), np.asarray(out["density"]), np.asarray(out["breakpoints"])


def field(scenario, x0, x1, y0, y1, nx, ny):
    """Scattered and total field on a uniform grid, arrays of shape (ny, nx)."""
    out = _arcbem.field_json(_text(scenario), x0, x1, y0, y1, nx, ny)
    return np.asarray(out["scattered"]), np.asarray(out["total"])
