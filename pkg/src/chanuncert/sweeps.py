"""
Parameter sweeps over the qubit example family and CSV output.

States come from the circle ``r = (cos t, sin t, 0) / sqrt(3)``; channels are
the named AD/BF/PD channels sharing one strength ``q``. A sweep varies
``theta`` over ``[0, 2 pi]``, ``q`` over ``[0, 1]``, or both on a square grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .bounds import (
    BoundParams, combined_bound, product_bound_thm1, sum_bound_thm2,
    sum_bound_thm3, sum_bound_thm4,
)
from .channels import bloch_circle_state, standard_channel

THEOREMS = ("1", "2", "3", "4", "combined")
SWEEP_VARS = ("theta", "q", "q-theta")
DEFAULT_GRID = 201
DEFAULT_GRID_2D = 41


@dataclass(frozen=True)
class SweepSpec:
    theorem: str
    channels: tuple[str, ...]
    sweep_var: str
    fixed: float | None
    grid_points: int = DEFAULT_GRID
    params: BoundParams | None = None

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValueError(f"theorem must be one of {THEOREMS}, got {self.theorem!r}")
        if self.sweep_var not in SWEEP_VARS:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARS}, got {self.sweep_var!r}")
        if self.grid_points < 2:
            raise ValueError("a sweep needs at least 2 grid points")
        want = 2 if self.theorem in ("1", "2") else 3
        if (len(self.channels) != 2) if want == 2 else (len(self.channels) < 3):
            raise ValueError(f"theorem {self.theorem} needs {'2' if want == 2 else 'at least 3'} channels")
        for kind in self.channels:
            if kind.upper() not in ("AD", "BF", "PD"):
                raise ValueError(f"unknown channel kind {kind!r}")
        if self.theorem in ("3", "4") and self.params is None:
            raise ValueError(f"theorem {self.theorem} needs bound parameters")
        if self.theorem not in ("3", "4") and self.params is not None:
            raise ValueError(f"theorem {self.theorem} takes no (M, L) parameters")
        if self.sweep_var == "q-theta":
            if self.fixed is not None:
                raise ValueError("a two-dimensional sweep has no fixed value")
        elif self.fixed is None:
            raise ValueError("the non-swept variable needs a fixed value")
        elif self.sweep_var == "theta" and not 0.0 <= self.fixed <= 1.0:
            raise ValueError(f"fixed q={self.fixed} outside [0, 1]")
        elif self.sweep_var == "q" and not 0.0 <= self.fixed <= 2 * math.pi:
            raise ValueError(f"fixed theta={self.fixed} outside [0, 2 pi]")

    @property
    def lhs_name(self) -> str:
        return "product" if self.theorem == "1" else "sum"

    @property
    def bound_name(self) -> str:
        return "combined_bound" if self.theorem == "combined" else f"thm{self.theorem}_bound"

    def header(self) -> list[str]:
        axes = ["q", "theta"] if self.sweep_var == "q-theta" else [self.sweep_var]
        return axes + [self.lhs_name, self.bound_name]

    def points(self) -> list[tuple[float, float]]:
        """``(q, theta)`` pairs in output order."""
        thetas = np.linspace(0.0, 2 * math.pi, self.grid_points)
        qs = np.linspace(0.0, 1.0, self.grid_points)
        if self.sweep_var == "theta":
            return [(self.fixed, t) for t in thetas]
        if self.sweep_var == "q":
            return [(q, self.fixed) for q in qs]
        return [(q, t) for q in qs for t in thetas]


PRESETS: dict[str, SweepSpec] = {
    "fig1a": SweepSpec("1", ("AD", "BF"), "theta", 0.2),
    "fig1b": SweepSpec("1", ("AD", "BF"), "q", math.pi / 3),
    "fig1c": SweepSpec("2", ("AD", "BF"), "theta", 0.8),
    "fig1d": SweepSpec("2", ("AD", "BF"), "q", 3 * math.pi / 5),
    "fig2a": SweepSpec("combined", ("AD", "BF", "PD"), "q-theta", None, DEFAULT_GRID_2D),
    "fig2b": SweepSpec("combined", ("AD", "BF", "PD"), "theta", 0.1),
}


def preset(name: str, grid_points: int | None = None) -> SweepSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return spec if grid_points is None else replace(spec, grid_points=grid_points)


def evaluate_point(spec: SweepSpec, q: float, theta: float):
    rho = bloch_circle_state(theta)
    chans = [standard_channel(k, q) for k in spec.channels]
    if spec.theorem == "1":
        return product_bound_thm1(*chans, rho)
    if spec.theorem == "2":
        return sum_bound_thm2(*chans, rho)
    if spec.theorem == "3":
        return sum_bound_thm3(chans, rho, spec.params)
    if spec.theorem == "4":
        return sum_bound_thm4(chans, rho, spec.params)
    return combined_bound(chans, rho)


def run_sweep(spec: SweepSpec) -> list[list[float]]:
    rows = []
    for q, theta in spec.points():
        rep = evaluate_point(spec, q, theta)
        axes = [q, theta] if spec.sweep_var == "q-theta" else [theta if spec.sweep_var == "theta" else q]
        rows.append(axes + [rep.lhs, rep.bound])
    return rows


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_number(x) for x in row])
