"""
Numerical checks of the structural properties of channel uncertainty, and
fuzzing of the lower bounds.

Each ``check_*`` function takes explicit inputs and returns a
:class:`PropertyResult`. :func:`check_properties` drives them on random
instances; every instance draws from its own generator seeded by
``(seed, property index, trial)``, so a failure is replayed exactly from
those three numbers (:func:`replay`).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import sampling
from .bounds import (
    VALIDITY_TOL, BoundParams, combined_bound, product_bound_thm1, sum_bound_thm2,
    sum_bound_thm3, sum_bound_thm4,
)
from .channels import DensityMatrix, KrausMap, combine_maps, lift_channel, mix_kraus
from .linalg import dagger
from .variance import channel_uncertainty, expectation

PROPERTY_TOL = 1e-9


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    lhs: float
    rhs: float
    detail: str = ""


def _equal(name: str, lhs: float, rhs: float, tol: float, detail: str = "") -> PropertyResult:
    return PropertyResult(name, abs(lhs - rhs) <= tol, lhs, rhs, detail)


def _at_least(name: str, lhs: float, rhs: float, tol: float, detail: str = "") -> PropertyResult:
    return PropertyResult(name, lhs - rhs >= -tol, lhs, rhs, detail)


def check_nonnegativity(kmap: KrausMap, rho: DensityMatrix, tol: float = PROPERTY_TOL,
                        expect_zero: bool | None = None) -> PropertyResult:
    """
    Non-negativity and the zero condition ``K_i sqrt(rho) = Tr(rho K_i) sqrt(rho)``.

    The residual ``r = max_i ||K_i sqrt(rho) - Tr(rho K_i) sqrt(rho)||`` is
    computed directly and must satisfy ``r^2 <= value <= m r^2`` (``m`` the
    number of Kraus operators). Hence ``value <= tol`` forces ``r <= sqrt(tol)``
    and ``r <= sqrt(tol / m)`` forces ``value <= tol``: the zero test uses the
    constant ``c = 1`` in one direction and ``c = 1/sqrt(m)`` in the other.
    """
    value = channel_uncertainty(kmap, rho).value
    sr = rho.sqrt_rho
    r = max(np.linalg.norm(k @ sr - expectation(k, rho) * sr) for k in kmap.ops)
    m = len(kmap)
    ok = value >= -tol and r**2 <= value + tol and value <= m * r**2 + tol
    if value <= tol:
        ok = ok and r <= math.sqrt(tol)
    if r <= math.sqrt(tol / m):
        ok = ok and value <= tol
    if expect_zero is not None:
        ok = ok and (value <= tol) == expect_zero
    return PropertyResult("nonnegativity", ok, value, 0.0, f"zero-condition residual {r:.3e}")


def check_linearity(m1: KrausMap, m2: KrausMap, l1: float, l2: float, rho: DensityMatrix,
                    tol: float = PROPERTY_TOL) -> PropertyResult:
    lhs = channel_uncertainty(combine_maps(l1, m1, l2, m2), rho).value
    rhs = l1 * channel_uncertainty(m1, rho).value + l2 * channel_uncertainty(m2, rho).value
    return _equal("linearity", lhs, rhs, tol)


def check_concavity(kmap: KrausMap, states: Sequence[DensityMatrix], weights: Sequence[float],
                    tol: float = PROPERTY_TOL) -> PropertyResult:
    mixed = DensityMatrix(sum(w * s.rho for w, s in zip(weights, states)))
    lhs = channel_uncertainty(kmap, mixed).value
    rhs = sum(w * channel_uncertainty(kmap, s).value for w, s in zip(weights, states))
    return _at_least("concavity", lhs, rhs, tol)


def check_unitary_invariance(kmap: KrausMap, rho: DensityMatrix, u, tol: float = PROPERTY_TOL) -> PropertyResult:
    u = np.asarray(u, dtype=np.complex128)
    rotated = type(kmap)(tuple(u @ k @ dagger(u) for k in kmap.ops))
    lhs = channel_uncertainty(rotated, DensityMatrix(u @ rho.rho @ dagger(u))).value
    rhs = channel_uncertainty(kmap, rho).value
    return _equal("unitary_invariance", lhs, rhs, tol)


def check_ancilla_independence(kmap_a: KrausMap, rho_ab: DensityMatrix, dim_b: int,
                               tol: float = PROPERTY_TOL) -> PropertyResult:
    lhs = channel_uncertainty(lift_channel(kmap_a, "left", dim_b), rho_ab).value
    rhs = channel_uncertainty(kmap_a, rho_ab.reduced((kmap_a.dim, dim_b), "a")).value
    return _equal("ancilla_independence", lhs, rhs, tol)


def check_additivity(kmap_a: KrausMap, kmap_b: KrausMap, rho_ab: DensityMatrix,
                     tol: float = PROPERTY_TOL) -> PropertyResult:
    dims = (kmap_a.dim, kmap_b.dim)
    both = combine_maps(1.0, lift_channel(kmap_a, "left", dims[1]), 1.0, lift_channel(kmap_b, "right", dims[0]))
    lhs = channel_uncertainty(both, rho_ab).value
    rhs = (channel_uncertainty(kmap_a, rho_ab.reduced(dims, "a")).value
           + channel_uncertainty(kmap_b, rho_ab.reduced(dims, "b")).value)
    return _equal("additivity", lhs, rhs, tol)


def check_representation_invariance(kmap: KrausMap, u, rho: DensityMatrix,
                                    tol: float = PROPERTY_TOL) -> PropertyResult:
    lhs = channel_uncertainty(mix_kraus(kmap, u), rho).value
    return _equal("representation_invariance", lhs, channel_uncertainty(kmap, rho).value, tol)


# -- random instances -------------------------------------------------------


def _dim_kraus(rng):
    return int(rng.integers(2, 5)), int(rng.integers(1, 5))


def _inst_nonnegativity(rng, tol):
    n, m = _dim_kraus(rng)
    if rng.uniform() < 0.5:
        ch, rho = sampling.zero_variance_instance(n, m, rng)
        return check_nonnegativity(ch, rho, tol, expect_zero=True)
    return check_nonnegativity(sampling.random_channel(n, m, rng), sampling.random_state(n, rng), tol)


def _inst_linearity(rng, tol):
    n, m = _dim_kraus(rng)
    m1 = sampling.random_channel(n, m, rng)
    m2 = sampling.random_channel(n, int(rng.integers(1, 5)), rng)
    l1, l2 = rng.uniform(0, 3, size=2)
    return check_linearity(m1, m2, l1, l2, sampling.random_state(n, rng), tol)


def _inst_concavity(rng, tol):
    n, m = _dim_kraus(rng)
    k = int(rng.integers(2, 4))
    states = [sampling.random_state(n, rng) for _ in range(k)]
    return check_concavity(sampling.random_channel(n, m, rng), states, rng.dirichlet(np.ones(k)), tol)


def _inst_unitary(rng, tol):
    n, m = _dim_kraus(rng)
    return check_unitary_invariance(
        sampling.random_channel(n, m, rng), sampling.random_state(n, rng), sampling.random_unitary(n, rng), tol
    )


def _inst_ancilla(rng, tol):
    ch = sampling.random_channel(2, int(rng.integers(1, 5)), rng)
    return check_ancilla_independence(ch, sampling.random_wishart_state(4, rng), 2, tol)


def _inst_additivity(rng, tol):
    a = sampling.random_channel(2, int(rng.integers(1, 5)), rng)
    b = sampling.random_channel(2, int(rng.integers(1, 5)), rng)
    return check_additivity(a, b, sampling.random_wishart_state(4, rng), tol)


def _inst_representation(rng, tol):
    m = int(rng.integers(1, 5))
    ch = sampling.random_channel(2, m, rng)
    return check_representation_invariance(ch, sampling.random_unitary(m, rng), sampling.random_state(2, rng), tol)


def random_params(variant: str, rng) -> BoundParams:
    """Valid ``(M, L)`` for ``variant``, both in ``(0, 5]``."""
    lo, hi = np.sort(5.0 - rng.uniform(0.0, 5.0, size=2))  # uniform on (0, 5]
    if variant == "LB3" and lo == hi:
        lo = hi / 2
    return BoundParams(hi, lo, variant) if variant == "LB1" else BoundParams(lo, hi, variant)


def _bound_instance(kind: str, variant: str | None = None):
    def run(rng, tol):
        chans = [sampling.random_channel(2, 2, rng) for _ in range(2 if kind in ("thm1", "thm2") else 3)]
        rho = sampling.random_state(2, rng)
        if kind == "thm1":
            rep = product_bound_thm1(*chans, rho)
        elif kind == "thm2":
            rep = sum_bound_thm2(*chans, rho)
        elif kind == "combined":
            rep = combined_bound(chans, rho)
        else:
            fn = sum_bound_thm3 if kind == "thm3" else sum_bound_thm4
            rep = fn(chans, rho, random_params(variant, rng))
        name = f"{kind}_{variant}" if variant else kind
        return PropertyResult(f"bound_{name}", rep.holds(tol), rep.lhs, rep.bound)
    return run


PROPERTY_CHECKS: dict[str, Callable] = {
    "nonnegativity": _inst_nonnegativity,
    "linearity": _inst_linearity,
    "concavity": _inst_concavity,
    "unitary_invariance": _inst_unitary,
    "ancilla_independence": _inst_ancilla,
    "additivity": _inst_additivity,
    "representation_invariance": _inst_representation,
}

BOUND_CHECKS: dict[str, Callable] = {
    "bound_thm1": _bound_instance("thm1"),
    "bound_thm2": _bound_instance("thm2"),
    **{f"bound_thm3_{v}": _bound_instance("thm3", v) for v in ("LB1", "LB2", "LB3")},
    **{f"bound_thm4_{v}": _bound_instance("thm4", v) for v in ("LB1", "LB2", "LB3")},
    "bound_combined": _bound_instance("combined"),
}

ALL_CHECKS = {**PROPERTY_CHECKS, **BOUND_CHECKS}
_CHECK_INDEX = {name: i for i, name in enumerate(ALL_CHECKS)}


def run_instance(name: str, seed: int, trial: int, tol: float = PROPERTY_TOL) -> PropertyResult:
    rng = np.random.default_rng([seed, _CHECK_INDEX[name], trial])
    tol = VALIDITY_TOL if name.startswith("bound_") else tol
    return ALL_CHECKS[name](rng, tol)


@dataclass
class PropertySummary:
    name: str
    trials: int = 0
    failures: int = 0
    worst_slack: float | None = None
    first_failure: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class PropertyReport:
    seed: int
    trials: int
    summaries: dict[str, PropertySummary] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.summaries.values())

    def to_dict(self) -> dict:
        return {
            "seed": self.seed, "trials": self.trials, "passed": self.passed,
            "properties": {k: asdict(v) | {"passed": v.passed} for k, v in self.summaries.items()},
        }


def check_properties(seed: int = 0, trials: int = 200, names: Sequence[str] | None = None,
                     tol: float = PROPERTY_TOL) -> PropertyReport:
    """Run ``trials`` seeded random instances of each named check (all by default)."""
    report = PropertyReport(seed, trials)
    for name in names or list(ALL_CHECKS):
        summary = PropertySummary(name)
        for trial in range(trials):
            res = run_instance(name, seed, trial, tol)
            summary.trials += 1
            equality = name not in ("concavity", "nonnegativity") and not name.startswith("bound_")
            slack = -abs(res.lhs - res.rhs) if equality else res.lhs - res.rhs
            if summary.worst_slack is None or slack < summary.worst_slack:
                summary.worst_slack = slack
            if not res.passed:
                summary.failures += 1
                if summary.first_failure is None:
                    summary.first_failure = {"property": name, "seed": seed, "trial": trial,
                                             "lhs": res.lhs, "rhs": res.rhs, "detail": res.detail}
        report.summaries[name] = summary
    return report


def replay(failure: dict, tol: float = PROPERTY_TOL) -> PropertyResult:
    """Re-run the instance described by a serialized failure record."""
    return run_instance(failure["property"], int(failure["seed"]), int(failure["trial"]), tol)
