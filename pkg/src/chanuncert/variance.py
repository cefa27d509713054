"""
Variance-type quantities of operators and channels in a fixed state.

The central object is the centered operator ``K~ = (K - Tr(rho K) I) sqrt(rho)``:
its squared Frobenius norm is the rho-absolute variance of ``K``, and summing
those over a Kraus list gives the uncertainty of the channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import DensityMatrix, KrausMap
from .linalg import CMatrix, as_cmatrix, dagger


def _check_dims(k: CMatrix, rho: DensityMatrix) -> CMatrix:
    k = as_cmatrix(k, "operator")
    if k.shape != (rho.dim, rho.dim):
        raise ValueError(f"operator of shape {k.shape} does not act on a {rho.dim}-dimensional state")
    return k


def expectation(k, rho: DensityMatrix) -> complex:
    """``Tr(rho K)``."""
    k = _check_dims(k, rho)
    return complex(np.einsum("ij,ji->", rho.rho, k))


@dataclass(frozen=True, eq=False)
class CenteredKraus:
    k_tilde: CMatrix
    mean: complex

    @property
    def variance(self) -> float:
        return float(np.vdot(self.k_tilde, self.k_tilde).real)


def centered_kraus(k, rho: DensityMatrix) -> CenteredKraus:
    k = _check_dims(k, rho)
    mean = expectation(k, rho)
    return CenteredKraus((k - mean * np.eye(rho.dim)) @ rho.sqrt_rho, mean)


def rho_abs_variance(k, rho: DensityMatrix) -> float:
    """
    ``E(|K|^2) - |E(K)|^2``, evaluated as ``||(K - Tr(rho K)) sqrt(rho)||^2``.

    Works for any square ``K``; for Hermitian ``K`` it is the ordinary variance.
    """
    return centered_kraus(k, rho).variance


def rho_variance(a, rho: DensityMatrix) -> float:
    """Ordinary variance ``Tr(rho A^2) - Tr(rho A)^2`` of a Hermitian observable."""
    a = _check_dims(a, rho)
    if np.linalg.norm(a - dagger(a)) > 1e-10:
        raise ValueError("observable is not Hermitian")
    return float(expectation(a @ a, rho).real - expectation(a, rho).real ** 2)


@dataclass(frozen=True)
class UncertaintyValue:
    value: float
    per_kraus: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"value": self.value, "per_kraus": list(self.per_kraus)}


def channel_uncertainty(kmap: KrausMap, rho: DensityMatrix) -> UncertaintyValue:
    """
    Sum of the rho-absolute variances of the Kraus operators.

    Always uses the per-operator form, so it is also meaningful for maps
    that are not trace preserving.
    """
    if kmap.dim != rho.dim:
        raise ValueError(f"map of dimension {kmap.dim} applied to a {rho.dim}-dimensional state")
    per = tuple(rho_abs_variance(k, rho) for k in kmap.ops)
    return UncertaintyValue(float(sum(per)), per)


def channel_uncertainty_trace_form(kmap: KrausMap, rho: DensityMatrix) -> float:
    """``1 - sum_i |Tr(rho K_i)|^2``; only equal to the uncertainty for trace-preserving maps."""
    return 1.0 - sum(abs(expectation(k, rho)) ** 2 for k in kmap.ops)
