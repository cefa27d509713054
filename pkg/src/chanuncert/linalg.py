"""
Dense complex-matrix primitives.

Every matrix in the package is a 2-D ``numpy.complex128`` array with the
usual row-major ``(row, col)`` indexing. Nothing here is clever; these are
the handful of operations the variance and bound code leans on.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

CMatrix = npt.NDArray[np.complex128]

#: Eigenvalues in ``[-EIG_TOL, 0)`` are treated as round-off and clamped to zero.
EIG_TOL = 1e-10


def as_cmatrix(x, name: str = "matrix") -> CMatrix:
    """Coerce ``x`` to a finite 2-D complex array, raising ``ValueError`` otherwise."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _require_square(m: CMatrix, name: str) -> int:
    rows, cols = m.shape
    if rows != cols:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return rows


def dagger(x: CMatrix) -> CMatrix:
    return np.conj(x).T


def is_hermitian(m: CMatrix, tol: float = EIG_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.linalg.norm(m - dagger(m)) <= tol


def hermitian_sqrt(m, tol: float = EIG_TOL) -> CMatrix:
    """
    Principal square root of a Hermitian positive-semidefinite matrix.

    Parameters
    ----------
    m : array_like
        Square Hermitian PSD matrix.
    tol : float
        Tolerance for the Hermiticity check (Frobenius norm of ``m - m^dagger``)
        and for small negative eigenvalues, which are clamped to zero.

    Returns
    -------
    ndarray
        Hermitian PSD ``s`` with ``s @ s ~= m``.

    Raises
    ------
    ValueError
        If ``m`` is not square, not Hermitian within ``tol``, or has an
        eigenvalue below ``-tol``.
    """
    m = as_cmatrix(m)
    _require_square(m, "matrix")
    if np.linalg.norm(m - dagger(m)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh((m + dagger(m)) / 2)
    if evals.min() < -tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {evals.min():.3e})")
    roots = np.sqrt(np.clip(evals, 0.0, None))
    return (evecs * roots) @ dagger(evecs)


def trace_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product Tr(X^dagger Y)."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    return complex(np.vdot(x, y))


def fro_norm(x) -> float:
    return float(np.linalg.norm(np.asarray(x, dtype=np.complex128)))


def sorted_abs_vec(x) -> npt.NDArray[np.float64]:
    """
    Moduli of all ``n**2`` entries of a square matrix, in non-increasing order.

    The sort is stable, so equal moduli keep their row-major order; only the
    multiset matters to callers.
    """
    x = as_cmatrix(x)
    _require_square(x, "matrix")
    mags = np.abs(x).ravel()
    return mags[np.argsort(-mags, kind="stable")]


def tensor(x, y) -> CMatrix:
    return np.kron(np.asarray(x, dtype=np.complex128), np.asarray(y, dtype=np.complex128))


def partial_trace(w, dims: tuple[int, int], keep: str = "a") -> CMatrix:
    """
    Reduce an operator on a bipartite space ``a (x) b`` to one factor.

    Parameters
    ----------
    w : array_like
        Square matrix of dimension ``dims[0] * dims[1]``.
    dims : (int, int)
        Local dimensions ``(n_a, n_b)``.
    keep : {"a", "b"}
        Which subsystem survives.
    """
    w = as_cmatrix(w)
    na, nb = (int(d) for d in dims)
    if w.shape != (na * nb, na * nb):
        raise ValueError(f"operator of shape {w.shape} does not match dims {dims}")
    t = w.reshape(na, nb, na, nb)
    if keep == "a":
        return np.einsum("ijkj->ik", t)
    if keep == "b":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")
