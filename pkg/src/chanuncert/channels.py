"""
States and Kraus maps.

A :class:`KrausMap` is just an ordered list of equal-size square operators.
:class:`KrausChannel` adds the completeness requirement
``sum_i K_i^dagger K_i = I``. Maps that are not channels (weighted sums of
channels, for instance) stay plain ``KrausMap`` objects; the variance code
handles both.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linalg import CMatrix, as_cmatrix, dagger, hermitian_sqrt, partial_trace

#: Completeness tolerance. Loose enough for channels read back from ~8 printed digits.
COMPLETENESS_TOL = 1e-8
#: Tolerance on Hermiticity, trace and eigenvalues of density matrices.
STATE_TOL = 1e-10

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace Hermitian PSD matrix with its principal square root cached."""

    rho: CMatrix
    sqrt_rho: CMatrix = field(init=False, repr=False)

    def __post_init__(self):
        rho = as_cmatrix(self.rho, "density matrix")
        n, m = rho.shape
        if n != m:
            raise ValueError(f"density matrix must be square, got {rho.shape}")
        if np.linalg.norm(rho - dagger(rho)) > STATE_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > STATE_TOL:
            raise ValueError(f"density matrix trace is {np.trace(rho).real:.12g}, not 1")
        # hermitian_sqrt rejects eigenvalues below -STATE_TOL
        object.__setattr__(self, "rho", _frozen(rho))
        object.__setattr__(self, "sqrt_rho", _frozen(hermitian_sqrt(rho, STATE_TOL)))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def reduced(self, dims: tuple[int, int], keep: str = "a") -> "DensityMatrix":
        return DensityMatrix(partial_trace(self.rho, dims, keep))


@dataclass(frozen=True, eq=False)
class KrausMap:
    """Ordered, non-empty list of ``n x n`` operators defining ``rho -> sum K rho K^dagger``."""

    ops: tuple[CMatrix, ...]

    def __post_init__(self):
        ops = tuple(_frozen(as_cmatrix(k, "Kraus operator")) for k in self.ops)
        if not ops:
            raise ValueError("a Kraus map needs at least one operator")
        shape = ops[0].shape
        if shape[0] != shape[1]:
            raise ValueError(f"Kraus operators must be square, got {shape}")
        for k in ops:
            if k.shape != shape:
                raise ValueError(f"Kraus operators have mixed shapes {shape} and {k.shape}")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def completeness_residual(self) -> float:
        total = sum(dagger(k) @ k for k in self.ops)
        return float(np.linalg.norm(total - np.eye(self.dim)))

    def padded(self, length: int) -> "KrausMap":
        """Same map with zero operators appended up to ``length`` entries."""
        if length < len(self):
            raise ValueError(f"cannot pad {len(self)} operators down to {length}")
        zeros = (np.zeros((self.dim, self.dim), dtype=np.complex128),) * (length - len(self))
        return type(self)(self.ops + zeros)


@dataclass(frozen=True, eq=False)
class KrausChannel(KrausMap):
    """A Kraus map that is trace preserving within :data:`COMPLETENESS_TOL`."""

    def __post_init__(self):
        super().__post_init__()
        res = self.completeness_residual()
        if res > COMPLETENESS_TOL:
            raise ValueError(f"Kraus operators are not complete (residual {res:.3e})")


@dataclass(frozen=True)
class ChannelVerdict:
    residual: float
    passed: bool


def validate_channel(kmap: KrausMap, tol: float = COMPLETENESS_TOL) -> ChannelVerdict:
    """Frobenius residual of ``sum K^dagger K - I`` and whether it is within ``tol``."""
    res = kmap.completeness_residual()
    return ChannelVerdict(res, res <= tol)


def density_from_bloch(r: Sequence[float]) -> DensityMatrix:
    """Qubit state ``(I + r . sigma) / 2``."""
    rx, ry, rz = (float(c) for c in r)
    if math.hypot(rx, ry, rz) > 1 + 1e-12:
        raise ValueError(f"Bloch vector {tuple(r)} lies outside the unit ball")
    return DensityMatrix(0.5 * (PAULI_I + rx * PAULI_X + ry * PAULI_Y + rz * PAULI_Z))


def bloch_circle_state(theta: float) -> DensityMatrix:
    """The example family ``r = (cos t, sin t, 0) / sqrt(3)``."""
    a = math.sqrt(3) / 3
    return density_from_bloch((a * math.cos(theta), a * math.sin(theta), 0.0))


def standard_channel(kind: str, q: float) -> KrausChannel:
    """
    Amplitude damping ("AD"), bit flip ("BF") or phase damping ("PD") with strength ``q``.

    AD: ``|0><0| + sqrt(1-q)|1><1|``, ``sqrt(q)|0><1|``.
    BF: ``sqrt(q) I``, ``sqrt(1-q) X``.
    PD: ``|0><0| + sqrt(1-q)|1><1|``, ``sqrt(q)|1><1|``.
    """
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"channel parameter q={q} outside [0, 1]")
    a, b = math.sqrt(q), math.sqrt(1.0 - q)
    kind = kind.upper()
    if kind == "AD":
        ops = [np.diag([1.0, b]), np.array([[0.0, a], [0.0, 0.0]])]
    elif kind == "BF":
        ops = [a * PAULI_I, b * PAULI_X]
    elif kind == "PD":
        ops = [np.diag([1.0, b]), np.diag([0.0, a])]
    else:
        raise ValueError(f"unknown channel kind {kind!r}; expected AD, BF or PD")
    return KrausChannel(tuple(ops))


def identity_channel(dim: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def mix_kraus(kmap: KrausMap, u) -> KrausMap:
    """
    Recombine Kraus operators as ``K'_i = sum_j u_ij K_j`` for a unitary ``u``.

    The result describes the same map and keeps the input's class.
    """
    u = as_cmatrix(u, "mixing matrix")
    m = len(kmap)
    if u.shape != (m, m):
        raise ValueError(f"mixing matrix must be {m}x{m}, got {u.shape}")
    if np.linalg.norm(dagger(u) @ u - np.eye(m)) > 1e-10:
        raise ValueError("mixing matrix is not unitary")
    stack = np.stack(kmap.ops)
    return type(kmap)(tuple(np.einsum("ij,jkl->ikl", u, stack)))


def apply_channel(kmap: KrausMap, rho) -> CMatrix:
    r = rho.rho if isinstance(rho, DensityMatrix) else as_cmatrix(rho)
    if r.shape != (kmap.dim, kmap.dim):
        raise ValueError(f"state of shape {r.shape} does not fit a {kmap.dim}-dimensional map")
    return sum(k @ r @ dagger(k) for k in kmap.ops)


def combine_maps(l1: float, m1: KrausMap, l2: float, m2: KrausMap) -> KrausMap:
    """Kraus map of ``l1 * Phi_1 + l2 * Phi_2`` for non-negative weights."""
    if l1 < 0 or l2 < 0:
        raise ValueError("combination weights must be non-negative")
    if m1.dim != m2.dim:
        raise ValueError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    s1, s2 = math.sqrt(l1), math.sqrt(l2)
    return KrausMap(tuple(s1 * k for k in m1.ops) + tuple(s2 * k for k in m2.ops))


def lift_channel(kmap: KrausMap, side: str, other_dim: int) -> KrausMap:
    """Extend a map to a bipartite space as ``K (x) I`` (side="left") or ``I (x) K`` (side="right")."""
    eye = np.eye(other_dim)
    if side == "left":
        ops = tuple(np.kron(k, eye) for k in kmap.ops)
    elif side == "right":
        ops = tuple(np.kron(eye, k) for k in kmap.ops)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return type(kmap)(ops)


def pad_maps(maps: Iterable[KrausMap]) -> list[KrausMap]:
    """Pad every map with zero operators to the longest Kraus list; dimensions must agree."""
    maps = list(maps)
    if not maps:
        return maps
    dims = {m.dim for m in maps}
    if len(dims) != 1:
        raise ValueError(f"maps act on different dimensions: {sorted(dims)}")
    length = max(len(m) for m in maps)
    return [m.padded(length) for m in maps]


# -- JSON I/O ---------------------------------------------------------------
#
# channel: {"dim": n, "kraus": [op, ...]}, op = n rows of n [re, im] pairs
# state:   {"bloch": [rx, ry, rz]}  or  {"matrix": n rows of n [re, im] pairs}


def _decode_matrix(raw, n: int | None, what: str) -> np.ndarray:
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what} must be an n x n array of [re, im] pairs, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{what} has dimension {arr.shape[0]}, expected {n}")
    return arr[..., 0] + 1j * arr[..., 1]


def _encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def channel_from_dict(data: dict, require_complete: bool = False) -> KrausMap:
    if not isinstance(data, dict) or set(data) != {"dim", "kraus"}:
        raise ValueError("channel JSON must be an object with exactly the keys 'dim' and 'kraus'")
    n = data["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"'dim' must be a positive integer, got {n!r}")
    if not isinstance(data["kraus"], list) or not data["kraus"]:
        raise ValueError("'kraus' must be a non-empty list of operators")
    ops = tuple(_decode_matrix(op, n, f"Kraus operator {i}") for i, op in enumerate(data["kraus"]))
    return KrausChannel(ops) if require_complete else KrausMap(ops)


def channel_to_dict(kmap: KrausMap) -> dict:
    return {"dim": kmap.dim, "kraus": [_encode_matrix(k) for k in kmap.ops]}


def state_from_dict(data: dict) -> DensityMatrix:
    if not isinstance(data, dict) or len(data) != 1:
        raise ValueError("state JSON must be an object with exactly one of 'bloch' or 'matrix'")
    if "bloch" in data:
        r = data["bloch"]
        if not isinstance(r, list) or len(r) != 3:
            raise ValueError("'bloch' must be a list of three reals")
        return density_from_bloch([float(c) for c in r])
    if "matrix" in data:
        return DensityMatrix(_decode_matrix(data["matrix"], None, "state matrix"))
    raise ValueError("state JSON must contain 'bloch' or 'matrix'")


def state_to_dict(rho: DensityMatrix) -> dict:
    return {"matrix": _encode_matrix(rho.rho)}


def load_channel(path: str | Path, require_complete: bool = False) -> KrausMap:
    with open(path) as fh:
        return channel_from_dict(json.load(fh), require_complete)


def load_state(path: str | Path) -> DensityMatrix:
    with open(path) as fh:
        return state_from_dict(json.load(fh))
