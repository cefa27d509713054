"""Seeded random states, unitaries and channels for property sweeps."""

from __future__ import annotations

import numpy as np

from .channels import DensityMatrix, KrausChannel, density_from_bloch
from .linalg import dagger


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for instance ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng([seed, index])


def ginibre(rng: np.random.Generator, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with the phase fix)."""
    q, r = np.linalg.qr(ginibre(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_bloch_state(rng: np.random.Generator) -> DensityMatrix:
    """Qubit state with Bloch vector uniform in the unit ball."""
    v = rng.standard_normal(3)
    v *= rng.uniform() ** (1 / 3) / np.linalg.norm(v)
    return density_from_bloch(v)


def random_wishart_state(n: int, rng: np.random.Generator) -> DensityMatrix:
    g = ginibre(rng, n)
    w = g @ dagger(g)
    return DensityMatrix(w / np.trace(w).real)


def random_state(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Bloch-ball uniform or Wishart for qubits (coin flip); Wishart otherwise."""
    if n == 2 and rng.uniform() < 0.5:
        return random_bloch_state(rng)
    return random_wishart_state(n, rng)


def random_channel(n: int, n_kraus: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel from the blocks of a random ``(n_kraus*n) x n`` isometry."""
    v, _ = np.linalg.qr(ginibre(rng, n_kraus * n, n))
    return KrausChannel(tuple(v[i * n:(i + 1) * n] for i in range(n_kraus)))


def zero_variance_instance(n: int, n_kraus: int, rng: np.random.Generator):
    """
    A (channel, state) pair with vanishing channel uncertainty.

    Every Kraus operator is diagonal in a random basis and the state is a
    pure basis vector of it, so ``K_i sqrt(rho) = Tr(rho K_i) sqrt(rho)``.
    """
    u = random_unitary(n, rng)
    amps = ginibre(rng, n_kraus, n)
    amps /= np.linalg.norm(amps, axis=0)
    ops = tuple(u @ np.diag(amps[i]) @ dagger(u) for i in range(n_kraus))
    psi = u[:, 0]
    return KrausChannel(ops), DensityMatrix(np.outer(psi, psi.conj()))
