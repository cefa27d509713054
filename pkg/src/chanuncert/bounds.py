"""
Lower bounds on products and sums of channel uncertainties.

Two-channel bounds
    :func:`product_bound_thm1` pairs the sorted entry moduli of centered Kraus
    operators (Cauchy-Schwarz plus rearrangement); :func:`sum_bound_thm2` uses
    the parallelogram law, maximized over how the Kraus lists are matched.

N-channel bounds
    :func:`norm_ineq_rhs` is the three-variant (M, L) family of lower bounds
    on ``sum_t ||u_t||^2``. :func:`sum_bound_thm3` applies it per Kraus index
    and sums; :func:`sum_bound_thm4` applies it once to the stacked operators
    ``(K~_1, ..., K~_n)`` of each channel. :func:`combined_bound` takes the best
    of three of these.

All N-channel bounds are maximized over one permutation of Kraus indices per
channel. Relabelling every channel by the same permutation leaves the value
unchanged, so the first channel's permutation is pinned to the identity and
the search covers ``(n!)**(N-1)`` assignments.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import DensityMatrix, KrausMap, pad_maps
from .linalg import dagger, sorted_abs_vec
from .variance import centered_kraus, channel_uncertainty, rho_abs_variance

#: Absolute tolerance for "lhs >= bound" checks.
VALIDITY_TOL = 1e-9
#: Largest permutation search space evaluated exhaustively.
MAX_ASSIGNMENTS = 10**6
# values within this of the maximum count as ties (lexicographically first wins)
_TIE_TOL = 1e-12
_CHUNK = 1 << 14

VARIANTS = ("LB1", "LB2", "LB3")


class SearchSpaceError(ValueError):
    """The exhaustive permutation search would exceed :data:`MAX_ASSIGNMENTS`."""


@dataclass(frozen=True)
class BoundParams:
    """
    Weights ``(M, L)`` and variant of the N-vector norm inequality.

    LB1 needs ``M >= L > 0``, LB2 needs ``L >= M > 0``, LB3 needs ``L > M > 0``.
    """

    M: float
    L: float
    variant: str

    def __post_init__(self):
        M, L, v = self.M, self.L, self.variant
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        if not (M > 0 and L > 0):
            raise ValueError(f"M and L must be positive, got M={M}, L={L}")
        if v == "LB1" and not M >= L:
            raise ValueError(f"LB1 requires M >= L, got M={M}, L={L}")
        if v == "LB2" and not L >= M:
            raise ValueError(f"LB2 requires L >= M, got M={M}, L={L}")
        if v == "LB3" and not L > M:
            raise ValueError(f"LB3 requires L > M, got M={M}, L={L}")

    def to_dict(self) -> dict:
        return {"M": self.M, "L": self.L, "variant": self.variant}


# Parameter choices used for the three-channel example.
EXAMPLE_PARAMS = (
    BoundParams(2.0, 1.0, "LB1"),
    BoundParams(1.0, 2.0, "LB2"),
    BoundParams(1.0, 2.0, "LB3"),
)


@dataclass(frozen=True)
class PermutationAssignment:
    """One permutation of Kraus indices (0-based) per channel, plus per-index signs for the sum bound."""

    per_channel: tuple[tuple[int, ...], ...]
    signs: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        d = {"per_channel": [list(p) for p in self.per_channel]}
        if self.signs is not None:
            d["signs"] = list(self.signs)
        return d


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    lhs: float
    bound: float
    maximizer: PermutationAssignment | None = None
    params: BoundParams | None = None
    ratio: float | None = None
    source: str | None = None
    constituents: dict[str, float] | None = None

    @property
    def gap(self) -> float:
        return self.lhs - self.bound

    def holds(self, tol: float = VALIDITY_TOL) -> bool:
        return self.gap >= -tol

    def to_dict(self) -> dict:
        d = {"theorem": self.theorem, "lhs": self.lhs, "bound": self.bound, "gap": self.gap}
        if self.ratio is not None:
            d["ratio"] = self.ratio if math.isfinite(self.ratio) else None
        d["maximizer"] = self.maximizer.to_dict() if self.maximizer else None
        if self.params is not None:
            d["params"] = self.params.to_dict()
        if self.source is not None:
            d["source"] = self.source
        if self.constituents is not None:
            d["constituents"] = dict(self.constituents)
        return d


def _lex_argmax(values: np.ndarray) -> int:
    best = values.max()
    return int(np.flatnonzero(values >= best - _TIE_TOL * max(1.0, abs(best)))[0])


def _centered_stack(kmaps: Sequence[KrausMap], rho: DensityMatrix) -> np.ndarray:
    return np.array([[centered_kraus(k, rho).k_tilde for k in m.ops] for m in kmaps])


def _ratio(lhs: float, bound: float) -> float:
    tiny = 1e-15
    if abs(bound) <= tiny:
        return 1.0 if abs(lhs) <= tiny else math.inf
    return lhs / bound


# -- two channels -------------------------------------------------------------


def product_bound_thm1(ch1: KrausMap, ch2: KrausMap, rho: DensityMatrix) -> BoundReport:
    """
    Product bound ``V(Phi1) V(Phi2) >= sum_ij (<a_i, b_j>)^2``.

    ``a_i`` are the sorted entry moduli of ``K~_i^dagger`` and ``b_j`` those of
    ``L~_j``, paired in non-increasing order. Both ``lhs / bound`` (``ratio``)
    and ``lhs - bound`` are reported since both sides can vanish together.
    """
    ch1, ch2 = pad_maps([ch1, ch2])
    lhs = channel_uncertainty(ch1, rho).value * channel_uncertainty(ch2, rho).value
    a = np.array([sorted_abs_vec(dagger(centered_kraus(k, rho).k_tilde)) for k in ch1.ops])
    b = np.array([sorted_abs_vec(centered_kraus(k, rho).k_tilde) for k in ch2.ops])
    bound = float(((a @ b.T) ** 2).sum())
    return BoundReport("thm1", lhs, bound, ratio=_ratio(lhs, bound))


def sum_bound_thm2(ch1: KrausMap, ch2: KrausMap, rho: DensityMatrix) -> BoundReport:
    """
    Sum bound ``V(Phi1) + V(Phi2) >= max_pi 1/2 sum_i V(K_i +- L_pi(i))``.

    The sign is chosen independently for every index (the larger of the two
    variances), then the matching ``pi`` is searched exhaustively.
    """
    ch1, ch2 = pad_maps([ch1, ch2])
    n = len(ch1)
    if math.factorial(n) > MAX_ASSIGNMENTS:
        raise SearchSpaceError(f"{n}! matchings exceed the search cap of {MAX_ASSIGNMENTS}")
    lhs = channel_uncertainty(ch1, rho).value + channel_uncertainty(ch2, rho).value
    plus = np.array([[rho_abs_variance(k + l, rho) for l in ch2.ops] for k in ch1.ops])
    minus = np.array([[rho_abs_variance(k - l, rho) for l in ch2.ops] for k in ch1.ops])
    best = np.maximum(plus, minus)
    perms = np.array(list(itertools.permutations(range(n))))
    values = 0.5 * best[np.arange(n), perms].sum(axis=1)
    k = _lex_argmax(values)
    pi = perms[k]
    signs = tuple(1 if plus[i, j] >= minus[i, j] else -1 for i, j in enumerate(pi))
    maximizer = PermutationAssignment((tuple(range(n)), tuple(int(j) for j in pi)), signs)
    return BoundReport("thm2", lhs, float(values.max()), maximizer)


# -- N channels ---------------------------------------------------------------


def _family_value(params: BoundParams, N: int, sq_plus, sq_minus, plus2, minus2, total2):
    """
    Right-hand side of the norm inequality from its ingredients.

    ``sq_plus`` / ``sq_minus`` are the squared sums of pairwise norms
    ``(sum_{t<s} ||u_t +- u_s||)^2``, ``plus2`` / ``minus2`` the sums of
    squared pairwise norms and ``total2 = ||sum_t u_t||^2``.
    """
    M, L = params.M, params.L
    denom = M * N + (N - 2) * L
    if params.variant == "LB1":
        num = 2 * L / (N * (N - 1)) * sq_plus + M * minus2 + (M - L) * total2
    elif params.variant == "LB2":
        num = 2 * M / (N * (N - 1)) * sq_minus + L * plus2 + (M - L) * total2
    else:
        num = (M - L) / (N - 1) ** 2 * sq_plus + L * plus2 + M * minus2
    return num / denom


def norm_ineq_rhs(vectors: Sequence, params: BoundParams) -> float:
    """
    Lower bound on ``sum_t ||u_t||^2`` for ``N >= 3`` equally shaped arrays.

    Norms are Frobenius. ``params.variant`` picks which pairwise-norm terms
    carry the square root.
    """
    us = [np.asarray(u, dtype=np.complex128) for u in vectors]
    N = len(us)
    if N < 3:
        raise ValueError(f"need at least 3 vectors, got {N}")
    if len({u.shape for u in us}) != 1:
        raise ValueError("vectors must share one shape")
    pairs = list(itertools.combinations(range(N), 2))
    plus = np.array([np.linalg.norm(us[t] + us[s]) for t, s in pairs])
    minus = np.array([np.linalg.norm(us[t] - us[s]) for t, s in pairs])
    total = np.linalg.norm(sum(us))
    return float(_family_value(
        params, N, plus.sum() ** 2, minus.sum() ** 2, (plus**2).sum(), (minus**2).sum(), total**2
    ))


def _assignment_count(n: int, N: int) -> int:
    count = math.factorial(n) ** (N - 1)
    if count > MAX_ASSIGNMENTS:
        raise SearchSpaceError(
            f"({n}!)^{N - 1} = {count} permutation assignments exceed the search cap of {MAX_ASSIGNMENTS}"
        )
    return count


def _multi_values(kmaps, rho, params, outer: bool):
    """Bound value for every gauge-fixed assignment, in lexicographic order."""
    kmaps = pad_maps(kmaps)
    N = len(kmaps)
    if N < 3:
        raise ValueError(f"the N-channel bounds need at least 3 channels, got {N}")
    n = len(kmaps[0])
    count = _assignment_count(n, N)

    # Gram matrix of all centered operators; row t*n + a is K~^t_a
    stack = _centered_stack(kmaps, rho).reshape(N * n, -1)
    gram = (stack.conj() @ stack.T).real
    diag = np.diag(gram)

    perms = np.array(list(itertools.permutations(range(n))))
    offsets = (np.arange(N) * n)[None, :, None]
    ti, si = (np.array(x) for x in zip(*itertools.combinations(range(N), 2)))
    ident = np.arange(n)

    out = np.empty(count)
    for start in range(0, count, _CHUNK):
        stop = min(start + _CHUNK, count)
        digits = np.unravel_index(np.arange(start, stop), (len(perms),) * (N - 1))
        P = np.concatenate(
            [np.broadcast_to(ident, (stop - start, 1, n))] + [perms[d][:, None, :] for d in digits],
            axis=1,
        )
        idx = P + offsets  # (A, N, n)
        u, v = idx[:, ti, :], idx[:, si, :]  # (A, pairs, n)
        cross = gram[u, v]
        plus = np.clip(diag[u] + diag[v] + 2 * cross, 0.0, None)
        minus = np.clip(diag[u] + diag[v] - 2 * cross, 0.0, None)
        total = np.clip(gram[idx[:, :, None, :], idx[:, None, :, :]].sum(axis=(1, 2)), 0.0, None)
        if outer:
            sq_plus = np.sqrt(plus.sum(axis=2)).sum(axis=1) ** 2
            sq_minus = np.sqrt(minus.sum(axis=2)).sum(axis=1) ** 2
        else:
            sq_plus = (np.sqrt(plus).sum(axis=1) ** 2).sum(axis=1)
            sq_minus = (np.sqrt(minus).sum(axis=1) ** 2).sum(axis=1)
        out[start:stop] = _family_value(
            params, N, sq_plus, sq_minus, plus.sum(axis=(1, 2)), minus.sum(axis=(1, 2)), total.sum(axis=1)
        )
    return kmaps, perms, out


def _decode_assignment(k: int, perms: np.ndarray, N: int) -> PermutationAssignment:
    n = perms.shape[1]
    digits = np.unravel_index(k, (len(perms),) * (N - 1)) if N > 1 else ()
    return PermutationAssignment((tuple(range(n)),) + tuple(tuple(int(j) for j in perms[d]) for d in digits))


def _multi_bound(name, kmaps, rho, params: BoundParams, outer: bool) -> BoundReport:
    kmaps, perms, values = _multi_values(kmaps, rho, params, outer)
    lhs = sum(channel_uncertainty(m, rho).value for m in kmaps)
    k = _lex_argmax(values)
    return BoundReport(name, lhs, float(values.max()), _decode_assignment(k, perms, len(kmaps)), params)


def sum_bound_thm3(channels: Sequence[KrausMap], rho: DensityMatrix, params: BoundParams) -> BoundReport:
    """
    N-channel sum bound with the norm inequality applied per Kraus index.

    For each index ``i`` the tuple ``(K~^1_{pi_1(i)}, ..., K~^N_{pi_N(i)})`` is
    bounded separately, so the square of the pairwise-norm sum is taken
    inside the sum over ``i``.
    """
    return _multi_bound("thm3", channels, rho, params, outer=False)


def sum_bound_thm4(channels: Sequence[KrausMap], rho: DensityMatrix, params: BoundParams) -> BoundReport:
    """
    N-channel sum bound with the norm inequality applied to stacked operators.

    Each channel contributes the column ``(K~^t_{pi_t(1)}, ..., K~^t_{pi_t(n)})``
    whose squared norm is its uncertainty; pairwise norms therefore sum over
    ``i`` before the square root.
    """
    return _multi_bound("thm4", channels, rho, params, outer=True)


def combined_bound(
    channels: Sequence[KrausMap],
    rho: DensityMatrix,
    params1: BoundParams = EXAMPLE_PARAMS[0],
    params2: BoundParams = EXAMPLE_PARAMS[1],
    params3: BoundParams = EXAMPLE_PARAMS[2],
) -> BoundReport:
    """Largest of the stacked LB1 and LB2 bounds and the per-index LB3 bound."""
    for p, want in ((params1, "LB1"), (params2, "LB2"), (params3, "LB3")):
        if p.variant != want:
            raise ValueError(f"expected {want} parameters, got {p.variant}")
    parts = {
        "thm4_LB1": sum_bound_thm4(channels, rho, params1),
        "thm4_LB2": sum_bound_thm4(channels, rho, params2),
        "thm3_LB3": sum_bound_thm3(channels, rho, params3),
    }
    # first listed wins ties
    source = max(parts, key=lambda name: parts[name].bound)
    win = parts[source]
    return BoundReport(
        "combined", win.lhs, win.bound, win.maximizer, win.params,
        source=source, constituents={k: r.bound for k, r in parts.items()},
    )
