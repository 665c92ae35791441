"""Capacity-achieving input sampling and block-fading channel simulation.

The optimal input factors as X = Phi D with Phi isotropically distributed
on the Stiefel manifold and D a random nonnegative diagonal.  For
T >= M+N the diagonal is deterministic, D = sqrt(T) I (USTM); otherwise
D = sqrt(TN/Q) D~ where the squared entries of D~ are the ordered
eigenvalues of a Beta_M(T-M, M+N-T) matrix (BSTM).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DerivedParams, DomainError, rho_from_db
from .randmat import (
    RngHandle,
    sample_gaussian,
    sample_isotropic_unitary,
    sample_matrix_beta,
)


@dataclass(frozen=True)
class GainDiagonal:
    """Diagonal of the input gain matrix D: nonincreasing, nonnegative."""

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise DomainError(f"GainDiagonal needs a 1-D vector, got shape {d.shape}")
        if np.any(d < 0):
            raise DomainError("GainDiagonal entries must be nonnegative")
        if np.any(np.diff(d) > 0):
            raise DomainError("GainDiagonal entries must be nonincreasing")
        object.__setattr__(self, "d", d)

    @property
    def M(self) -> int:
        return self.d.size


def _gain_entries(dp: DerivedParams, rng: RngHandle, count: int | None,
                  ustm: bool) -> np.ndarray:
    T, M, N = dp.T, dp.M, dp.N
    k = 1 if count is None else count
    if ustm or not dp.large_mimo:
        d = np.full((k, M), np.sqrt(float(T)))
    else:
        c = sample_matrix_beta(M, T - M, M + N - T, rng, count=k)
        lam = np.linalg.eigvalsh(c)[..., ::-1]  # descending
        # clip eigensolver round-off just outside [0, 1]
        lam = np.clip(lam, 0.0, 1.0)
        d = np.sqrt(T * N / dp.Q) * np.sqrt(lam)
    return d


def sample_gain(dp: DerivedParams, rng: RngHandle, count: int | None = None,
                ustm: bool = False) -> GainDiagonal | np.ndarray:
    """Draw the input gain diagonal.

    T >= M+N gives the deterministic USTM vector sqrt(T)*(1,..,1); in the
    large-MIMO regime the squared entries are scaled ordered eigenvalues
    of a Beta_M(T-M, M+N-T) draw, largest first.  With ustm=True the
    deterministic USTM diagonal is returned even when T < M+N, which is
    the suboptimal scheme the rate-gain comparisons are about.  With a
    count, returns a (count, M) array of stacked diagonals instead.
    """
    d = _gain_entries(dp, rng, count, ustm)
    return GainDiagonal(d=d[0]) if count is None else d


def sample_input(dp: DerivedParams, rng: RngHandle, count: int | None = None,
                 ustm: bool = False) -> np.ndarray:
    """Draw X = Phi D, a T x M input block (stacked when count is given)."""
    T, M = dp.T, dp.M
    k = 1 if count is None else count
    phi = sample_isotropic_unitary(T, M, rng, count=k)
    d = _gain_entries(dp, rng, count=k, ustm=ustm)
    x = phi * d[:, None, :]
    return x[0] if count is None else x


def simulate_channel(X: np.ndarray, N: int, snr_db: float,
                     rng: RngHandle, count: int | None = None) -> np.ndarray:
    """One coherence block of the channel: Y = sqrt(rho/M) X H + W.

    H (M x N) and W (T x N) are fresh iid CN(0,1) draws per block.  X may
    be a single T x M block or a stack of them; a count with a single X
    repeats that block over independent fading and noise draws.
    """
    X = np.asarray(X)
    if N < 1:
        raise DomainError(f"simulate_channel requires N >= 1, got N={N}")
    if X.ndim == 2:
        batch = count
    elif X.ndim == 3:
        if count is not None and count != X.shape[0]:
            raise DomainError("count conflicts with the leading axis of X")
        batch = X.shape[0]
    else:
        raise DomainError(f"X must be T x M or stacked, got shape {X.shape}")
    T, M = X.shape[-2], X.shape[-1]
    h = sample_gaussian(M, N, 1.0, rng, count=batch)
    w = sample_gaussian(T, N, 1.0, rng, count=batch)
    return np.sqrt(rho_from_db(snr_db) / M) * (X @ h) + w


def noiseless_sv_sample(dp: DerivedParams, rng: RngHandle,
                        count: int | None = None) -> np.ndarray:
    """Ordered singular values of D H for a fresh (D, H) pair.

    Returns the M values sorted decreasing; their law is the structural
    identity checked by the noiseless-sv validation suite.
    """
    M, N = dp.M, dp.N
    k = 1 if count is None else count
    d = _gain_entries(dp, rng, count=k, ustm=False)
    h = sample_gaussian(M, N, 1.0, rng, count=k)
    sv = np.linalg.svd(d[:, :, None] * h, compute_uv=False)
    return sv[0] if count is None else sv
