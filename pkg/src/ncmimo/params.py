"""Channel dimensions and the four derived coherence parameters.

A coherence block spans T symbols; the transmitter has M antennas and the
receiver N.  Everything downstream assumes the standing constraint
M <= min(N, floor(T/2)), which keeps the optimal input full rank and the
high-SNR expansion valid.  Validation happens once, here; other modules
accept a DerivedParams and do not re-check.
"""

from __future__ import annotations

from dataclasses import dataclass


class DimensionError(ValueError):
    """Channel dimensions violate the standing assumptions."""


class DomainError(ValueError):
    """Argument outside the domain of the requested quantity."""


class RegimeError(ValueError):
    """Requested closed form does not exist in this dimension regime."""


class ConfluenceError(ValueError):
    """Inputs too close to a removable singularity to evaluate stably."""


# Relative gap below which squared singular values, squared gains or the
# lambda weights are treated as confluent and rejected.
REL_GAP_TOL = 1e-9


@dataclass(frozen=True)
class ChannelDims:
    """Block length T, transmit antennas M, receive antennas N."""

    T: int
    M: int
    N: int


@dataclass(frozen=True)
class DerivedParams:
    """Coherence parameters derived from ChannelDims.

    P = max(N, T-M), Q = min(N, T-M), rmax = max(N, T), rmin = min(N, T).
    large_mimo is true iff T < M+N, the regime where the optimal input
    gain matrix is genuinely random.
    """

    dims: ChannelDims
    P: int
    Q: int
    rmax: int
    rmin: int
    large_mimo: bool

    @property
    def T(self) -> int:
        return self.dims.T

    @property
    def M(self) -> int:
        return self.dims.M

    @property
    def N(self) -> int:
        return self.dims.N


def derive(dims: ChannelDims) -> DerivedParams:
    """Validate dims and compute the derived parameters.

    Raises DimensionError naming the violated constraint.
    """
    T, M, N = dims.T, dims.M, dims.N
    for label, v in (("T", T), ("M", M), ("N", N)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise DimensionError(f"{label} must be a positive integer, got {v!r}")
    if T < 2:
        raise DimensionError(f"T >= 2 required, got T={T}")
    if M > T // 2:
        raise DimensionError(f"M <= floor(T/2) required: M={M}, floor(T/2)={T // 2}")
    if M > N:
        raise DimensionError(f"M <= N required: M={M}, N={N}")
    return DerivedParams(
        dims=dims,
        P=max(N, T - M),
        Q=min(N, T - M),
        rmax=max(N, T),
        rmin=min(N, T),
        large_mimo=T < M + N,
    )


def rho_from_db(snr_db: float) -> float:
    """Linear SNR rho from its dB value."""
    return 10.0 ** (snr_db / 10.0)
