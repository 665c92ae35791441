"""Real special functions behind every capacity constant.

All values are natural logs (nats).  The multivariate gamma here is the
complex one: Gamma_m(a) = pi^{m(m-1)/2} prod_{k=1}^m Gamma(a-k+1).
"""

from __future__ import annotations

import numpy as np
from scipy import special

from .params import DomainError

LOG_PI = float(np.log(np.pi))
LOG_2 = float(np.log(2.0))
EULER_GAMMA = float(np.euler_gamma)


def log_gamma(a: float) -> float:
    """ln Gamma(a) for a > 0."""
    if a <= 0:
        raise DomainError(f"log_gamma requires a > 0, got a={a}")
    return float(special.gammaln(a))


def digamma(a: float) -> float:
    """psi(a) for a > 0."""
    if a <= 0:
        raise DomainError(f"digamma requires a > 0, got a={a}")
    return float(special.digamma(a))


def log_multivariate_gamma(m: int, a: float) -> float:
    """ln Gamma_m(a), complex multivariate gamma of dimension m.

    Requires a > m - 1 so every factor Gamma(a-k+1) is in-domain.
    """
    if m < 1:
        raise DomainError(f"log_multivariate_gamma requires m >= 1, got m={m}")
    if a <= m - 1:
        raise DomainError(
            f"log_multivariate_gamma requires a > m-1: a={a}, m={m}")
    ks = np.arange(1, m + 1)
    return float(m * (m - 1) / 2 * LOG_PI + special.gammaln(a - ks + 1).sum())


def expected_logdet_wishart(M: int, N: int) -> float:
    """E[ln det(H H^H)] for an M x N matrix H of iid CN(0,1) entries.

    Equals sum_{i=1}^{M} psi(N-i+1); requires 1 <= M <= N.
    """
    if not 1 <= M <= N:
        raise DomainError(f"expected_logdet_wishart requires 1 <= M <= N, got M={M}, N={N}")
    idx = np.arange(1, M + 1)
    return float(special.digamma(N - idx + 1).sum())


def log_stiefel_volume(n: int, m: int, reduced: bool = False) -> float:
    """ln of the volume of the Stiefel manifold S(n, m).

    |S(n,m)| = 2^m pi^{mn} / Gamma_m(n).  With reduced=True, returns the
    volume of the submanifold with phase ambiguity removed,
    |S~(n,m)| = |S(n,m)| / (2 pi)^m.
    """
    if m < 1 or m > n:
        raise DomainError(f"log_stiefel_volume requires n >= m >= 1, got n={n}, m={m}")
    v = m * LOG_2 + m * n * LOG_PI - log_multivariate_gamma(m, n)
    if reduced:
        v -= m * (LOG_2 + LOG_PI)
    return v
