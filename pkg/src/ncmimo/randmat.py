"""Samplers and densities for the random-matrix ensembles.

Complex Gaussian matrices, complex Wishart (including the rank-deficient
pseudo-Wishart), the complex matrix-variate Beta built from two Wisharts,
and isotropically distributed truncated unitaries (Haar on the Stiefel
manifold).  Every sampler takes an RngHandle and is deterministic given
its seed; an optional count stacks independent draws along a leading
axis so Monte Carlo loops stay in compiled code.
"""

from __future__ import annotations

import numpy as np

from .params import DomainError
from .specfun import LOG_PI, log_multivariate_gamma

# Generator recorded in output metadata; PCG64 has a documented,
# collision-resistant stream-split rule via SeedSequence.spawn.
RNG_ALGORITHM = "pcg64"

# Eigenvalues of a singular Beta draw this close to 1 belong to the
# deterministic unit block; eigensolver backward error at these sizes is
# orders of magnitude below this threshold.
UNIT_EIG_TOL = 1e-8


class RngHandle:
    """Seeded random stream with deterministic child-stream splitting."""

    def __init__(self, seed: int, _ss: np.random.SeedSequence | None = None):
        self.seed = int(seed)
        self._ss = np.random.SeedSequence(self.seed) if _ss is None else _ss
        self.generator = np.random.Generator(np.random.PCG64(self._ss))

    def spawn(self, k: int) -> list["RngHandle"]:
        """k independent child streams, reproducible from the parent seed."""
        return [RngHandle(self.seed, _ss=child) for child in self._ss.spawn(k)]


def _shape(m: int, n: int, count: int | None) -> tuple[int, ...]:
    return (m, n) if count is None else (count, m, n)


def sample_gaussian(m: int, n: int, variance: float, rng: RngHandle,
                    count: int | None = None) -> np.ndarray:
    """m x n matrix of iid circularly-symmetric CN(0, variance) entries."""
    if m < 1 or n < 1:
        raise DomainError(f"sample_gaussian requires m, n >= 1, got m={m}, n={n}")
    if variance <= 0:
        raise DomainError(f"sample_gaussian requires variance > 0, got {variance}")
    gen = rng.generator
    shape = _shape(m, n, count)
    scale = np.sqrt(variance / 2.0)
    return scale * (gen.standard_normal(shape) + 1j * gen.standard_normal(shape))


def sample_wishart(m: int, n: int, scale: float, rng: RngHandle,
                   count: int | None = None) -> np.ndarray:
    """A = B B^H with B an m x n matrix of iid CN(0, scale) entries.

    n < m is allowed and gives the singular (pseudo-) Wishart of rank n.
    """
    b = sample_gaussian(m, n, scale, rng, count=count)
    a = b @ np.conj(np.swapaxes(b, -1, -2))
    return 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))


def sample_matrix_beta(m: int, p: int, n: int, rng: RngHandle,
                       count: int | None = None) -> np.ndarray:
    """Complex matrix-variate Beta_m(p, n) draw.

    C = (T^H)^{-1} A T^{-1} with A ~ Wishart(m, p, I), B ~ Wishart(m, n, I)
    independent and A + B = T^H T, T upper-triangular with positive
    diagonal.  With the standard lower Cholesky A + B = L L^H this is
    T = L^H, so C = L^{-1} A L^{-H}.  Eigenvalues lie in [0, 1]; when
    n < m exactly m - n of them equal 1 (the singular Beta).
    """
    if not p >= m >= 1:
        raise DomainError(f"sample_matrix_beta requires p >= m >= 1, got m={m}, p={p}")
    if n < 1:
        raise DomainError(f"sample_matrix_beta requires n >= 1, got n={n}")
    a = sample_wishart(m, p, 1.0, rng, count=count)
    b = sample_wishart(m, n, 1.0, rng, count=count)
    try:
        ell = np.linalg.cholesky(a + b)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"A + B numerically singular in Beta construction: {exc}")
    x = np.linalg.solve(ell, a)
    c = np.conj(np.swapaxes(np.linalg.solve(ell, np.conj(np.swapaxes(x, -1, -2))),
                            -1, -2))
    return 0.5 * (c + np.conj(np.swapaxes(c, -1, -2)))


def sample_isotropic_unitary(T: int, M: int, rng: RngHandle,
                             count: int | None = None) -> np.ndarray:
    """T x M isotropically distributed matrix with orthonormal columns.

    QR of a complex Gaussian matrix with the phases fixed so that the
    triangular factor has real positive diagonal; without that correction
    the factor is not Haar-uniform on the Stiefel manifold.
    """
    if not T >= M >= 1:
        raise DomainError(f"sample_isotropic_unitary requires T >= M >= 1, got T={T}, M={M}")
    z = sample_gaussian(T, M, 1.0, rng, count=count)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def _check_eigs(a: np.ndarray, k: int, label: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (k,):
        raise DomainError(f"{label}: expected {k} eigenvalues, got shape {a.shape}")
    if np.any(a <= 0) or np.any(a >= 1):
        raise DomainError(f"{label}: eigenvalues must lie strictly in (0, 1)")
    if np.any(np.diff(a) >= 0):
        raise DomainError(f"{label}: eigenvalues must be strictly decreasing")
    return a


def beta_eig_pdf(m: int, p: int, n: int, a) -> float:
    """Joint pdf of the ordered eigenvalues of a Beta_m(p, n) matrix.

    For n >= m this is the density of all m eigenvalues,

        pi^{m(m-1)}/Gamma_m(m) * Gamma_m(p+n)/(Gamma_m(p) Gamma_m(n))
        * prod a_i^{p-m} (1-a_i)^{n-m} * prod_{i<j} (a_i - a_j)^2.

    For 0 < n < m the top m-n eigenvalues equal 1 almost surely and `a`
    holds only the n free ones; the density follows the same pattern with
    the index set reduced to dimension n:

        pi^{n(n-1)}/Gamma_n(n) * Gamma_n(p+n)/(Gamma_n(m) Gamma_n(p+n-m))
        * prod a_i^{p-m} (1-a_i)^{m-n} * prod_{i<j} (a_i - a_j)^2.

    Computed in log domain and exponentiated.
    """
    if not p >= m >= 1:
        raise DomainError(f"beta_eig_pdf requires p >= m >= 1, got m={m}, p={p}")
    if n < 1:
        raise DomainError(f"beta_eig_pdf requires n >= 1, got n={n}")
    if n >= m:
        a = _check_eigs(a, m, "beta_eig_pdf")
        log_c = (
            m * (m - 1) * LOG_PI
            - log_multivariate_gamma(m, m)
            + log_multivariate_gamma(m, p + n)
            - log_multivariate_gamma(m, p)
            - log_multivariate_gamma(m, n)
        )
        pow_a, pow_1ma = p - m, n - m
    else:
        a = _check_eigs(a, n, "beta_eig_pdf (singular case)")
        log_c = (
            n * (n - 1) * LOG_PI
            - log_multivariate_gamma(n, n)
            + log_multivariate_gamma(n, p + n)
            - log_multivariate_gamma(n, m)
            - log_multivariate_gamma(n, p + n - m)
        )
        pow_a, pow_1ma = p - m, m - n
    log_f = log_c + pow_a * np.log(a).sum() + pow_1ma * np.log1p(-a).sum()
    diffs = a[:, None] - a[None, :]
    log_f += 2.0 * np.log(diffs[np.triu_indices(len(a), k=1)]).sum()
    return float(np.exp(log_f))
