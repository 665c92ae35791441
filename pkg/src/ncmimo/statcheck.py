"""Two-sample distributional checks for the sampling layer.

Each check draws from two constructions that should share a law and
compares them coordinate-wise with a Kolmogorov-Smirnov test.  Reports
carry the statistic, the asymptotic p-value, and the seed so a failure
can be replayed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .params import ChannelDims, DomainError, derive
from .randmat import RngHandle, sample_gaussian, sample_matrix_beta, sample_wishart
from .bstm import noiseless_sv_sample

P_THRESHOLD = 0.01

LEMMA5_DEFAULT_DIMS = ((8, 2, 4), (10, 5, 100), (4, 2, 3))
LEMMA4_DEFAULT_CASES = ((2, 3, 2), (2, 2, 1), (3, 4, 2))


@dataclass(frozen=True)
class TestReport:
    """Outcome of one statistical or numerical check."""

    name: str
    statistic: float
    threshold: float
    p_value: float | None
    passed: bool
    n_samples: int
    seed: int

    def __str__(self) -> str:
        state = "pass" if self.passed else "FAIL"
        p = "-" if self.p_value is None else f"{self.p_value:.4g}"
        return (f"[{state}] {self.name}: stat={self.statistic:.4g} "
                f"threshold={self.threshold:g} p={p} n={self.n_samples} seed={self.seed}")


def ks_two_sample(a, b, name: str = "ks_two_sample", seed: int = 0) -> TestReport:
    """Asymptotic two-sample KS test; passes when p > 0.01."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size < 2 or b.size < 2:
        raise DomainError("ks_two_sample needs at least two observations per sample")
    res = stats.ks_2samp(a, b, method="asymp")
    p = float(res.pvalue)
    return TestReport(name=name, statistic=float(res.statistic),
                      threshold=P_THRESHOLD, p_value=p, passed=p > P_THRESHOLD,
                      n_samples=int(a.size), seed=seed)


def lemma5_suite(dims_list=None, n: int = 10_000,
                 rng: RngHandle | None = None) -> list[TestReport]:
    """Noiseless output spectrum vs the M x Q Gaussian spectrum, per index.

    For each (T, M, N) the singular values of D Phi^H H (sampled through
    the input pipeline) are compared against the singular values of an
    M x Q Gaussian matrix with per-entry variance T N / Q.
    """
    if dims_list is None:
        dims_list = LEMMA5_DEFAULT_DIMS
    if rng is None:
        rng = RngHandle(0)
    reports: list[TestReport] = []
    for (T, M, N) in dims_list:
        dp = derive(ChannelDims(T=T, M=M, N=N))
        rng_a, rng_b = rng.spawn(2)
        sv_a = noiseless_sv_sample(dp, rng_a, count=n)
        g = sample_gaussian(M, dp.Q, T * N / dp.Q, rng_b, count=n)
        sv_b = np.linalg.svd(g, compute_uv=False)
        for i in range(M):
            reports.append(ks_two_sample(
                sv_a[:, i], sv_b[:, i],
                name=f"noiseless-sv T={T} M={M} N={N} sv{i + 1}",
                seed=rng.seed))
    return reports


def lemma4_suite(cases=None, n_draws: int = 10_000,
                 rng: RngHandle | None = None) -> list[TestReport]:
    """Whitened matrix-Beta eigenvalues vs direct Wishart eigenvalues.

    For each (m, p, n): draw an independent scale S ~ W_m(p+n), factor
    S = U^H U, and compare the eigenvalues of U^H C U (C a matrix-Beta
    variate) with those of a W_m(p) draw, index by index.
    """
    if cases is None:
        cases = LEMMA4_DEFAULT_CASES
    if rng is None:
        rng = RngHandle(0)
    reports: list[TestReport] = []
    for (m, p, n) in cases:
        rng_s, rng_c, rng_w = rng.spawn(3)
        s = sample_wishart(m, p + n, 1.0, rng_s, count=n_draws)
        c = sample_matrix_beta(m, p, n, rng_c, count=n_draws)
        ell = np.linalg.cholesky(s)  # S = L L^H, U = L^H upper
        recon = ell @ c @ np.conj(np.swapaxes(ell, -1, -2))
        eig_a = np.linalg.eigvalsh(recon)[..., ::-1]
        w = sample_wishart(m, p, 1.0, rng_w, count=n_draws)
        eig_b = np.linalg.eigvalsh(w)[..., ::-1]
        for i in range(m):
            reports.append(ks_two_sample(
                eig_a[:, i], eig_b[:, i],
                name=f"beta-whitening m={m} p={p} n={n} eig{i + 1}",
                seed=rng.seed))
    return reports
