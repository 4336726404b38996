"""Monte Carlo study of transfer fidelity under static coupling disorder.

Each sample multiplies every coupling by (1 + R_j) with R_j drawn
independently and uniformly from [-r, r], rediagonalizes the perturbed
chain, and evaluates the transfer overlap at the fixed design time tau.
Samples use counter-based Philox streams keyed by (seed, sample index), so
results are bit-identical regardless of worker count or evaluation order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import betaln, polygamma, psi

from .dynamics import eigendecompose, transfer_overlap
from .errors import EigensolverError
from .solver import ChainCouplings

__all__ = [
    "DisorderConfig",
    "DisorderReport",
    "BetaFit",
    "Histogram",
    "sample_stream",
    "perturb_couplings",
    "run_experiment",
    "fit_beta",
    "histogram",
]

FIT_CLAMP = 1e-9
DEFAULT_BINS = 50


@dataclass(frozen=True)
class DisorderConfig:
    """Disorder level r, sample count, RNG seed, and fixed transfer time."""

    r: float
    samples: int
    seed: int
    tau: float

    def __post_init__(self):
        if not 0.0 <= self.r < 1.0:
            raise ValueError("disorder level r must lie in [0, 1) to keep couplings positive")
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if not self.tau > 0:
            raise ValueError("tau must be positive")

    def to_dict(self) -> dict:
        return {"r": self.r, "samples": self.samples, "seed": self.seed, "tau": self.tau}

    @classmethod
    def from_dict(cls, d: dict) -> "DisorderConfig":
        return cls(float(d["r"]), int(d["samples"]), int(d["seed"]), float(d["tau"]))


@dataclass(frozen=True, eq=False)
class BetaFit:
    """Beta-distribution parameters with their implied mean and variance."""

    alpha: float
    beta: float
    mu: float
    sigma2: float
    method: str  # "mle" | "moments"

    @classmethod
    def from_shape(cls, alpha: float, beta: float, method: str) -> "BetaFit":
        s = alpha + beta
        return cls(alpha, beta, alpha / s, alpha * beta / (s * s * (s + 1.0)), method)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "mu": self.mu,
            "sigma2": self.sigma2,
            "method": self.method,
        }


@dataclass(frozen=True, eq=False)
class Histogram:
    """Equal-width bins over [0, 1]; left-closed, last bin right-closed."""

    edges: np.ndarray
    counts: np.ndarray

    def to_dict(self) -> dict:
        return {"edges": self.edges.tolist(), "counts": self.counts.tolist()}

    def to_csv(self) -> str:
        lines = ["bin_left,bin_right,count"]
        for lo, hi, n in zip(self.edges[:-1], self.edges[1:], self.counts):
            lines.append(f"{float(lo)!r},{float(hi)!r},{int(n)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class DisorderReport:
    """Sampled overlaps with their mean, histogram, and beta fit.

    fit is None when the samples cannot support one (fewer than 10 samples
    or zero variance, e.g. r = 0).
    """

    overlaps: np.ndarray
    mean: float
    histogram: Histogram
    fit: BetaFit | None

    def to_dict(self, include_overlaps: bool = True) -> dict:
        d = {
            "mean": self.mean,
            "histogram": self.histogram.to_dict(),
            "fit": self.fit.to_dict() if self.fit is not None else None,
        }
        if include_overlaps:
            d["overlaps"] = self.overlaps.tolist()
        return d

    def to_json(self, include_overlaps: bool = True, **kwargs) -> str:
        return json.dumps(self.to_dict(include_overlaps), **kwargs)

    def overlaps_csv(self) -> str:
        lines = ["sample,f"] + [f"{i},{float(f)!r}" for i, f in enumerate(self.overlaps)]
        return "\n".join(lines) + "\n"


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent substream for one sample, keyed by (seed, index)."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(index)]))


def perturb_couplings(c: ChainCouplings, r: float, draw: np.random.Generator) -> ChainCouplings:
    """Randomize couplings: b_j -> b_j * (1 + R_j), R_j ~ U[-r, r] independently.

    Local fields are untouched.  The result is generally not persymmetric,
    so the mirror-symmetry invariant is waived via the flag.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError("disorder level r must lie in [0, 1)")
    relative = draw.uniform(-r, r, size=c.b.size)
    return ChainCouplings(c.a, c.b * (1.0 + relative), persymmetric=False)


def _overlap_block(c: ChainCouplings, cfg: DisorderConfig, lo: int, hi: int) -> np.ndarray:
    out = np.empty(hi - lo)
    for i in range(lo, hi):
        perturbed = perturb_couplings(c, cfg.r, sample_stream(cfg.seed, i))
        try:
            es = eigendecompose(perturbed)
        except EigensolverError as exc:
            raise EigensolverError(f"sample {i}: {exc}", index=i) from exc
        out[i - lo] = transfer_overlap(es, cfg.tau)
    return out


def default_workers() -> int:
    """Worker cap from CHAINFORGE_THREADS (default 1 = serial)."""
    try:
        return max(1, int(os.environ.get("CHAINFORGE_THREADS", "1")))
    except ValueError:
        return 1


def run_experiment(
    c: ChainCouplings,
    cfg: DisorderConfig,
    bins: int = DEFAULT_BINS,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> DisorderReport:
    """Sample the overlap distribution of the randomly perturbed chain.

    Each sample derives its own RNG substream from (seed, index), perturbs
    the couplings, and rediagonalizes, so the overlap list is deterministic
    for a given (c, cfg) no matter how the work is partitioned.  progress,
    if given, is called as progress(done, total) at block boundaries.
    """
    total = cfg.samples
    overlaps = np.empty(total)
    block = 200 if progress is not None or workers > 1 else total
    starts = range(0, total, block)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(lo, pool.submit(_overlap_block, c, cfg, lo, min(lo + block, total))) for lo in starts]
            done = 0
            for lo, fut in futures:
                chunk = fut.result()
                overlaps[lo : lo + chunk.size] = chunk
                done += chunk.size
                if progress is not None:
                    progress(done, total)
    else:
        done = 0
        for lo in starts:
            hi = min(lo + block, total)
            overlaps[lo:hi] = _overlap_block(c, cfg, lo, hi)
            done = hi
            if progress is not None:
                progress(done, total)

    fit = None
    # variance below the clamp resolution (1e-9)^2 means a degenerate spike;
    # a beta fit would return meaningless shape parameters
    if total >= 10 and float(np.var(overlaps)) > FIT_CLAMP**2:
        fit = fit_beta(overlaps)
    return DisorderReport(
        overlaps=overlaps,
        mean=float(overlaps.mean()),
        histogram=histogram(overlaps, bins),
        fit=fit,
    )


def _beta_loglik(alpha: float, beta: float, mean_log: float, mean_log1m: float) -> float:
    return (alpha - 1.0) * mean_log + (beta - 1.0) * mean_log1m - float(betaln(alpha, beta))


def fit_beta(samples, max_iter: int = 100) -> BetaFit:
    """Maximum-likelihood beta fit via damped Newton iteration.

    Starts from the method-of-moments estimate (alpha + beta =
    mu(1-mu)/var - 1) and falls back to it (method="moments") if Newton
    fails to converge within max_iter iterations.  Samples are clamped away
    from {0, 1} by 1e-9 before taking logs.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 10:
        raise ValueError("need at least 10 samples for a beta fit")
    x = np.clip(x, FIT_CLAMP, 1.0 - FIT_CLAMP)
    mu = float(x.mean())
    var = float(x.var())
    if var <= 0.0:
        raise ValueError("zero sample variance; beta fit undefined")

    s = mu * (1.0 - mu) / var - 1.0
    if s <= 0:
        alpha, beta = 1.0, 1.0
    else:
        alpha, beta = mu * s, (1.0 - mu) * s
    moments = BetaFit.from_shape(alpha, beta, "moments")

    mean_log = float(np.log(x).mean())
    mean_log1m = float(np.log1p(-x).mean())
    ll = _beta_loglik(alpha, beta, mean_log, mean_log1m)
    for _ in range(max_iter):
        psi_ab = float(psi(alpha + beta))
        grad = np.array(
            [mean_log - float(psi(alpha)) + psi_ab, mean_log1m - float(psi(beta)) + psi_ab]
        )
        if np.abs(grad).max() < 1e-12:
            return BetaFit.from_shape(alpha, beta, "mle")
        tri = float(polygamma(1, alpha + beta))
        hess = np.array(
            [[tri - float(polygamma(1, alpha)), tri], [tri, tri - float(polygamma(1, beta))]]
        )
        try:
            step = np.linalg.solve(hess, -grad)
        except np.linalg.LinAlgError:
            return moments
        # damp: stay in the positive quadrant and never decrease the likelihood
        t = 1.0
        for _ in range(60):
            na, nb = alpha + t * step[0], beta + t * step[1]
            if na > 0 and nb > 0:
                nll = _beta_loglik(na, nb, mean_log, mean_log1m)
                if math.isfinite(nll) and nll >= ll:
                    break
            t /= 2.0
        else:
            return moments
        if abs(na - alpha) <= 1e-12 * alpha and abs(nb - beta) <= 1e-12 * beta:
            return BetaFit.from_shape(na, nb, "mle")
        alpha, beta, ll = na, nb, nll
    return moments


def histogram(samples, bins: int) -> Histogram:
    """Equal-width histogram over [0, 1]; f = 1 lands in the last bin."""
    if bins < 1:
        raise ValueError("need at least one bin")
    x = np.clip(np.asarray(samples, dtype=float), 0.0, 1.0)
    counts, edges = np.histogram(x, bins=bins, range=(0.0, 1.0))
    return Histogram(edges=edges, counts=counts)
