"""Monte Carlo what-if comparison of two oracles over sampled workloads.

Each sample prices both oracles and contributes the ratio of the new
optimal cost to the prior optimal cost; the summary reports mean, median,
and a normal-approximation 95% confidence interval.  Sampling uses the
counter-based Philox generator keyed by (seed, block), so any serial or
chunk-parallel execution draws bit-identical samples.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InputError
from .model import Oracle

_MASK64 = (1 << 64) - 1
# Samples per Philox stream; fixed so chunked and serial generation agree.
SAMPLE_BLOCK = 1024

DISTRIBUTIONS = ("uniform", "log-uniform")


@dataclass(frozen=True, eq=False)
class SampleSpec:
    """Where simulation workloads come from: a synthetic model or a trace."""

    count: int
    distribution: str = "uniform"
    low: float = 0.0
    high: float = 1.0
    seed: int = 0
    trace: np.ndarray | None = None

    def __post_init__(self):
        if self.count < 1:
            raise InputError(f"sample count must be >= 1, got {self.count}")
        if self.trace is not None:
            trace = np.asarray(self.trace, dtype=np.float64)
            if trace.ndim != 2:
                raise DimensionMismatch("trace must be a 2-D array of workload rows")
            if self.count > trace.shape[0]:
                raise InputError(
                    f"requested {self.count} samples but trace has {trace.shape[0]} rows"
                )
            object.__setattr__(self, "trace", trace)
            return
        if self.distribution not in DISTRIBUTIONS:
            raise InputError(f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}")
        if not (math.isfinite(self.low) and math.isfinite(self.high) and self.low < self.high):
            raise InputError(f"need finite low < high, got [{self.low}, {self.high})")
        if self.low < 0:
            raise InputError("synthetic workloads must be non-negative: low >= 0")
        if self.distribution == "log-uniform" and self.low <= 0:
            raise InputError("log-uniform needs low > 0")

    @classmethod
    def synthetic(cls, count, distribution="uniform", low=0.0, high=1.0, seed=0):
        return cls(count=count, distribution=distribution, low=low, high=high, seed=seed)

    @classmethod
    def from_trace(cls, trace, count=None):
        trace = np.asarray(trace, dtype=np.float64)
        return cls(count=trace.shape[0] if count is None else count, trace=trace)


@dataclass(frozen=True)
class ScenarioSummary:
    """Distribution of per-sample cost improvement ratios."""

    mean_improvement: float
    median_improvement: float
    ci95: tuple[float, float]
    samples_used: int
    rejected: int = 0

    def as_dict(self) -> dict:
        return {
            "mean_improvement": self.mean_improvement,
            "median_improvement": self.median_improvement,
            "ci95": list(self.ci95),
            "samples_used": self.samples_used,
            "rejected": self.rejected,
        }


def generate_samples(spec: SampleSpec, dims: int) -> np.ndarray:
    """count x dims workload samples; bit-identical for a fixed spec."""
    if dims < 1:
        raise InputError(f"dims must be >= 1, got {dims}")
    if spec.trace is not None:
        if spec.trace.shape[1] != dims:
            raise DimensionMismatch(
                f"trace rows have {spec.trace.shape[1]} entries, expected {dims}"
            )
        return spec.trace[: spec.count].copy()

    out = np.empty((spec.count, dims), dtype=np.float64)
    for block, lo in enumerate(range(0, spec.count, SAMPLE_BLOCK)):
        n = min(SAMPLE_BLOCK, spec.count - lo)
        key = np.array([spec.seed & _MASK64, block], dtype=np.uint64)
        gen = np.random.Generator(np.random.Philox(key=key))
        if spec.distribution == "uniform":
            out[lo : lo + n] = gen.uniform(spec.low, spec.high, size=(n, dims))
        else:
            out[lo : lo + n] = np.exp(
                gen.uniform(math.log(spec.low), math.log(spec.high), size=(n, dims))
            )
    return out


def _improvement_ratios(new_coeffs, old_coeffs, samples, lo, hi):
    """Per-sample ratios over samples[lo:hi]; NaN marks a zero-baseline sample.

    Each sample is priced with its own matrix-vector product, so the
    results do not depend on how samples are partitioned into chunks.
    """
    out = np.empty(hi - lo, dtype=np.float64)
    for k in range(lo, hi):
        s = samples[k]
        old_best = float(np.min(old_coeffs @ s))
        if old_best == 0.0:
            out[k - lo] = math.nan
        else:
            out[k - lo] = float(np.min(new_coeffs @ s)) / old_best
    return out


def simulate_scenario(
    oracle_prior: Oracle,
    oracle_new: Oracle,
    samples: np.ndarray,
    chunks: int = 1,
) -> ScenarioSummary:
    """Compare two oracles over workload samples.

    The improvement of a sample is (new optimal cost) / (prior optimal
    cost); samples whose prior cost is zero cannot be scored and are
    counted in ``rejected``.
    """
    if oracle_prior.clients != oracle_new.clients:
        raise DimensionMismatch("oracles disagree on client ordering")
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim == 1:
        samples = samples[None, :]
    if samples.ndim != 2 or samples.shape[1] != oracle_prior.n_params:
        raise DimensionMismatch(
            f"samples must be N x {oracle_prior.n_params}, got {samples.shape}"
        )
    if samples.shape[0] < 1:
        raise InputError("need at least one sample")
    if chunks < 1:
        raise InputError(f"chunks must be >= 1, got {chunks}")

    old_coeffs = np.ascontiguousarray(oracle_prior.coeff_rows())
    new_coeffs = np.ascontiguousarray(oracle_new.coeff_rows())

    n = samples.shape[0]
    if chunks == 1:
        ratios = _improvement_ratios(new_coeffs, old_coeffs, samples, 0, n)
    else:
        bounds = np.linspace(0, n, chunks + 1).astype(int)
        ranges = [(bounds[k], bounds[k + 1]) for k in range(chunks) if bounds[k] < bounds[k + 1]]
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            parts = list(
                pool.map(lambda rg: _improvement_ratios(new_coeffs, old_coeffs, samples, rg[0], rg[1]), ranges)
            )
        ratios = np.concatenate(parts)

    valid = ratios[~np.isnan(ratios)]
    rejected = int(np.isnan(ratios).sum())
    if valid.size == 0:
        raise InputError("every sample has zero prior cost; nothing to compare")

    mean = float(np.mean(valid))
    median = float(np.median(valid))
    if valid.size > 1:
        stderr = float(np.std(valid, ddof=1)) / math.sqrt(valid.size)
    else:
        stderr = 0.0
    ci = (mean - 1.96 * stderr, mean + 1.96 * stderr)
    return ScenarioSummary(
        mean_improvement=mean,
        median_improvement=median,
        ci95=ci,
        samples_used=int(valid.size),
        rejected=rejected,
    )
