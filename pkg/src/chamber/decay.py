"""Exponential decay law for one nucleus and for an N-nucleus sample.

Survival of a single nucleus is exp(-t/mean_life).  A sample of N
independent nuclei splits into "no nucleus decayed" versus "one or more
decayed" with norms survival**N and 1 - survival**N; the sample-level
arithmetic is done in log space so macroscopic N (1e23) never underflows.

Note: some presentations write the survival law with a spurious 1/tau
prefactor, which is dimensionally the decay-time *density*, not a
probability, and would violate survival(0) = 1.  This module implements
the probability exp(-t/tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DecayLaw",
    "Sample",
    "survival_single",
    "decayed_single",
    "sample_branch_norms",
    "calibrate_mean_life",
    "sample_decay_events",
]

# realized decay events above this count would not fit in memory
_MAX_REALIZED_EVENTS = 10**8


@dataclass(frozen=True)
class DecayLaw:
    """Mean-life parameterization of a single radioactive nucleus."""

    mean_life: float

    def __post_init__(self):
        if not (self.mean_life > 0.0 and math.isfinite(self.mean_life)):
            raise ValueError(f"mean_life must be positive and finite, got {self.mean_life}")


@dataclass(frozen=True)
class Sample:
    """N statistically independent nuclei sharing one decay law."""

    n_nuclei: int
    law: DecayLaw

    def __post_init__(self):
        if self.n_nuclei < 1:
            raise ValueError(f"n_nuclei must be >= 1, got {self.n_nuclei}")


def _check_time(t: float) -> None:
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")


def survival_single(law: DecayLaw, t: float) -> float:
    """Probability that one nucleus has not decayed after time t."""
    _check_time(t)
    return math.exp(-t / law.mean_life)


def decayed_single(law: DecayLaw, t: float) -> float:
    """Probability that one nucleus decayed in [0, t].

    Computed as 1 - survival_single so the pair sums to 1 exactly.
    """
    return 1.0 - survival_single(law, t)


def log_sample_survival(sample: Sample, t: float) -> float:
    """log of the no-decay norm for the whole sample; safe for N ~ 1e23."""
    _check_time(t)
    return -(t / sample.law.mean_life) * sample.n_nuclei


def sample_branch_norms(sample: Sample, t: float) -> tuple[float, float]:
    """(no-decay, one-or-more-decays) probabilities for the whole sample.

    Returns (N1, N2) with N1 = survival**n_nuclei computed in log space
    and N2 = 1 - N1, so the pair sums to 1 exactly.
    """
    n1 = math.exp(log_sample_survival(sample, t))
    return n1, 1.0 - n1


def calibrate_mean_life(n_nuclei: int, horizon: float) -> DecayLaw:
    """Mean life for which an n-nucleus sample is 50/50 at the horizon.

    The unique solution of survival**n = 1/2 at t = horizon is
    tau = n * horizon / ln 2 (single-nucleus survival 2**(-1/n)).
    """
    if n_nuclei < 1:
        raise ValueError(f"n_nuclei must be >= 1, got {n_nuclei}")
    if horizon <= 0.0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    return DecayLaw(n_nuclei * horizon / math.log(2.0))


def sample_decay_events(sample: Sample, window: float, rng_seed) -> np.ndarray:
    """One Monte Carlo realization of the decay times within [0, window].

    Each nucleus decays at an independent exponential time; times beyond
    the window are omitted.  Returns the sorted array of decay times.
    Reproducible for a fixed seed (PCG64).

    ``rng_seed`` may be an int or a ``numpy.random.Generator`` (useful
    for per-trial seed streams).
    """
    _check_time(window)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    tau = sample.law.mean_life
    n = sample.n_nuclei
    p = -math.expm1(-window / tau)
    if n * p > _MAX_REALIZED_EVENTS:
        raise ValueError(
            f"expected number of decays {n * p:.3g} exceeds the realizable limit"
        )
    if n <= 10**7:
        k = int(rng.binomial(n, p))
    else:
        # huge N, tiny p: Poisson limit of the binomial count
        k = int(rng.poisson(n * p))
    if k == 0:
        return np.empty(0)
    # inverse CDF of the exponential truncated to [0, window]
    u = rng.random(k)
    times = -tau * np.log1p(-u * p)
    return np.sort(times)
