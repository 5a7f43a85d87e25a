"""
Random-matrix Monte Carlo estimates of tetilla and semicircle moments.

Large independent real symmetric Gaussian matrices ``X`` and ``Y`` behave
like free standard semicircular variables, so normalised traces of
``(XY + YX)/sqrt(2)`` and ``(X^2 - Y^2)/sqrt(2)`` approximate tetilla
moments.  Finite-size corrections are ``O(1/N)``.

Every trial draws from its own Philox stream keyed by
``(seed, stream * 2**32 + trial)``, with stream 0 for the product form,
1 for the difference-of-squares form and 2 for the plain semicircle.
Results therefore do not depend on the order in which trials run.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .combinatorics import catalan
from .errors import PreconditionError
from .transforms import tetilla_moment_closed

__all__ = [
    "SimConfig",
    "EmpiricalMoments",
    "trial_rng",
    "sample_gue",
    "tetilla_trace_moments",
    "alternative_representation_moments",
    "semicircle_trace_moments",
    "agreement_z",
]

MAX_N = 2048
MAX_TRIALS = 1000
MAX_K = 8

_STREAM_PRODUCT, _STREAM_SQUARES, _STREAM_SEMICIRCLE = 0, 1, 2


@dataclass(frozen=True)
class SimConfig:
    """Matrix size ``N``, number of ``trials``, 64-bit ``seed`` and highest moment order ``k_max``."""

    N: int = 512
    trials: int = 40
    seed: int = 0
    k_max: int = 8

    def __post_init__(self):
        if not 2 <= self.N <= MAX_N:
            raise PreconditionError(f"N must lie in [2, {MAX_N}], got {self.N}")
        if not 1 <= self.trials <= MAX_TRIALS:
            raise PreconditionError(f"trials must lie in [1, {MAX_TRIALS}], got {self.trials}")
        if not 1 <= self.k_max <= MAX_K:
            raise PreconditionError(f"k_max must lie in [1, {MAX_K}], got {self.k_max}")
        if not 0 <= self.seed < 2**64:
            raise PreconditionError("seed must be a non-negative 64-bit integer")


@dataclass(frozen=True)
class EmpiricalMoments:
    """Per-trial normalised traces ``samples[t, k-1] = Tr(W^k)/N`` and their summaries."""

    samples: np.ndarray
    targets: tuple

    @property
    def orders(self) -> list[int]:
        return list(range(1, self.samples.shape[1] + 1))

    @property
    def estimates(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        t = self.samples.shape[0]
        if t < 2:
            return np.full(self.samples.shape[1], math.nan)
        return self.samples.std(axis=0, ddof=1) / math.sqrt(t)

    def estimate(self, k: int) -> float:
        return float(self.estimates[k - 1])

    def z_scores(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.estimates - np.asarray(self.targets, dtype=float)) / self.stderr

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "estimate", "stderr", "target", "z"])
        for k, est, se, tgt, z in zip(self.orders, self.estimates, self.stderr, self.targets, self.z_scores()):
            w.writerow([k, repr(float(est)), repr(float(se)), str(tgt), repr(float(z))])
        return buf.getvalue()


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for one trial (Philox with a two-word key)."""
    key = np.array([seed, stream * 2**32 + trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_gue(N: int, rng: np.random.Generator) -> np.ndarray:
    """Real symmetric Gaussian (GOE) matrix scaled so its spectrum fills ``[-2, 2]``.

    Off-diagonal entries have variance ``1/N`` and diagonal entries
    ``2/N``, so ``E Tr(X^2)/N = 1 + 1/N``.  The name is kept for the
    familiar role; a complex Hermitian ensemble has the same limit.
    """
    if N < 2:
        raise PreconditionError("N must be at least 2")
    a = rng.standard_normal((N, N))
    return (a + a.T) / math.sqrt(2 * N)


def _trace_powers(w: np.ndarray, k_max: int) -> np.ndarray:
    n = w.shape[0]
    out = np.empty(k_max)
    power = w
    for k in range(k_max):
        out[k] = np.trace(power) / n
        if k + 1 < k_max:
            power = power @ w
    return out


def _simulate(cfg: SimConfig, stream: int, build, targets) -> EmpiricalMoments:
    samples = np.empty((cfg.trials, cfg.k_max))
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, t, stream)
        samples[t] = _trace_powers(build(rng), cfg.k_max)
    return EmpiricalMoments(samples, tuple(targets))


def _tetilla_targets(k_max: int):
    return [0 if k % 2 else tetilla_moment_closed(k // 2) for k in range(1, k_max + 1)]


def tetilla_trace_moments(cfg: SimConfig) -> EmpiricalMoments:
    """Trace moments of ``W = (XY + YX)/sqrt(2)``."""

    def build(rng):
        x, y = sample_gue(cfg.N, rng), sample_gue(cfg.N, rng)
        xy = x @ y
        return (xy + xy.T) / math.sqrt(2)

    return _simulate(cfg, _STREAM_PRODUCT, build, _tetilla_targets(cfg.k_max))


def alternative_representation_moments(cfg: SimConfig) -> EmpiricalMoments:
    """Trace moments of ``W = (X^2 - Y^2)/sqrt(2)``, which has the same limit law."""

    def build(rng):
        x, y = sample_gue(cfg.N, rng), sample_gue(cfg.N, rng)
        return (x @ x - y @ y) / math.sqrt(2)

    return _simulate(cfg, _STREAM_SQUARES, build, _tetilla_targets(cfg.k_max))


def semicircle_trace_moments(cfg: SimConfig) -> EmpiricalMoments:
    """Trace moments of a single matrix ``X``; the limits are Catalan numbers at even orders."""
    targets = [0 if k % 2 else catalan(k // 2) for k in range(1, cfg.k_max + 1)]
    return _simulate(cfg, _STREAM_SEMICIRCLE, lambda rng: sample_gue(cfg.N, rng), targets)


def agreement_z(a: EmpiricalMoments, b: EmpiricalMoments, k: int) -> float:
    """``(a_k - b_k) / sqrt(se_a^2 + se_b^2)`` for two independent estimators."""
    se = math.hypot(float(a.stderr[k - 1]), float(b.stderr[k - 1]))
    return (a.estimate(k) - b.estimate(k)) / se
