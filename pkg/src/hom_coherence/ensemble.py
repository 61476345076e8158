"""Spectral ensembles of photon pairs and their averaged observables.

Randomness is drawn in fixed blocks of ``BLOCK_SIZE`` pairs, each from its
own generator seeded by ``(seed, stream, block index)``.  The value for pair
``j`` therefore depends only on the seed and ``j``; worker threads merely
decide which blocks get filled first.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .exceptions import ConfigError, DomainError
from .model import Convention, ModelParams, SpdcPair, output_intensities, pair_coincidence, swapped_intensities

BLOCK_SIZE = 8192

_SPECTRUM_STREAM = 0
_Q_STREAM = 1


class Shape(enum.Enum):
    RECT = "rect"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class SpectrumConfig:
    """Spectral distribution of pair detunings.

    ``bandwidth`` is the half-width of the uniform support for RECT and the
    standard deviation for GAUSSIAN, both in rad/s.
    """

    shape: Shape
    bandwidth: float
    n_pairs: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if not (self.bandwidth > 0 and math.isfinite(self.bandwidth)):
            raise ConfigError(f"bandwidth must be positive and finite, got {self.bandwidth}")
        if self.n_pairs < 1:
            raise ConfigError(f"n_pairs must be >= 1, got {self.n_pairs}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True, eq=False)
class PairEnsemble:
    """Array form of a list of :class:`SpdcPair`.

    Indexing with an integer yields an ``SpdcPair``; slicing yields another
    ensemble.  Model functions broadcast over the two arrays directly.
    """

    delta_omega: np.ndarray
    q_weight: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.delta_omega, dtype=float)
        w = np.ascontiguousarray(self.q_weight, dtype=float)
        if d.shape != w.shape:
            raise ConfigError("delta_omega and q_weight must have the same shape")
        object.__setattr__(self, "delta_omega", d)
        object.__setattr__(self, "q_weight", w)

    @classmethod
    def from_pairs(cls, pairs: Iterable[SpdcPair]) -> "PairEnsemble":
        pairs = list(pairs)
        return cls(np.array([p.delta_omega for p in pairs], dtype=float),
                   np.array([p.q_weight for p in pairs], dtype=float))

    def __len__(self):
        return len(self.delta_omega)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return PairEnsemble(self.delta_omega[idx], self.q_weight[idx])
        return SpdcPair(float(self.delta_omega[idx]), float(self.q_weight[idx]))

    def __iter__(self):
        for j in range(len(self)):
            yield self[j]

    def column(self) -> "PairEnsemble":
        """View with shape (N, 1) so that a row vector of delays broadcasts to (N, T)."""
        return PairEnsemble(self.delta_omega[:, None], self.q_weight[:, None])


def as_ensemble(pairs) -> PairEnsemble:
    if isinstance(pairs, PairEnsemble):
        ens = pairs
    elif isinstance(pairs, SpdcPair):
        ens = PairEnsemble.from_pairs([pairs])
    else:
        ens = PairEnsemble.from_pairs(pairs)
    if len(ens) == 0:
        raise ConfigError("pair ensemble is empty")
    return ens


@dataclass(frozen=True)
class IntensitySummary:
    mean_ic: float
    mean_id: float


@dataclass(frozen=True, eq=False)
class CorrelationCurve:
    """Ensemble coincidence versus delay.

    ``per_pair`` holds normalized single-pair traces 2 R_j / I0^2 with shape
    (n_pairs, len(tau_grid)) when requested.
    """

    tau_grid: np.ndarray
    r_raw: np.ndarray
    r_norm: np.ndarray
    i0: float = 1.0
    per_pair: Optional[np.ndarray] = None


def resolve_workers(workers: Optional[int]) -> int:
    if workers is None:
        return max(1, min(8, os.cpu_count() or 1))
    if workers < 1:
        raise ConfigError(f"worker count must be positive, got {workers}")
    return workers


def _map(fn, items: Sequence, workers: Optional[int]):
    workers = resolve_workers(workers)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _block_rng(seed: int, stream: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, block)))


def _blocked_draws(n: int, seed: int, stream: int, draw, workers: Optional[int]) -> np.ndarray:
    starts = list(range(0, n, BLOCK_SIZE))

    def fill(start):
        size = min(BLOCK_SIZE, n - start)
        return draw(_block_rng(seed, stream, start // BLOCK_SIZE), size)

    return np.concatenate(_map(fill, starts, workers))


def sample_spectrum(cfg: SpectrumConfig, workers: Optional[int] = None) -> PairEnsemble:
    """Draw ``cfg.n_pairs`` detunings i.i.d. from the configured spectrum, all weights 1."""
    bw = cfg.bandwidth
    if cfg.shape is Shape.RECT:
        def draw(rng, size):
            return rng.uniform(-bw, bw, size)
    else:
        def draw(rng, size):
            return rng.normal(0.0, bw, size)
    delta = _blocked_draws(cfg.n_pairs, cfg.seed, _SPECTRUM_STREAM, draw, workers)
    return PairEnsemble(delta, np.ones_like(delta))


def apply_q_weight(pairs, q: float, seed: int, workers: Optional[int] = None) -> PairEnsemble:
    """Give each pair a fixed weight drawn uniformly from [1 - q, 1].

    ``q = 0`` returns the ensemble unchanged.
    """
    if not 0.0 <= q <= 1.0:
        raise ConfigError(f"q must lie in [0, 1], got {q}")
    ens = as_ensemble(pairs)
    if q == 0.0:
        return ens
    weights = _blocked_draws(len(ens), seed, _Q_STREAM,
                             lambda rng, size: rng.uniform(1.0 - q, 1.0, size), workers)
    return PairEnsemble(ens.delta_omega, weights)


def mean_intensities(pairs, tau: float, p: ModelParams) -> IntensitySummary:
    """Port intensities averaged over both path-photon terms, (1/2N) sum [I_j + I'_j]."""
    ens = as_ensemble(pairs)
    ic, id_ = output_intensities(ens, tau, p)
    ic_s, id_s = swapped_intensities(ens, tau, p)
    n2 = 2 * len(ens)
    return IntensitySummary(float(np.sum(ic + ic_s) / n2), float(np.sum(id_ + id_s) / n2))


def correlation_at(pairs, tau: float, p: ModelParams) -> float:
    """Ensemble mean of the single-pair coincidence at one delay."""
    ens = as_ensemble(pairs)
    return float(np.mean(pair_coincidence(ens, tau, p)))


def pair_traces(pairs, tau_grid, p: ModelParams) -> np.ndarray:
    """Normalized single-pair curves 2 R_j(tau) / I0^2, shape (N, T)."""
    ens = as_ensemble(pairs)
    tau = np.asarray(tau_grid, dtype=float)
    return pair_coincidence(ens.column(), tau[None, :], p) / (p.i0 ** 2 / 2)


def _check_grid(tau_grid) -> np.ndarray:
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size == 0:
        raise ConfigError("tau grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(tau)):
        raise ConfigError("tau grid must be finite")
    if np.any(np.diff(tau) <= 0):
        raise ConfigError("tau grid must be strictly increasing")
    return tau


def correlation_sweep(pairs, tau_grid, p: ModelParams, keep_traces: bool = False,
                      workers: Optional[int] = None) -> CorrelationCurve:
    """Evaluate the ensemble coincidence on every delay of ``tau_grid``.

    Each delay is reduced independently over the full ensemble in pair
    order, so the result does not depend on ``workers``.
    """
    ens = as_ensemble(pairs)
    tau = _check_grid(tau_grid)
    r_raw = np.array(_map(lambda t: correlation_at(ens, t, p), list(tau), workers))
    r_norm = r_raw / (p.i0 ** 2 / 2)
    traces = pair_traces(ens, tau, p) if keep_traces else None
    return CorrelationCurve(tau, r_raw, r_norm, p.i0, traces)


def default_tau_grid(bandwidth: float, n_points: int = 400, span: float = 10.0) -> np.ndarray:
    """Uniform delay grid through tau = 0 reaching -span/bandwidth.

    With ``half = n_points // 2`` the points are ``k * tau_max / half`` for
    ``k = -half .. n_points - 1 - half``.  An odd count is symmetric; an even
    count stops one step short of +tau_max so that tau = 0 stays on the grid.
    """
    if n_points < 2:
        raise ConfigError(f"tau grid needs at least 2 points, got {n_points}")
    if not (bandwidth > 0 and span > 0):
        raise ConfigError("bandwidth and span must be positive")
    half = n_points // 2
    step = span / bandwidth / half
    return (np.arange(n_points) - half) * step


def _is_quadrature_phase(theta0: float) -> bool:
    return abs(abs(theta0) - math.pi / 2) <= 1e-12


def analytic_dip(shape, bandwidth: float, theta0: float, tau, convention=Convention.EQ8):
    """Closed-form normalized dip for theta0 = +/-pi/2.

    RECT gives 1 - sin(k B tau)/(k B tau), GAUSSIAN gives 1 - exp(-k^2 B^2 tau^2 / 2),
    with k = 2 under EQ8 and k = 4 under PRODUCT45.
    """
    if not _is_quadrature_phase(theta0):
        raise DomainError(f"analytic_dip needs theta0 = +/-pi/2, got {theta0}")
    shape = Shape(shape)
    k = 2.0 if Convention(convention) is Convention.EQ8 else 4.0
    x = k * bandwidth * np.asarray(tau, dtype=float)
    if shape is Shape.RECT:
        out = 1.0 - np.sinc(x / np.pi)
    else:
        out = 1.0 - np.exp(-0.5 * x * x)
    return float(out) if out.ndim == 0 else out
