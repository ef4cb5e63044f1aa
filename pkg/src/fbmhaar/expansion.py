"""Truncated wavelet expansion of fractional Brownian motion on [0, 1].

The path value at time t is a fixed linear functional of the noise bundle:

    W(t) = c_H * ( sum_{n=0}^{N} <f1_t, H_n> l1[n]
                 + sum_{n=0}^{N} <f2_t, H_n> l2[n]
                 - (H - 1/2) * sum_{n=1}^{N} g_n(t) l3[n] )

The far-past component carries no separate load on the terminal variate:
in the underlying construction the terminal variate and the level-zero
variate of the inverse-time series are the same Gaussian up to sign, and
the drift factor ((t+1)**(H-1/2) - 1) cancels identically against the
n = 0 series term, leaving the series over n >= 1.  (Equivalently: the
squared drift factor equals (H-1/2)**2 g_0**2, and the variance of the
far-past integral equals (H-1/2)**2 sum_{n>=1} g_n**2 exactly.)  The
bundle still carries the terminal variate as part of its 3N + 4 layout.

Evaluations at distinct times are independent given the bundle, so a path
over many time instants parallelizes trivially and the result never
depends on the worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientKind, HurstParams, coeff_matrix, coeff_vector
from .noise import NoiseBundle, draw_bundle

_U64_MAX = 2**64 - 1


@dataclass(frozen=True)
class GeneratorConfig:
    """Everything that determines a path: parameters, truncation, seed,
    and the parallelism degree (0 = one worker per CPU)."""

    params: HurstParams
    n_terms: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.n_terms < 1:
            raise ValueError(f"n_terms must be at least 1, got {self.n_terms}")
        if self.workers < 0:
            raise ValueError(f"workers must be nonnegative, got {self.workers}")
        if not 0 <= self.seed <= _U64_MAX:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class PathSample:
    """One realization evaluated on a time grid, with its provenance."""

    times: np.ndarray
    values: np.ndarray
    config: GeneratorConfig

    def __post_init__(self):
        self.times.setflags(write=False)
        self.values.setflags(write=False)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path values must be finite")
        _check_times(self.times)
        if self.times.size and self.times[0] == 0.0 and self.values[0] != 0.0:
            raise ValueError("a path must start at zero when t = 0 is present")


def _check_times(times: np.ndarray) -> np.ndarray:
    if times.size == 0:
        raise ValueError("need at least one time instant")
    if times.min() < 0.0 or times.max() > 1.0:
        raise ValueError("times must lie in [0, 1]")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing")
    return times


def _fsum_dot(coeffs: np.ndarray, loads: np.ndarray) -> float:
    # exactly rounded sum of the elementwise products, ascending n
    return math.fsum((coeffs * loads).tolist())


def _require_capacity(bundle: NoiseBundle, n_terms: int) -> None:
    if bundle.n_terms < n_terms:
        raise ValueError(
            f"bundle holds {bundle.n_terms + 1} loads per series, "
            f"need {n_terms + 1}")


def eval_w1(t: float, p: HurstParams, n_terms: int, bundle: NoiseBundle) -> float:
    """Near-past component: series of F1 coefficients against l1."""
    _require_capacity(bundle, n_terms)
    if t == 0.0:
        return 0.0
    coeffs = coeff_vector(CoefficientKind.F1, t, p, n_terms).values
    return p.c_h * _fsum_dot(coeffs, bundle.l1[: n_terms + 1])


def eval_w2(t: float, p: HurstParams, n_terms: int, bundle: NoiseBundle) -> float:
    """Recent-past component: series of F2 coefficients against l2;
    identically zero at H = 1/2."""
    _require_capacity(bundle, n_terms)
    if t == 0.0 or p.is_half:
        return 0.0
    coeffs = coeff_vector(CoefficientKind.F2, t, p, n_terms).values
    return p.c_h * _fsum_dot(coeffs, bundle.l2[: n_terms + 1])


def eval_w3(t: float, p: HurstParams, n_terms: int, bundle: NoiseBundle) -> float:
    """Far-past component: g-series over n >= 1 against l3; identically
    zero at H = 1/2 and at t = 0 (see module docstring for why no
    terminal-variate term appears)."""
    _require_capacity(bundle, n_terms)
    if t == 0.0 or p.is_half or n_terms < 1:
        return 0.0
    coeffs = coeff_vector(CoefficientKind.G, t, p, n_terms).values
    return -p.c_h * p.h_minus_half * _fsum_dot(
        coeffs[1:], bundle.l3[1: n_terms + 1])


def eval_w(t: float, p: HurstParams, n_terms: int, bundle: NoiseBundle) -> float:
    """Full truncated expansion value at one time instant."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time must lie in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    return (eval_w1(t, p, n_terms, bundle)
            + eval_w2(t, p, n_terms, bundle)
            + eval_w3(t, p, n_terms, bundle))


class CoefficientTable:
    """Cached coefficient rows for repeated evaluation on a fixed grid.

    Opt-in alternative to the default fused evaluation: materializes the
    three (len(times), N+1) coefficient matrices once, after which each
    path costs three compensated dot products per time instant.  Values
    are bit-identical to :func:`eval_w` at every time.
    """

    def __init__(self, times: np.ndarray, params: HurstParams, n_terms: int):
        times = np.array(times, dtype=np.float64)
        _check_times(times)
        if n_terms < 1:
            raise ValueError(f"n_terms must be at least 1, got {n_terms}")
        self.times = times
        self.params = params
        self.n_terms = n_terms
        self._f1 = coeff_matrix(CoefficientKind.F1, times, params, 0, n_terms)
        self._f2 = coeff_matrix(CoefficientKind.F2, times, params, 0, n_terms)
        self._g = coeff_matrix(CoefficientKind.G, times, params, 0, n_terms)
        for mat in (self._f1, self._f2, self._g):
            mat.setflags(write=False)

    def value_at(self, i: int, bundle: NoiseBundle) -> float:
        """Path value at grid index i; composed exactly like eval_w so the
        two routes agree bit for bit."""
        t = self.times[i]
        if t == 0.0:
            return 0.0
        p = self.params
        n = self.n_terms
        w = p.c_h * _fsum_dot(self._f1[i], bundle.l1[: n + 1])
        if not p.is_half:
            w = w + p.c_h * _fsum_dot(self._f2[i], bundle.l2[: n + 1])
            w = w + -p.c_h * p.h_minus_half * _fsum_dot(
                self._g[i, 1:], bundle.l3[1: n + 1])
        return w

    def evaluate(self, bundle: NoiseBundle) -> np.ndarray:
        _require_capacity(bundle, self.n_terms)
        return np.array([self.value_at(i, bundle)
                         for i in range(len(self.times))])


def _effective_workers(workers: int) -> int:
    return workers if workers > 0 else (os.cpu_count() or 1)


def generate_path(times: np.ndarray, config: GeneratorConfig,
                  table: CoefficientTable | None = None) -> PathSample:
    """Evaluate one realization at the requested time instants.

    Draws the bundle for ``config.seed`` once, then fills each output slot
    independently; instants are partitioned across ``config.workers``
    threads and the values are identical for every worker count and any
    permutation of the requested instants.
    """
    times = np.array(times, dtype=np.float64)
    _check_times(times)
    if table is None:
        table = CoefficientTable(times, config.params, config.n_terms)
    elif (table.n_terms != config.n_terms or table.params != config.params
          or not np.array_equal(table.times, times)):
        raise ValueError("coefficient table does not match this request")
    bundle = draw_bundle(config.seed, config.n_terms)
    values = np.empty(len(times))
    workers = _effective_workers(config.workers)
    if workers == 1 or len(times) == 1:
        for i in range(len(times)):
            values[i] = table.value_at(i, bundle)
    else:
        chunks = np.array_split(np.arange(len(times)), workers)

        def fill(idx: np.ndarray) -> None:
            for i in idx:
                values[i] = table.value_at(i, bundle)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, [c for c in chunks if c.size]))
    return PathSample(times=times, values=values, config=config)


def generate_ensemble(times: np.ndarray, config: GeneratorConfig,
                      n_paths: int, seed_stride: int = 1) -> list[PathSample]:
    """Independent realizations with seeds ``seed, seed + stride, ...``.

    The coefficient table is built once and shared read-only across paths;
    paths are evaluated in parallel and each equals what
    :func:`generate_path` returns for its seed.
    """
    if n_paths < 1:
        raise ValueError(f"n_paths must be positive, got {n_paths}")
    times = np.array(times, dtype=np.float64)
    _check_times(times)
    table = CoefficientTable(times, config.params, config.n_terms)
    seeds = [(config.seed + i * seed_stride) & _U64_MAX for i in range(n_paths)]
    configs = [GeneratorConfig(params=config.params, n_terms=config.n_terms,
                               seed=s, workers=config.workers) for s in seeds]

    def one(cfg: GeneratorConfig) -> PathSample:
        bundle = draw_bundle(cfg.seed, cfg.n_terms)
        return PathSample(times=times, values=table.evaluate(bundle), config=cfg)

    workers = _effective_workers(config.workers)
    if workers == 1 or n_paths == 1:
        return [one(cfg) for cfg in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, configs))
