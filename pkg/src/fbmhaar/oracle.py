"""Independent ground truth: adaptive quadrature for every coefficient
family and an exact covariance-based sampler for distributional checks.

Nothing here reuses the closed-form antiderivatives; the quadrature
integrates the defining inner products directly (QUADPACK, with algebraic
endpoint weights where the kernel is singular and a 1/x substitution for
the folded far-past integrand near zero), so agreement with
:mod:`fbmhaar.coefficients` is a genuine two-route check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .coefficients import CoefficientKind, HurstParams
from .expansion import GeneratorConfig, PathSample
from .haar import haar_eval, split_index, support_interval
from .noise import ORACLE_FAMILY, stream_normals

# Desk-scale cap: factorization is O(m**3) and this is a reference
# sampler, not a production generator.
MAX_CHOLESKY_GRID = 2048

_JITTER = 1e-12


class OracleConvergenceError(RuntimeError):
    """Quadrature failed to reach the requested tolerance; never silently
    returns a value."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the quadrature oracle.

    Endpoint singularities are located per family from (kind, t, H): the
    near-past kernel degrades at s = t with exponent H - 1/2, the
    recent-past kernel at s = 0 with the same exponent, and the folded
    far-past integrand at x = 0 inside an x**(1/2 - H) envelope.  Extra
    split points may be supplied for stress tests.
    """

    abs_tol: float = 1e-10
    max_subdivisions: int = 200
    extra_breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        if self.abs_tol <= 0.0:
            raise ValueError("abs_tol must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be at least 10")


DEFAULT_QUAD_SPEC = QuadratureSpec()


def _haar_breakpoints(n: int) -> list[float]:
    if n == 0:
        return [0.0, 1.0]
    sup = support_interval(n)
    return [sup.a, sup.m, sup.b]


def _pieces(points: list[float], lo: float, hi: float) -> list[tuple[float, float]]:
    cut = sorted({lo, hi, *(x for x in points if lo < x < hi)})
    return list(zip(cut[:-1], cut[1:]))


class _Accumulator:
    def __init__(self, spec: QuadratureSpec, label: str):
        self.spec = spec
        self.label = label
        self.value = 0.0
        self.err = 0.0

    def add(self, result: tuple) -> None:
        self.value += result[0]
        self.err += result[1]

    def finish(self) -> float:
        if self.err > self.spec.abs_tol:
            raise OracleConvergenceError(
                f"{self.label}: estimated error {self.err:.3e} exceeds "
                f"abs_tol {self.spec.abs_tol:.3e}")
        return self.value


def _quad_opts(spec: QuadratureSpec) -> dict:
    return {"epsabs": spec.abs_tol * 0.1, "epsrel": 1e-11,
            "limit": spec.max_subdivisions, "full_output": 1}


def _take(res) -> tuple[float, float]:
    # quad with full_output returns (y, abserr, infodict[, message[, explain]])
    return res[0], res[1]


def _quad_f1(t: float, p: HurstParams, n: int, spec: QuadratureSpec) -> float:
    if t == 0.0:
        return 0.0
    hm = p.h_minus_half
    acc = _Accumulator(spec, f"quad f1(t={t}, H={p.h}, n={n})")
    pieces = _pieces([*_haar_breakpoints(n), *spec.extra_breakpoints], 0.0, t)
    opts = _quad_opts(spec)
    for lo, hi in pieces:
        hvalue = haar_eval(n, 0.5 * (lo + hi))
        if hvalue == 0.0:
            continue
        if hi == t:
            # algebraic weight (t - s)**hm on the singular right endpoint
            acc.add(_take(quad(lambda s: hvalue, lo, hi,
                               weight="alg", wvar=(0.0, hm), **opts)))
        else:
            acc.add(_take(quad(lambda s: (t - s) ** hm * hvalue, lo, hi, **opts)))
    return acc.finish()


def _quad_f2(t: float, p: HurstParams, n: int, spec: QuadratureSpec) -> float:
    if p.is_half or t == 0.0:
        # kernel identically zero: (t+s)**0 - s**0 or both terms coincide
        return 0.0
    hm = p.h_minus_half
    acc = _Accumulator(spec, f"quad f2(t={t}, H={p.h}, n={n})")
    pieces = _pieces([*_haar_breakpoints(n), *spec.extra_breakpoints], 0.0, 1.0)
    opts = _quad_opts(spec)
    for lo, hi in pieces:
        hvalue = haar_eval(n, 0.5 * (lo + hi))
        if hvalue == 0.0:
            continue
        if lo == 0.0:
            # split the difference: the s**hm term is weight-singular at 0
            acc.add(_take(quad(lambda s: (t + s) ** hm * hvalue, lo, hi, **opts)))
            neg = _take(quad(lambda s: -hvalue, lo, hi,
                             weight="alg", wvar=(hm, 0.0), **opts))
            acc.add(neg)
        else:
            acc.add(_take(quad(
                lambda s: ((t + s) ** hm - s**hm) * hvalue, lo, hi, **opts)))
    return acc.finish()


def _quad_g(t: float, p: HurstParams, n: int, spec: QuadratureSpec) -> float:
    if t == 0.0:
        return 0.0
    e = p.h - 1.5
    acc = _Accumulator(spec, f"quad g(t={t}, H={p.h}, n={n})")
    opts = _quad_opts(spec)

    def far(y):
        # G(1/y) * tent-slope piece transformed by x = 1/y
        return (t + y) ** e - y**e

    if n == 0:
        acc.add(_take(quad(far, 1.0, np.inf, **opts)))
        return acc.finish()

    sup = support_interval(n)
    amp = 2.0 ** (sup.j / 2)

    def g_times_tent(x, tent):
        xi = 1.0 / x
        return ((t + xi) ** e - xi**e) * x**-3 * tent(x)

    if sup.k == 0:
        # rising half touches x = 0: substitute y = 1/x, tent amp*x
        acc.add(_take(quad(lambda y: amp * far(y), 1.0 / sup.m, np.inf, **opts)))
    else:
        acc.add(_take(quad(
            lambda x: g_times_tent(x, lambda u: amp * (u - sup.a)),
            sup.a, sup.m, **opts)))
    acc.add(_take(quad(
        lambda x: g_times_tent(x, lambda u: amp * (sup.b - u)),
        sup.m, sup.b, **opts)))
    return acc.finish()


def quad_coefficient(kind: CoefficientKind, t: float, p: HurstParams, n: int,
                     spec: QuadratureSpec = DEFAULT_QUAD_SPEC) -> float:
    """Numerically integrate the defining inner product of one coefficient."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"time must lie in [0, 1], got {t}")
    if n < 0:
        raise ValueError(f"index must be nonnegative, got {n}")
    split_index(n)  # validates level range
    if kind is CoefficientKind.F1:
        return _quad_f1(t, p, n, spec)
    if kind is CoefficientKind.F2:
        return _quad_f2(t, p, n, spec)
    return _quad_g(t, p, n, spec)


def exact_covariance(t1: float, t2: float, h: float) -> float:
    """Fractional Brownian covariance (1/2)(t1**2H + t2**2H - |t1-t2|**2H)."""
    for t in (t1, t2):
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"times must lie in [0, 1], got {t}")
    e = 2.0 * h
    return 0.5 * (t1**e + t2**e - abs(t1 - t2) ** e)


def covariance_matrix(times: np.ndarray, h: float) -> np.ndarray:
    """Covariance matrix of the process on a strictly positive grid."""
    times = np.asarray(times, dtype=np.float64)
    e = 2.0 * h
    tt = times[:, None]
    return 0.5 * (tt**e + tt.T**e - np.abs(tt - tt.T) ** e)


def cholesky_factor(times: np.ndarray, h: float) -> tuple[np.ndarray, bool]:
    """Lower Cholesky factor of the covariance; one jitter retry.

    Returns (L, jitter_used).  On failure reports the offending smallest
    eigenvalue rather than guessing further.
    """
    cov = covariance_matrix(times, h)
    try:
        return np.linalg.cholesky(cov), False
    except np.linalg.LinAlgError:
        pass
    min_eig = float(np.linalg.eigvalsh(cov)[0])
    try:
        bumped = cov + _JITTER * np.eye(len(cov))
        return np.linalg.cholesky(bumped), True
    except np.linalg.LinAlgError:
        raise OracleConvergenceError(
            f"covariance numerically non-PSD (min eigenvalue {min_eig:.3e}); "
            f"jitter {_JITTER} did not repair it") from None


def cholesky_sample(times: np.ndarray, h: float, seed: int,
                    n_paths: int) -> list[PathSample]:
    """Exact-in-distribution sample paths on a fixed grid.

    A leading t = 0 is allowed and handled deterministically (the process
    is pinned to zero there); the factorization acts on the positive
    times.  The returned configs record the grid size in ``n_terms``,
    since no series truncation is involved.
    """
    times = np.array(times, dtype=np.float64)
    if times.size == 0:
        raise ValueError("need at least one time instant")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing")
    if times[0] < 0.0 or times[-1] > 1.0:
        raise ValueError("times must lie in [0, 1]")
    if n_paths < 1:
        raise ValueError(f"n_paths must be positive, got {n_paths}")
    with_zero = times[0] == 0.0
    pos = times[1:] if with_zero else times
    if pos.size == 0:
        values = np.zeros((n_paths, 1))
        pos_part = values
    else:
        if pos.size > MAX_CHOLESKY_GRID:
            raise ValueError(
                f"grid of {pos.size} exceeds the {MAX_CHOLESKY_GRID}-point "
                f"cap of the exact sampler")
        factor, _ = cholesky_factor(pos, h)
        z = stream_normals(seed, ORACLE_FAMILY,
                           n_paths * pos.size).reshape(n_paths, pos.size)
        pos_part = z @ factor.T
    config = GeneratorConfig(params=HurstParams.from_hurst(h),
                             n_terms=max(1, len(times)), seed=seed, workers=1)
    out = []
    for row in range(n_paths):
        if pos.size == 0:
            vals = np.zeros(1)
        elif with_zero:
            vals = np.concatenate(([0.0], pos_part[row]))
        else:
            vals = pos_part[row].copy()
        out.append(PathSample(times=times, values=vals, config=config))
    return out
