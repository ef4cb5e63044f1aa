"""Haar wavelet system on [0, 1] and its translate on [-1, 0].

Flat indexing: index 0 is the constant scaling function; index n >= 1
decomposes as n = 2**j + k with level j >= 0 and shift 0 <= k < 2**j.
The wavelet at (j, k) lives on [k/2**j, (k+1)/2**j), closed on the right
when the right endpoint is 1, and takes the values +2**(j/2) on the left
half and -2**(j/2) on the right half of its support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Levels above this lose exact dyadic endpoints in float64.
MAX_LEVEL = 40


@dataclass(frozen=True)
class WaveletIndex:
    """Flat index n with its (level, shift) decomposition; n = 0 is the
    scaling function and carries no (j, k)."""

    n: int
    j: int | None
    k: int | None

    @property
    def is_scaling(self) -> bool:
        return self.n == 0


@dataclass(frozen=True)
class DyadicInterval:
    """Support [a, b] of the level-j, shift-k wavelet with midpoint m.

    Endpoints are exact dyadic rationals for j <= MAX_LEVEL.
    """

    j: int
    k: int
    a: float
    m: float
    b: float


def split_index(n: int) -> WaveletIndex:
    """Decompose a flat index into (level, shift); total on n >= 0."""
    if n < 0:
        raise ValueError(f"flat index must be nonnegative, got {n}")
    if n == 0:
        return WaveletIndex(0, None, None)
    j = n.bit_length() - 1
    return WaveletIndex(n, j, n - (1 << j))


def support_interval(n: int) -> DyadicInterval:
    """Dyadic support of wavelet index n >= 1."""
    idx = split_index(n)
    if idx.is_scaling:
        raise ValueError("index 0 is the scaling function; its support is [0, 1]")
    j, k = idx.j, idx.k
    if j > MAX_LEVEL:
        raise ValueError(f"level {j} exceeds supported maximum {MAX_LEVEL}")
    scale = 2.0 ** -j
    return DyadicInterval(
        j=j,
        k=k,
        a=k * scale,
        m=(2 * k + 1) * 2.0 ** -(j + 1),
        b=(k + 1) * scale,
    )


def haar_eval(n: int, s: float) -> float:
    """Value of the n-th Haar function at s in [0, 1].

    The support is half-open except at the right edge of [0, 1]:
    the last wavelet of every level takes its negative value at s = 1.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"argument must lie in [0, 1], got {s}")
    if n == 0:
        return 1.0
    sup = support_interval(n)
    amp = 2.0 ** (sup.j / 2)
    if sup.a <= s < sup.m:
        return amp
    if sup.m <= s < sup.b:
        return -amp
    if s == sup.b == 1.0:
        return -amp
    return 0.0


def haar_eval_shifted(n: int, s: float) -> float:
    """Value at s in [-1, 0] of the basis translated by -1."""
    if not -1.0 <= s <= 0.0:
        raise ValueError(f"argument must lie in [-1, 0], got {s}")
    return haar_eval(n, s + 1.0)


def haar_antiderivative(n: int, x: float) -> float:
    """Integral of the n-th Haar function over [0, x].

    For n >= 1 this is the tent supported on [a, b]: rising with slope
    2**(j/2) up to the midpoint, falling back to zero at b.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"argument must lie in [0, 1], got {x}")
    if n == 0:
        return x
    sup = support_interval(n)
    amp = 2.0 ** (sup.j / 2)
    if x <= sup.a or x >= sup.b:
        return 0.0
    if x <= sup.m:
        return amp * (x - sup.a)
    return amp * (sup.b - x)


def dyadic_arrays(n_lo: int, n_hi: int) -> tuple[np.ndarray, ...]:
    """Vectorized (j, k, amp, a, m, b) for flat indices n_lo..n_hi (both >= 1).

    Used by the coefficient closed forms; endpoints are exact dyadics.
    """
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError(f"need 1 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    # frexp gives n = mant * 2**e with mant in [0.5, 1), so the level is e - 1
    _, e = np.frexp(n.astype(np.float64))
    j = (e - 1).astype(np.int64)
    if int(j[-1]) > MAX_LEVEL:
        raise ValueError(f"level {int(j[-1])} exceeds supported maximum {MAX_LEVEL}")
    k = (n - (np.int64(1) << j)).astype(np.float64)
    jf = j.astype(np.float64)
    amp = 2.0 ** (jf / 2)
    a = k * 2.0 ** -jf
    m = (2 * k + 1) * 2.0 ** -(jf + 1)
    b = (k + 1) * 2.0 ** -jf
    return jf, k, amp, a, m, b


def haar_eval_block(n_lo: int, n_hi: int, s: float) -> np.ndarray:
    """haar_eval for a contiguous index block, vectorized over n."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"argument must lie in [0, 1], got {s}")
    lo = max(n_lo, 1)
    out = np.zeros(n_hi - n_lo + 1)
    if n_lo == 0:
        out[0] = 1.0
    if n_hi >= 1:
        _, _, amp, a, m, b = dyadic_arrays(lo, n_hi)
        pos = (a <= s) & (s < m)
        neg = ((m <= s) & (s < b)) | ((s == 1.0) & (b == 1.0))
        out[lo - n_lo:] = np.where(pos, amp, np.where(neg, -amp, 0.0))
    return out
