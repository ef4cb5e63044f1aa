import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbmhaar.haar import (
    MAX_LEVEL,
    dyadic_arrays,
    haar_antiderivative,
    haar_eval,
    haar_eval_block,
    haar_eval_shifted,
    split_index,
    support_interval,
)

SQRT2 = np.sqrt(2.0)


def test_split_index_scaling_marker():
    idx = split_index(0)
    assert idx.is_scaling
    assert idx.j is None and idx.k is None


@pytest.mark.parametrize("n,j,k", [(1, 0, 0), (5, 2, 1), (2, 1, 0),
                                   (255, 7, 127), (256, 8, 0)])
def test_split_index_levels(n, j, k):
    idx = split_index(n)
    assert (idx.j, idx.k) == (j, k)
    assert n == 2**j + k
    assert 0 <= k < 2**j


def test_split_index_rejects_negative():
    with pytest.raises(ValueError):
        split_index(-1)


def test_haar_eval_examples():
    assert haar_eval(0, 0.3) == 1.0
    assert haar_eval(1, 0.25) == 1.0
    assert haar_eval(1, 0.75) == -1.0
    assert haar_eval(2, 0.2) == pytest.approx(SQRT2, abs=1e-15)


def test_haar_eval_right_endpoint_convention():
    # the last wavelet of each level takes its negative value at s = 1
    assert haar_eval(1, 1.0) == -1.0
    assert haar_eval(3, 1.0) == -SQRT2
    # interior right endpoints belong to the next wavelet
    assert haar_eval(2, 0.5) == 0.0
    assert haar_eval(3, 0.5) == SQRT2


def test_haar_eval_domain_error():
    with pytest.raises(ValueError):
        haar_eval(1, 1.5)
    with pytest.raises(ValueError):
        haar_eval(1, -0.1)


def test_haar_eval_shifted_examples():
    assert haar_eval_shifted(0, -0.5) == 1.0
    assert haar_eval_shifted(1, -0.75) == 1.0
    # s + 1 = 0.7 lies in the rising half of the (j=1, k=1) wavelet
    assert haar_eval_shifted(3, -0.3) == pytest.approx(SQRT2, abs=1e-15)
    with pytest.raises(ValueError):
        haar_eval_shifted(1, 0.5)


def test_antiderivative_examples():
    assert haar_antiderivative(0, 0.4) == pytest.approx(0.4)
    assert haar_antiderivative(1, 0.5) == pytest.approx(0.5)
    assert haar_antiderivative(1, 1.0) == 0.0  # vanishing moment
    with pytest.raises(ValueError):
        haar_antiderivative(1, -0.2)


@given(st.integers(min_value=1, max_value=2047),
       st.floats(min_value=0.0, max_value=1.0))
def test_support_property(n, s):
    sup = support_interval(n)
    inside = sup.a <= s <= sup.b
    if not inside:
        assert haar_eval(n, s) == 0.0
    else:
        assert abs(haar_eval(n, s)) in (0.0, 2.0 ** (sup.j / 2))


@given(st.integers(min_value=0, max_value=1023),
       st.floats(min_value=-1.0, max_value=0.0))
def test_shift_consistency(n, s):
    assert haar_eval_shifted(n, s) == haar_eval(n, s + 1.0)


@given(st.integers(min_value=1, max_value=511),
       st.floats(min_value=1e-6, max_value=1.0 - 1e-6))
@settings(max_examples=200)
def test_tent_slope_matches_eval(n, x):
    # one-sided difference quotient off the breakpoints equals the wavelet
    sup = support_interval(n)
    h = 2.0 ** -(sup.j + 8)
    if x + h > 1.0 or any(abs(x - edge) < 2 * h
                          for edge in (sup.a, sup.m, sup.b)):
        return
    slope = (haar_antiderivative(n, x + h) - haar_antiderivative(n, x)) / h
    assert slope == pytest.approx(haar_eval(n, x), abs=1e-6)


def test_tent_continuity_and_boundaries():
    for n in (1, 2, 5, 100, 255):
        assert haar_antiderivative(n, 0.0) == 0.0
        assert haar_antiderivative(n, 1.0) == 0.0
        xs = np.linspace(0.0, 1.0, 4097)
        vals = np.array([haar_antiderivative(n, float(x)) for x in xs])
        sup = support_interval(n)
        # max step bounded by amplitude * grid spacing (continuity)
        assert np.abs(np.diff(vals)).max() <= 2.0 ** (sup.j / 2) / 4096 + 1e-15


def test_orthonormality_sample():
    # exact integral via the finest-cell midpoint rule (piecewise constant)
    n_max = 63
    cells = 256
    mid = (np.arange(cells) + 0.5) / cells
    mat = np.array([[haar_eval(n, float(s)) for s in mid]
                    for n in range(n_max + 1)])
    gram = mat @ mat.T / cells
    assert np.abs(gram - np.eye(n_max + 1)).max() < 1e-12


def test_dyadic_arrays_match_split_index():
    j, k, amp, a, m, b = dyadic_arrays(1, 300)
    for i, n in enumerate(range(1, 301)):
        idx = split_index(n)
        assert j[i] == idx.j and k[i] == idx.k
        sup = support_interval(n)
        assert (a[i], m[i], b[i]) == (sup.a, sup.m, sup.b)
        assert amp[i] == 2.0 ** (idx.j / 2)


def test_dyadic_arrays_level_cap():
    with pytest.raises(ValueError):
        dyadic_arrays(2 ** (MAX_LEVEL + 1), 2 ** (MAX_LEVEL + 1))


def test_haar_eval_block_matches_scalar():
    s = 0.61
    block = haar_eval_block(0, 127, s)
    for n in range(128):
        assert block[n] == haar_eval(n, s)
