import numpy as np
import pytest

from fbmhaar.coefficients import (
    CoefficientKind,
    HurstParams,
    coeff_matrix,
    coeff_vector,
)
from fbmhaar.oracle import exact_covariance
from fbmhaar.expansion import (
    CoefficientTable,
    GeneratorConfig,
    PathSample,
    eval_w,
    eval_w1,
    eval_w2,
    eval_w3,
    generate_ensemble,
    generate_path,
)
from fbmhaar.noise import NoiseBundle, draw_bundle, extend_bundle

P025 = HurstParams.from_hurst(0.25)
P03 = HurstParams.from_hurst(0.3)
P05 = HurstParams.from_hurst(0.5)
P07 = HurstParams.from_hurst(0.7)
P075 = HurstParams.from_hurst(0.75)


def plain_dot(coeffs, loads):
    # independent of the compensated path: naive left-to-right accumulation
    total = 0.0
    for c, l in zip(coeffs, loads):
        total += float(c) * float(l)
    return total


def synthetic_bundle(n_terms, fill):
    arr = np.full(n_terms + 1, fill, dtype=np.float64)
    return NoiseBundle(seed=0, n_terms=n_terms, l1=arr.copy(),
                       l2=arr.copy(), l3=arr.copy(), lstar=fill)


class TestComponents:
    def test_w1_zero_time(self):
        b = draw_bundle(3, 15)
        assert eval_w1(0.0, P03, 15, b) == 0.0

    def test_w1_terminal_brownian(self):
        # at H = 1/2 and t = 1 only the scaling coefficient survives
        b = draw_bundle(11, 31)
        assert eval_w1(1.0, P05, 31, b) == pytest.approx(b.l1[0], abs=1e-15)

    def test_w1_against_plain_dot(self):
        b = draw_bundle(7, 255)
        coeffs = coeff_vector(CoefficientKind.F1, 0.5, P03, 255).values
        expected = P03.c_h * plain_dot(coeffs, b.l1)
        assert eval_w1(0.5, P03, 255, b) == pytest.approx(expected, abs=1e-12)

    def test_w2_zero_cases(self):
        b = draw_bundle(5, 15)
        assert eval_w2(0.0, P025, 15, b) == 0.0
        assert eval_w2(0.7, P05, 15, b) == 0.0

    def test_w2_single_term(self):
        b = draw_bundle(5, 15)
        f2_0 = coeff_vector(CoefficientKind.F2, 1.0, P025, 0).values[0]
        expected = P025.c_h * f2_0 * b.l2[0]
        assert eval_w2(1.0, P025, 0, b) == pytest.approx(expected, abs=1e-15)

    def test_w3_zero_cases(self):
        b = draw_bundle(5, 15)
        assert eval_w3(0.7, P05, 15, b) == 0.0
        assert eval_w3(0.0, P075, 15, b) == 0.0
        # the series starts at n = 1, so truncation at 0 leaves nothing
        assert eval_w3(1.0, P075, 0, b) == 0.0

    def test_w3_single_term(self):
        b = draw_bundle(5, 15)
        g1 = coeff_vector(CoefficientKind.G, 1.0, P075, 1).values[1]
        expected = -P075.c_h * P075.h_minus_half * g1 * b.l3[1]
        assert eval_w3(1.0, P075, 1, b) == pytest.approx(expected, abs=1e-15)

    def test_w3_ignores_terminal_variate(self):
        # same arrays, different terminal variate: identical far-past value
        b = draw_bundle(5, 15)
        tweaked = NoiseBundle(seed=b.seed, n_terms=b.n_terms, l1=b.l1.copy(),
                              l2=b.l2.copy(), l3=b.l3.copy(),
                              lstar=b.lstar + 10.0)
        assert eval_w3(0.9, P07, 15, b) == eval_w3(0.9, P07, 15, tweaked)

    def test_capacity_check(self):
        b = draw_bundle(1, 7)
        with pytest.raises(ValueError):
            eval_w1(0.5, P03, 8, b)


class TestFullExpansion:
    def test_zero_time(self):
        b = draw_bundle(9, 63)
        assert eval_w(0.0, P07, 63, b) == 0.0

    def test_brownian_reduces_to_w1(self):
        b = draw_bundle(9, 63)
        for t in (0.2, 0.5, 1.0):
            assert eval_w(t, P05, 63, b) == eval_w1(t, P05, 63, b)

    def test_sum_of_parts(self):
        b = draw_bundle(17, 511)
        t = 0.5
        parts = (eval_w1(t, P07, 511, b) + eval_w2(t, P07, 511, b)
                 + eval_w3(t, P07, 511, b))
        assert eval_w(t, P07, 511, b) == pytest.approx(parts, abs=1e-12)

    def test_linearity_in_noise(self):
        n = 63
        b1 = draw_bundle(100, n)
        b2 = draw_bundle(200, n)
        alpha, beta = 0.6, -1.7
        combo = NoiseBundle(
            seed=0, n_terms=n,
            l1=alpha * b1.l1 + beta * b2.l1,
            l2=alpha * b1.l2 + beta * b2.l2,
            l3=alpha * b1.l3 + beta * b2.l3,
            lstar=alpha * b1.lstar + beta * b2.lstar)
        for t in (0.25, 0.8):
            direct = eval_w(t, P03, n, combo)
            split = (alpha * eval_w(t, P03, n, b1)
                     + beta * eval_w(t, P03, n, b2))
            assert direct == pytest.approx(split, abs=1e-12)

    def test_truncation_nesting_tail_identity(self):
        base = draw_bundle(55, 31)
        ext = extend_bundle(base, 255)
        t = 0.62
        diff = eval_w(t, P07, 255, ext) - eval_w(t, P07, 31, ext)
        f1 = coeff_vector(CoefficientKind.F1, t, P07, 255).values
        f2 = coeff_vector(CoefficientKind.F2, t, P07, 255).values
        g = coeff_vector(CoefficientKind.G, t, P07, 255).values
        tail = sum(
            float(f1[n] * ext.l1[n] + f2[n] * ext.l2[n]
                  - P07.h_minus_half * g[n] * ext.l3[n])
            for n in range(32, 256))
        assert diff == pytest.approx(P07.c_h * tail, abs=1e-12)

    def test_continuity_across_half(self):
        b = draw_bundle(7, 255)
        ref = [eval_w(t, P05, 255, b) for t in (0.3, 0.7, 1.0)]
        for h in (0.5 - 1e-7, 0.5 + 1e-7):
            p = HurstParams.from_hurst(h)
            vals = [eval_w(t, p, 255, b) for t in (0.3, 0.7, 1.0)]
            assert np.abs(np.array(vals) - np.array(ref)).max() < 1e-4


class TestGeneratorConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            GeneratorConfig(params=P05, n_terms=0, seed=0)
        with pytest.raises(ValueError):
            GeneratorConfig(params=P05, n_terms=4, seed=0, workers=-1)
        with pytest.raises(ValueError):
            GeneratorConfig(params=P05, n_terms=4, seed=-5)


class TestGeneratePath:
    def test_single_zero_instant(self):
        cfg = GeneratorConfig(params=P03, n_terms=15, seed=0)
        sample = generate_path(np.array([0.0]), cfg)
        assert sample.values.tolist() == [0.0]

    def test_zero_pinning_on_grids(self):
        cfg = GeneratorConfig(params=P07, n_terms=63, seed=4)
        sample = generate_path(np.linspace(0.0, 1.0, 9), cfg)
        assert sample.values[0] == 0.0

    def test_workers_bit_identical(self):
        times = np.linspace(0.0, 1.0, 65)
        base = None
        for workers in (1, 4, 8):
            cfg = GeneratorConfig(params=P03, n_terms=127, seed=99,
                                  workers=workers)
            values = generate_path(times, cfg).values
            if base is None:
                base = values
            else:
                assert np.array_equal(base, values)

    def test_values_match_scalar_eval(self):
        times = np.array([0.25, 0.5, 0.75])
        cfg = GeneratorConfig(params=P07, n_terms=63, seed=11)
        sample = generate_path(times, cfg)
        b = draw_bundle(11, 63)
        for t, v in zip(times, sample.values):
            assert v == eval_w(float(t), P07, 63, b)

    def test_instant_values_independent_of_request_set(self):
        # a time instant's value depends only on (t, bundle), never on
        # which other instants were requested alongside it
        cfg = GeneratorConfig(params=P03, n_terms=63, seed=21)
        a = generate_path(np.array([0.25, 0.5, 0.75]), cfg)
        b = generate_path(np.array([0.1, 0.5, 0.9, 0.99]), cfg)
        i = list(a.times).index(0.5)
        j = list(b.times).index(0.5)
        assert a.values[i] == b.values[j]

    def test_times_validation(self):
        cfg = GeneratorConfig(params=P03, n_terms=15, seed=0)
        with pytest.raises(ValueError):
            generate_path(np.array([]), cfg)
        with pytest.raises(ValueError):
            generate_path(np.array([0.5, 0.5]), cfg)
        with pytest.raises(ValueError):
            generate_path(np.array([0.1, 1.2]), cfg)

    def test_table_reuse(self):
        times = np.linspace(0.0, 1.0, 17)
        cfg = GeneratorConfig(params=P07, n_terms=31, seed=5)
        table = CoefficientTable(times, P07, 31)
        direct = generate_path(times, cfg)
        reused = generate_path(times, cfg, table=table)
        assert np.array_equal(direct.values, reused.values)
        wrong = CoefficientTable(times, P07, 63)
        with pytest.raises(ValueError):
            generate_path(times, cfg, table=wrong)


class TestEnsemble:
    def test_singleton_equals_generate_path(self):
        times = np.linspace(0.0, 1.0, 9)
        cfg = GeneratorConfig(params=P03, n_terms=31, seed=7)
        single = generate_ensemble(times, cfg, 1)[0]
        direct = generate_path(times, cfg)
        assert np.array_equal(single.values, direct.values)

    def test_zero_stride_repeats_paths(self):
        times = np.array([0.5, 1.0])
        cfg = GeneratorConfig(params=P03, n_terms=15, seed=3)
        paths = generate_ensemble(times, cfg, 2, seed_stride=0)
        assert np.array_equal(paths[0].values, paths[1].values)

    def test_stride_changes_paths(self):
        times = np.array([0.5, 1.0])
        cfg = GeneratorConfig(params=P03, n_terms=15, seed=3)
        paths = generate_ensemble(times, cfg, 2)
        assert not np.array_equal(paths[0].values, paths[1].values)
        assert paths[1].config.seed == 4


@pytest.mark.parametrize("h", [0.3, 0.5, 0.75])
def test_series_covariance_matches_exact_law(h):
    # deterministic distributional check, no Monte Carlo: the covariance
    # of W is the coefficient cross-sum, which must reproduce the exact
    # law up to the truncation tail
    p = HurstParams.from_hurst(h)
    ts = np.array([0.25, 0.5, 0.75, 1.0])
    n = 2**14
    f1 = coeff_matrix(CoefficientKind.F1, ts, p, 0, n)
    f2 = coeff_matrix(CoefficientKind.F2, ts, p, 0, n)
    g = coeff_matrix(CoefficientKind.G, ts, p, 0, n)
    cov = p.c_h**2 * (f1 @ f1.T + f2 @ f2.T
                      + p.h_minus_half**2 * (g[:, 1:] @ g[:, 1:].T))
    exact = np.array([[exact_covariance(float(s), float(t), h) for t in ts]
                      for s in ts])
    assert np.abs(cov - exact).max() < 2e-3


class TestPathSample:
    def test_invariants_enforced(self):
        cfg = GeneratorConfig(params=P05, n_terms=4, seed=0)
        with pytest.raises(ValueError):
            PathSample(times=np.array([0.0, 0.5]),
                       values=np.array([1.0, 2.0]), config=cfg)
        with pytest.raises(ValueError):
            PathSample(times=np.array([0.5, 0.25]),
                       values=np.array([0.0, 0.0]), config=cfg)
        with pytest.raises(ValueError):
            PathSample(times=np.array([0.5]), values=np.array([np.inf]),
                       config=cfg)
