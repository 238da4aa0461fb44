import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftgibbs import (
    Cylinder,
    NotMixing,
    admissible_words,
    build_gibbs_measure,
    cylinder_measure,
    entropy,
    finite_range_potential,
    mean_potential,
    recheck_gibbs_bounds,
    sample_trajectory,
    validate_sft,
    verify_gibbs_bounds,
    word_array,
    word_cylinder_measures,
    zero_potential,
)
from sftgibbs.models import (
    first_coordinate_potential,
    full_shift,
    golden_mean,
    homology_triple,
)

PHI_GOLD = (1 + math.sqrt(5)) / 2


class TestEigendata:
    def test_full_shift_uniform(self, fs_uniform):
        assert fs_uniform.eigenvalue == pytest.approx(2.0, abs=1e-14)
        assert fs_uniform.pressure == pytest.approx(math.log(2), abs=1e-14)
        assert np.allclose(fs_uniform.stationary, [0.5, 0.5], atol=1e-14)
        assert np.allclose(fs_uniform.stochastic, 0.5, atol=1e-14)

    def test_golden_mean_parry(self, gm_parry):
        assert gm_parry.pressure == pytest.approx(math.log(PHI_GOLD), abs=1e-12)
        exact_pi = [(5 + math.sqrt(5)) / 10, (5 - math.sqrt(5)) / 10]
        assert np.abs(gm_parry.stationary - exact_pi).max() < 1e-12
        expected_P = [[1 / PHI_GOLD, 1 / PHI_GOLD**2], [1.0, 0.0]]
        assert np.abs(gm_parry.stochastic - expected_P).max() < 1e-12

    def test_bernoulli_closed_form(self, fs2):
        # range-1 weight beta*x0: eigenvalue 1 + e^beta, i.i.d. rows
        beta = 0.7
        gm = build_gibbs_measure(fs2, first_coordinate_potential(fs2, beta))
        z = 1 + math.exp(beta)
        assert gm.eigenvalue == pytest.approx(z, rel=1e-13)
        assert np.abs(gm.stationary - [1 / z, math.exp(beta) / z]).max() < 1e-13
        assert np.abs(gm.stochastic - gm.stationary[None, :]).max() < 1e-13

    def test_not_mixing_rejected(self):
        model = validate_sft(2, [[1, 0], [0, 1]])
        with pytest.raises(NotMixing):
            build_gibbs_measure(model, zero_potential(model))

    def test_markov_representation_invariants(self, shipped_measures):
        for name, gm in shipped_measures:
            P, pi, v = gm.stochastic, gm.stationary, gm.right_vec
            T = gm.base.transition
            phi = gm.working_potential
            # P is the eigenvector-conjugated, eigenvalue-normalized weight matrix
            for i in range(gm.base.alphabet_size):
                for j in range(gm.base.alphabet_size):
                    if not T[i, j]:
                        assert P[i, j] == 0.0, name
                        continue
                    word = (i, j) if phi.range == 2 else (i,)
                    expected = math.exp(phi(word)) * v[j] / (gm.eigenvalue * v[i])
                    assert P[i, j] == pytest.approx(expected, rel=1e-12), name
            assert np.abs(P.sum(axis=1) - 1.0).max() <= 1e-12, name
            assert np.abs(pi @ P - pi).max() <= 1e-12, name
            assert pi.sum() == pytest.approx(1.0, abs=1e-12)
            c1, c2 = gm.gibbs_constants
            assert 0 < c1 <= c2, name


class TestCylinderMeasure:
    def test_uniform_word(self, fs_uniform):
        res = cylinder_measure(fs_uniform, Cylinder({0: {0}, 1: {1}, 2: {0}}))
        assert res.value == 0.125 and res.exact

    def test_forbidden_word_is_zero(self, gm_parry):
        assert cylinder_measure(gm_parry, Cylinder({0: {1}, 1: {1}})).value == 0.0

    def test_single_symbol(self, gm_parry):
        assert cylinder_measure(gm_parry, Cylinder({0: {0}})).value == pytest.approx(
            (5 + math.sqrt(5)) / 10, abs=1e-12
        )

    def test_whole_space(self, gm_parry):
        assert cylinder_measure(gm_parry, Cylinder.whole_space()).value == 1.0

    def test_gap_positions(self, gm_parry):
        # {x0=1, x2=1} forces x1=0: equals the three-symbol word 1,0,1
        gapped = cylinder_measure(gm_parry, Cylinder({0: {1}, 2: {1}})).value
        word = cylinder_measure(gm_parry, Cylinder.fixing_word((1, 0, 1))).value
        assert gapped == pytest.approx(word, abs=1e-15)

    @pytest.mark.parametrize("fixture", ["fs_ising", "gm_parry", "gm_weighted"])
    @given(data=st.data())
    @settings(max_examples=25, deadline=None)
    def test_shift_invariance(self, fixture, data, request):
        gm = request.getfixturevalue(fixture)
        n = gm.source_model.alphabet_size
        positions = data.draw(st.lists(st.integers(-6, 6), min_size=1, max_size=3, unique=True))
        constraints = {
            p: data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
            for p in positions
        }
        t = data.draw(st.integers(-30, 30))
        cyl = Cylinder(constraints)
        base = cylinder_measure(gm, cyl).value
        moved = cylinder_measure(gm, cyl.shifted(t)).value
        assert moved == pytest.approx(base, abs=1e-12)

    @pytest.mark.parametrize("fixture", ["fs_ising", "gm_parry", "gm_weighted"])
    @given(data=st.data())
    @settings(max_examples=25, deadline=None)
    def test_kolmogorov_consistency(self, fixture, data, request):
        gm = request.getfixturevalue(fixture)
        n = gm.source_model.alphabet_size
        positions = data.draw(st.lists(st.integers(-5, 5), min_size=1, max_size=3, unique=True))
        constraints = {
            p: data.draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=n))
            for p in positions
        }
        fresh = data.draw(st.integers(-7, 7).filter(lambda p: p not in constraints))
        cyl = Cylinder(constraints)
        total = sum(
            cylinder_measure(
                gm, Cylinder({**constraints, fresh: {s}})
            ).value
            for s in range(n)
        )
        assert total == pytest.approx(cylinder_measure(gm, cyl).value, abs=1e-12)

    def test_word_measures_match_cylinder_measure(self, gm_parry):
        words = word_array(gm_parry.source_model, 5)
        vec = word_cylinder_measures(gm_parry, words)
        for row, mu in zip(words, vec):
            direct = cylinder_measure(gm_parry, Cylinder.fixing_word(tuple(row))).value
            assert mu == pytest.approx(direct, rel=1e-12)


class TestGibbsBounds:
    def test_uniform_is_exactly_half(self, fs_uniform):
        report = verify_gibbs_bounds(fs_uniform, 10)
        assert report.c1_hat == 0.5 and report.c2_hat == 0.5

    def test_golden_mean_window(self, gm_parry):
        report = verify_gibbs_bounds(gm_parry, 10)
        assert 0 < report.c1_hat <= report.c2_hat
        assert 0.17 < report.c1_hat and report.c2_hat < 0.73

    def test_golden_mean_stabilizes(self, gm_parry):
        # endpoint-only dependence: constants at m_max=2 already final
        small = verify_gibbs_bounds(gm_parry, 2)
        big = verify_gibbs_bounds(gm_parry, 8)
        assert small.c1_hat == pytest.approx(big.c1_hat, rel=1e-12)
        assert small.c2_hat == pytest.approx(big.c2_hat, rel=1e-12)

    @pytest.mark.parametrize(
        "fixture", ["fs_uniform", "gm_parry", "fs_ising", "fs_bernoulli", "gm_weighted"]
    )
    def test_random_words_respect_constants(self, fixture, request):
        gm = request.getfixturevalue(fixture)
        out = recheck_gibbs_bounds(gm, count=300, max_len=20, seed=11)
        assert out.violations == 0
        c1, c2 = gm.gibbs_constants
        assert c1 * (1 - 1e-12) <= out.worst_low <= out.worst_high <= c2 * (1 + 1e-12)


class TestHomologyInvariance:
    @pytest.mark.parametrize("make_model", ["full", "golden"])
    def test_cohomologous_potentials_same_measure(self, make_model):
        model = full_shift(2) if make_model == "full" else golden_mean()
        phi, psi, u = homology_triple(model)
        gm_phi = build_gibbs_measure(model, phi)
        gm_psi = build_gibbs_measure(model, psi)
        for length in range(1, 7):
            for word in admissible_words(model, length):
                a = cylinder_measure(gm_phi, Cylinder.fixing_word(word)).value
                b = cylinder_measure(gm_psi, Cylinder.fixing_word(word)).value
                assert abs(a - b) <= 1e-9


class TestRecodedMeasures:
    def test_embedded_range_three_matches_range_two(self, fs2, fs_ising):
        # a range-3 table that actually depends on two coordinates must
        # produce the identical measure through the recoding path
        table = {w: float(w[0] * w[1]) for w in admissible_words(fs2, 3)}
        gm3 = build_gibbs_measure(fs2, finite_range_potential(fs2, 3, table))
        assert gm3.is_recoded and gm3.base.alphabet_size == 4
        assert gm3.pressure == pytest.approx(fs_ising.pressure, abs=1e-12)
        for length in range(1, 6):
            for word in admissible_words(fs2, length):
                a = cylinder_measure(gm3, Cylinder.fixing_word(word)).value
                b = cylinder_measure(fs_ising, Cylinder.fixing_word(word)).value
                assert a == pytest.approx(b, rel=1e-11, abs=1e-13)

    def test_block_cylinders_correspond(self, gmm):
        table = {w: 0.1 * w[0] - 0.2 * w[2] for w in admissible_words(gmm, 3)}
        phi3 = finite_range_potential(gmm, 3, table)
        gm3 = build_gibbs_measure(gmm, phi3)
        model2, phi2, bmap = gm3.base, gm3.working_potential, gm3.recode
        gm2 = build_gibbs_measure(model2, phi2)
        for length in range(1, 5):
            for block_word in admissible_words(model2, length):
                c_blocks = Cylinder.fixing_word(block_word)
                native = cylinder_measure(gm2, c_blocks).value
                translated = cylinder_measure(gm3, bmap.expand_cylinder(c_blocks)).value
                assert abs(native - translated) <= 1e-9

    def test_recoded_gibbs_constants_positive(self, gmm):
        table = {w: 0.1 * w[0] - 0.2 * w[2] for w in admissible_words(gmm, 3)}
        gm3 = build_gibbs_measure(gmm, finite_range_potential(gmm, 3, table), m_max=8)
        c1, c2 = gm3.gibbs_constants
        assert 0 < c1 <= c2


class TestSampling:
    def test_no_forbidden_word(self, gm_parry):
        window = sample_trajectory(gm_parry, 5000, seed=5)
        symbols = window.symbols
        assert all(not (symbols[i] == 1 and symbols[i + 1] == 1) for i in range(len(symbols) - 1))

    def test_deterministic(self, gm_parry):
        a = sample_trajectory(gm_parry, 2000, seed=42)
        b = sample_trajectory(gm_parry, 2000, seed=42)
        assert a == b
        c = sample_trajectory(gm_parry, 2000, seed=43)
        assert a != c

    def test_uniform_frequency(self, fs_uniform):
        n = 100_000
        window = sample_trajectory(fs_uniform, n, seed=0)
        freq = sum(1 for s in window.symbols if s == 0) / n
        assert abs(freq - 0.5) <= 3 * math.sqrt(0.25 / n)

    def test_golden_mean_frequency(self, gm_parry):
        n = 100_000
        window = sample_trajectory(gm_parry, n, seed=1)
        freq = sum(1 for s in window.symbols if s == 0) / n
        pi0 = gm_parry.stationary[0]
        rho = 1 / PHI_GOLD**2
        se = math.sqrt(pi0 * (1 - pi0) / n) * math.sqrt((1 + rho) / (1 - rho))
        assert abs(freq - pi0) <= 5 * se

    def test_recoded_sampler_emits_source_symbols(self, gmm):
        table = {w: 0.0 for w in admissible_words(gmm, 3)}
        gm3 = build_gibbs_measure(gmm, finite_range_potential(gmm, 3, table))
        window = sample_trajectory(gm3, 500, seed=9)
        assert set(window.symbols) <= {0, 1}
        assert gmm.word_is_admissible(window.symbols)


class TestEntropy:
    def test_uniform(self, fs_uniform):
        assert entropy(fs_uniform) == pytest.approx(math.log(2), abs=1e-14)

    def test_golden_mean_is_log_golden_ratio(self, gm_parry):
        assert entropy(gm_parry) == pytest.approx(math.log(PHI_GOLD), abs=1e-12)

    def test_bernoulli_closed_form(self, fs_bernoulli):
        beta = 0.7
        z = 1 + math.exp(beta)
        expected = math.log(z) - beta * math.exp(beta) / z
        assert entropy(fs_bernoulli) == pytest.approx(expected, abs=1e-12)

    def test_pressure_identity_on_shipped_models(self, shipped_measures):
        for name, gm in shipped_measures:
            gap = abs(entropy(gm) - (gm.pressure - mean_potential(gm)))
            assert gap <= 1e-9, name
