"""Tower construction, determinism, chains, and dilation statistics."""

import numpy as np
import pytest

from credal import (
    AllDropped,
    ConfigInvalid,
    CredalSet,
    IndexOutOfRange,
    OutcomeSpace,
    TowerConfig,
    bernoulli_family,
    binomial_family,
    build_measure,
    build_tower,
    coin_match_family,
    convergence_stats,
    dilation_profile,
    make_distribution,
)


@pytest.fixture(scope="module")
def small_tower():
    fam = binomial_family(10)
    cfg = TowerConfig(base=fam, base_samples=400, order_samples=400, max_order=4, seed=5)
    return fam, build_tower(cfg)


class TestConfig:
    def test_validation(self):
        fam = bernoulli_family()
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, base_samples=0)
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, order_samples=0)
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, max_order=0)
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, base_mode="magic")
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, seed=-1)
        with pytest.raises(ConfigInvalid):
            TowerConfig(base="not a family")
        with pytest.raises(ConfigInvalid):
            TowerConfig(base=fam, base_atoms=1)


class TestDeterminism:
    def test_same_seed_same_tower(self):
        fam = bernoulli_family()
        cfg = TowerConfig(base=fam, base_samples=64, order_samples=64, max_order=3, seed=9)
        t1, t2 = build_tower(cfg), build_tower(cfg)
        assert t1.base_probs.tobytes() == t2.base_probs.tobytes()
        for w1, w2 in zip(t1.weights, t2.weights):
            assert w1.tobytes() == w2.tobytes()

    def test_thread_count_never_changes_values(self):
        fam = binomial_family(6)
        cfg = TowerConfig(base=fam, base_samples=128, order_samples=128, max_order=3, seed=2)
        t1 = build_tower(cfg, n_jobs=1)
        t4 = build_tower(cfg, n_jobs=4)
        for w1, w4 in zip(t1.weights, t4.weights):
            assert w1.tobytes() == w4.tobytes()
        e = fam.space.event([1])
        for v1, v4 in zip(t1.implied_vectors(e), t4.implied_vectors(e)):
            assert v1.tobytes() == v4.tobytes()

    def test_different_seeds_differ(self):
        fam = bernoulli_family()
        t1 = build_tower(TowerConfig(base=fam, base_samples=32, order_samples=32,
                                     max_order=2, seed=0))
        t2 = build_tower(TowerConfig(base=fam, base_samples=32, order_samples=32,
                                     max_order=2, seed=1))
        assert t1.weights[0].tobytes() != t2.weights[0].tobytes()


class TestStructure:
    def test_weight_rows_are_distributions(self, small_tower):
        _, tower = small_tower
        for w in tower.weights:
            assert np.all(w >= 0.0)
            np.testing.assert_allclose(w.sum(axis=1), 1.0, atol=1e-12)

    def test_full_event_chain_stays_at_one(self, small_tower):
        fam, tower = small_tower
        for v in tower.implied_vectors(fam.space.full_event()):
            assert np.max(np.abs(v - 1.0)) < 1e-9

    def test_implied_values_stay_inside_base_hull(self, small_tower):
        fam, tower = small_tower
        e = fam.space.event([0, 1])
        vecs = tower.implied_vectors(e)
        lo, hi = vecs[0].min(), vecs[0].max()
        for v in vecs[1:]:
            assert v.min() >= lo - 1e-12
            assert v.max() <= hi + 1e-12

    def test_implied_probability_indexing(self, small_tower):
        fam, tower = small_tower
        e = fam.space.event([1])
        v = tower.implied_probability(2, 7, e)
        assert v == tower.implied_vectors(e)[1][7]
        with pytest.raises(IndexOutOfRange):
            tower.implied_probability(9, 0, e)
        with pytest.raises(IndexOutOfRange):
            tower.implied_probability(1, 400, e)

    def test_n_particles(self, small_tower):
        _, tower = small_tower
        assert tower.max_order == 4
        assert tower.n_particles(1) == 400
        assert tower.n_particles(4) == 400


class TestBaseModes:
    def test_grid_mode_enumerates_family(self):
        fam = bernoulli_family()
        cfg = TowerConfig(base=fam, base_samples=11, max_order=1, base_mode="grid")
        tower = build_tower(cfg)
        np.testing.assert_allclose(tower.base_params, np.linspace(0, 1, 11))
        np.testing.assert_allclose(tower.base_probs[:, 0], np.linspace(0, 1, 11))

    def test_tvu_mode_samples_atom_grid_with_replacement(self):
        fam = binomial_family(10)
        cfg = TowerConfig(base=fam, base_samples=1601, max_order=1,
                          base_mode="tvu", seed=3)
        tower = build_tower(cfg)
        grid = np.linspace(0.0, 1.0, 1601)
        assert np.isin(tower.base_params, grid).all()
        assert len(np.unique(tower.base_params)) < 1601

    def test_credal_set_grid_base_uses_members(self):
        sp = OutcomeSpace(["a", "b"])
        members = [make_distribution(sp, [w, 1 - w]) for w in (0.2, 0.5, 0.9)]
        c = CredalSet(members)
        tower = build_tower(TowerConfig(base=c, max_order=2, base_mode="grid",
                                        order_samples=16))
        np.testing.assert_allclose(tower.base_probs[:, 0], [0.2, 0.5, 0.9])

    def test_credal_set_multiplicity_expansion(self):
        sp = OutcomeSpace(["a", "b"])
        members = [make_distribution(sp, [w, 1 - w]) for w in (0.2, 0.9)]
        c = CredalSet(members, multiplicities=[3, 1])
        tower = build_tower(TowerConfig(base=c, max_order=1, base_mode="grid",
                                        use_multiplicities=True))
        np.testing.assert_allclose(tower.base_probs[:, 0], [0.2, 0.2, 0.2, 0.9])

    def test_prebuilt_measure_base(self):
        fam = binomial_family(4)
        m = build_measure(fam)
        cfg = TowerConfig(base=m, base_samples=50, max_order=2, order_samples=50, seed=1)
        tower = build_tower(cfg)
        assert tower.base_probs.shape == (50, 5)


class TestConvergence:
    def test_sd_contracts_and_mean_tracks_reference(self):
        fam = binomial_family(10)
        m = build_measure(fam)
        e = fam.space.event([1])
        ref = m.event_prob(e)
        cfg = TowerConfig(base=m, base_samples=800, order_samples=800,
                          max_order=4, seed=0)
        stats = convergence_stats(build_tower(cfg), e, reference=ref)
        sds = [s.sd for s in stats]
        assert sds[1] > sds[2] > sds[3]
        assert stats[-1].sd / stats[-1].mean < 1e-3
        assert abs(stats[-1].mean - ref) / ref < 0.05
        assert stats[0].max_dev_from_reference > stats[-1].max_dev_from_reference

    def test_stats_without_reference(self, small_tower):
        fam, tower = small_tower
        stats = convergence_stats(tower, fam.space.event([2]))
        assert all(s.max_dev_from_reference is None for s in stats)
        assert [s.order for s in stats] == [1, 2, 3, 4]


@pytest.fixture(scope="module")
def profile():
    fam = coin_match_family()
    pre = fam.space.event(["H1H2", "H1T2"])
    match = fam.space.event(["H1H2", "T1T2"])
    cfg = TowerConfig(base=fam, base_samples=11, order_samples=500,
                      max_order=4, seed=6, base_mode="grid")
    return dilation_profile(build_tower(cfg), pre, match)


class TestDilation:
    def test_order1_values_equal_grid_biases(self, profile):
        # P_p(match | coin1 heads) = (p/2) / (1/2) = p exactly.
        np.testing.assert_array_equal(
            np.sort(profile.order(1).values), np.linspace(0.0, 1.0, 11)
        )
        assert profile.n_dropped == 0

    def test_higher_orders_concentrate(self, profile):
        b1 = profile.order(1).band_fraction(0.25, 0.75)
        b2 = profile.order(2).band_fraction(0.25, 0.75)
        assert b2 > b1
        assert profile.order(2).sd < profile.order(1).sd

    def test_weighted_mean_is_chain_ratio(self, profile):
        # Coin 1 is fair, so the conditioning chain is exactly 1/2
        # everywhere and the weighted mean equals the mean of values.
        o2 = profile.order(2)
        assert o2.weighted_mean == pytest.approx(np.mean(o2.values), rel=1e-12)
        assert 0.4 < profile.order(4).weighted_mean < 0.6

    def test_all_dropped_raises(self):
        fam = coin_match_family()
        cfg = TowerConfig(base=fam, base_samples=5, order_samples=5,
                          max_order=2, base_mode="grid")
        tower = build_tower(cfg)
        empty = fam.space.event([])
        with pytest.raises(AllDropped):
            dilation_profile(tower, empty, fam.space.event(["H1H2"]))

    def test_zero_mass_base_particles_dropped(self):
        # Grid includes p = 0 and p = 1; conditioning on "coin 2 heads"
        # kills the p = 0 member only.
        fam = coin_match_family()
        pre = fam.space.event(["H1H2", "T1H2"])  # coin 2 heads, prob p
        cfg = TowerConfig(base=fam, base_samples=11, order_samples=50,
                          max_order=2, base_mode="grid", seed=8)
        profile = dilation_profile(build_tower(cfg), pre, fam.space.event(["H1H2"]))
        assert profile.n_dropped == 1
        assert profile.order(1).n == 10
