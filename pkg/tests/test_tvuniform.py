"""Uniform-measure tests with independent oracles.

Every load-bearing number is checked through two routes:

* thickness: the package's derivative-sum form vs an independently
  derived piecewise closed form (and vs finite differences);
* normalizer and event probabilities: adaptive Gauss-Legendre vs
  ``scipy.integrate.quad`` with explicit kink breakpoints, plus frozen
  golden values;
* posterior predictive: continuum quadrature vs exact rational counting.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from credal import (
    ConfigInvalid,
    CountingMeasure,
    CredalSet,
    DegenerateFamily,
    IndexOutOfRange,
    OutcomeSpace,
    ParamBox,
    ParamFamily,
    StepTooLarge,
    TvuMeasure,
    ZeroEvidence,
    bernoulli_family,
    binomial_family,
    build_measure,
    coin_match_family,
    component_event,
    iid_extension,
    make_rational_distribution,
    product_family,
    product_space,
    thickness,
    tvu_density,
)

N = 10
KINKS = [k / N for k in range(1, N)]

# Golden values for the 10-toss family (exact piecewise-polynomial
# integrals, frozen; the quadrature must land within 1e-9 of them).
GOLDEN_Z = 3.66021568
GOLDEN_HEAD_PROBS = {
    0: 0.14708521012577752,
    1: 0.10047892013917162,
    2: 0.08051039578705738,
    3: 0.07149689409632945,
    4: 0.06736099143115579,
    5: 0.0661351768410165,
}


def panel_thickness(p: float, n: int = N) -> float:
    """Independent closed form: on (j/n, (j+1)/n) the thickness equals
    n * C(n-1, j) * p^j * (1-p)^(n-1-j), extended continuously to kinks
    and endpoints (both one-sided limits agree there)."""
    if p <= 0.0 or p >= 1.0:
        return float(n)
    j = min(int(p * n), n - 1)
    return n * math.comb(n - 1, j) * p**j * (1.0 - p) ** (n - 1 - j)


def quad_with_kinks(f) -> float:
    val, err = integrate.quad(f, 0.0, 1.0, points=KINKS, limit=400)
    assert err < 1e-10
    return val


@pytest.fixture(scope="module")
def family():
    return binomial_family(N)


@pytest.fixture(scope="module")
def measure(family):
    return build_measure(family, resolution=24)


class TestThickness:
    def test_registered_matches_independent_closed_form(self, family):
        for p in np.linspace(0.001, 0.999, 211):
            got = tvu_density(family, p)
            assert got == pytest.approx(panel_thickness(p), rel=1e-12)

    def test_finite_difference_matches_analytic_off_kinks(self, family):
        for p in (0.05, 0.123, 0.31, 0.49, 0.77, 0.95):
            fd = thickness(family, p, 0)
            assert fd == pytest.approx(panel_thickness(p), abs=1e-6)

    def test_finite_difference_at_kink_averages_one_sided_limits(self, family):
        # The thickness is continuous at kinks (both one-sided limits
        # agree), so the averaged estimate must still match.
        for k in (0.1, 0.5, 0.9):
            assert thickness(family, k, 0) == pytest.approx(
                panel_thickness(k), abs=1e-6
            )

    def test_endpoints_equal_n_exactly(self, family):
        assert tvu_density(family, 0.0) == float(N)
        assert tvu_density(family, 1.0) == float(N)

    def test_endpoint_finite_difference_is_one_sided(self, family):
        assert thickness(family, 0.0, 0) == pytest.approx(float(N), abs=1e-3)
        assert thickness(family, 1.0, 0) == pytest.approx(float(N), abs=1e-3)

    def test_step_too_large(self, family):
        with pytest.raises(StepTooLarge):
            thickness(family, 0.5, 0, h=1.5)

    def test_param_outside_box(self, family):
        with pytest.raises(IndexOutOfRange):
            thickness(family, 1.5, 0)

    def test_fd_on_unregistered_family_matches_chain_rule(self, family):
        # Same family driven through s = p^3 without registered
        # thickness: FD must recover t_p(s^(1/3)) * ds->dp factor.
        fam_s = ParamFamily(
            ParamBox([(0.0, 1.0)]),
            family.space,
            lambda x: family.probs_fn((x[0] ** (1 / 3),)),
            kinks=[tuple(k**3 for k in KINKS)],
        )
        for s in (0.2, 0.5, 0.9):
            p = s ** (1 / 3)
            want = panel_thickness(p) * p / (3.0 * s)
            assert thickness(fam_s, s, 0) == pytest.approx(want, rel=1e-5)


class TestMeasure:
    def test_normalizer_against_quad_and_golden(self, measure):
        z_quad = quad_with_kinks(panel_thickness)
        assert measure.z == pytest.approx(z_quad, rel=1e-10)
        assert measure.z == pytest.approx(GOLDEN_Z, rel=1e-9)

    def test_head_probs_against_quad_and_golden(self, family, measure):
        coeff = [math.comb(N, k) for k in range(N + 1)]
        for k, golden in GOLDEN_HEAD_PROBS.items():
            pmf = lambda p, k=k: coeff[k] * p**k * (1 - p) ** (N - k)
            want = quad_with_kinks(lambda p: pmf(p) * panel_thickness(p)) / measure.z
            got = measure.event_prob(family.space.event([k]))
            assert got == pytest.approx(want, rel=1e-9)
            assert got == pytest.approx(golden, rel=1e-9)

    def test_symmetry_and_total_mass(self, family, measure):
        probs = [measure.event_prob(family.space.event([k])) for k in range(N + 1)]
        for k in range(N + 1):
            assert probs[k] == pytest.approx(probs[N - k], rel=1e-12)
        assert math.fsum(probs) == pytest.approx(1.0, abs=1e-6)
        assert measure.event_prob(family.space.full_event()) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_resolution_doubling_moves_z_below_tolerance(self, family, measure):
        z2 = build_measure(family, resolution=48).z
        assert abs(z2 - measure.z) <= 1e-5 * measure.z

    def test_reparametrization_invariance(self, family, measure):
        # p = s^(1/3): same family traced at a different speed.  The
        # density is singular at s -> 0 yet integrable; both the
        # normalizer and every event probability must be unchanged.
        def probs_batch(xs):
            return family.probs_batch_fn(xs ** (1 / 3))

        def thick_batch(xs):
            s = xs[:, 0]
            p = np.where(s > 0, s, 1.0) ** (1 / 3)
            t = np.asarray([panel_thickness(v) for v in p])
            return np.where(s > 0, t * p / (3.0 * np.maximum(s, 1e-300)), np.inf)

        fam_s = ParamFamily(
            ParamBox([(0.0, 1.0)]),
            family.space,
            lambda x: family.probs_fn((x[0] ** (1 / 3),)),
            kinks=[tuple(k**3 for k in KINKS)],
            probs_batch=probs_batch,
            thickness_batch=[thick_batch],
        )
        m_s = build_measure(fam_s, resolution=24)
        assert m_s.z == pytest.approx(measure.z, rel=5e-4)
        for k in range(N + 1):
            a = m_s.event_prob(fam_s.space.event([k]))
            b = measure.event_prob(family.space.event([k]))
            assert a == pytest.approx(b, rel=5e-4)

    def test_pdf_is_normalized_density(self, family, measure):
        assert measure.pdf(0.25) == pytest.approx(
            panel_thickness(0.25) / measure.z, rel=1e-9
        )

    def test_degenerate_family_raises(self):
        flat = ParamFamily(
            ParamBox([(0.0, 1.0)]),
            OutcomeSpace([0, 1]),
            lambda x: np.array([0.5, 0.5]),
            thickness_fns=[lambda x: 0.0],
            thickness_batch=[lambda xs: np.zeros(xs.shape[0])],
        )
        with pytest.raises(DegenerateFamily):
            build_measure(flat)

    def test_invalid_configs(self, family):
        with pytest.raises(ConfigInvalid):
            build_measure(family, resolution=0)
        with pytest.raises(ConfigInvalid):
            build_measure(family, tol=0.0)
        with pytest.raises(ConfigInvalid):
            build_measure(42)


class TestSimpleFamilies:
    def test_coin_match_density_and_marginal(self):
        fam = coin_match_family()
        m = build_measure(fam)
        assert tvu_density(fam, 0.37) == 1.0
        assert m.z == pytest.approx(1.0, rel=1e-12)
        H1 = fam.space.event(["H1H2", "H1T2"])
        assert m.event_prob(H1) == pytest.approx(0.5, rel=1e-12)

    def test_bernoulli_head_prob_is_half(self):
        m = build_measure(bernoulli_family())
        assert m.z == pytest.approx(1.0, rel=1e-12)
        assert m.event_prob(m.family.space.event(["H"])) == pytest.approx(
            0.5, rel=1e-12
        )

    def test_two_dimensional_box(self):
        # Two coins with independent biases: thickness 1 in each slot,
        # so Z = 1 and P(both heads) = 1/4.
        def probs(x):
            p, q = x
            return np.array([p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)])

        fam = ParamFamily(
            ParamBox([(0.0, 1.0), (0.0, 1.0)]),
            OutcomeSpace(["HH", "HT", "TH", "TT"]),
            probs,
            thickness_fns=[lambda x: 1.0, lambda x: 1.0],
            thickness_batch=[
                lambda xs: np.ones(xs.shape[0]),
                lambda xs: np.ones(xs.shape[0]),
            ],
        )
        m = build_measure(fam, resolution=8)
        assert m.z == pytest.approx(1.0, rel=1e-9)
        assert m.event_prob(fam.space.event(["HH"])) == pytest.approx(0.25, rel=1e-6)


class TestCountingMeasure:
    def test_uniform_grid_degenerate_case_matches_continuum(self):
        # 101 exact members p = i/100 of a 1-toss family: the counting
        # average of p is exactly 1/2, agreeing with the continuum.
        sp = OutcomeSpace(["H", "T"])
        members = [
            make_rational_distribution(sp, [Fraction(i, 100), 1 - Fraction(i, 100)])
            for i in range(101)
        ]
        m = CountingMeasure(CredalSet(members))
        got = m.event_prob(sp.event(["H"]))
        assert got == Fraction(1, 2)
        continuum = build_measure(bernoulli_family()).event_prob(
            bernoulli_family().space.event(["H"])
        )
        assert abs(float(got) - continuum) < 1e-3

    def test_exclusion_renormalizes(self):
        sp = OutcomeSpace(["H", "T"])
        members = [
            make_rational_distribution(sp, [w, 1 - w])
            for w in (Fraction(0), Fraction(1, 2), Fraction(1))
        ]
        m = CountingMeasure(CredalSet(members))
        e = sp.event(["H"])
        assert m.event_prob(e) == Fraction(1, 2)
        assert m.event_prob(e, exclude=1) == Fraction(1, 2)
        assert m.event_prob(e, exclude=2) == Fraction(1, 4)
        with pytest.raises(IndexOutOfRange):
            m.event_prob(e, exclude=7)

    def test_multiplicity_weighting(self):
        sp = OutcomeSpace(["H", "T"])
        a = make_rational_distribution(sp, [1, 0])
        b = make_rational_distribution(sp, [0, 1])
        c = CredalSet([a, b], multiplicities=[3, 1])
        e = sp.event(["H"])
        assert CountingMeasure(c).event_prob(e) == Fraction(1, 2)
        assert CountingMeasure(c, use_multiplicities=True).event_prob(
            e
        ) == Fraction(3, 4)


class TestPosteriorPredictive:
    def test_laplace_rule_of_succession(self):
        # Flat measure over a 1-toss bias family, one head observed:
        # P(next head) = int p^2 / int p = 2/3.
        base = bernoulli_family()
        m = build_measure(base)
        pair = product_family(base, 2)
        first_h = component_event(pair.space, base.space, 2, 0, "H")
        second_h = component_event(pair.space, base.space, 2, 1, "H")
        got = m.posterior_predictive(first_h, second_h, family=pair)
        assert got == pytest.approx(2 / 3, rel=1e-9)

    def test_zero_evidence_raises(self):
        base = bernoulli_family()
        m = build_measure(base)
        empty = base.space.event([])
        with pytest.raises(ZeroEvidence):
            m.posterior_predictive(empty, base.space.event(["H"]))

    def test_counting_route_with_lift_is_exact(self):
        sp = OutcomeSpace(["H", "T"])
        members = [
            make_rational_distribution(sp, [Fraction(i, 4), 1 - Fraction(i, 4)])
            for i in range(5)
        ]
        m = CountingMeasure(CredalSet(members))
        pair = product_space(sp, 2)
        first_h = component_event(pair, sp, 2, 0, "H")
        second_h = component_event(pair, sp, 2, 1, "H")
        got = m.posterior_predictive(
            first_h, second_h, lift=lambda d: iid_extension(d, 2)
        )
        # sum p^2 / sum p over p in {0, 1/4, 1/2, 3/4, 1}
        want = Fraction(sum(Fraction(i, 4) ** 2 for i in range(5)), 1) / sum(
            Fraction(i, 4) for i in range(5)
        )
        assert got == want


class TestSampling:
    def test_samples_land_on_atom_grid_and_repeat(self, measure):
        rng = np.random.default_rng(1)
        xs = measure.sample_params(rng, 1601, atoms=1601)
        grid = np.linspace(0.0, 1.0, 1601)
        assert np.isin(xs, grid).all()
        assert len(np.unique(xs)) < xs.size  # drawn with replacement

    def test_sampling_is_deterministic_given_seed(self, measure):
        a = measure.sample_params(np.random.default_rng(9), 500)
        b = measure.sample_params(np.random.default_rng(9), 500)
        assert a.tobytes() == b.tobytes()

    def test_sample_mean_matches_density_mean(self, measure):
        rng = np.random.default_rng(4)
        xs = measure.sample_params(rng, 200_000)
        want = measure.expectation(measure.nodes[:, 0])
        # sd of the mean ~ 0.0007; allow 4 sigma
        assert xs.mean() == pytest.approx(want, abs=3e-3)


class TestProductFamilies:
    def test_product_probs_are_kron_powers(self):
        base = bernoulli_family()
        pair = product_family(base, 2)
        got = pair.probs(0.3)
        want = np.kron([0.3, 0.7], [0.3, 0.7])
        np.testing.assert_allclose(got, want, atol=1e-15)
        batch = pair.probs_matrix(np.array([[0.3], [0.6]]))
        np.testing.assert_allclose(batch[1], np.kron([0.6, 0.4], [0.6, 0.4]))

    def test_component_event_indexing(self):
        sp = OutcomeSpace(["r", "y", "b"])
        trip = product_space(sp, 3)
        e = component_event(trip, sp, 3, 1, "y")
        assert len(e) == 9
        assert all(lab.split(",")[1] == "y" for lab in e.labels)

    def test_iid_extension_exact(self):
        sp = OutcomeSpace(["r", "y"])
        d = make_rational_distribution(sp, [1, 2])
        lifted = iid_extension(d, 2)
        assert lifted.probs == (
            Fraction(1, 9),
            Fraction(2, 9),
            Fraction(2, 9),
            Fraction(4, 9),
        )


class TestParamBox:
    def test_validation(self):
        with pytest.raises(ConfigInvalid):
            ParamBox([])
        with pytest.raises(ConfigInvalid):
            ParamBox([(0.0, 0.0)])
        with pytest.raises(ConfigInvalid):
            ParamBox([(0.0, math.inf)])

    def test_contains_and_clip(self):
        box = ParamBox([(0.0, 1.0), (-1.0, 1.0)])
        assert box.contains((0.5, 0.0))
        assert not box.contains((1.5, 0.0))
        assert box.clip((2.0, -3.0)) == (1.0, -1.0)

    def test_kinks_must_be_interior(self):
        with pytest.raises(ConfigInvalid):
            ParamFamily(
                ParamBox([(0.0, 1.0)]),
                OutcomeSpace([0, 1]),
                lambda x: np.array([x[0], 1 - x[0]]),
                kinks=[(0.0,)],
            )
