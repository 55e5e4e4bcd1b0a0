#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "hvqm/hidden_density.hpp"
#include "hvqm/stats.hpp"
#include "hvqm/von_neumann.hpp"
#include "test_util.hpp"

using namespace hvqm;

TEST_CASE("classical pointer is linear in L and t") {
  CHECK(classical_pointer(0.0, 1.0, 0.0, 1.0) == 0.0);
  CHECK(classical_pointer(0.5, 2.0, 3.0, 1.0) == doctest::Approx(6.5));
  const double shift1 = classical_pointer(0.2, 1.3, 2.0, 0.7) - 0.2;
  const double shift2 = classical_pointer(0.2, 1.3, 2.0, 1.4) - 0.2;
  CHECK(shift2 == doctest::Approx(2.0 * shift1).epsilon(1e-15));
}

TEST_CASE("outcome law l' = |lambda| l / hbar") {
  CHECK(outcome_given_eigenvalue(3.0, 1.0, 1.0) == 3.0);
  CHECK(outcome_given_eigenvalue(3.0, -1.0, 1.0) == 3.0);
  CHECK(outcome_given_eigenvalue(0.0, 0.7, 1.0) == 0.0);
  CHECK(outcome_given_eigenvalue(2.0, -1.2, 1.0) == doctest::Approx(2.4));
  CHECK_THROWS_AS(outcome_given_eigenvalue(1.0, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("spectral state validation") {
  CHECK_THROWS_AS(SpectralState({}), std::invalid_argument);
  CHECK_THROWS_AS(SpectralState({{1.0, {0.5, 0.0}}, {1.0, {0.5, 0.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpectralState({{1.0, {0.5, 0.0}}, {2.0, {0.5, 0.0}}}),
                  std::invalid_argument);  // mass 0.5, not 1

  const auto s = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  CHECK(s.quantum_mean() == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(s.quantum_variance() == doctest::Approx(0.1875).epsilon(1e-12));
}

TEST_CASE("conditional density: profile value, support, normalization") {
  const auto half = make_lognormal({1.0, 0.5});
  const auto c = conditional_density(1.0, half, 1.0);
  // same value as the generator pdf at lambda = 1 by change of variables
  CHECK(c.pdf(1.0) == doctest::Approx(0.7978845608028654).epsilon(1e-14));

  const auto dd = conditional_density(5.0, HalfLineDensity::dirac(1.0), 1.0);
  CHECK(dd.is_atomic());
  CHECK(dd.quantile(0.5) == 5.0);
  CHECK(dd.mean() == 5.0);
  CHECK(dd.variance() == 0.0);

  const auto neg = conditional_density(-2.0, make_lognormal({1.0, 0.2}), 1.0);
  CHECK(neg.pdf(0.5) == 0.0);
  CHECK(neg.pdf(-2.0) > 0.0);
  const double mass =
      testutil::quad_conditional_expect(neg, [](double) { return 1.0; });
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(neg.cdf(-1e9) == doctest::Approx(0.0));
  CHECK(neg.cdf(0.0) == 1.0);
  CHECK(neg.quantile(0.5) == doctest::Approx(-2.0).epsilon(1e-12));

  CHECK_THROWS_AS(conditional_density(0.0, half, 1.0), std::invalid_argument);
}

TEST_CASE("eigenstate moments: closed forms, quadrature oracle, limits") {
  const auto half = make_lognormal({1.0, 0.3});
  const auto m = eigenstate_moments(2.0, half, 1.0);
  // 2 e^{0.045}
  CHECK(m.m1 == doctest::Approx(2.0920557198174339).epsilon(1e-14));
  const auto c = conditional_density(2.0, half, 1.0);
  const double m1_quad =
      testutil::quad_conditional_expect(c, [](double lp) { return lp; });
  const double m2_quad =
      testutil::quad_conditional_expect(c, [](double lp) { return lp * lp; });
  CHECK(m.m1 == doctest::Approx(m1_quad).epsilon(1e-8));
  CHECK(m.m2 == doctest::Approx(m2_quad).epsilon(1e-8));
  CHECK(m.var == doctest::Approx(m2_quad - m1_quad * m1_quad).epsilon(1e-7));

  const auto quantum = eigenstate_moments(4.0, HalfLineDensity::dirac(1.0), 1.0);
  CHECK(quantum.m1 == 4.0);
  CHECK(quantum.m2 == 16.0);
  CHECK(quantum.var == 0.0);

  // small-sigma expansion m1 = l (1 + sigma^2/2 + O(sigma^4))
  const double l = 3.0, s = 0.01;
  const auto small = eigenstate_moments(l, make_lognormal({1.0, s}), 1.0);
  CHECK(std::abs(small.m1 - l * (1.0 + 0.5 * s * s)) <= l * s * s * s * s);
}

TEST_CASE("modified Born density: one-term mixture and degenerate atoms") {
  const auto half = make_lognormal({1.0, 0.2});
  const auto one = modified_born_density(SpectralState::eigenstate(2.0), half,
                                         1.0);
  REQUIRE(one.components().size() == 1);
  CHECK(one.atoms().empty());
  const auto direct = conditional_density(2.0, half, 1.0);
  for (double lp : {0.5, 1.7, 2.0, 3.1}) {
    CHECK(one.pdf(lp) == doctest::Approx(direct.pdf(lp)).epsilon(1e-15));
  }

  const auto state = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  const auto atoms =
      modified_born_density(state, HalfLineDensity::dirac(1.0), 1.0);
  CHECK(atoms.components().empty());
  REQUIRE(atoms.atoms().size() == 2);
  CHECK(atoms.atoms()[0].location == 1.0);
  CHECK(atoms.atoms()[0].weight == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(atoms.atoms()[1].location == 2.0);
  CHECK(atoms.atoms()[1].weight == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(atoms.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("modified Born density: l = 0 level becomes a point mass at 0") {
  const auto half = make_lognormal({1.0, 0.2});
  const auto state = SpectralState(
      {{0.0, {0.6, 0.0}}, {2.0, {0.8, 0.0}}});
  const auto mix = modified_born_density(state, half, 1.0);
  REQUIRE(mix.atoms().size() == 1);
  CHECK(mix.atoms()[0].location == 0.0);
  CHECK(mix.atoms()[0].weight == doctest::Approx(0.36).epsilon(1e-12));
  REQUIRE(mix.components().size() == 1);
  const double mass =
      testutil::quad_mixture_expect(mix, [](double) { return 1.0; });
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("mixture mean: frozen two-level example") {
  const auto half = make_lognormal({1.0, 0.2});
  const auto state = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  const auto mix = modified_born_density(state, half, 1.0);
  const double mean_quad =
      testutil::quad_mixture_expect(mix, [](double lp) { return lp; });
  // 1.75 e^{0.02}
  CHECK(mean_quad == doctest::Approx(1.7853523450468227).epsilon(1e-10));
  CHECK(mixture_moments(state, half, 1.0).m1 ==
        doctest::Approx(1.7853523450468227).epsilon(1e-14));
}

TEST_CASE("mixture moments: eigenstate reduction and quantum limit") {
  const auto half = make_lognormal({1.0, 0.25});
  const auto eig = mixture_moments(SpectralState::eigenstate(3.0), half, 1.0);
  const auto ref = eigenstate_moments(3.0, half, 1.0);
  CHECK(eig.mq == 3.0);
  CHECK(eig.varq == 0.0);
  CHECK(eig.m1 == doctest::Approx(ref.m1).epsilon(1e-15));
  CHECK(eig.var == doctest::Approx(ref.var).epsilon(1e-12));

  const auto state = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  const auto q = mixture_moments(state, HalfLineDensity::dirac(1.0), 1.0);
  CHECK(q.m1 == doctest::Approx(q.mq).epsilon(1e-15));
  CHECK(q.var == doctest::Approx(q.varq).epsilon(1e-12));

  // frozen variance for the {1,2}/{0.25,0.75} mixture at sigma = 0.2:
  // 0.1875 e^{0.08} + 3.0625 e^{0.04}(e^{0.04}-1)
  const auto hv = mixture_moments(state, make_lognormal({1.0, 0.2}), 1.0);
  CHECK(hv.var == doctest::Approx(0.3331999739794264).epsilon(1e-13));
  CHECK(hv.var ==
        doctest::Approx(hv.m2 - hv.m1 * hv.m1).epsilon(1e-10));
}

TEST_CASE("mixture identity properties over random states") {
  SeedStream rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    const auto state = testutil::random_state(rng, 3);
    for (double s : {0.1, 0.2, 0.3}) {
      const auto half = make_lognormal({1.0, s});
      const auto mix = modified_born_density(state, half, 1.0);
      const auto closed = mixture_moments(state, half, 1.0);

      const double mean_quad =
          testutil::quad_mixture_expect(mix, [](double lp) { return lp; });
      const double var_quad = testutil::quad_mixture_expect(
          mix, [&](double lp) { return (lp - closed.m1) * (lp - closed.m1); });

      if (std::abs(closed.m1) > 1e-6) {
        CHECK(mean_quad == doctest::Approx(closed.m1).epsilon(1e-7));
      } else {
        CHECK(std::abs(mean_quad - closed.m1) < 1e-9);
      }
      CHECK(var_quad == doctest::Approx(closed.var).epsilon(1e-6));

      // hidden-variable broadening always exceeds the quantum variance
      if (closed.mq != 0.0 || closed.varq > 0.0) {
        CHECK(closed.var > closed.varq);
      }
    }
  }
}

TEST_CASE("simulated eigenstate outcomes match the broadening law (KS)") {
  const auto half = make_lognormal({1.0, 0.2});
  MeasurementConfig config{1.0, 1.0, 1.0, 1000000, 99, 1};
  const auto events = simulate_events(SpectralState::eigenstate(3.0), config,
                                      symmetrize(half));
  std::vector<double> outcomes(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    outcomes[i] = events[i].outcome_lprime;
  }
  const auto law = conditional_density(3.0, half, 1.0);
  auto ks = stats::ks_test(
      outcomes, [&](double x) { return law.cdf(x); }, 0.01);
  CHECK(ks.pass);
}

TEST_CASE("sigma -> 0 recovery at l = 5") {
  const double s = 1e-3, l = 5.0;
  const auto half = make_lognormal({1.0, s});
  const auto m = eigenstate_moments(l, half, 1.0);
  CHECK(std::abs(m.m1 - l) == doctest::Approx(l * (std::exp(0.5 * s * s) - 1.0))
                                  .epsilon(1e-12));
  CHECK(std::abs(m.m1 - l) <= 2.6e-6);

  MeasurementConfig config{1.0, 1.0, 1.0, 1000000, 4, 1};
  const auto events =
      simulate_events(SpectralState::eigenstate(l), config, symmetrize(half));
  std::vector<double> outcomes(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    outcomes[i] = events[i].outcome_lprime;
  }
  auto m1 = stats::mc_moment(outcomes, 1);
  auto m2 = stats::mc_moment(outcomes, 2);
  const double sample_var =
      m2.estimate - m1.estimate * m1.estimate;
  CHECK(sample_var <= 2.0 * l * l * s * s);
}

TEST_CASE("simulate_events: determinism and event invariants") {
  const auto state = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  const auto P = symmetrize(make_lognormal({1.0, 0.3}));
  MeasurementConfig config{1.7, 0.9, 1.0, 5000, 12345, 1};

  const auto a = simulate_events(state, config, P);
  const auto b = simulate_events(state, config, P);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(),
                    a.size() * sizeof(MeasurementEvent)) == 0);

  config.workers = 3;
  const auto c = simulate_events(state, config, P);
  const auto d = simulate_events(state, config, P);
  CHECK(std::memcmp(c.data(), d.data(),
                    c.size() * sizeof(MeasurementEvent)) == 0);

  for (const auto& ev : a) {
    CHECK(ev.outcome_lprime ==
          std::abs(ev.lambda) * ev.chosen_l / config.hbar);
    CHECK(ev.pointer_shift == config.g * ev.outcome_lprime * config.t);
    CHECK((ev.chosen_l == 1.0 || ev.chosen_l == 2.0));
  }
}

TEST_CASE("simulate_events: degenerate family reproduces the postulate") {
  MeasurementConfig config{1.0, 1.0, 1.0, 1000, 7, 1};
  const auto events = simulate_events(SpectralState::eigenstate(3.0), config,
                                      symmetrize(HalfLineDensity::dirac(1.0)));
  for (const auto& ev : events) CHECK(ev.outcome_lprime == 3.0);
}

TEST_CASE("simulate_events: Born weights with degenerate lambda") {
  const auto state = SpectralState(
      {{1.0, {0.5, 0.0}}, {2.0, {std::sqrt(0.75), 0.0}}});
  MeasurementConfig config{1.0, 1.0, 1.0, 1000000, 21, 2};
  const auto events =
      simulate_events(state, config, symmetrize(HalfLineDensity::dirac(1.0)));
  std::size_t twos = 0;
  for (const auto& ev : events) twos += (ev.chosen_l == 2.0);
  const double frac = double(twos) / double(events.size());
  const double se = std::sqrt(0.75 * 0.25 / double(events.size()));
  CHECK(std::abs(frac - 0.75) <= 4.0 * se);
}

TEST_CASE("simulate_events: eigenstate mean within 4 SE of the closed form") {
  const auto half = make_lognormal({1.0, 0.3});
  MeasurementConfig config{1.0, 1.0, 1.0, 1000000, 31, 1};
  const auto events = simulate_events(SpectralState::eigenstate(3.0), config,
                                      symmetrize(half));
  std::vector<double> outcomes(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    outcomes[i] = events[i].outcome_lprime;
  }
  auto m1 = stats::mc_moment(outcomes, 1);
  CHECK(std::abs(m1.estimate - eigenstate_moments(3.0, half, 1.0).m1) <=
        4.0 * m1.standard_error);
}

TEST_CASE("reliability bound l* = 2 delta_l / sigma^2") {
  CHECK(reliability_bound(0.1, 1.0) == doctest::Approx(200.0).epsilon(1e-14));
  CHECK(reliability_bound(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(reliability_bound(0.37, 2.0) ==
        doctest::Approx(2.0 * reliability_bound(0.37, 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(reliability_bound(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("packet separation: degenerate, no-coupling, quantile cases") {
  const auto pair01 = [](const std::vector<PairSeparation>& v) {
    REQUIRE(v.size() == 1);
    return v[0];
  };
  const auto state = SpectralState(
      {{1.0, {std::sqrt(0.5), 0.0}}, {2.0, {std::sqrt(0.5), 0.0}}});

  MeasurementConfig config{10.0, 1.0, 1.0, 1, 0, 1};
  auto dirac = pair01(packet_separation_check(
      config, state, HalfLineDensity::dirac(1.0), 0.5, 1.0, 6.0));
  CHECK(dirac.separated);  // g t |dl| lambda / sigma0 = 10 > 6
  CHECK(dirac.violating_mass == 0.0);

  config.g = 0.0;
  auto uncoupled = pair01(packet_separation_check(
      config, state, HalfLineDensity::dirac(1.0), 0.5, 1.0, 6.0));
  CHECK_FALSE(uncoupled.separated);
  CHECK(uncoupled.violating_mass == 1.0);

  // log-normal: g t tuned so the 0.001-quantile point sits just past
  // 6 sigma0 -> separated with <= 0.1% of the lambda-mass flagged
  const auto half = make_lognormal({1.0, 0.3});
  const double lambda_q = half.quantile(0.001);
  config.g = 6.0 * 1.0001 / lambda_q;
  config.t = 1.0;
  auto tuned = pair01(
      packet_separation_check(config, state, half, 0.001, 1.0, 6.0));
  CHECK(tuned.separated);
  CHECK(tuned.violating_mass <= 0.001);
  CHECK(tuned.violating_mass > 0.0);
}
