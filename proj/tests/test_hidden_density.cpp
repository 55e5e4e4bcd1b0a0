#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hvqm/hidden_density.hpp"
#include "hvqm/rng.hpp"
#include "hvqm/stats.hpp"
#include "test_util.hpp"

using namespace hvqm;

TEST_CASE("log-normal pdf: point value, mode, normalization") {
  const auto d = make_lognormal({1.0, 0.5});
  // 1 / sqrt(2 pi 0.25)
  CHECK(d.pdf(1.0) == doctest::Approx(0.7978845608028654).epsilon(1e-14));
  CHECK(d.pdf(-1.0) == 0.0);
  CHECK(d.pdf(0.0) == 0.0);

  const auto d3 = make_lognormal({1.0, 0.3});
  CHECK(d3.mode() == doctest::Approx(0.9139311852712282).epsilon(1e-14));

  const auto d2 = make_lognormal({2.0, 0.3});
  auto norm = stats::integrate_log_halfline(
      [&](double lam) { return d2.pdf(lam); }, std::log(2.0), 0.3);
  CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("log-normal construction rejects degenerate or non-finite params") {
  CHECK_THROWS_AS(make_lognormal({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_lognormal({0.0, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(make_lognormal({-1.0, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(make_lognormal({1.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(
      make_lognormal({std::numeric_limits<double>::quiet_NaN(), 0.3}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      make_lognormal({1.0, std::numeric_limits<double>::infinity()}),
      std::invalid_argument);
}

TEST_CASE("moment_plus: closed forms against the quadrature oracle") {
  const auto d = make_lognormal({1.0, 0.3});
  // e^{0.045}
  CHECK(moment_plus(d, 1) ==
        doctest::Approx(1.0460278599087169).epsilon(1e-14));
  CHECK(moment_plus(d, 1) ==
        doctest::Approx(testutil::quad_moment_plus(d, 1)).epsilon(1e-8));
  CHECK(moment_plus(d, 2) ==
        doctest::Approx(testutil::quad_moment_plus(d, 2)).epsilon(1e-8));

  // Var = e^{0.09}(e^{0.09}-1)
  const double var_quad = testutil::quad_moment_plus(d, 2) -
                          testutil::quad_moment_plus(d, 1) *
                              testutil::quad_moment_plus(d, 1);
  CHECK(d.variance() == doctest::Approx(0.1030430794165998).epsilon(1e-13));
  CHECK(d.variance() == doctest::Approx(var_quad).epsilon(1e-8));

  const auto dd = HalfLineDensity::dirac(1.0);
  CHECK(moment_plus(dd, 2) == 1.0);
  CHECK(moment_plus(HalfLineDensity::dirac(2.0), 2) == 4.0);
  CHECK(dd.variance() == 0.0);
}

TEST_CASE("moment_plus: exponent overflow guard") {
  const auto wide = make_lognormal({1.0, 20.0});
  CHECK_THROWS_AS(moment_plus(wide, 2), std::overflow_error);
}

TEST_CASE("symmetrize: even density, halves of mass 1/2") {
  const auto P = symmetrize(make_lognormal({1.0, 0.3}));
  for (int i = 1; i <= 100; ++i) {
    const double lam = 0.05 * i;
    CHECK(P.pdf(lam) == P.pdf(-lam));  // exact, by construction
  }
  CHECK(P.pdf(0.0) == 0.0);

  auto half = stats::integrate_log_halfline(
      [&](double lam) { return P.pdf(lam); }, 0.0, 0.3);
  CHECK(2.0 * half.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("symmetrize: degenerate family samples +-hbar with fair sign") {
  const auto P = symmetrize(HalfLineDensity::dirac(1.0));
  SeedStream rng(5);
  const std::size_t n = 10000;
  double sign_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = P.sample(rng);
    CHECK(std::abs(lam) == 1.0);
    sign_sum += lam;
  }
  CHECK(std::abs(sign_sum / n) <= 4.0 / std::sqrt(double(n)));
}

TEST_CASE("sample_lambda: reproducible, sign-magnitude independent") {
  const auto P = symmetrize(make_lognormal({1.0, 0.3}));
  SeedStream a(123), b(123), c(123, 1);
  const auto xs = sample_lambda(P, a, 1000);
  const auto ys = sample_lambda(P, b, 1000);
  const auto zs = sample_lambda(P, c, 1000);
  CHECK(xs == ys);   // bit-identical for the same (master, stream)
  CHECK(xs != zs);   // a different worker stream decorrelates

  CHECK_THROWS_AS(sample_lambda(P, a, 0), std::invalid_argument);
}

TEST_CASE("sample_lambda: moments and distribution at n = 1e6") {
  const auto plus = make_lognormal({1.0, 0.3});
  const auto P = symmetrize(plus);
  SeedStream rng(2024);
  const auto lams = sample_lambda(P, rng, 1000000);

  std::vector<double> mags(lams.size());
  for (std::size_t i = 0; i < lams.size(); ++i) mags[i] = std::abs(lams[i]);

  auto m1 = stats::mc_moment(mags, 1);
  CHECK(std::abs(m1.estimate - moment_plus(plus, 1)) <=
        4.0 * m1.standard_error);

  auto ks = stats::ks_test(
      mags, [&](double x) { return plus.cdf(x); }, 0.01);
  CHECK(ks.pass);
}

TEST_CASE("sampling soundness: both families, k in {1, 2}") {
  SUBCASE("log-normal") {
    const auto plus = make_lognormal({1.0, 0.2});
    const auto P = symmetrize(plus);
    SeedStream rng(77);
    const auto lams = sample_lambda(P, rng, 1000000);
    std::vector<double> mags(lams.size());
    for (std::size_t i = 0; i < lams.size(); ++i) mags[i] = std::abs(lams[i]);
    for (unsigned k : {1u, 2u}) {
      auto est = stats::mc_moment(mags, k);
      CHECK(std::abs(est.estimate - moment_plus(plus, k)) <=
            4.0 * est.standard_error);
    }
  }
  SUBCASE("degenerate") {
    const auto plus = HalfLineDensity::dirac(1.5);
    const auto P = symmetrize(plus);
    SeedStream rng(78);
    const auto lams = sample_lambda(P, rng, 100000);
    for (unsigned k : {1u, 2u}) {
      for (double lam : lams) {
        if (std::pow(std::abs(lam), double(k)) != moment_plus(plus, k)) {
          FAIL("degenerate draw off the point mass");
        }
      }
    }
  }
}

TEST_CASE("quantum limit: sigma ladder contracts onto the two-point law") {
  const double hbar = 1.0;
  const std::vector<double> ladder{0.3, 0.1, 0.03, 0.01};
  double prev_gap1 = std::numeric_limits<double>::infinity();
  double prev_gap2 = std::numeric_limits<double>::infinity();
  double prev_var = std::numeric_limits<double>::infinity();
  for (double s : ladder) {
    const auto d = make_lognormal({hbar, s});
    const double m1 = testutil::quad_moment_plus(d, 1);
    const double m2 = testutil::quad_moment_plus(d, 2);
    const double var = m2 - m1 * m1;
    // |M_k - hbar^k| shrinks monotonically for k = 1, 2
    const double gap1 = std::abs(m1 - hbar);
    const double gap2 = std::abs(m2 - hbar * hbar);
    CHECK(gap1 < prev_gap1);
    CHECK(gap2 < prev_gap2);
    CHECK(var < prev_var);
    const double bound = hbar * hbar * std::exp(s * s) * (std::exp(s * s) - 1.0);
    CHECK(var <= bound * (1.0 + 1e-10));
    prev_gap1 = gap1;
    prev_gap2 = gap2;
    prev_var = var;
  }
}

TEST_CASE("log-normal density is negligible near zero") {
  // Supports dropping the small-|lambda| regime: pdf < 1e-12 left of
  // hbar e^{-8 sigma} for sigma <= 0.3.
  for (double s : {0.01, 0.03, 0.1, 0.3}) {
    const auto d = make_lognormal({1.0, s});
    const double edge = std::exp(-8.0 * s);
    for (int i = 1; i <= 20; ++i) {
      const double lam = edge * i / 20.0;
      CHECK(d.pdf(lam) < 1e-12);
    }
  }
}

TEST_CASE("half-line cdf and quantile are consistent") {
  const auto d = make_lognormal({2.0, 0.4});
  for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
    CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  const auto dd = HalfLineDensity::dirac(2.0);
  CHECK(dd.quantile(0.3) == 2.0);
  CHECK(dd.cdf(1.9) == 0.0);
  CHECK(dd.cdf(2.0) == 1.0);
  CHECK_THROWS_AS(dd.pdf(1.0), std::logic_error);
}
