#include "hvqm/hidden_density.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hvqm/stats.hpp"

namespace hvqm {

namespace {

constexpr double kSqrtTwoPi = 2.506628274631000502415765;

void check_params(const HiddenVarParams& p) {
  if (!std::isfinite(p.hbar) || !std::isfinite(p.sigma)) {
    throw std::invalid_argument("hidden-variable params must be finite");
  }
  if (p.hbar <= 0.0) {
    throw std::invalid_argument("hbar must be positive");
  }
  if (p.sigma < 0.0) {
    throw std::invalid_argument("sigma must be non-negative");
  }
}

}  // namespace

HalfLineDensity HalfLineDensity::lognormal(HiddenVarParams p) {
  check_params(p);
  if (p.sigma == 0.0) {
    throw std::invalid_argument(
        "sigma = 0 denotes the degenerate law; use HalfLineDensity::dirac");
  }
  return HalfLineDensity(HalfLineFamily::LogNormal, p);
}

HalfLineDensity HalfLineDensity::dirac(double hbar) {
  HiddenVarParams p{hbar, 0.0};
  check_params(p);
  return HalfLineDensity(HalfLineFamily::DiracAtHbar, p);
}

double HalfLineDensity::pdf(double lambda) const {
  if (is_atomic()) {
    throw std::logic_error("point mass at hbar has no density function");
  }
  if (lambda <= 0.0) return 0.0;
  const double s = params_.sigma;
  const double u = (std::log(lambda) - std::log(params_.hbar)) / s;
  return std::exp(-0.5 * u * u) / (lambda * s * kSqrtTwoPi);
}

double HalfLineDensity::cdf(double lambda) const {
  if (lambda <= 0.0) return 0.0;
  if (is_atomic()) return lambda >= params_.hbar ? 1.0 : 0.0;
  const double u =
      (std::log(lambda) - std::log(params_.hbar)) / params_.sigma;
  return stats::normal_cdf(u);
}

double HalfLineDensity::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  }
  if (is_atomic()) return params_.hbar;
  return params_.hbar * std::exp(params_.sigma * stats::normal_quantile(p));
}

double HalfLineDensity::moment(unsigned k) const {
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  if (is_atomic()) return std::pow(params_.hbar, kk);
  const double expo = 0.5 * kk * kk * params_.sigma * params_.sigma;
  // hbar^k e^{k^2 sigma^2/2}; guard the exponent before exp() can saturate.
  if (expo + kk * std::abs(std::log(params_.hbar)) > 700.0) {
    throw std::overflow_error("log-normal moment exceeds double range");
  }
  return std::pow(params_.hbar, kk) * std::exp(expo);
}

double HalfLineDensity::variance() const {
  if (is_atomic()) return 0.0;
  const double m1 = moment(1);
  return moment(2) - m1 * m1;
}

double HalfLineDensity::mode() const {
  if (is_atomic()) return params_.hbar;
  return params_.hbar * std::exp(-params_.sigma * params_.sigma);
}

double HalfLineDensity::sample_magnitude(SeedStream& rng) const {
  if (is_atomic()) return params_.hbar;
  return std::exp(rng.normal(std::log(params_.hbar), params_.sigma));
}

HalfLineDensity make_lognormal(HiddenVarParams p) {
  return HalfLineDensity::lognormal(p);
}

double moment_plus(const HalfLineDensity& d, unsigned k) { return d.moment(k); }

double HiddenDensity::pdf(double lambda) const {
  if (lambda == 0.0) return 0.0;  // lambda != 0: the atom at 0 has mass 0
  return 0.5 * plus_.pdf(std::abs(lambda));
}

double HiddenDensity::sample(SeedStream& rng) const {
  const double magnitude = plus_.sample_magnitude(rng);
  return rng.sign() * magnitude;
}

HiddenDensity symmetrize(HalfLineDensity plus) { return HiddenDensity(plus); }

std::vector<double> sample_lambda(const HiddenDensity& density,
                                  SeedStream& rng, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("sample count must be at least 1");
  }
  std::vector<double> out(n);
  for (auto& x : out) x = density.sample(rng);
  return out;
}

}  // namespace hvqm
