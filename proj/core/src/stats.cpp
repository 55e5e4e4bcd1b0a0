#include "hvqm/stats.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hvqm::stats {

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol, unsigned max_depth) {
  if (!(a < b)) {
    throw std::invalid_argument("integration bounds must satisfy a < b");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerance must be positive");
  }

  std::size_t evaluations = 0;
  auto counted = [&](double x) {
    ++evaluations;
    return f(x);
  };

  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;

  // The declared error estimate is the disagreement between the whole-domain
  // run and a mid-point split (the value must be stable under a domain
  // split); the rule's own per-panel estimate tends to be very conservative
  // for narrow smooth integrands.
  double err_whole = 0.0, err_lo = 0.0, err_hi = 0.0;
  const double whole = rule::integrate(counted, a, b, max_depth, tol,
                                       &err_whole);
  const double mid = 0.5 * (a + b);
  const double split =
      rule::integrate(counted, a, mid, max_depth, tol, &err_lo) +
      rule::integrate(counted, mid, b, max_depth, tol, &err_hi);

  const double value = split;
  const double est_error =
      std::max(std::abs(split - whole),
               4.0 * std::numeric_limits<double>::epsilon() * std::abs(value));

  QuadratureResult result{value, est_error, evaluations};
  if (!std::isfinite(value) ||
      est_error > std::max(tol, tol * std::abs(value))) {
    throw QuadratureError("quadrature did not converge: estimated error " +
                          std::to_string(est_error) + " exceeds tolerance");
  }
  return result;
}

QuadratureResult integrate_log_halfline(const std::function<double(double)>& g,
                                        double ln_center, double sigma,
                                        double tol, double window_sigmas) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("log-halfline window needs sigma > 0");
  }
  auto integrand = [&](double x) {
    const double lambda = std::exp(x);
    return g(lambda) * lambda;  // d(lambda) = lambda dx
  };
  return integrate(integrand, ln_center - window_sigmas * sigma,
                   ln_center + window_sigmas * sigma, tol);
}

KSReport ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf, double alpha) {
  if (samples.empty()) {
    throw std::invalid_argument("ks_test requires a non-empty sample");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  std::sort(samples.begin(), samples.end());

  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double fi = cdf(samples[i]);
    const double lo = fi - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - fi;
    d = std::max(d, std::max(lo, hi));
  }

  const double c_alpha = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double threshold = c_alpha / std::sqrt(n);
  return KSReport{d, samples.size(), threshold, d < threshold};
}

MomentEstimate mc_moment(const std::vector<double>& samples, unsigned k) {
  if (k != 1 && k != 2) {
    throw std::invalid_argument("mc_moment supports k in {1, 2}");
  }
  if (samples.size() < 2) {
    throw std::invalid_argument("mc_moment requires at least two samples");
  }
  const double n = static_cast<double>(samples.size());

  double mean = 0.0;
  for (double x : samples) mean += (k == 1 ? x : x * x);
  mean /= n;

  double ss = 0.0;
  for (double x : samples) {
    const double v = (k == 1 ? x : x * x) - mean;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  return MomentEstimate{mean, sd / std::sqrt(n)};
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / 1.4142135623730950488);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal quantile level must lie in (0, 1)");
  }
  static const boost::math::normal_distribution<double> unit{};
  return boost::math::quantile(unit, p);
}

}  // namespace hvqm::stats
