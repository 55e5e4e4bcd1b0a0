#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hvqm::stats {

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  std::size_t evaluations = 0;
};

// Thrown when the adaptive rule cannot reach the requested tolerance within
// its subdivision budget. Never returns a silently wrong value.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive nested quadrature of f over the finite interval (a, b).
// |value - integral| <= max(tol, est_error) for smooth f; non-convergence
// throws QuadratureError.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double tol = 1e-12,
                           unsigned max_depth = 15);

// Integral of g over (0, inf) through the substitution x = ln(lambda),
// windowed to ln_center +- window_sigmas * sigma. For log-normal weights the
// tail mass outside a 12-sigma window is below 1e-30, so the improper
// integral becomes a well-conditioned finite one.
QuadratureResult integrate_log_halfline(const std::function<double(double)>& g,
                                        double ln_center, double sigma,
                                        double tol = 1e-12,
                                        double window_sigmas = 12.0);

struct KSReport {
  double d_statistic = 0.0;
  std::size_t n = 0;
  double threshold_at_alpha = 0.0;
  bool pass = false;
};

// One-sample Kolmogorov-Smirnov test. D is the exact sup-distance over the
// sorted sample; the threshold uses the asymptotic form c(alpha)/sqrt(n),
// c(alpha) = sqrt(-ln(alpha/2)/2).
KSReport ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf, double alpha);

struct MomentEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Sample moment of order k in {1, 2} plus its standard error
// sd(x^k)/sqrt(n). Requires n >= 2.
MomentEstimate mc_moment(const std::vector<double>& samples, unsigned k);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace hvqm::stats
