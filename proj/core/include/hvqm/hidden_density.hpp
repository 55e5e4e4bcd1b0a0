#pragma once

#include <cstddef>
#include <vector>

#include "hvqm/rng.hpp"

namespace hvqm {

// Parameters of the hidden-variable law: hbar > 0 sets the scale, the
// dimensionless sigma >= 0 sets the width. sigma == 0 is the degenerate
// two-point law on {-hbar, +hbar} that reproduces standard quantization.
struct HiddenVarParams {
  double hbar = 1.0;
  double sigma = 0.0;
};

enum class HalfLineFamily { LogNormal, DiracAtHbar };

// Normalized density of the magnitude |lambda| on the half line lambda > 0.
//
// Two families are shipped: the log-normal model
//   pdf(x) = exp(-(ln x - ln hbar)^2 / (2 sigma^2)) / (x sigma sqrt(2 pi))
// and the degenerate point mass at hbar (the sigma -> 0 limit). The point
// mass has no density function; pdf() throws for it, while cdf/quantile/
// moment/sample work for both families.
class HalfLineDensity {
 public:
  static HalfLineDensity lognormal(HiddenVarParams p);  // requires sigma > 0
  static HalfLineDensity dirac(double hbar);

  HalfLineFamily family() const noexcept { return family_; }
  const HiddenVarParams& params() const noexcept { return params_; }
  double hbar() const noexcept { return params_.hbar; }
  double sigma() const noexcept { return params_.sigma; }
  bool is_atomic() const noexcept {
    return family_ == HalfLineFamily::DiracAtHbar;
  }

  double pdf(double lambda) const;  // 0 for lambda <= 0; throws if atomic
  double cdf(double lambda) const;  // P(|lambda| <= x)
  double quantile(double p) const;  // inverse cdf, p in (0, 1)

  // Closed-form moment M_k = hbar^k exp(k^2 sigma^2 / 2) (log-normal) or
  // hbar^k (point mass). Throws std::overflow_error when the exponent
  // k^2 sigma^2 / 2 leaves the double range.
  double moment(unsigned k) const;
  double variance() const;  // M_2 - M_1^2
  double mode() const;      // hbar exp(-sigma^2) for the log-normal

  double sample_magnitude(SeedStream& rng) const;

 private:
  HalfLineDensity(HalfLineFamily f, HiddenVarParams p)
      : family_(f), params_(p) {}

  HalfLineFamily family_;
  HiddenVarParams params_;
};

HalfLineDensity make_lognormal(HiddenVarParams p);
double moment_plus(const HalfLineDensity& d, unsigned k);

// Even density on the whole line built by mirroring the half-line generator:
// pdf(l) = plus.pdf(|l|) / 2 for l != 0 and pdf(0) = 0. A draw is a fair
// sign times an independent magnitude.
class HiddenDensity {
 public:
  explicit HiddenDensity(HalfLineDensity plus) : plus_(plus) {}

  const HalfLineDensity& plus() const noexcept { return plus_; }
  double pdf(double lambda) const;

  // Signed draw. Magnitude first, then sign; the order is part of the
  // reproducibility contract.
  double sample(SeedStream& rng) const;

 private:
  HalfLineDensity plus_;
};

HiddenDensity symmetrize(HalfLineDensity plus);

std::vector<double> sample_lambda(const HiddenDensity& density, SeedStream& rng,
                                  std::size_t n);

}  // namespace hvqm
