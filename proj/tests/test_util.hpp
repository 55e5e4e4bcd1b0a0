#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hvqm/hidden_density.hpp"
#include "hvqm/rng.hpp"
#include "hvqm/stats.hpp"
#include "hvqm/von_neumann.hpp"

// Quadrature oracles used across the suites. They integrate through the
// implementation's pdf() only, never through its closed-form moments, so
// each closed form is checked by an independent route.
namespace testutil {

inline double quad_moment_plus(const hvqm::HalfLineDensity& d, unsigned k,
                               double tol = 1e-13) {
  auto g = [&](double lambda) { return std::pow(lambda, k) * d.pdf(lambda); };
  return hvqm::stats::integrate_log_halfline(g, std::log(d.hbar()), d.sigma(),
                                             tol)
      .value;
}

// E[f(l')] for a continuous conditional law, via the substitution
// l' = l e^u (|Jacobian| = |l| e^u), window +-12 sigma.
template <typename F>
double quad_conditional_expect(const hvqm::ConditionalDensity& c, F f,
                               double tol = 1e-13) {
  const double l = c.l();
  const double s = c.plus().sigma();
  auto integrand = [&](double u) {
    const double lp = l * std::exp(u);
    return f(lp) * c.pdf(lp) * std::abs(l) * std::exp(u);
  };
  return hvqm::stats::integrate(integrand, -12.0 * s, 12.0 * s, tol).value;
}

// E[f(l')] over the full mixture: continuous branches by quadrature plus the
// explicit point masses. Quadrature never crosses an atom.
template <typename F>
double quad_mixture_expect(const hvqm::MixtureDensity& mix, F f,
                           double tol = 1e-12) {
  double total = 0.0;
  for (const auto& comp : mix.components()) {
    total += comp.weight * quad_conditional_expect(comp.density, f, tol);
  }
  for (const auto& atom : mix.atoms()) total += atom.weight * f(atom.location);
  return total;
}

// Random spectral state: pairwise distinct small-integer eigenvalues,
// amplitudes uniform on the complex unit sphere.
inline hvqm::SpectralState random_state(hvqm::SeedStream& rng,
                                        std::size_t n_levels,
                                        bool allow_zero = true) {
  std::vector<double> levels;
  while (levels.size() < n_levels) {
    const double l =
        std::floor(rng.uniform01() * 11.0) - 5.0;  // integers in [-5, 5]
    if (!allow_zero && l == 0.0) continue;
    bool duplicate = false;
    for (double seen : levels) duplicate |= (seen == l);
    if (!duplicate) levels.push_back(l);
  }

  std::vector<hvqm::SpectralLevel> out(n_levels);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < n_levels; ++i) {
    out[i].l = levels[i];
    out[i].amplitude = {rng.normal(), rng.normal()};
    norm2 += std::norm(out[i].amplitude);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& lvl : out) lvl.amplitude *= scale;
  return hvqm::SpectralState(out);
}

}  // namespace testutil
