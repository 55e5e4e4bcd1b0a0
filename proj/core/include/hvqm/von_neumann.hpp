#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hvqm/hidden_density.hpp"
#include "hvqm/rng.hpp"

namespace hvqm {

struct SpectralLevel {
  double l = 0.0;                          // eigenvalue, units of hbar
  std::complex<double> amplitude{0.0, 0.0};
};

// Spectral decomposition of the measured state: pairwise distinct
// eigenvalues, sum |c_k|^2 = 1 within 1e-12.
class SpectralState {
 public:
  explicit SpectralState(std::vector<SpectralLevel> levels);
  static SpectralState eigenstate(double l);

  const std::vector<SpectralLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }

  double quantum_mean() const;      // M_Q = sum l_k |c_k|^2
  double quantum_variance() const;  // VarQ = sum (l_k - M_Q)^2 |c_k|^2

 private:
  std::vector<SpectralLevel> levels_;
};

struct MeasurementConfig {
  double g = 1.0;     // coupling
  double t = 1.0;     // interaction duration
  double hbar = 1.0;
  std::uint64_t n_events = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  void validate() const;  // g*t > 0, hbar > 0, n_events >= 1, workers >= 1
};

// One simulated measurement: outcome_lprime = |lambda| chosen_l / hbar,
// pointer_shift = g * outcome_lprime * t, both exact.
struct MeasurementEvent {
  double chosen_l = 0.0;
  double lambda = 0.0;
  double outcome_lprime = 0.0;
  double pointer_shift = 0.0;
};

struct MixtureStats {
  double m1 = 0.0;    // mean of l'
  double m2 = 0.0;    // second moment of l'
  double var = 0.0;   // m2 - m1^2
  double mq = 0.0;    // quantum mean
  double varq = 0.0;  // quantum variance
};

struct EigenstateMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double var = 0.0;
};

// Classical baseline: the pointer ends at q2_0 + g*L*t.
double classical_pointer(double q2_0, double g, double L, double t);

// Outcome law l' = |lambda| l / hbar.
double outcome_given_eigenvalue(double l, double lambda, double hbar);

// Quantum number l* = 2 delta_l / sigma^2 at which the mean hidden-variable
// shift equals one spectral spacing. sigma == 0 -> error (bound infinite).
double reliability_bound(double sigma, double delta_l);

// Law of l' for an eigenstate with quantum number l != 0:
//   P(l'|l) = (hbar/|l|) plus.pdf(hbar l'/l), supported on l'/l > 0.
// For the log-normal family this is the broadening profile
//   P(l'|l) = exp(-ln^2(l'/l) / (2 sigma^2)) / (|l'| sigma sqrt(2 pi)).
// The degenerate family gives a point mass at l' = l (is_atomic()).
class ConditionalDensity {
 public:
  ConditionalDensity(double l, HalfLineDensity plus, double hbar);

  double l() const noexcept { return l_; }
  double hbar() const noexcept { return hbar_; }
  const HalfLineDensity& plus() const noexcept { return plus_; }
  bool is_atomic() const noexcept { return plus_.is_atomic(); }

  double pdf(double lprime) const;  // throws if atomic
  double cdf(double lprime) const;
  double quantile(double p) const;

  double mean() const;           // (l/hbar) M_1[P+]
  double second_moment() const;  // (l^2/hbar^2) M_2[P+]
  double variance() const;       // (l^2/hbar^2) Var[P+]

  double sample(SeedStream& rng) const;

 private:
  double l_;
  double hbar_;
  HalfLineDensity plus_;
};

ConditionalDensity conditional_density(double l, const HalfLineDensity& plus,
                                       double hbar);

EigenstateMoments eigenstate_moments(double l, const HalfLineDensity& plus,
                                     double hbar);

// Modified Born law P(l') = sum_k |c_k|^2 P(l'|l_k), represented as weighted
// continuous branches plus explicit point masses. l = 0 levels are always
// atoms at l' = 0; with the degenerate family every level is an atom.
// Quadrature over the continuous part never crosses a point mass.
class MixtureDensity {
 public:
  struct Component {
    ConditionalDensity density;
    double weight;
  };
  struct Atom {
    double location;
    double weight;
  };

  MixtureDensity(std::vector<Component> components, std::vector<Atom> atoms);

  const std::vector<Component>& components() const noexcept {
    return components_;
  }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  double pdf(double lprime) const;  // continuous part only
  double continuous_mass() const;
  double atom_mass() const;
  double total_mass() const { return continuous_mass() + atom_mass(); }

 private:
  std::vector<Component> components_;
  std::vector<Atom> atoms_;
};

MixtureDensity modified_born_density(const SpectralState& state,
                                     const HalfLineDensity& plus, double hbar);

// Closed-form mixture moments:
//   m1 = mq M_1[P+]/hbar,  var = varq M_2[P+]/hbar^2 + mq^2 Var[P+]/hbar^2.
MixtureStats mixture_moments(const SpectralState& state,
                             const HalfLineDensity& plus, double hbar);

// Monte-Carlo event generator. Per event, independently: the branch k is
// drawn with probability |c_k|^2, lambda from the symmetric hidden density,
// then l' = |lambda| l_k / hbar and shift = g l' t. Events are sharded into
// config.workers contiguous blocks; block w uses SeedStream(seed, w), so the
// output is bit-reproducible for a fixed worker count and ordered by index
// regardless of scheduling. Assumes perfectly separated pointer packets; use
// packet_separation_check to quantify the lambda-mass violating that.
std::vector<MeasurementEvent> simulate_events(const SpectralState& state,
                                              const MeasurementConfig& config,
                                              const HiddenDensity& density);

// Packet-separation predicate for one level pair: separated iff
//   g |l_i - l_j| lambda_q t / hbar > k_sep sigma0,
// with lambda_q the lambda_quantile point of |lambda|. violating_mass is the
// |lambda|-probability mass for which the pair stays closer than
// k_sep sigma0.
struct PairSeparation {
  std::size_t i = 0;
  std::size_t j = 0;
  bool separated = false;
  double violating_mass = 0.0;
};

std::vector<PairSeparation> packet_separation_check(
    const MeasurementConfig& config, const SpectralState& state,
    const HalfLineDensity& plus, double lambda_quantile, double sigma0,
    double k_sep);

}  // namespace hvqm
