#include "hvqm/von_neumann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace hvqm {

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

SpectralState::SpectralState(std::vector<SpectralLevel> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw std::invalid_argument("spectral state needs at least one level");
  }
  double total = 0.0;
  for (const auto& lvl : levels_) {
    check_finite(lvl.l, "eigenvalue");
    total += std::norm(lvl.amplitude);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("amplitudes must satisfy sum |c_k|^2 = 1");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    for (std::size_t j = i + 1; j < levels_.size(); ++j) {
      if (levels_[i].l == levels_[j].l) {
        throw std::invalid_argument("eigenvalues must be pairwise distinct");
      }
    }
  }
}

SpectralState SpectralState::eigenstate(double l) {
  return SpectralState({SpectralLevel{l, {1.0, 0.0}}});
}

double SpectralState::quantum_mean() const {
  double m = 0.0;
  for (const auto& lvl : levels_) m += lvl.l * std::norm(lvl.amplitude);
  return m;
}

double SpectralState::quantum_variance() const {
  const double mq = quantum_mean();
  double v = 0.0;
  for (const auto& lvl : levels_) {
    const double d = lvl.l - mq;
    v += d * d * std::norm(lvl.amplitude);
  }
  return v;
}

void MeasurementConfig::validate() const {
  check_finite(g, "coupling g");
  check_finite(t, "duration t");
  if (!(g * t > 0.0)) {
    throw std::invalid_argument("measurement requires g * t > 0");
  }
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (n_events < 1) throw std::invalid_argument("n_events must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

double classical_pointer(double q2_0, double g, double L, double t) {
  return q2_0 + g * L * t;
}

double outcome_given_eigenvalue(double l, double lambda, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  return std::abs(lambda) * l / hbar;
}

double reliability_bound(double sigma, double delta_l) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument(
        "sigma = 0: the bound is infinite (quantum mechanics exact)");
  }
  if (!(delta_l > 0.0)) {
    throw std::invalid_argument("spectral spacing must be positive");
  }
  return 2.0 * delta_l / (sigma * sigma);
}

ConditionalDensity::ConditionalDensity(double l, HalfLineDensity plus,
                                       double hbar)
    : l_(l), hbar_(hbar), plus_(std::move(plus)) {
  check_finite(l, "eigenvalue");
  if (l == 0.0) {
    throw std::invalid_argument(
        "l = 0 has no conditional density; the mixture carries it as a "
        "point mass at l' = 0");
  }
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
}

double ConditionalDensity::pdf(double lprime) const {
  // change of variables l' = |lambda| l / hbar
  if (lprime / l_ <= 0.0) return 0.0;
  return (hbar_ / std::abs(l_)) * plus_.pdf(hbar_ * lprime / l_);
}

double ConditionalDensity::cdf(double lprime) const {
  // P(l' <= x): for l > 0 the map from |lambda| is increasing, for l < 0
  // decreasing.
  if (l_ > 0.0) {
    if (lprime <= 0.0) return 0.0;
    return plus_.cdf(hbar_ * lprime / l_);
  }
  if (lprime >= 0.0) return 1.0;
  return 1.0 - plus_.cdf(hbar_ * lprime / l_);
}

double ConditionalDensity::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("quantile level must lie in (0, 1)");
  }
  const double q = l_ > 0.0 ? plus_.quantile(p) : plus_.quantile(1.0 - p);
  return l_ * q / hbar_;
}

double ConditionalDensity::mean() const {
  return l_ / hbar_ * plus_.moment(1);
}

double ConditionalDensity::second_moment() const {
  return l_ * l_ / (hbar_ * hbar_) * plus_.moment(2);
}

double ConditionalDensity::variance() const {
  return l_ * l_ / (hbar_ * hbar_) * plus_.variance();
}

double ConditionalDensity::sample(SeedStream& rng) const {
  return plus_.sample_magnitude(rng) * l_ / hbar_;
}

ConditionalDensity conditional_density(double l, const HalfLineDensity& plus,
                                       double hbar) {
  return ConditionalDensity(l, plus, hbar);
}

EigenstateMoments eigenstate_moments(double l, const HalfLineDensity& plus,
                                     double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const double r = l / hbar;
  return EigenstateMoments{r * plus.moment(1), r * r * plus.moment(2),
                           r * r * plus.variance()};
}

MixtureDensity::MixtureDensity(std::vector<Component> components,
                               std::vector<Atom> atoms)
    : components_(std::move(components)), atoms_(std::move(atoms)) {}

double MixtureDensity::pdf(double lprime) const {
  double d = 0.0;
  for (const auto& c : components_) d += c.weight * c.density.pdf(lprime);
  return d;
}

double MixtureDensity::continuous_mass() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight;
  return m;
}

double MixtureDensity::atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

MixtureDensity modified_born_density(const SpectralState& state,
                                     const HalfLineDensity& plus,
                                     double hbar) {
  std::vector<MixtureDensity::Component> components;
  std::vector<MixtureDensity::Atom> atoms;
  for (const auto& lvl : state.levels()) {
    const double w = std::norm(lvl.amplitude);
    if (lvl.l == 0.0) {
      atoms.push_back({0.0, w});  // forced: l' = |lambda| * 0 / hbar = 0
    } else if (plus.is_atomic()) {
      atoms.push_back({lvl.l, w});
    } else {
      components.push_back({ConditionalDensity(lvl.l, plus, hbar), w});
    }
  }
  return MixtureDensity(std::move(components), std::move(atoms));
}

MixtureStats mixture_moments(const SpectralState& state,
                             const HalfLineDensity& plus, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  const double mq = state.quantum_mean();
  const double varq = state.quantum_variance();
  const double h2 = hbar * hbar;
  const double m1 = mq * plus.moment(1) / hbar;
  const double var = varq * plus.moment(2) / h2 + mq * mq * plus.variance() / h2;
  return MixtureStats{m1, var + m1 * m1, var, mq, varq};
}

std::vector<MeasurementEvent> simulate_events(const SpectralState& state,
                                              const MeasurementConfig& config,
                                              const HiddenDensity& density) {
  config.validate();

  std::vector<double> cumulative;
  cumulative.reserve(state.size());
  double acc = 0.0;
  for (const auto& lvl : state.levels()) {
    acc += std::norm(lvl.amplitude);
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;  // absorb the 1e-12 normalization slack

  std::vector<MeasurementEvent> events(config.n_events);

  auto run_block = [&](unsigned worker, std::uint64_t begin,
                       std::uint64_t end) {
    SeedStream rng(config.seed, worker);
    for (std::uint64_t i = begin; i < end; ++i) {
      // Two independent randomness sources per event: the Born branch
      // (ignorance of the initial position), then lambda (inherent in the
      // dynamics), redrawn i.i.d. per event.
      const double u = rng.uniform01();
      std::size_t k = 0;
      while (k + 1 < cumulative.size() && cumulative[k] < u) ++k;
      const double l = state.levels()[k].l;

      const double lambda = density.sample(rng);
      const double lprime = std::abs(lambda) * l / config.hbar;
      events[i] = MeasurementEvent{l, lambda, lprime,
                                   config.g * lprime * config.t};
    }
  };

  const std::uint64_t n = config.n_events;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(config.workers, n));
  if (workers <= 1) {
    run_block(0, 0, n);
    return events;
  }

  const std::uint64_t block = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = static_cast<std::uint64_t>(w) * block;
    const std::uint64_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back(run_block, w, begin, end);
  }
  for (auto& th : pool) th.join();
  return events;
}

std::vector<PairSeparation> packet_separation_check(
    const MeasurementConfig& config, const SpectralState& state,
    const HalfLineDensity& plus, double lambda_quantile, double sigma0,
    double k_sep) {
  if (!(lambda_quantile > 0.0 && lambda_quantile < 1.0)) {
    throw std::invalid_argument("lambda quantile must lie in (0, 1)");
  }
  if (!(k_sep > 0.0)) throw std::invalid_argument("k_sep must be positive");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");

  const double lambda_q = plus.quantile(lambda_quantile);
  std::vector<PairSeparation> out;
  const auto& levels = state.levels();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      const double dl = std::abs(levels[i].l - levels[j].l);
      const double gap = config.g * dl * lambda_q * config.t / config.hbar;
      const bool separated = gap > k_sep * sigma0;
      // |lambda| mass for which the two pointer packets stay closer than
      // k_sep sigma0.
      double violating = 1.0;
      if (config.g * dl * config.t > 0.0) {
        const double lambda_crit =
            k_sep * sigma0 * config.hbar / (config.g * dl * config.t);
        violating = plus.cdf(lambda_crit);
      }
      out.push_back({i, j, separated, violating});
    }
  }
  return out;
}

}  // namespace hvqm
