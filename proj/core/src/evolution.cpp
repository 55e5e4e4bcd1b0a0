#include "hvqm/evolution.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <utility>

namespace hvqm {

namespace {

constexpr double kPi = 3.141592653589793238462643;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_grid(const WaveGrid& g) {
  if (g.n < 2 || g.values.size() != g.n) {
    throw std::invalid_argument("grid needs n >= 2 and matching value array");
  }
  if (!is_pow2(g.n)) {
    throw std::invalid_argument("spectral engine requires a power-of-two grid");
  }
  if (!(g.z_max > g.z_min)) {
    throw std::invalid_argument("grid needs z_max > z_min");
  }
}

double grid_norm(const WaveGrid& g) {
  double s = 0.0;
  for (const auto& v : g.values) s += std::norm(v);
  return s * g.dz();
}

// Shared Crank-Nicolson spectral kernel. Per mode the one-step Cayley
// operator (1 - i w dt/2)/(1 + i w dt/2) has unit modulus and phase
// -2 atan(w dt / 2), so N steps apply exactly as one rotation.
WaveGrid cn_propagate(const WaveGrid& grid,
                      const std::function<double(double)>& omega, double dt,
                      long steps, double* spectral_mass_outer_half) {
  check_grid(grid);
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (steps > 0 && !(dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }

  WaveGrid out = grid;
  detail::fft_inplace(out.values, false);

  if (spectral_mass_outer_half != nullptr) {
    const double k_half = 0.5 * kPi / grid.dz();
    double outer = 0.0, total = 0.0;
    for (std::size_t m = 0; m < out.n; ++m) {
      const double mass = std::norm(out.values[m]);
      total += mass;
      if (std::abs(detail::mode_k(m, out.n, out.length())) > k_half) {
        outer += mass;
      }
    }
    *spectral_mass_outer_half = total > 0.0 ? outer / total : 0.0;
  }

  const double n_steps = static_cast<double>(steps);
  for (std::size_t m = 0; m < out.n; ++m) {
    const double w = omega(detail::mode_k(m, out.n, out.length()));
    out.values[m] *= std::polar(1.0, -2.0 * n_steps * std::atan(0.5 * w * dt));
  }

  detail::fft_inplace(out.values, true);
  return out;
}

}  // namespace

WaveGrid make_gaussian_grid(double z_min, double z_max, std::size_t n,
                            double center, double sigma0, double k0) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  WaveGrid g{z_min, z_max, n, {}};
  g.values.resize(n);
  check_grid(g);
  for (std::size_t j = 0; j < n; ++j) {
    const double d = g.z(j) - center;
    g.values[j] = std::polar(std::exp(-d * d / (4.0 * sigma0 * sigma0)),
                             k0 * g.z(j));
  }
  const double norm = grid_norm(g);
  if (!(norm > 0.0)) throw SolverError("packet has zero discrete mass");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : g.values) v *= scale;
  return g;
}

Observables observables(const WaveGrid& grid) {
  if (grid.n == 0 || grid.values.size() != grid.n) {
    throw std::invalid_argument("grid needs a matching value array");
  }
  const double dz = grid.dz();
  double norm = 0.0, mean = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double mass = std::norm(grid.values[j]) * dz;
    norm += mass;
    mean += grid.z(j) * mass;
  }
  mean /= norm;
  double var = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double d = grid.z(j) - mean;
    var += d * d * std::norm(grid.values[j]) * dz;
  }
  return Observables{norm, mean, var / norm};
}

WaveGrid advect(const WaveGrid& grid, double speed, double dt, long steps) {
  const double norm_in = grid_norm(grid);
  WaveGrid out = cn_propagate(
      grid, [speed](double k) { return speed * k; }, dt, steps, nullptr);
  const double norm_out = grid_norm(out);
  if (std::abs(norm_out - norm_in) > 0.01 * norm_in) {
    throw SolverError("advection unstable: norm drifted by " +
                      std::to_string(norm_out - norm_in) + " from " +
                      std::to_string(norm_in));
  }
  return out;
}

WaveGrid evolve_free(const WaveGrid& grid, double lambda, double m_a,
                     double dt, long steps, EvolveStats* stats) {
  if (lambda == 0.0) {
    throw std::invalid_argument("lambda = 0 is excluded by the hidden law");
  }
  if (!(m_a > 0.0)) throw std::invalid_argument("atom mass must be positive");

  const double diffusivity = std::abs(lambda) / (2.0 * m_a);
  double outer_mass = 0.0;
  const double norm_in = grid_norm(grid);
  WaveGrid out = cn_propagate(
      grid, [diffusivity](double k) { return diffusivity * k * k; }, dt, steps,
      &outer_mass);
  if (stats != nullptr) {
    stats->norm_in = norm_in;
    stats->norm_out = grid_norm(out);
    stats->aliasing_warning = outer_mass > 1e-6;
  }
  return out;
}

double default_dt_free(const WaveGrid& grid, double lambda, double m_a) {
  if (lambda == 0.0) {
    throw std::invalid_argument("lambda = 0 is excluded by the hidden law");
  }
  const double k_nyq = kPi / grid.dz();
  return 0.1 * 2.0 * m_a / (std::abs(lambda) * k_nyq * k_nyq);
}

double default_dt_advect(const WaveGrid& grid, double speed) {
  if (speed == 0.0) return 1.0;  // transport is the identity; any step works
  const double k_nyq = kPi / grid.dz();
  return 0.1 / (std::abs(speed) * k_nyq);
}

void require_packet_margin(const WaveGrid& grid, double center, double sigma,
                           double n_sigmas) {
  if (center - n_sigmas * sigma < grid.z_min ||
      center + n_sigmas * sigma > grid.z_max) {
    throw SolverError("packet violates the " + std::to_string(n_sigmas) +
                      "-sigma boundary margin: center " +
                      std::to_string(center) + ", sigma " +
                      std::to_string(sigma));
  }
}

void dump_density_csv(const WaveGrid& grid, std::ostream& os) {
  os << "z,density\n";
  char buf[64];
  for (std::size_t j = 0; j < grid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", grid.z(j));
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", std::norm(grid.values[j]));
    os << buf << '\n';
  }
}

namespace detail {

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) {
    throw std::invalid_argument("fft length must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // direct twiddles: no accumulated rotation error
        const auto w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= scale;
  }
}

double mode_k(std::size_t m, std::size_t n, double length) {
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  auto idx = static_cast<std::ptrdiff_t>(m);
  if (idx >= half) idx -= static_cast<std::ptrdiff_t>(n);
  return 2.0 * kPi * static_cast<double>(idx) / length;
}

}  // namespace detail

}  // namespace hvqm
