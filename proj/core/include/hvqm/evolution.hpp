#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace hvqm {

// Thrown on solver-side failures: norm drift past tolerance, packet too
// close to the periodic boundary, invalid grid.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Discretized 1D complex wavefunction on a periodic grid. Grid points are
// z_j = z_min + j dz, j = 0..n-1, with dz = (z_max - z_min)/n; z_max is the
// wrap-around image of z_min. The spectral engine requires n to be a power
// of two.
struct WaveGrid {
  double z_min = 0.0;
  double z_max = 1.0;
  std::size_t n = 0;
  std::vector<std::complex<double>> values;

  double dz() const noexcept {
    return (z_max - z_min) / static_cast<double>(n);
  }
  double z(std::size_t j) const noexcept {
    return z_min + static_cast<double>(j) * dz();
  }
  double length() const noexcept { return z_max - z_min; }
};

// Gaussian packet exp(-(z-center)^2/(4 sigma0^2) + i k0 z), renormalized so
// the discrete norm sum |psi_j|^2 dz is exactly 1.
WaveGrid make_gaussian_grid(double z_min, double z_max, std::size_t n,
                            double center, double sigma0, double k0);

struct Observables {
  double norm = 0.0;
  double mean_z = 0.0;
  double var_z = 0.0;
};

// Discrete moments of |psi|^2 dz.
Observables observables(const WaveGrid& grid);

// Transport step for the pointer equation d_t phi + speed d_z phi = 0.
// Crank-Nicolson in Fourier space: per mode the one-step operator is the
// unit-modulus Cayley ratio, so the norm is conserved to round-off and the
// declared convergence order is 2 in dt (spectral in space). Errors out if
// the norm drifts by more than 1%.
WaveGrid advect(const WaveGrid& grid, double speed, double dt, long steps);

struct EvolveStats {
  double norm_in = 0.0;
  double norm_out = 0.0;
  bool aliasing_warning = false;  // spectral mass beyond half the band
};

// Free evolution i d_t psi = -(|lambda| / 2 m_a) d^2_z psi (the generalized
// equation divided by |lambda| != 0), same Crank-Nicolson scheme with
// omega(k) = |lambda| k^2 / (2 m_a). lambda == 0 is rejected. Sets
// stats->aliasing_warning when more than 1e-6 of the spectral mass sits
// beyond half the resolvable band.
WaveGrid evolve_free(const WaveGrid& grid, double lambda, double m_a,
                     double dt, long steps, EvolveStats* stats = nullptr);

// Default time steps: phase advance at the Nyquist mode limited to 0.1 rad
// per step. A caller-supplied dt > 0 always wins; these apply when the user
// leaves dt unset.
double default_dt_free(const WaveGrid& grid, double lambda, double m_a);
double default_dt_advect(const WaveGrid& grid, double speed);

// Loud guard for the periodic-boundary safety margin: throws SolverError
// unless center +- n_sigmas * sigma lies inside [z_min, z_max].
void require_packet_margin(const WaveGrid& grid, double center, double sigma,
                           double n_sigmas = 12.0);

// CSV snapshot (z, density) with a header row.
void dump_density_csv(const WaveGrid& grid, std::ostream& os);

namespace detail {

// Iterative radix-2 transform, forward e^{-ikz} convention; inverse divides
// by n. Requires power-of-two length.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Angular frequency of mode m in fftfreq ordering.
double mode_k(std::size_t m, std::size_t n, double length);

}  // namespace detail

}  // namespace hvqm
