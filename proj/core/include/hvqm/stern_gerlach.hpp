#pragma once

#include <complex>

namespace hvqm {

// Stern-Gerlach magnet parameters. mu = eB'/(2 m_e c) is the phase-gradient
// rate, T the transit time, m_a the atom mass; g_M = mu T / m_a plays the
// role of the von Neumann coupling.
struct SGParams {
  double mu = 1.0;
  double T = 1.0;
  double m_a = 1.0;

  double g_M() const noexcept { return mu * T / m_a; }
};

// Phase wavevector imprinted on the atomic packet at the magnet exit:
// Delta_l = mu * l * T.
double phase_imprint(const SGParams& sg, double l);

// Free-flight Gaussian packet of the lambda-dependent kinetic equation
// i|lambda| dPsi/dt = -(lambda^2 / 2 m_a) d^2Psi/dz^2.
//
// wavevector is the actual phase gradient k0 of exp(i k0 z); the packet
// drifts with group velocity k0 |lambda| / m_a. The complex width is
// sigma_t(lambda) = sigma0 (1 + i |lambda| t / (2 m_a sigma0^2)) and the
// spatial density is a normalized Gaussian of variance
// sigma0^2 (1 + (|lambda| t / (2 m_a sigma0^2))^2).
struct GaussianPacket {
  double sigma0 = 1.0;
  double center = 0.0;
  double wavevector = 0.0;
  double m_a = 1.0;
  double lambda = 1.0;
  double t = 0.0;

  std::complex<double> complex_width() const;
  double spatial_variance() const;
  double density(double z) const;           // normalized |psi|^2
  std::complex<double> psi(double z) const;  // unit-mass amplitude
};

// Exact free evolution by time dt: center advances by
// wavevector * |lambda| * dt / m_a (for the SG pipeline, with
// wavevector = Delta_l / hbar, this is g_M l |lambda| dt / hbar), the width
// follows sigma_t(lambda), and the density stays normalized.
GaussianPacket analytic_evolve(const GaussianPacket& p, double dt);

// Inverts the pointer map: l' = shift * hbar / (g_M * t). Composed with
// analytic_evolve this reproduces the von Neumann law l' = |lambda| l / hbar.
// g_M * t == 0 -> error (no measurement occurred).
double sg_outcome(double shift, double g_M, double t, double hbar);

}  // namespace hvqm
