#include "hvqm/stern_gerlach.hpp"

#include <cmath>
#include <stdexcept>

namespace hvqm {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

double phase_imprint(const SGParams& sg, double l) {
  if (!(sg.m_a > 0.0)) throw std::invalid_argument("atom mass must be positive");
  return sg.mu * l * sg.T;
}

std::complex<double> GaussianPacket::complex_width() const {
  const double tau = std::abs(lambda) * t / (2.0 * m_a * sigma0 * sigma0);
  return sigma0 * std::complex<double>(1.0, tau);
}

double GaussianPacket::spatial_variance() const {
  const double tau = std::abs(lambda) * t / (2.0 * m_a * sigma0 * sigma0);
  return sigma0 * sigma0 * (1.0 + tau * tau);
}

double GaussianPacket::density(double z) const {
  const double s2 = spatial_variance();
  const double d = z - center;
  return std::exp(-0.5 * d * d / s2) / std::sqrt(kTwoPi * s2);
}

std::complex<double> GaussianPacket::psi(double z) const {
  const std::complex<double> st = complex_width();
  const double d = z - center;
  const std::complex<double> arg =
      -d * d / (4.0 * st * sigma0) +
      std::complex<double>(0.0, wavevector * (z - 0.5 * center));
  const double s2 = spatial_variance();
  return std::pow(kTwoPi * s2, -0.25) * std::exp(arg);
}

GaussianPacket analytic_evolve(const GaussianPacket& p, double dt) {
  if (!(p.sigma0 > 0.0) || !(p.m_a > 0.0)) {
    throw std::invalid_argument("packet needs sigma0 > 0 and m_a > 0");
  }
  if (dt < 0.0) throw std::invalid_argument("dt must be non-negative");
  GaussianPacket out = p;
  out.center += p.wavevector * std::abs(p.lambda) * dt / p.m_a;
  out.t += dt;
  return out;
}

double sg_outcome(double shift, double g_M, double t, double hbar) {
  if (g_M * t == 0.0) {
    throw std::invalid_argument("g_M * t = 0: no measurement occurred");
  }
  if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  return shift * hbar / (g_M * t);
}

}  // namespace hvqm
