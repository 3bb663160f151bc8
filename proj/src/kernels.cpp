#include "pairsim/kernels.hpp"

#include <cmath>

#include "pairsim/faddeeva.hpp"

namespace pairsim::kernels {
namespace {

constexpr Complex I{0.0, 1.0};

// Quadratic coefficient of the relative exponent: g(k) e^{-ik^2 t} =
// exp(-A q^2 + ...), q = k - k0.
Complex relative_A(double t, double beta) {
  return Complex(1.0, 2.0 * beta * beta * t) / (2.0 * beta * beta);
}

// e^{-A k0^2} erfc((w - 2 i A k0)/(2 sqrt A)), with the Gaussian factor
// exp(-w^2/(4A) + i k0 w) formed directly.
Complex shifted_tail(double w, Complex A, double k0) {
  const Complex sqrtA = std::sqrt(A);
  const Complex z = (w - 2.0 * I * A * k0) / (2.0 * sqrtA);
  const Complex gauss = -w * w / (4.0 * A) + I * k0 * w;
  return shifted_erfc(z, A * k0 * k0, gauss);
}

}  // namespace

Complex free_transform(double s, double t, const PacketParams& p, EnvelopeKind kind) {
  const Complex A = relative_A(t, p.beta);
  const double b = p.r0 - 2.0 * p.k0 * t;
  const double w = s + b;
  const Complex f0 = std::sqrt(kPi / A) *
                     std::exp(-w * w / (4.0 * A) + I * (p.k0 * s - p.k0 * p.k0 * t));
  if (kind == EnvelopeKind::plain) return f0;
  return I * w / (2.0 * A) * f0;
}

Complex free_transform_window(double rho, double t, const PacketParams& p, EnvelopeKind kind) {
  const Complex A = relative_A(t, p.beta);
  const double k0 = p.k0;
  const double b = p.r0 - 2.0 * k0 * t;
  const double w1 = b - rho;
  const double w2 = b + rho;
  const Complex C = std::sqrt(kPi / A) * std::exp(-I * (k0 * k0 * t + k0 * b));
  // int_{w1}^{w2} exp(-w^2/(4A) + i k0 w) dw
  const Complex I0 = std::sqrt(kPi * A) * (shifted_tail(w1, A, k0) - shifted_tail(w2, A, k0));
  if (kind == EnvelopeKind::plain) return C * I0;
  auto E = [&](double w) { return std::exp(-w * w / (4.0 * A) + I * k0 * w); };
  return I * C * (-(E(w2) - E(w1)) + I * k0 * I0);
}

Complex relative_symmetric(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  const double rho = std::abs(r);
  Complex out = 0.5 * (free_transform(rho, t, p, kind) + free_transform(-rho, t, p, kind));
  if (p.gamma != 0.0) out -= 0.5 * I * p.gamma * free_transform_window(rho, t, p, kind);
  return out;
}

Complex relative_fixed_momentum(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  const double rho = std::abs(r);
  const double ratio = p.gamma / p.k0;
  return 0.5 * (1.0 - ratio) * free_transform(rho, t, p, kind) +
         0.5 * (1.0 + ratio) * free_transform(-rho, t, p, kind);
}

Complex relative_antisymmetric(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  return (free_transform(r, t, p, kind) - free_transform(-r, t, p, kind)) / (2.0 * I);
}

Complex com_transform(double R, double t, const PacketParams& p) {
  const Complex A = 1.0 / (2.0 * p.alpha * p.alpha) + I * (0.25 * t);
  const double x = R - p.R0 - 0.5 * p.K0 * t;
  return std::sqrt(kPi / A) *
         std::exp(-x * x / (4.0 * A) + I * (p.K0 * R - 0.25 * p.K0 * p.K0 * t));
}

double com_norm_squared(const PacketParams& p) { return 2.0 * std::pow(kPi, 1.5) * p.alpha; }

double free_norm_squared(const PacketParams& p, EnvelopeKind kind) {
  const double root_pi_cubed = std::pow(kPi, 1.5);
  if (kind == EnvelopeKind::plain) return 2.0 * root_pi_cubed * p.beta;
  return root_pi_cubed * p.beta * p.beta * p.beta;
}

double com_width(double t, const PacketParams& p) {
  const double a2 = p.alpha * p.alpha;
  return std::sqrt((1.0 + 0.25 * a2 * a2 * t * t) / a2);
}

double relative_width(double t, const PacketParams& p) {
  const double b2 = p.beta * p.beta;
  return std::sqrt(1.0 + 4.0 * b2 * b2 * t * t) / p.beta;
}

}  // namespace pairsim::kernels
