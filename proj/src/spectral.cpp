#include "pairsim/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace pairsim::spectral {
namespace {

constexpr Complex I{0.0, 1.0};

// Below this |k r| the ratio sin(k|r|)/k is evaluated by its series.
constexpr double kSeriesThreshold = 1e-4;

void require_finite(std::initializer_list<double> values, const char* where) {
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError(std::string(where) + ": non-finite argument");
  }
}

// sin(k a)/k for a >= 0.
double sin_over_k(double k, double a) {
  const double x = k * a;
  if (std::abs(x) < kSeriesThreshold) return a * (1.0 - x * x / 6.0);
  return std::sin(x) / k;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

InteractionParams::InteractionParams(double gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw DomainError("InteractionParams: gamma must be finite and > 0");
  }
}

Complex relative_symmetric(double k, double r, double gamma) {
  return std::cos(k * r) - I * gamma * sin_over_k(k, std::abs(r));
}

Complex relative_symmetric_derivative(double k, double r, double gamma, int side) {
  const double s = r != 0.0 ? sign(r) : static_cast<double>(side);
  // d/dr sin(k|r|)/k = sign(r) cos(k r)
  return -k * std::sin(k * r) - I * gamma * s * std::cos(k * r);
}

Complex psi_symmetric(MomentumPair mom, CoordinatePair pos, InteractionParams ip) {
  require_finite({mom.K, mom.k, pos.x1, pos.x2}, "psi_symmetric");
  return std::exp(I * mom.K * pos.R()) * relative_symmetric(mom.k, pos.r(), ip.gamma());
}

Complex psi_antisymmetric(MomentumPair mom, CoordinatePair pos) {
  require_finite({mom.K, mom.k, pos.x1, pos.x2}, "psi_antisymmetric");
  return std::exp(I * mom.K * pos.R()) * std::sin(mom.k * pos.r());
}

Complex psi_singularity(double K, CoordinatePair pos, InteractionParams ip) {
  require_finite({K, pos.x1, pos.x2}, "psi_singularity");
  return std::exp(I * K * pos.R()) * std::exp(-I * ip.gamma() * std::abs(pos.r()));
}

double energy(MomentumPair mom) {
  require_finite({mom.K, mom.k}, "energy");
  return 0.25 * mom.K * mom.K + mom.k * mom.k;
}

double singularity_energy(double K, InteractionParams ip) {
  return energy({K, -ip.gamma()});
}

double singularity_residual(double k, InteractionParams ip, double r_probe) {
  require_finite({k, r_probe}, "singularity_residual");
  if (r_probe <= 0.0) throw DomainError("singularity_residual: r_probe must be > 0");
  const double g = ip.gamma();
  const Complex plus = relative_symmetric_derivative(k, r_probe, g) +
                       I * g * relative_symmetric(k, r_probe, g);
  const Complex minus = relative_symmetric_derivative(k, -r_probe, g) -
                        I * g * relative_symmetric(k, -r_probe, g);
  return std::abs(plus) + std::abs(minus);
}

EigenResidual verify_eigen_relation(MomentumPair mom, InteractionParams ip, Symmetry symmetry,
                                    std::span<const double> r_samples, double h) {
  require_finite({mom.K, mom.k, h}, "verify_eigen_relation");
  if (h <= 0.0) throw DomainError("verify_eigen_relation: h must be > 0");
  const double g = ip.gamma();
  const double k = mom.k;
  auto value = [&](double r) -> Complex {
    return symmetry == Symmetry::symmetric ? relative_symmetric(k, r, g) : Complex(std::sin(k * r));
  };

  EigenResidual out;
  for (double r : r_samples) {
    if (!std::isfinite(r)) throw DomainError("verify_eigen_relation: non-finite sample");
    if (std::abs(r) <= h) {
      throw DomainError("verify_eigen_relation: bulk stencil at r=" + std::to_string(r) +
                        " touches the contact point r=0");
    }
    const Complex second = (value(r + h) - 2.0 * value(r) + value(r - h)) / (h * h);
    out.bulk = std::max(out.bulk, std::abs(-second - k * k * value(r)));
  }

  if (symmetry == Symmetry::symmetric) {
    const Complex jump = relative_symmetric_derivative(k, 0.0, g, +1) -
                         relative_symmetric_derivative(k, 0.0, g, -1);
    out.jump = std::abs(jump + 2.0 * I * g * value(0.0));
  } else {
    // sin(k r) is smooth through r = 0 and vanishes there.
    out.jump = std::abs(value(0.0));
  }
  return out;
}

}  // namespace pairsim::spectral
