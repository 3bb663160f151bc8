#include "pairsim/quadrature_oracle.hpp"

#include <cmath>
#include <vector>

#include "pairsim/quadrature.hpp"
#include "pairsim/spectral.hpp"

namespace pairsim::oracle {
namespace {

constexpr Complex I{0.0, 1.0};

// Breakpoints on the r axis: the two lobe centres and a few of their widths.
std::vector<double> r_breaks(double t, double reach, const PacketParams& p) {
  const double b2 = p.beta * p.beta;
  const double width = std::sqrt(1.0 + 4.0 * b2 * b2 * t * t) / p.beta;
  const double centre = std::abs(p.r0 - 2.0 * p.k0 * t);
  std::vector<double> out{centre};
  for (int d = 1; d <= 10; ++d) {
    out.push_back(centre - d * width);
    out.push_back(centre + d * width);
  }
  for (double x = 0.0; x < reach; x += 4.0 * width) out.push_back(x);
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(n_sigma >= 8.0)) throw ConfigError("quadrature window must cover at least 8 sigma");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("quadrature tolerances must be > 0");
  if (max_subdivisions == 0) throw ConfigError("max_subdivisions must be positive");
}

Estimate momentum_integral(double r, double t, const PacketParams& p, EnvelopeKind kind,
                           const QuadratureSpec& q) {
  if (!std::isfinite(r) || !std::isfinite(t)) throw DomainError("non-finite (r, t)");
  const double b2 = p.beta * p.beta;
  auto integrand = [&](double k) {
    const double dk = k - p.k0;
    Complex env = std::exp(-dk * dk / (2.0 * b2) + I * (dk * p.r0 - k * k * t));
    if (kind == EnvelopeKind::node_excited) env *= dk;
    return env * spectral::relative_symmetric(k, r, p.gamma);
  };
  const double lo = p.k0 - q.n_sigma * p.beta;
  const double hi = p.k0 + q.n_sigma * p.beta;
  const quad::Tolerance tol{q.abs_tol, q.rel_tol, q.max_subdivisions};
  const auto res = quad::integrate<Complex>(integrand, lo, hi, tol, {0.0, p.k0});
  if (!res.converged) {
    throw AccuracyError("momentum quadrature did not converge at r = " + std::to_string(r) +
                            ", t = " + std::to_string(t),
                        res.value, res.error);
  }
  return {res.value, res.error};
}

QuadratureOracle::QuadratureOracle(const PacketParams& p, EnvelopeKind kind, QuadratureSpec q)
    : params_(p), kind_(kind), spec_(q) {
  p.validate();
  q.validate();
  norm2_ = norm(0.0, p.r0 + 12.0 / p.beta).value.real();
}

Estimate QuadratureOracle::phi_with_error(double r, double t) const {
  const double scale = 1.0 / std::sqrt(norm2_);
  const Estimate raw = momentum_integral(r, t, params_, kind_, spec_);
  return {raw.value * scale, raw.error * scale};
}

Complex QuadratureOracle::phi(double r, double t) const { return phi_with_error(r, t).value; }

Estimate QuadratureOracle::norm(double t, double reach) const {
  const quad::Tolerance tol{1e-14, std::max(10.0 * spec_.rel_tol, 1e-10), 20000};
  auto res = quad::integrate<double>([&](double r) { return std::norm(phi(r, t)); }, 0.0, reach,
                                     tol, r_breaks(t, reach, params_));
  return {Complex(2.0 * res.value, 0.0), 2.0 * res.error};
}

Complex phi_by_quadrature(double r, double t, const PacketParams& p, EnvelopeKind kind,
                          const QuadratureSpec& q) {
  return QuadratureOracle(p, kind, q).phi(r, t);
}

}  // namespace pairsim::oracle
