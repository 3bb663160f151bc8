#pragma once

// Brute-force evaluation of the relative wave by adaptive quadrature of its
// defining momentum integral. Shares no evolution code with the closed form:
// it integrates g(k) [cos(kr) - i gamma sin(k|r|)/k] e^{-ik^2 t} directly.

#include <cstddef>

#include "pairsim/types.hpp"

namespace pairsim::oracle {

struct QuadratureSpec {
  double n_sigma = 8.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  std::size_t max_subdivisions = 10000;

  void validate() const;
};

struct Estimate {
  Complex value;
  double error = 0.0;
};

/// Unnormalised momentum integral over [k0 - n beta, k0 + n beta], split at
/// k = 0. Throws AccuracyError if the tolerance is not met.
Estimate momentum_integral(double r, double t, const PacketParams& p, EnvelopeKind kind,
                           const QuadratureSpec& q);

/// Evaluator holding its own normalisation: int |momentum_integral(r, 0)|^2 dr
/// over |r| <= r0 + 12/beta by nested quadrature.
class QuadratureOracle {
 public:
  QuadratureOracle(const PacketParams& p, EnvelopeKind kind, QuadratureSpec q = {});

  Complex phi(double r, double t) const;
  Estimate phi_with_error(double r, double t) const;

  /// int |phi(r, t)|^2 dr over |r| <= reach.
  Estimate norm(double t, double reach) const;

  double normalisation() const { return norm2_; }

 private:
  PacketParams params_;
  EnvelopeKind kind_;
  QuadratureSpec spec_;
  double norm2_ = 1.0;
};

/// Convenience wrapper that builds a QuadratureOracle per call.
Complex phi_by_quadrature(double r, double t, const PacketParams& p, EnvelopeKind kind,
                          const QuadratureSpec& q = {});

}  // namespace pairsim::oracle
