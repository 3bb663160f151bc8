#include "pairsim/types.hpp"

#include <cmath>

namespace pairsim {

std::string to_string(EnvelopeKind kind) {
  return kind == EnvelopeKind::plain ? "plain" : "node-excited";
}

EnvelopeKind envelope_kind_from_string(const std::string& s) {
  if (s == "plain") return EnvelopeKind::plain;
  if (s == "node-excited" || s == "node_excited") return EnvelopeKind::node_excited;
  throw ConfigError("unknown envelope kind '" + s + "' (expected plain|node-excited)");
}

void PacketParams::validate() const {
  for (double v : {gamma, alpha, beta, K0, k0, r0, R0}) {
    if (!std::isfinite(v)) throw DomainError("PacketParams: non-finite field");
  }
  if (gamma < 0.0) throw DomainError("PacketParams: gamma must be >= 0");
  if (alpha <= 0.0 || beta <= 0.0) throw DomainError("PacketParams: alpha, beta must be > 0");
  if (k0 <= 0.0) throw DomainError("PacketParams: k0 must be > 0");
  if (r0 <= 0.0) throw DomainError("PacketParams: r0 must be > 0");
}

bool PacketParams::separable() const {
  return std::abs(alpha - 2.0 * beta) <= 1e-12 * std::abs(alpha);
}

void PacketParams::require_separable() const {
  if (!separable()) {
    throw PreconditionError("product-state construction requires alpha == 2*beta (got alpha=" +
                            std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
}

double PacketParams::separability_quality() const {
  return std::exp(-0.5 * beta * beta * r0 * r0);
}

PacketParams PacketParams::with_equal_widths(double gamma, double beta, double k0, double r0,
                                             double K0, double R0) {
  PacketParams p;
  p.gamma = gamma;
  p.beta = beta;
  p.alpha = 2.0 * beta;
  p.k0 = k0;
  p.r0 = r0;
  p.K0 = K0;
  p.R0 = R0;
  return p;
}

}  // namespace pairsim
