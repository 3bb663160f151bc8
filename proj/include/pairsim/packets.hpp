#pragma once

// Initial two-particle states built from Gaussian envelopes.
//
// Single-particle packets: phi_+ starts at R0 - r0/2 moving with velocity
// K0/2 + k0, phi_- starts at R0 + r0/2 moving with K0/2 - k0, so the pair
// approaches and collides at t = r0/(2 k0).

#include <functional>
#include <memory>
#include <string>

#include "pairsim/types.hpp"

namespace pairsim::packets {

Complex envelope_G(double K, const PacketParams& p);
Complex envelope_g(double k, const PacketParams& p, EnvelopeKind kind);

/// sign = +1 or -1.
Complex single_packet_phi(int sign, double x, const PacketParams& p);

/// (x - centre) * single_packet_phi: the node-excited companion packet.
Complex single_packet_phi_excited(int sign, double x, const PacketParams& p);

/// Centre of single_packet_phi(sign, .) at t = 0.
double single_packet_centre(int sign, const PacketParams& p);

/// An immutable two-particle amplitude over (x1, x2). Copies share the
/// underlying callable, which must be thread-safe (all factory-built states
/// are pure).
class TwoParticleState {
 public:
  using Amplitude = std::function<Complex(double, double)>;

  TwoParticleState(Amplitude amplitude, Symmetry symmetry, PacketParams params,
                   EnvelopeKind kind, std::string form);

  Complex operator()(double x1, double x2) const { return (*amplitude_)(x1, x2); }
  Symmetry symmetry() const { return symmetry_; }
  const PacketParams& params() const { return params_; }
  EnvelopeKind kind() const { return kind_; }
  const std::string& form() const { return form_; }

 private:
  std::shared_ptr<const Amplitude> amplitude_;
  Symmetry symmetry_;
  PacketParams params_;
  EnvelopeKind kind_;
  std::string form_;
};

/// int |relative part of the exact superposition at t = 0|^2 dr over
/// |r| <= r0 + 12/beta, by adaptive quadrature.
double relative_norm_squared(const PacketParams& p, EnvelopeKind kind);

/// Amplitude (after normalisation) of the non-decaying |r| -> infinity tail
/// gamma * pi * |g(0)| of the exact superposition. States with a tail above
/// ~1e-4 are poor models of two isolated packets.
double tail_amplitude(const PacketParams& p, EnvelopeKind kind);

/// Normalised int int G(K) g(k) psi_+(K, k, x1, x2) dK dk, evaluated in
/// closed form. Requires alpha == 2 beta.
TwoParticleState initial_state_exact(const PacketParams& p, EnvelopeKind kind);

/// The four-term Heaviside form: the exact superposition with gamma/k
/// frozen at gamma/k0, written through phi_+- products. Requires
/// alpha == 2 beta; normalised by Lambda (plain, closed form) or Xi
/// (node-excited, quadrature).
TwoParticleState initial_state_heaviside(const PacketParams& p, EnvelopeKind kind);

/// Far-separated product form: the incoming Heaviside terms without the
/// step functions, renormalised. Requires alpha == 2 beta.
TwoParticleState initial_state_approx(const PacketParams& p, EnvelopeKind kind);

/// Antisymmetric spatial partner of initial_state_approx(plain).
TwoParticleState triplet_state(const PacketParams& p);

/// Unnormalised building blocks of the Heaviside form at (x1, x2);
/// `incoming` selects the (k0 + gamma) or (k0 - gamma) pairing.
Complex heaviside_term(double x1, double x2, const PacketParams& p, EnvelopeKind kind,
                       bool incoming);

struct NormalizationConstants {
  EnvelopeKind kind = EnvelopeKind::plain;
  /// Lambda = 4 pi^3 beta^2 (k0-gamma)^2/k0^2 (plain) or the quadrature
  /// value of Xi (node-excited), as defined by the printed displays.
  double position_space = 0.0;
  /// Omega = pi^{3/2} beta (k0-gamma)^2/k0^2 or
  /// Omega' = pi^{3/2} beta^3 (k0-gamma)^2/(4 k0^2).
  double relative = 0.0;
  /// The same constants for the incoming (k0 + gamma)-weighted packet that
  /// the forward-time states actually carry.
  double position_space_incoming = 0.0;
  double relative_incoming = 0.0;
};

/// Throws PreconditionError at k0 == gamma, where the printed constants
/// vanish.
NormalizationConstants normalization_constants(const PacketParams& p, EnvelopeKind kind);

/// int int |f(x1, x2)|^2 dx1 dx2 by nested adaptive quadrature in (R, r),
/// split at r = 0. Box: |R - R0| <= 12/alpha + 8, |r| <= r0 + 14/beta.
double norm_squared_2d(const std::function<Complex(double, double)>& f, const PacketParams& p,
                       double rel_tol = 1e-11);

}  // namespace pairsim::packets
