#pragma once

// Closed-form time evolution of the separable states Phi(R, t) phi(r, t).
//
// The relative wave is the exact superposition of symmetric eigenmodes,
// evaluated through the Faddeeva function (kernels.hpp). Normalisation is
// fixed at t = 0 over the window |r| <= r0 + 12/beta, see
// packets::relative_norm_squared.

#include <span>
#include <vector>

#include "pairsim/kernels.hpp"
#include "pairsim/types.hpp"

namespace pairsim::analytic {

/// Normalised centre-of-mass packet; int |.|^2 dR = 1 for all t.
Complex com_packet(double R, double t, const PacketParams& p);

/// 1/e half width of |com_packet|^2 at time t.
double com_packet_width(double t, const PacketParams& p);

/// Evaluator that caches the relative normalisation of one configuration.
class SeparableEvolution {
 public:
  SeparableEvolution(const PacketParams& p, EnvelopeKind kind);

  Complex com(double R, double t) const;
  Complex rel(double r, double t) const;
  Complex operator()(double x1, double x2, double t) const;

  /// int |rel(r, t)|^2 dr over |r| <= reach.
  double rel_norm(double t, double reach) const;

  const PacketParams& params() const { return params_; }
  EnvelopeKind kind() const { return kind_; }
  /// Unnormalised relative norm^2 at t = 0.
  double relative_scale() const { return rel_norm2_; }

 private:
  PacketParams params_;
  EnvelopeKind kind_;
  double com_scale_;
  double rel_norm2_;
  double rel_scale_;
};

/// Normalised relative waves. Each call recomputes the normalisation; use
/// SeparableEvolution for repeated evaluation.
Complex rel_wave_plain(double r, double t, const PacketParams& p);
Complex rel_wave_excited(double r, double t, const PacketParams& p);

/// One of the two Gaussian branches of the fixed-momentum form.
/// sign = +1 is the incoming branch (centre |r| = r0 - 2 k0 t), sign = -1
/// the outgoing one (centre |r| = 2 k0 t - r0).
struct ThetaTerm {
  int sign = +1;
  Complex value;
  double envelope = 0.0;
  double phase = 0.0;
};

/// Unnormalised branch F(-+|r|, t)/(2 k0).
ThetaTerm theta_term(int sign, double r, double t, const PacketParams& p, EnvelopeKind kind);

/// (k0 + gamma) Theta_+ + (k0 - gamma) Theta_-, normalised with the
/// incoming-packet constant. Differs from the exact wave at O(gamma beta/k0^2).
Complex rel_wave_fixed_momentum(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// The printed Theta_+-/Delta_+- expression verbatim (including its
/// normalisation constant). Kept for auditing; requires k0 != gamma.
Complex rel_wave_printed(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// True when beta^4 t^2 >= 100 and k0 t >= 10 r0.
bool asymptotic_regime(double t, const PacketParams& p);

/// Stationary-phase density
///   (pi / (4 t N0)) (1 - gamma/ks)^2 |g(ks) + g(-ks)|^2,  ks = |r|/(2t).
/// Throws PreconditionError outside asymptotic_regime.
double asymptotic_density(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// The printed two-term asymptotic density, verbatim. Same gate; requires
/// k0 != gamma.
double asymptotic_density_printed(double r, double t, const PacketParams& p,
                                  EnvelopeKind kind);

/// max(10/beta^2, 10 r0/k0, 50/k0^2).
double late_time(const PacketParams& p);

struct ResidualProbability {
  /// (k0+gamma)^2/(k0-gamma)^2; NaN at k0 == gamma.
  double printed = 0.0;
  /// int |rel|^2 dr at late_time over |r| <= 2 k0 t + 10 relative_width.
  double integrated = 0.0;
  double error = 0.0;
  /// Share of `integrated` carried by the non-decaying tail of the literal
  /// superposition: 2 * reach * tail_amplitude^2.
  double tail_mass = 0.0;
  double t = 0.0;
  double reach = 0.0;
};

ResidualProbability residual_probability(const PacketParams& p, EnvelopeKind kind);

/// Antisymmetric relative packet int g(k) sin(kr) e^{-ik^2 t} dk (plain),
/// normalised in closed form. gamma plays no role.
Complex triplet_evolution(double r, double t, const PacketParams& p);

struct ProfileRow {
  double t, r;
  Complex value;
};

/// Samples rel on the (t, r) mesh, t-major.
std::vector<ProfileRow> sample_profile(const SeparableEvolution& ev, std::span<const double> ts,
                                       std::span<const double> rs);

}  // namespace pairsim::analytic
