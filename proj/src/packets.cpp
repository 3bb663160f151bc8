#include "pairsim/packets.hpp"

#include <algorithm>
#include <cmath>

#include "pairsim/kernels.hpp"
#include "pairsim/quadrature.hpp"

namespace pairsim::packets {
namespace {

constexpr Complex I{0.0, 1.0};

double step(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

// phi_+(a) phi_-(b), or its node-excited antisymmetrised partner
// phi_+^(1)(a) phi_-(b) - phi_+(a) phi_-^(1)(b).
Complex pair_product(double a, double b, const PacketParams& p, EnvelopeKind kind) {
  const Complex base = single_packet_phi(+1, a, p) * single_packet_phi(-1, b, p);
  if (kind == EnvelopeKind::plain) return base;
  const double lever = (a - single_packet_centre(+1, p)) - (b - single_packet_centre(-1, p));
  return lever * base;
}

}  // namespace

Complex envelope_G(double K, const PacketParams& p) {
  const double q = K - p.K0;
  return std::exp(-q * q / (2.0 * p.alpha * p.alpha) - I * q * p.R0);
}

Complex envelope_g(double k, const PacketParams& p, EnvelopeKind kind) {
  const double q = k - p.k0;
  const Complex base = std::exp(-q * q / (2.0 * p.beta * p.beta) + I * q * p.r0);
  return kind == EnvelopeKind::plain ? base : q * base;
}

double single_packet_centre(int sign, const PacketParams& p) {
  return p.R0 - 0.5 * sign * p.r0;
}

Complex single_packet_phi(int sign, double x, const PacketParams& p) {
  const double d = x - single_packet_centre(sign, p);
  return std::exp(-p.beta * p.beta * d * d + 0.5 * I * (p.K0 + 2.0 * sign * p.k0) * x);
}

Complex single_packet_phi_excited(int sign, double x, const PacketParams& p) {
  return (x - single_packet_centre(sign, p)) * single_packet_phi(sign, x, p);
}

TwoParticleState::TwoParticleState(Amplitude amplitude, Symmetry symmetry, PacketParams params,
                                   EnvelopeKind kind, std::string form)
    : amplitude_(std::make_shared<const Amplitude>(std::move(amplitude))),
      symmetry_(symmetry),
      params_(params),
      kind_(kind),
      form_(std::move(form)) {}

double relative_norm_squared(const PacketParams& p, EnvelopeKind kind) {
  const double reach = p.r0 + 12.0 / p.beta;
  quad::Tolerance tol{1e-300, 1e-13, 20000};
  auto res = quad::integrate<double>(
      [&](double r) { return std::norm(kernels::relative_symmetric(r, 0.0, p, kind)); }, 0.0,
      reach, tol, {p.r0 - 6.0 / p.beta, p.r0, p.r0 + 6.0 / p.beta});
  return 2.0 * res.value;
}

double tail_amplitude(const PacketParams& p, EnvelopeKind kind) {
  const double g0 = std::abs(envelope_g(0.0, p, kind));
  return p.gamma * kPi * g0 / std::sqrt(relative_norm_squared(p, kind));
}

TwoParticleState initial_state_exact(const PacketParams& p, EnvelopeKind kind) {
  p.validate();
  p.require_separable();
  const double scale =
      1.0 / std::sqrt(kernels::com_norm_squared(p) * relative_norm_squared(p, kind));
  auto amp = [p, kind, scale](double x1, double x2) {
    const double R = 0.5 * (x1 + x2);
    const double r = x1 - x2;
    return scale * kernels::com_transform(R, 0.0, p) *
           kernels::relative_symmetric(r, 0.0, p, kind);
  };
  return {amp, Symmetry::symmetric, p, kind, "exact"};
}

Complex heaviside_term(double x1, double x2, const PacketParams& p, EnvelopeKind kind,
                       bool incoming) {
  // Incoming pairing: the phi_+ packet sits at the smaller coordinate.
  if (incoming) {
    return pair_product(x1, x2, p, kind) * step(x2 - x1) +
           pair_product(x2, x1, p, kind) * step(x1 - x2);
  }
  return pair_product(x2, x1, p, kind) * step(x2 - x1) +
         pair_product(x1, x2, p, kind) * step(x1 - x2);
}

TwoParticleState initial_state_heaviside(const PacketParams& p, EnvelopeKind kind) {
  p.validate();
  p.require_separable();
  const double a = p.alpha;
  const double b = p.beta;
  const Complex prefactor = kind == EnvelopeKind::plain ? Complex(kPi * a * b / p.k0)
                                                        : I * kPi * a * b * b * b / p.k0;
  auto raw = [p, kind, prefactor](double x1, double x2) {
    return prefactor * ((p.k0 + p.gamma) * heaviside_term(x1, x2, p, kind, true) +
                        (p.k0 - p.gamma) * heaviside_term(x1, x2, p, kind, false));
  };
  double norm2 = 0.0;
  if (kind == EnvelopeKind::plain) {
    const double ratio = (p.k0 + p.gamma) / p.k0;
    norm2 = std::pow(kPi, 3) * a * a * ratio * ratio;
  } else {
    norm2 = norm_squared_2d(raw, p);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  auto amp = [raw, scale](double x1, double x2) { return scale * raw(x1, x2); };
  return {amp, Symmetry::symmetric, p, kind, "heaviside"};
}

TwoParticleState initial_state_approx(const PacketParams& p, EnvelopeKind kind) {
  p.validate();
  p.require_separable();
  auto raw = [p, kind](double x1, double x2) {
    return pair_product(x1, x2, p, kind) + pair_product(x2, x1, p, kind);
  };
  double scale = p.beta / std::sqrt(kPi);
  if (kind == EnvelopeKind::node_excited) scale = 1.0 / std::sqrt(norm_squared_2d(raw, p));
  auto amp = [raw, scale](double x1, double x2) { return scale * raw(x1, x2); };
  return {amp, Symmetry::symmetric, p, kind, "approx"};
}

TwoParticleState triplet_state(const PacketParams& p) {
  p.validate();
  p.require_separable();
  const double scale = p.beta / std::sqrt(kPi);
  auto amp = [p, scale](double x1, double x2) {
    return scale * (pair_product(x1, x2, p, EnvelopeKind::plain) -
                    pair_product(x2, x1, p, EnvelopeKind::plain));
  };
  return {amp, Symmetry::antisymmetric, p, EnvelopeKind::plain, "triplet"};
}

NormalizationConstants normalization_constants(const PacketParams& p, EnvelopeKind kind) {
  p.validate();
  if (p.k0 == p.gamma) {
    throw PreconditionError(
        "normalization constants are degenerate at resonance k0 == gamma (the printed "
        "Lambda/Omega carry a factor (k0-gamma)^2); approach it as k0 = gamma*(1+eps)");
  }
  const double b = p.beta;
  const double minus = (p.k0 - p.gamma) / p.k0;
  const double plus = (p.k0 + p.gamma) / p.k0;
  const double pi32 = std::pow(kPi, 1.5);
  NormalizationConstants c;
  c.kind = kind;
  if (kind == EnvelopeKind::plain) {
    c.position_space = 4.0 * std::pow(kPi, 3) * b * b * minus * minus;
    c.relative = pi32 * b * minus * minus;
    c.position_space_incoming = 4.0 * std::pow(kPi, 3) * b * b * plus * plus;
    c.relative_incoming = pi32 * b * plus * plus;
  } else {
    p.require_separable();
    c.relative = pi32 * b * b * b * minus * minus / 4.0;
    c.relative_incoming = pi32 * b * b * b * plus * plus / 2.0;
    const Complex prefactor = I * kPi * p.alpha * b * b * b / p.k0;
    c.position_space_incoming = norm_squared_2d(
        [&](double x1, double x2) {
          return prefactor * ((p.k0 + p.gamma) * heaviside_term(x1, x2, p, kind, true) +
                              (p.k0 - p.gamma) * heaviside_term(x1, x2, p, kind, false));
        },
        p);
    c.position_space = c.position_space_incoming * minus * minus / (plus * plus);
  }
  return c;
}

double norm_squared_2d(const std::function<Complex(double, double)>& f, const PacketParams& p,
                       double rel_tol) {
  const double R_reach = 12.0 / p.alpha + 8.0;
  const double r_reach = p.r0 + 14.0 / p.beta;
  // The outer rule sees inner results as data: keep their noise well below
  // the outer tolerance or it bisects chasing it.
  quad::Tolerance inner_tol{1e-300, std::max(rel_tol * 1e-3, 1e-14), 5000};
  quad::Tolerance outer_tol{1e-300, rel_tol, 2000};
  auto inner = [&](double r) {
    return quad::integrate<double>(
               [&](double R) { return std::norm(f(R + 0.5 * r, R - 0.5 * r)); },
               p.R0 - R_reach, p.R0 + R_reach, inner_tol, {p.R0})
        .value;
  };
  return quad::integrate<double>(inner, -r_reach, r_reach, outer_tol,
                                 {-p.r0, 0.0, p.r0})
      .value;
}

}  // namespace pairsim::packets
