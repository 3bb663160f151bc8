#include "pairsim/analytic.hpp"

#include <cmath>
#include <limits>

#include "pairsim/packets.hpp"
#include "pairsim/quadrature.hpp"

namespace pairsim::analytic {
namespace {

constexpr Complex I{0.0, 1.0};

void require_finite(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("non-finite (r, t)");
}

std::vector<double> lobe_breaks(double t, double reach, const PacketParams& p) {
  const double centre = std::abs(p.r0 - 2.0 * p.k0 * t);
  const double width = kernels::relative_width(t, p);
  std::vector<double> out{centre};
  for (double d = 1.0; d <= 12.0; d += 1.0) {
    out.push_back(centre - d * width);
    out.push_back(centre + d * width);
  }
  for (double x = 0.0; x < reach; x += 4.0 * width) out.push_back(x);
  return out;
}

}  // namespace

Complex com_packet(double R, double t, const PacketParams& p) {
  return kernels::com_transform(R, t, p) / std::sqrt(kernels::com_norm_squared(p));
}

double com_packet_width(double t, const PacketParams& p) { return kernels::com_width(t, p); }

SeparableEvolution::SeparableEvolution(const PacketParams& p, EnvelopeKind kind)
    : params_(p),
      kind_(kind),
      com_scale_(1.0 / std::sqrt(kernels::com_norm_squared(p))),
      rel_norm2_(packets::relative_norm_squared(p, kind)),
      rel_scale_(1.0 / std::sqrt(rel_norm2_)) {
  p.validate();
}

Complex SeparableEvolution::com(double R, double t) const {
  require_finite(R, t);
  return com_scale_ * kernels::com_transform(R, t, params_);
}

Complex SeparableEvolution::rel(double r, double t) const {
  require_finite(r, t);
  return rel_scale_ * kernels::relative_symmetric(r, t, params_, kind_);
}

Complex SeparableEvolution::operator()(double x1, double x2, double t) const {
  return com(0.5 * (x1 + x2), t) * rel(x1 - x2, t);
}

double SeparableEvolution::rel_norm(double t, double reach) const {
  quad::Tolerance tol{1e-14, 1e-10, 50000};
  auto res = quad::integrate<double>([&](double r) { return std::norm(rel(r, t)); }, 0.0, reach,
                                     tol, lobe_breaks(t, reach, params_));
  return 2.0 * res.value;
}

Complex rel_wave_plain(double r, double t, const PacketParams& p) {
  return SeparableEvolution(p, EnvelopeKind::plain).rel(r, t);
}

Complex rel_wave_excited(double r, double t, const PacketParams& p) {
  return SeparableEvolution(p, EnvelopeKind::node_excited).rel(r, t);
}

ThetaTerm theta_term(int sign, double r, double t, const PacketParams& p, EnvelopeKind kind) {
  ThetaTerm out;
  out.sign = sign;
  out.value = kernels::free_transform(-sign * std::abs(r), t, p, kind) / (2.0 * p.k0);
  out.envelope = std::abs(out.value);
  out.phase = std::arg(out.value);
  return out;
}

Complex rel_wave_fixed_momentum(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  require_finite(r, t);
  const double k0 = p.k0;
  const double ratio = (k0 + p.gamma) / k0;
  // 2 |(k0+gamma)/(2 k0)|^2 times the free norm: the incoming constant.
  const double norm2 = 0.5 * ratio * ratio * kernels::free_norm_squared(p, kind);
  const Complex value = (k0 + p.gamma) * theta_term(+1, r, t, p, kind).value +
                        (k0 - p.gamma) * theta_term(-1, r, t, p, kind).value;
  return value / std::sqrt(norm2);
}

Complex rel_wave_printed(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  require_finite(r, t);
  if (p.k0 == p.gamma) throw PreconditionError("printed form is singular at k0 == gamma");
  const double b = p.beta;
  const double b2 = b * b;
  const double b4 = b2 * b2;
  const double rho = std::abs(r);
  const double shift = p.r0 - 2.0 * p.k0 * t;
  const double denom = 4.0 * b4 * t * t + 1.0;
  const Complex growth = Complex(1.0, 2.0 * b2 * t);
  auto exponent = [&](int s) {
    const double u = rho + s * shift;
    const double v = rho + s * p.r0;
    const double delta =
        (b4 * v * v * t - 2.0 * p.k0 * p.k0 * t - s * 2.0 * p.k0 * v) / (2.0 * denom);
    return std::exp(-b2 * u * u / (2.0 * denom) + I * delta);
  };
  const double kp = p.k0 + p.gamma;
  const double km = p.k0 - p.gamma;
  if (kind == EnvelopeKind::plain) {
    const Complex pre =
        std::sqrt(b) / std::abs(km) / std::sqrt(2.0 * std::sqrt(kPi) * growth);
    return kp * pre * exponent(+1) + km * pre * exponent(-1);
  }
  const double omega = std::pow(kPi, 1.5) * b2 * b * km * km / (4.0 * p.k0 * p.k0);
  auto theta = [&](int s) {
    const double u = rho + s * shift;
    return std::sqrt(kPi / (2.0 * omega)) * I * b2 * b * u /
           (p.k0 * std::pow(growth, 1.5)) * exponent(s);
  };
  return -kp * theta(+1) + km * theta(-1);
}

bool asymptotic_regime(double t, const PacketParams& p) {
  const double b2 = p.beta * p.beta;
  return b2 * b2 * t * t >= 100.0 && p.k0 * t >= 10.0 * p.r0;
}

namespace {

void require_regime(double t, const PacketParams& p) {
  if (!asymptotic_regime(t, p)) {
    throw PreconditionError("asymptotic density needs beta^4 t^2 >= 100 and k0 t >= 10 r0");
  }
}

}  // namespace

double asymptotic_density(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  require_finite(r, t);
  require_regime(t, p);
  const double n0 = packets::relative_norm_squared(p, kind);
  const double ks = std::abs(r) / (2.0 * t);
  // The 1/k pole of the symmetric modes makes the stationary point at r = 0
  // singular unless gamma vanishes.
  if (ks == 0.0 && p.gamma != 0.0) return std::numeric_limits<double>::infinity();
  const double weight = p.gamma == 0.0 ? 1.0 : 1.0 - p.gamma / ks;
  const Complex sum = packets::envelope_g(ks, p, kind) + packets::envelope_g(-ks, p, kind);
  return kPi / (4.0 * t * n0) * weight * weight * std::norm(sum);
}

double asymptotic_density_printed(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  require_finite(r, t);
  require_regime(t, p);
  if (p.k0 == p.gamma) throw PreconditionError("printed density is singular at k0 == gamma");
  const double k0 = p.k0;
  const double b2 = p.beta * p.beta;
  const double kp2 = (k0 + p.gamma) * (k0 + p.gamma);
  const double cross = (k0 * k0 - p.gamma * p.gamma) * std::exp(-k0 * k0 / b2);
  const double u = std::abs(r) + 2.0 * k0 * t;
  const double lobe = std::exp(-u * u / (4.0 * b2 * t * t));
  const double centre = std::exp(-r * r / (4.0 * b2 * t * t));
  const double km2 = (k0 - p.gamma) * (k0 - p.gamma);
  const double pi32 = std::pow(kPi, 1.5);
  if (kind == EnvelopeKind::plain) {
    const double omega = pi32 * p.beta * km2 / (k0 * k0);
    return kPi * kp2 / (4.0 * omega * k0 * k0 * t) * lobe +
           kPi * cross / (2.0 * omega * k0 * k0 * t) * centre;
  }
  const double omega = pi32 * b2 * p.beta * km2 / (4.0 * k0 * k0);
  const double t3 = t * t * t;
  return kPi * kp2 / (16.0 * omega * k0 * k0 * t3) * u * u * lobe -
         kPi * cross / (8.0 * omega * k0 * k0 * t3) * (r * r - 4.0 * k0 * k0 * t * t) * centre;
}

double late_time(const PacketParams& p) {
  return std::max({10.0 / (p.beta * p.beta), 10.0 * p.r0 / p.k0, 50.0 / (p.k0 * p.k0)});
}

ResidualProbability residual_probability(const PacketParams& p, EnvelopeKind kind) {
  p.validate();
  ResidualProbability out;
  const double km = p.k0 - p.gamma;
  out.printed = km == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                          : (p.k0 + p.gamma) * (p.k0 + p.gamma) / (km * km);
  out.t = late_time(p);
  out.reach = 2.0 * p.k0 * out.t + 10.0 * kernels::relative_width(out.t, p);
  const SeparableEvolution ev(p, kind);
  quad::Tolerance tol{1e-14, 1e-10, 100000};
  auto res = quad::integrate<double>([&](double r) { return std::norm(ev.rel(r, out.t)); }, 0.0,
                                     out.reach, tol, lobe_breaks(out.t, out.reach, p));
  out.integrated = 2.0 * res.value;
  out.error = 2.0 * res.error;
  const double tail = packets::tail_amplitude(p, kind);
  out.tail_mass = 2.0 * out.reach * tail * tail;
  return out;
}

Complex triplet_evolution(double r, double t, const PacketParams& p) {
  require_finite(r, t);
  const double b = p.beta;
  const double overlap = 2.0 * kPi * std::exp(-p.k0 * p.k0 / (b * b)) * b * std::sqrt(kPi) *
                         std::exp(-b * b * p.r0 * p.r0);
  const double norm2 =
      (2.0 * kernels::free_norm_squared(p, EnvelopeKind::plain) - 2.0 * overlap) / 4.0;
  return kernels::relative_antisymmetric(r, t, p, EnvelopeKind::plain) / std::sqrt(norm2);
}

std::vector<ProfileRow> sample_profile(const SeparableEvolution& ev, std::span<const double> ts,
                                       std::span<const double> rs) {
  std::vector<ProfileRow> rows;
  rows.reserve(ts.size() * rs.size());
  for (double t : ts) {
    for (double r : rs) rows.push_back({t, r, ev.rel(r, t)});
  }
  return rows;
}

}  // namespace pairsim::analytic
