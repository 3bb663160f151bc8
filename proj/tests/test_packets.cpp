#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pairsim/kernels.hpp"
#include "pairsim/packets.hpp"
#include "pairsim/quadrature.hpp"
#include "pairsim/spectral.hpp"

using namespace pairsim;
using namespace pairsim::packets;

namespace {

const quad::Tolerance tight{1e-14, 1e-12, 20000};

// <a|b> over the box used by norm_squared_2d, in (R, r).
template <class A, class B>
Complex overlap(const A& a, const B& b, const PacketParams& p) {
  const double R_reach = 12.0 / p.alpha + 8.0;
  const double r_reach = p.r0 + 14.0 / p.beta;
  auto inner = [&](double r) {
    return quad::integrate<Complex>(
               [&](double R) {
                 const double x1 = R + 0.5 * r, x2 = R - 0.5 * r;
                 return std::conj(a(x1, x2)) * b(x1, x2);
               },
               p.R0 - R_reach, p.R0 + R_reach, {1e-300, 1e-13, 5000}, {p.R0})
        .value;
  };
  return quad::integrate<Complex>(inner, -r_reach, r_reach, {1e-300, 1e-10, 2000},
                                  {-p.r0, 0.0, p.r0})
      .value;
}

// The defining double integral int int G(K) g(k) psi_+(K, k, x1, x2) dK dk,
// evaluated by brute-force nested quadrature.
Complex double_integral(double x1, double x2, const PacketParams& p, EnvelopeKind kind) {
  const spectral::CoordinatePair pos{x1, x2};
  auto k_integrand = [&](double k) {
    const Complex rel = envelope_g(k, p, kind) * spectral::relative_symmetric(k, pos.r(), p.gamma);
    auto K_integrand = [&](double K) {
      return envelope_G(K, p) * std::exp(Complex(0.0, K * pos.R()));
    };
    const Complex com =
        quad::integrate<Complex>(K_integrand, p.K0 - 10.0 * p.alpha, p.K0 + 10.0 * p.alpha, tight)
            .value;
    return rel * com;
  };
  return quad::integrate<Complex>(k_integrand, p.k0 - 10.0 * p.beta, p.k0 + 10.0 * p.beta, tight,
                                  {0.0})
      .value;
}

}  // namespace

TEST_CASE("envelopes") {
  auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0, 1.5, 0.0);
  CHECK(std::abs(envelope_G(p.K0, p) - 1.0) < 1e-15);
  CHECK(std::abs(envelope_G(p.K0 + p.alpha, p)) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  p.R0 = 2.0;
  for (double K0 : {0.0, -3.0}) {
    p.K0 = K0;
    const double n = quad::integrate<double>([&](double K) { return std::norm(envelope_G(K, p)); },
                                             K0 - 20.0, K0 + 20.0, tight)
                         .value;
    CHECK(n == doctest::Approx(p.alpha * std::sqrt(kPi)).epsilon(1e-12));
  }
  auto q = PacketParams::with_equal_widths(2.0, 1.3, 5.0, 7.0);
  CHECK(std::abs(envelope_g(q.k0, q, EnvelopeKind::node_excited)) == 0.0);
  const double n = quad::integrate<double>(
                       [&](double k) { return std::norm(envelope_g(k, q, EnvelopeKind::node_excited)); },
                       q.k0 - 15.0, q.k0 + 15.0, tight)
                       .value;
  CHECK(n == doctest::Approx(std::pow(q.beta, 3) * std::sqrt(kPi) / 2.0).epsilon(1e-12));
}

TEST_CASE("single-particle packets") {
  auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0, 1.0, 0.0);
  for (int s : {+1, -1}) {
    const double c = single_packet_centre(s, p);
    CHECK(std::abs(single_packet_phi(s, c, p)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(single_packet_phi_excited(s, c, p)) == 0.0);
    // phase gradient at the centre is the carrier momentum
    const double h = 1e-5;
    const double grad = std::arg(single_packet_phi(s, c + h, p) / single_packet_phi(s, c - h, p)) /
                        (2.0 * h);
    CHECK(grad == doctest::Approx(0.5 * (p.K0 + 2.0 * s * p.k0)).epsilon(1e-8));
  }
}

TEST_CASE("parameter validation") {
  auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0);
  p.alpha = 3.0;
  CHECK_FALSE(p.separable());
  CHECK_THROWS_AS(initial_state_exact(p, EnvelopeKind::plain), PreconditionError);
  CHECK_THROWS_AS(triplet_state(p), PreconditionError);
  p.alpha = 2.0;
  CHECK(p.separability_quality() == doctest::Approx(std::exp(-50.0)));
  p.k0 = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p.k0 = 5.0;
  p.beta = std::nan("");
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("exchange symmetry of every constructed state") {
  const auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0, 0.7, 0.3);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    const TwoParticleState states[] = {initial_state_exact(p, kind), initial_state_heaviside(p, kind),
                                       initial_state_approx(p, kind)};
    for (const auto& s : states) {
      CHECK(s.symmetry() == Symmetry::symmetric);
      for (int i = 0; i < 200; ++i) {
        const double a = u(rng), b = u(rng);
        CHECK(std::abs(s(a, b) - s(b, a)) <= 1e-12 * std::max(1.0, std::abs(s(a, b))));
      }
    }
  }
  const auto t = triplet_state(p);
  CHECK(t.symmetry() == Symmetry::antisymmetric);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(std::abs(t(a, b) + t(b, a)) <= 1e-12);
    CHECK(std::abs(t(a, a)) == 0.0);
  }
}

TEST_CASE("closed-form initial state equals the defining double integral") {
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    const auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0);
    const auto s = initial_state_exact(p, kind);
    const double scale =
        1.0 / std::sqrt(kernels::com_norm_squared(p) * relative_norm_squared(p, kind));
    std::mt19937_64 rng(23);
    std::normal_distribution<double> centre(0.0, 0.8), spread(0.0, 1.5);
    for (int i = 0; i < 10; ++i) {
      const double R = centre(rng);
      const double r = (i % 2 ? 1.0 : -1.0) * (p.r0 + spread(rng));
      const double x1 = R + 0.5 * r, x2 = R - 0.5 * r;
      const Complex ref = scale * double_integral(x1, x2, p, kind);
      CHECK(std::abs(s(x1, x2) - ref) < 1e-6 * std::abs(ref));
    }
  }
}

TEST_CASE("norms of the initial states") {
  const auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0);
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    const auto ex = initial_state_exact(p, kind);
    const auto hv = initial_state_heaviside(p, kind);
    CHECK(norm_squared_2d([&](double a, double b) { return ex(a, b); }, p) ==
          doctest::Approx(1.0).epsilon(1e-6));
    CHECK(norm_squared_2d([&](double a, double b) { return hv(a, b); }, p) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
  const auto t = triplet_state(PacketParams::with_equal_widths(5.0, 1.0, 5.0, 10.0));
  CHECK(norm_squared_2d([&](double a, double b) { return t(a, b); }, p) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("far-separated product form") {
  // norm error bounded by the neglected overlap, at three separations
  for (auto [beta, r0] : {std::pair{1.0, 10.0}, {0.5, 6.0}, {0.4, 5.0}}) {
    const auto p = PacketParams::with_equal_widths(2.0, beta, 5.0, r0);
    const auto ap = initial_state_approx(p, EnvelopeKind::plain);
    const double n = norm_squared_2d([&](double a, double b) { return ap(a, b); }, p);
    CAPTURE(beta);
    CHECK(std::abs(n - 1.0) <= 2.0 * p.separability_quality() + 1e-9);
  }
  const auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0);
  const auto hv = initial_state_heaviside(p, EnvelopeKind::plain);
  const auto ap = initial_state_approx(p, EnvelopeKind::plain);
  CHECK(1.0 - std::abs(overlap(hv, ap, p)) < 1e-6);
  const auto ape = initial_state_approx(p, EnvelopeKind::node_excited);
  CHECK(norm_squared_2d([&](double a, double b) { return ape(a, b); }, p) ==
        doctest::Approx(1.0).epsilon(1e-8));
  // node factor: phi_+^(1) vanishes at its centre
  CHECK(std::abs(single_packet_phi_excited(+1, single_packet_centre(+1, p), p)) == 0.0);
}

TEST_CASE("four-term step-function form is the fixed-momentum approximation") {
  // It replaces gamma/k by gamma/k0, so it departs from the exact state at
  // order gamma beta / k0^2 rather than at the far-separation scale.
  for (auto [g, b, k0] : {std::tuple{2.0, 1.0, 5.0}, {5.0, 1.0, 10.0}}) {
    const auto p = PacketParams::with_equal_widths(g, b, k0, 10.0);
    const auto ex = initial_state_exact(p, EnvelopeKind::plain);
    const auto hv = initial_state_heaviside(p, EnvelopeKind::plain);
    const double distance = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::abs(overlap(ex, hv, p))));
    const double scale = g * b / (k0 * k0);
    CAPTURE(distance);
    CHECK(distance > 0.1 * scale);
    CHECK(distance < 2.0 * scale);
  }
  const auto free = PacketParams::with_equal_widths(0.0, 1.0, 5.0, 10.0);
  const auto ex = initial_state_exact(free, EnvelopeKind::plain);
  const auto hv = initial_state_heaviside(free, EnvelopeKind::plain);
  CHECK(1.0 - std::abs(overlap(ex, hv, free)) < 1e-10);
}

TEST_CASE("product structure: rank test on sampled amplitudes") {
  // Phi(R) times the incoming relative Gaussian, sampled on an (x1, x2) mesh
  // around one packet pair: rank 1 exactly when alpha = 2 beta, otherwise the
  // x1 x2 cross term in the exponent raises the rank.
  auto rank_of = [](const PacketParams& p) {
    const int n = 40;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x1 = -p.r0 / 2.0 - 2.0 + 4.0 * i / (n - 1);
        const double x2 = p.r0 / 2.0 - 2.0 + 4.0 * j / (n - 1);
        m(i, j) = kernels::com_transform(0.5 * (x1 + x2), 0.0, p) *
                  kernels::free_transform(x1 - x2, 0.0, p, EnvelopeKind::plain);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s(i) > 1e-10 * s(0);
    return rank;
  };
  auto p = PacketParams::with_equal_widths(0.0, 1.0, 5.0, 10.0);
  CHECK(rank_of(p) == 1);
  p.alpha = 3.0;
  CHECK(rank_of(p) > 1);
  p.alpha = 1.2;
  CHECK(rank_of(p) > 1);
}

TEST_CASE("printed normalisation constants") {
  const auto p = PacketParams::with_equal_widths(2.0, 1.0, 5.0, 10.0);
  const auto c = normalization_constants(p, EnvelopeKind::plain);
  CHECK(c.position_space == doctest::Approx(4.0 * std::pow(kPi, 3) * 9.0 / 25.0).epsilon(1e-15));
  CHECK(c.relative == doctest::Approx(std::pow(kPi, 1.5) * 9.0 / 25.0).epsilon(1e-15));
  const auto e = normalization_constants(p, EnvelopeKind::node_excited);
  CHECK(e.relative == doctest::Approx(std::pow(kPi, 1.5) * 9.0 / 100.0).epsilon(1e-15));
  CHECK(e.position_space > 0.0);
  auto res = p;
  res.k0 = res.gamma;
  CHECK_THROWS_AS(normalization_constants(res, EnvelopeKind::plain), PreconditionError);
  // the physical states stay well defined at resonance
  const auto s = initial_state_exact(res, EnvelopeKind::plain);
  CHECK(std::isfinite(std::abs(s(-5.0, 5.0))));
}
