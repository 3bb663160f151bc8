#include <cmath>
#include <random>

#include "doctest.h"
#include "pairsim/kernels.hpp"
#include "pairsim/quadrature.hpp"
#include "pairsim/spectral.hpp"

using namespace pairsim;

namespace {

const quad::Tolerance tight{1e-14, 1e-12, 20000};

Complex envelope(double k, const PacketParams& p, EnvelopeKind kind) {
  const double w = kind == EnvelopeKind::plain ? 1.0 : k - p.k0;
  const double d = k - p.k0;
  return w * std::exp(Complex(-d * d / (2.0 * p.beta * p.beta), d * p.r0));
}

Complex brute_relative(double r, double t, const PacketParams& p, EnvelopeKind kind) {
  auto f = [&](double k) {
    return envelope(k, p, kind) * spectral::relative_symmetric(k, r, p.gamma) *
           std::exp(Complex(0.0, -k * k * t));
  };
  return quad::integrate<Complex>(f, p.k0 - 12.0 * p.beta, p.k0 + 12.0 * p.beta, tight, {0.0})
      .value;
}

}  // namespace

TEST_CASE("closed-form relative integral equals brute-force quadrature") {
  std::mt19937_64 rng(5);
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    for (auto [g, b, k0] : {std::tuple{5.0, 1.0, 5.0}, {2.0, 0.5, 10.0}, {0.0, 1.5, 5.0},
                            {5.0, 1.5, 2.0}}) {
      const auto p = PacketParams::with_equal_widths(g, b, k0, 10.0);
      std::uniform_real_distribution<double> ur(-25.0, 25.0), ut(0.0, 2.0);
      for (int i = 0; i < 20; ++i) {
        const double r = ur(rng), t = ut(rng);
        const Complex ref = brute_relative(r, t, p, kind);
        const Complex v = kernels::relative_symmetric(r, t, p, kind);
        CAPTURE(r);
        CAPTURE(t);
        CHECK(std::abs(v - ref) < 1e-9 * std::max(std::abs(ref), 1e-3));
      }
    }
  }
}

TEST_CASE("free transform and window") {
  const auto p = PacketParams::with_equal_widths(3.0, 1.0, 4.0, 8.0);
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    for (double t : {0.0, 0.7}) {
      for (double s : {-9.0, 0.0, 2.5}) {
        auto f = [&](double k) {
          return envelope(k, p, kind) * std::exp(Complex(0.0, k * s - k * k * t));
        };
        const Complex ref =
            quad::integrate<Complex>(f, p.k0 - 12.0, p.k0 + 12.0, tight).value;
        CHECK(std::abs(kernels::free_transform(s, t, p, kind) - ref) < 1e-10);
      }
      const double rho = 3.3;
      const Complex window = quad::integrate<Complex>(
                                 [&](double s) { return kernels::free_transform(s, t, p, kind); },
                                 -rho, rho, tight)
                                 .value;
      CHECK(std::abs(kernels::free_transform_window(rho, t, p, kind) - window) < 1e-10);
    }
  }
}

TEST_CASE("antisymmetric relative integral vanishes at contact") {
  const auto p = PacketParams::with_equal_widths(5.0, 1.0, 5.0, 10.0);
  for (double t : {0.0, 1.0, 3.0}) {
    CHECK(std::abs(kernels::relative_antisymmetric(0.0, t, p, EnvelopeKind::plain)) == 0.0);
  }
}

TEST_CASE("norms are time independent and match closed forms") {
  auto p = PacketParams::with_equal_widths(1.0, 1.0, 5.0, 10.0);
  p.K0 = 3.0;
  for (double t : {0.0, 5.0}) {
    const double reach = 40.0 + 2.0 * t;
    const double com = quad::integrate<double>(
                           [&](double R) { return std::norm(kernels::com_transform(R, t, p)); },
                           -reach, reach, tight)
                           .value;
    CHECK(com == doctest::Approx(kernels::com_norm_squared(p)).epsilon(1e-10));
    CHECK(kernels::com_norm_squared(p) ==
          doctest::Approx(2.0 * std::pow(kPi, 1.5) * p.alpha).epsilon(1e-15));
  }
  for (auto kind : {EnvelopeKind::plain, EnvelopeKind::node_excited}) {
    const double g2 = quad::integrate<double>(
                          [&](double k) { return std::norm(envelope(k, p, kind)); },
                          p.k0 - 12.0, p.k0 + 12.0, tight)
                          .value;
    CHECK(kernels::free_norm_squared(p, kind) == doctest::Approx(2.0 * kPi * g2).epsilon(1e-12));
  }
}

TEST_CASE("widths") {
  const auto p = PacketParams::with_equal_widths(1.0, 1.0, 5.0, 10.0);
  // com density doubles its width at t = sqrt(3)/(2 beta)
  CHECK(kernels::com_width(std::sqrt(3.0) / (2.0 * p.beta), p) ==
        doctest::Approx(2.0 * kernels::com_width(0.0, p)).epsilon(1e-14));
  for (double t : {0.0, 0.4, 2.0}) {
    const double w = kernels::com_width(t, p);
    const double R0 = p.K0 * t / 2.0;
    const double ratio = std::norm(kernels::com_transform(R0 + w, t, p)) /
                         std::norm(kernels::com_transform(R0, t, p));
    CHECK(ratio == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const double centre = p.r0 - 2.0 * p.k0 * t;
    const double wr = kernels::relative_width(t, p);
    const double rr = std::norm(kernels::free_transform(-(centre + wr), t, p, EnvelopeKind::plain)) /
                      std::norm(kernels::free_transform(-centre, t, p, EnvelopeKind::plain));
    CHECK(rr == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
}
