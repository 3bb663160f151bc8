#pragma once

// Closed-form momentum integrals shared by the packet factory and the
// analytic propagator. Envelope conventions:
//
//   G(K) = exp(-(K-K0)^2/(2 alpha^2) - i (K-K0) R0)
//   g(k) = w(k) exp(-(k-k0)^2/(2 beta^2) + i (k-k0) r0)
//
// with w = 1 (plain) or w = k - k0 (node-excited). The relative phase
// e^{+ikr0} places the relative packet at |r| = r0 moving inward, so the
// collision happens at t = r0/(2 k0) > 0. Constant phases k0 r0 and K0 R0
// are dropped.

#include "pairsim/types.hpp"

namespace pairsim::kernels {

/// F(s, t) = int g(k) exp(i k s - i k^2 t) dk.
Complex free_transform(double s, double t, const PacketParams& p, EnvelopeKind kind);

/// int_{-rho}^{rho} F(s, t) ds, i.e. 2 int g(k) sin(k rho)/k exp(-i k^2 t) dk.
Complex free_transform_window(double rho, double t, const PacketParams& p, EnvelopeKind kind);

/// int g(k) [cos(k r) - i gamma sin(k|r|)/k] exp(-i k^2 t) dk, exact.
Complex relative_symmetric(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// As relative_symmetric with gamma/k replaced by gamma/k0: the
/// fixed-momentum form that splits into one incoming and one outgoing
/// Gaussian.
Complex relative_fixed_momentum(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// int g(k) sin(k r) exp(-i k^2 t) dk.
Complex relative_antisymmetric(double r, double t, const PacketParams& p, EnvelopeKind kind);

/// int G(K) exp(i K R - i K^2 t / 4) dK.
Complex com_transform(double R, double t, const PacketParams& p);

/// int |com_transform(R, t)|^2 dR = 2 pi^{3/2} alpha (time independent).
double com_norm_squared(const PacketParams& p);

/// 2 pi int |g(k)|^2 dk: pi^{3/2} * 2 beta (plain), pi^{3/2} beta^3 (node-excited).
double free_norm_squared(const PacketParams& p, EnvelopeKind kind);

/// 1/e half width of |com_transform|^2 at time t (sqrt 2 standard deviations).
double com_width(double t, const PacketParams& p);

/// 1/e half width of |F|^2 at time t (plain envelope).
double relative_width(double t, const PacketParams& p);

}  // namespace pairsim::kernels
