#pragma once

// Split-operator propagation of a two-particle state on a periodic
// (x1, x2) grid under H = -(d1^2 + d2^2)/2 - 2 i gamma delta(x1 - x2).
//
// Step: V(dt/2) K(dt) V(dt/2), kinetic phase applied in Fourier space.
// The contact term is regularised either on the lattice (weight 1/h on the
// diagonal nodes x1 == x2) or as a normalised Gaussian of width a.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pairsim/packets.hpp"
#include "pairsim/types.hpp"

namespace pairsim::grid {

enum class Regularization { lattice, gaussian };
enum class Boundary { periodic, absorbing };

struct GridSpec {
  double L = 16.0;       // half width of the box [-L, L)
  std::size_t N = 256;   // points per axis, power of two
  double dt = 0.0;       // 0 selects default_time_step
  Regularization regularization = Regularization::lattice;
  double a = 0.0;        // Gaussian width; 0 selects 4 h
  Boundary boundary = Boundary::periodic;

  double h() const { return 2.0 * L / static_cast<double>(N); }
  double width() const { return a > 0.0 ? a : 4.0 * h(); }
  /// min(h^2/(2 pi), h/(20 max(gamma, 1))).
  double default_time_step(double gamma) const;
  double time_step(double gamma) const { return dt > 0.0 ? dt : default_time_step(gamma); }

  /// Throws ConfigError on a malformed grid or one too coarse for p.
  void validate(const PacketParams& p) const;
};

struct NormSample {
  std::size_t step = 0;
  double t = 0.0;
  double norm = 0.0;
  double measured_rate = 0.0;
  double predicted_rate = 0.0;
};

struct GridState2D {
  GridSpec spec;
  double gamma = 0.0;
  double t = 0.0;
  /// Row-major, field[i * N + j] at (x1, x2) = (x_i, x_j), x_i = -L + i h.
  std::vector<Complex> field;
  std::vector<NormSample> history;
  double absorbed = 0.0;

  double x(std::size_t i) const { return -spec.L + spec.h() * static_cast<double>(i); }
  Complex at(std::size_t i, std::size_t j) const { return field[i * spec.N + j]; }
  double norm() const;
  /// max |psi(x1, x2) -+ psi(x2, x1)| for the given symmetry.
  double exchange_defect(Symmetry s) const;
};

GridState2D sample_state(const packets::TwoParticleState& state, const GridSpec& spec);

/// Predicted dN/dt = -4 gamma int delta_reg(x1 - x2) |psi|^2.
double predicted_loss_rate(const GridState2D& s);

struct EvolveOptions {
  /// Times at which snapshots are taken, rounded to the nearest step (the
  /// final state is always kept).
  std::vector<double> snapshot_times;
  /// If set, snapshots are handed to it instead of being stored.
  std::function<void(const GridState2D&)> observer;
  /// Record norm history every this many steps.
  std::size_t record_every = 1;
};

struct Trajectory {
  std::vector<GridState2D> snapshots;
  GridState2D final;
};

/// Throws InstabilityError if the norm grows by more than 1e-6 in one step.
Trajectory evolve_grid(const packets::TwoParticleState& initial, const GridSpec& spec,
                       double t_final, const EvolveOptions& opts = {});

struct LossRate {
  double norm = 0.0;
  double measured_rate = 0.0;
  double predicted_rate = 0.0;
  double relative_mismatch = 0.0;
};

/// History entry nearest the state time (central-difference rate).
LossRate norm_and_loss_rate(const GridState2D& state);

/// Relative-coordinate marginal h * sum_{i-j=m mod N} |psi_ij|^2 at r = m h,
/// m in [-N/2, N/2).
std::vector<std::pair<double, double>> relative_density(const GridState2D& s);

/// Binary dump: one line of JSON header, then N*N (re, im) little-endian
/// float64 pairs, row-major.
void write_snapshot(std::ostream& os, const GridState2D& s);
GridState2D read_snapshot(std::istream& is);

/// step,t,norm,measured_rate,predicted_rate
void write_norm_history(std::ostream& os, const GridState2D& s);

}  // namespace pairsim::grid
