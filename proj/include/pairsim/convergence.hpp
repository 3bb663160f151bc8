#pragma once

// Grid refinement studies: run one initial state through a ladder of grids
// and extrapolate the surviving probability.

#include <string>
#include <vector>

#include "pairsim/grid.hpp"

namespace pairsim::convergence {

struct Rung {
  grid::GridSpec spec;
  double h = 0.0;
  double dt = 0.0;
  double a = 0.0;
  double value = 0.0;   // norm (plus absorbed) at t_final
  double seconds = 0.0;
};

struct Report {
  std::vector<Rung> rungs;
  /// Order-2 Richardson limit from the two finest rungs.
  double extrapolated = 0.0;
  /// |fine - extrapolated|: the error bar carried by `extrapolated`.
  double uncertainty = 0.0;
  /// log2 of successive difference ratios over the three finest rungs;
  /// +inf when the rungs agree to 1e-12 (nothing left to converge).
  double observed_order = 0.0;
  bool monotone = true;
  std::string note;
};

/// Richardson extrapolation for refinement ratio 2 and the given order.
double richardson(double coarse, double fine, double order = 2.0);

/// Observed order from three rungs with refinement ratio 2.
double observed_order(double coarse, double mid, double fine);

/// Builds the report from already computed rungs (ordered coarse to fine).
Report summarize(std::vector<Rung> rungs);

/// Evolves `initial` to t_final on every GridSpec of `ladder` (ordered by
/// halving h, dt and a together) and summarises.
Report convergence_report(const packets::TwoParticleState& initial,
                          const std::vector<grid::GridSpec>& ladder, double t_final);

/// Ladder of `levels` grids on [-L, L) starting from N = n_coarse, each with
/// its default time step (and Gaussian width 4 h when requested).
std::vector<grid::GridSpec> halving_ladder(double L, std::size_t n_coarse, int levels,
                                           grid::Regularization reg);

}  // namespace pairsim::convergence
