#include "pairsim/convergence.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace pairsim::convergence {

double richardson(double coarse, double fine, double order) {
  const double factor = std::pow(2.0, order);
  return (factor * fine - coarse) / (factor - 1.0);
}

double observed_order(double coarse, double mid, double fine) {
  const double d1 = mid - coarse;
  const double d2 = fine - mid;
  if (std::abs(d1) < 1e-12 && std::abs(d2) < 1e-12) {
    return std::numeric_limits<double>::infinity();
  }
  if (d2 == 0.0 || d1 / d2 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log2(d1 / d2);
}

Report summarize(std::vector<Rung> rungs) {
  Report rep;
  rep.rungs = std::move(rungs);
  const std::size_t n = rep.rungs.size();
  if (n == 0) {
    rep.note = "empty ladder";
    return rep;
  }
  const double fine = rep.rungs.back().value;
  rep.extrapolated = fine;
  if (n >= 2) {
    rep.extrapolated = richardson(rep.rungs[n - 2].value, fine);
    rep.uncertainty = std::abs(fine - rep.extrapolated);
  }
  if (n >= 3) {
    rep.observed_order =
        observed_order(rep.rungs[n - 3].value, rep.rungs[n - 2].value, rep.rungs[n - 1].value);
  } else {
    rep.observed_order = std::numeric_limits<double>::quiet_NaN();
  }
  for (std::size_t i = 2; i < n; ++i) {
    const double d1 = rep.rungs[i - 1].value - rep.rungs[i - 2].value;
    const double d2 = rep.rungs[i].value - rep.rungs[i - 1].value;
    const bool settled = std::abs(d1) < 1e-12 && std::abs(d2) < 1e-12;
    if (!settled && (d1 * d2 < 0.0 || std::abs(d2) > std::abs(d1))) rep.monotone = false;
  }
  if (!rep.monotone) rep.note = "non-monotone convergence";
  return rep;
}

Report convergence_report(const packets::TwoParticleState& initial,
                          const std::vector<grid::GridSpec>& ladder, double t_final) {
  std::vector<Rung> rungs;
  for (const grid::GridSpec& spec : ladder) {
    const auto start = std::chrono::steady_clock::now();
    const grid::Trajectory traj = grid::evolve_grid(initial, spec, t_final);
    Rung r;
    r.spec = traj.final.spec;
    r.h = spec.h();
    r.dt = traj.final.spec.dt;
    r.a = spec.regularization == grid::Regularization::gaussian ? spec.width() : 0.0;
    r.value = traj.final.norm() + traj.final.absorbed;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rungs.push_back(r);
  }
  return summarize(std::move(rungs));
}

std::vector<grid::GridSpec> halving_ladder(double L, std::size_t n_coarse, int levels,
                                           grid::Regularization reg) {
  std::vector<grid::GridSpec> out;
  std::size_t n = n_coarse;
  for (int i = 0; i < levels; ++i, n *= 2) {
    grid::GridSpec s;
    s.L = L;
    s.N = n;
    s.regularization = reg;
    out.push_back(s);
  }
  return out;
}

}  // namespace pairsim::convergence
