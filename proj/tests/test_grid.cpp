#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pairsim/analytic.hpp"
#include "pairsim/grid.hpp"
#include "pairsim/packets.hpp"

using namespace pairsim;
using grid::GridSpec;

namespace {

// k0 = 4 keeps the non-decaying tail (~ g(0) = e^-8) off the contact line.
PacketParams small(double gamma) { return PacketParams::with_equal_widths(gamma, 1.0, 4.0, 6.0); }

GridSpec small_grid() {
  GridSpec g;
  g.L = 16.0;
  g.N = 128;
  return g;
}

}  // namespace

TEST_CASE("grid validation") {
  const auto p = small(1.0);
  auto g = small_grid();
  CHECK_NOTHROW(g.validate(p));
  g.N = 100;
  CHECK_THROWS_AS(g.validate(p), ConfigError);
  g = small_grid();
  g.N = 64;
  CHECK_THROWS_AS(g.validate(p), ConfigError);  // h = 0.5 misses k = 10
  g = small_grid();
  g.dt = 0.1;
  CHECK_THROWS_AS(g.validate(p), ConfigError);
  g = small_grid();
  g.L = 9.0;
  g.N = 128;
  CHECK_THROWS_AS(g.validate(p), ConfigError);
  g = small_grid();
  g.regularization = grid::Regularization::gaussian;
  g.a = 2.0 * g.h();
  CHECK_THROWS_AS(g.validate(p), ConfigError);
  g.a = 0.0;
  CHECK_NOTHROW(g.validate(p));
  CHECK(g.width() == 4.0 * g.h());
}

TEST_CASE("free evolution conserves the norm") {
  const auto p = small(0.0);
  for (auto reg : {grid::Regularization::lattice, grid::Regularization::gaussian}) {
    auto g = small_grid();
    g.regularization = reg;
    const auto s0 = packets::initial_state_exact(p, EnvelopeKind::plain);
    const auto tr = grid::evolve_grid(s0, g, 1.0);
    const double n0 = tr.final.history.front().norm;
    CHECK(tr.final.norm() == doctest::Approx(n0).epsilon(1e-12));
    CHECK(grid::predicted_loss_rate(tr.final) == 0.0);
  }
}

TEST_CASE("contact evolution") {
  const auto p = small(1.0);
  const auto g = small_grid();
  const auto s0 = packets::initial_state_exact(p, EnvelopeKind::plain);
  std::vector<double> seen;
  grid::EvolveOptions opts;
  opts.snapshot_times = {0.25, 0.5};
  opts.observer = [&](const grid::GridState2D& s) { seen.push_back(s.t); };
  const auto tr = grid::evolve_grid(s0, g, 1.5, opts);
  REQUIRE(seen.size() == 2);
  CHECK(std::abs(seen[0] - 0.25) <= 0.5 * tr.final.spec.dt);
  CHECK(tr.snapshots.empty());

  SUBCASE("exchange symmetry is kept") {
    CHECK(tr.final.exchange_defect(Symmetry::symmetric) < 1e-10);
  }
  SUBCASE("norm never grows") {
    const auto& h = tr.final.history;
    REQUIRE(h.size() > 10);
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i].norm <= h[i - 1].norm + 1e-14);
    CHECK(h.back().norm < h.front().norm - 1e-3);
  }
  SUBCASE("relative marginal carries the norm") {
    double total = 0.0;
    for (const auto& [r, d] : grid::relative_density(tr.final)) total += d * g.h();
    CHECK(total == doctest::Approx(tr.final.norm()).epsilon(1e-10));
  }
  SUBCASE("close to the closed form") {
    const analytic::SeparableEvolution ev(p, EnvelopeKind::plain);
    const double exact = ev.rel_norm(1.5, 30.0);
    CAPTURE(exact);
    CHECK(std::abs(tr.final.norm() - exact) < 0.02);
  }
  SUBCASE("deterministic") {
    const auto again = grid::evolve_grid(s0, g, 1.5, opts);
    CHECK(again.final.field == tr.final.field);
  }
  SUBCASE("snapshot round trip") {
    std::stringstream ss;
    grid::write_snapshot(ss, tr.final);
    const auto back = grid::read_snapshot(ss);
    CHECK(back.spec.N == g.N);
    CHECK(back.spec.L == g.L);
    CHECK(back.t == tr.final.t);
    CHECK(back.gamma == tr.final.gamma);
    CHECK(back.field == tr.final.field);
  }
  SUBCASE("norm history csv") {
    std::stringstream ss;
    grid::write_norm_history(ss, tr.final);
    std::string first;
    std::getline(ss, first);
    CHECK(first == "step,t,norm,measured_rate,predicted_rate");
  }
}

TEST_CASE("antisymmetric pair never touches the lattice contact") {
  const auto p = small(2.0);
  const auto s0 = packets::triplet_state(p);
  const auto tr = grid::evolve_grid(s0, small_grid(), 1.0);
  CHECK(tr.final.exchange_defect(Symmetry::antisymmetric) < 1e-10);
  CHECK(tr.final.norm() == doctest::Approx(tr.final.history.front().norm).epsilon(1e-12));
}

TEST_CASE("corrupt snapshots are rejected") {
  std::stringstream ss("not a header\n");
  CHECK_THROWS(grid::read_snapshot(ss));
}
