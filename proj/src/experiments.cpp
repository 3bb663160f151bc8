#include "pairsim/experiments.hpp"

#include <fftw3.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "pairsim/analytic.hpp"
#include "pairsim/convergence.hpp"
#include "pairsim/io.hpp"
#include "pairsim/kernels.hpp"
#include "pairsim/packets.hpp"
#include "pairsim/spectral.hpp"

namespace pairsim::experiments {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::size_t next_pow2(double x) {
  std::size_t n = 16;
  while (static_cast<double>(n) < x) n *= 2;
  return n;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json build_info() {
  return {{"compiler", __VERSION__}, {"fftw", std::string(fftw_version)}, {"cxx_standard", __cplusplus}};
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io::IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string number_or_nan(double v) { return std::isfinite(v) ? io::format_number(v) : "nan"; }

// Analytic norm of the relative wave at t over the region its lobes occupy.
double analytic_norm_at(const analytic::SeparableEvolution& ev, double t) {
  const PacketParams& p = ev.params();
  const double reach = p.r0 + 2.0 * p.k0 * t + 10.0 * kernels::relative_width(t, p);
  return ev.rel_norm(t, reach);
}

grid::GridSpec grid_for(const RunConfig& cfg, const PacketParams& p, double t) {
  return cfg.grid ? *cfg.grid : auto_grid(p, t);
}

std::vector<ResidualSummary> run_figure(const RunConfig& cfg, const std::string& prefix,
                                        const std::vector<std::pair<std::string, PacketParams>>& sets,
                                        EnvelopeKind kind) {
  prepare_dir(cfg.output_dir);
  const auto start = Clock::now();
  std::vector<ResidualSummary> out;
  for (const auto& [label, p] : sets) {
    const analytic::SeparableEvolution ev(p, kind);
    const double t_end = 1.5 * p.r0 / p.k0;
    const auto ts = linspace(0.0, t_end, cfg.frames);
    const double r_max = 2.0 * p.r0 + 3.0 * kernels::relative_width(t_end, p);
    const auto rs = linspace(-r_max, r_max, cfg.r_points);
    const io::CsvWriter::Meta meta = {{"params", io::params_to_json(p).dump()},
                                      {"kind", to_string(kind)},
                                      {"source", "closed form"}};
    io::CsvWriter csv(cfg.output_dir / (prefix + "_" + label + ".csv"),
                      {"t", "r", "re", "im", "density"}, meta);
    for (const auto& row : analytic::sample_profile(ev, ts, rs)) {
      csv.row({row.t, row.r, row.value.real(), row.value.imag(), std::norm(row.value)});
    }
    csv.close();

    const auto res = analytic::residual_probability(p, kind);
    ResidualSummary s;
    s.label = label;
    s.params = p;
    s.kind = kind;
    s.printed = res.printed;
    s.integrated = res.integrated;
    s.integrated_error = res.error;
    s.tail_mass = res.tail_mass;
    s.t_late = res.t;
    s.grid_t = p.r0 / p.k0;
    s.grid = kNaN;
    s.grid_error = kNaN;
    s.analytic_at_grid_t = analytic_norm_at(ev, s.grid_t);

    if (cfg.with_grid_oracle) {
      const grid::GridSpec spec = grid_for(cfg, p, t_end);
      io::CsvWriter gcsv(cfg.output_dir / (prefix + "_" + label + "_grid.csv"),
                         {"t", "r", "density"},
                         {{"params", io::params_to_json(p).dump()},
                          {"kind", to_string(kind)},
                          {"source", "split-step grid"},
                          {"L", io::format_number(spec.L)},
                          {"N", std::to_string(spec.N)}});
      grid::EvolveOptions opts;
      opts.snapshot_times = ts;
      opts.observer = [&](const grid::GridState2D& st) {
        for (const auto& [r, d] : grid::relative_density(st)) gcsv.row({st.t, r, d});
      };
      grid::evolve_grid(packets::initial_state_exact(p, kind), spec, t_end, opts);
      gcsv.close();
      const auto [value, err] =
          grid_residual(p, kind, grid_for(cfg, p, s.grid_t), s.grid_t);
      s.grid = value;
      s.grid_error = err;
    }
    out.push_back(s);
  }

  io::CsvWriter summary(cfg.output_dir / (prefix + "_summary.csv"),
                        {"set", "gamma", "k0", "beta", "r0", "printed", "integrated",
                         "integrated_error", "tail_mass", "localized", "t_late", "grid_t",
                         "analytic_at_grid_t", "grid", "grid_error"},
                        {{"kind", to_string(kind)}});
  for (const auto& s : out) {
    summary.row({s.label, number_or_nan(s.params.gamma), number_or_nan(s.params.k0),
                 number_or_nan(s.params.beta), number_or_nan(s.params.r0),
                 number_or_nan(s.printed), number_or_nan(s.integrated),
                 number_or_nan(s.integrated_error), number_or_nan(s.tail_mass),
                 number_or_nan(s.integrated - s.tail_mass), number_or_nan(s.t_late),
                 number_or_nan(s.grid_t), number_or_nan(s.analytic_at_grid_t),
                 number_or_nan(s.grid), number_or_nan(s.grid_error)});
  }
  summary.close();
  io::write_manifest(cfg.output_dir, cfg.to_json(),
                     {{"command", prefix}, {"seconds", seconds_since(start)}, {"build", build_info()}});
  return out;
}

}  // namespace

grid::GridSpec auto_grid(const PacketParams& p, double t) {
  const double sigma_r = kernels::relative_width(t, p) / std::sqrt(2.0);
  const double sigma_R = kernels::com_width(t, p) / std::sqrt(2.0);
  const double drift = std::abs(p.R0) + std::abs(p.K0) * t / 2.0;
  const double lobes = std::abs(2.0 * p.k0 * t - p.r0) / 2.0 + drift +
                       5.0 * std::sqrt(0.25 * sigma_r * sigma_r + sigma_R * sigma_R);
  const double start = std::abs(p.R0) + p.r0 / 2.0 + 8.0 / p.beta + 1.0;
  grid::GridSpec s;
  s.L = std::ceil(std::max(lobes, start));
  const double k_max = std::abs(p.K0) / 2.0 + p.k0 + 6.0 * p.beta;
  s.N = std::max<std::size_t>(256, next_pow2(2.0 * s.L * k_max / kPi));
  return s;
}

std::pair<double, double> grid_residual(const PacketParams& p, EnvelopeKind kind,
                                        const grid::GridSpec& coarse, double t) {
  grid::GridSpec fine = coarse;
  fine.N = coarse.N * 2;
  if (coarse.dt > 0.0) fine.dt = coarse.dt / 2.0;
  if (coarse.a > 0.0) fine.a = coarse.a / 2.0;
  const auto state = packets::initial_state_exact(p, kind);
  const auto rep = convergence::convergence_report(state, {coarse, fine}, t);
  return {rep.extrapolated, rep.uncertainty};
}

std::vector<std::pair<std::string, PacketParams>> fig1_sets(double r0) {
  return {{"a", PacketParams::with_equal_widths(5.0, 1.0, 5.0, r0)},
          {"b", PacketParams::with_equal_widths(5.0, 1.5, 5.0, r0)},
          {"c", PacketParams::with_equal_widths(2.0, 1.0, 5.0, r0)}};
}

std::vector<std::pair<std::string, PacketParams>> fig2_sets(double r0) {
  return {{"a", PacketParams::with_equal_widths(10.0, 0.5, 10.0, r0)},
          {"b", PacketParams::with_equal_widths(10.0, 1.5, 10.0, r0)},
          {"c", PacketParams::with_equal_widths(4.0, 0.5, 10.0, r0)}};
}

std::vector<ResidualSummary> cmd_fig1(const RunConfig& cfg) {
  return run_figure(cfg, "fig1", fig1_sets(cfg.r0.value_or(10.0)), EnvelopeKind::plain);
}

std::vector<ResidualSummary> cmd_fig2(const RunConfig& cfg) {
  return run_figure(cfg, "fig2", fig2_sets(cfg.r0.value_or(20.0)), EnvelopeKind::node_excited);
}

std::vector<SweepRecord> cmd_sweep(const RunConfig& cfg, const std::vector<double>& k0_list,
                                   const std::vector<double>& gamma_list) {
  prepare_dir(cfg.output_dir);
  const auto start = Clock::now();
  std::vector<SweepRecord> rows;
  for (double g : gamma_list) {
    for (double k0 : k0_list) {
      SweepRecord r;
      r.index = rows.size();
      r.k0 = k0;
      r.gamma = g;
      r.beta = cfg.sweep.beta;
      rows.push_back(r);
    }
  }

  auto evaluate = [&](SweepRecord& r) {
    r.printed_residual = r.analytic_residual = r.quadrature_residual = kNaN;
    r.analytic_error = r.quadrature_error = r.tail_mass = r.t_late = kNaN;
    try {
      if (r.k0 == r.gamma) {
        throw PreconditionError("resonance k0 == gamma exactly; sample k0 = gamma (1 +- eps)");
      }
      const PacketParams p =
          PacketParams::with_equal_widths(r.gamma, r.beta, r.k0, cfg.r0.value_or(10.0));
      p.validate();
      const auto res = analytic::residual_probability(p, cfg.kind);
      r.printed_residual = res.printed;
      r.analytic_residual = res.integrated;
      r.analytic_error = res.error;
      r.tail_mass = res.tail_mass;
      r.t_late = res.t;
      const oracle::QuadratureOracle q(p, cfg.kind, cfg.quadrature);
      const auto qn = q.norm(res.t, res.reach);
      r.quadrature_residual = qn.value.real();
      r.quadrature_error = qn.error;
      if (cfg.with_grid_oracle) {
        const double t = p.r0 / p.k0;
        const auto [value, err] = grid_residual(p, cfg.kind, grid_for(cfg, p, t), t);
        r.grid_residual = value;
        r.grid_error = err;
        r.grid_t = t;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(rows[i]);
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(cfg.workers, rows.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  io::CsvWriter csv(cfg.output_dir / "sweep.csv",
                    {"index", "k0", "gamma", "beta", "printed_residual", "analytic_residual",
                     "analytic_error", "tail_mass", "quadrature_residual", "quadrature_error",
                     "t_late", "grid_residual", "grid_error", "grid_t", "error"},
                    {{"kind", to_string(cfg.kind)}});
  auto opt = [](const std::optional<double>& v) {
    return v ? number_or_nan(*v) : std::string();
  };
  for (const auto& r : rows) {
    std::string err = r.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    csv.row({std::to_string(r.index), number_or_nan(r.k0), number_or_nan(r.gamma),
             number_or_nan(r.beta), number_or_nan(r.printed_residual),
             number_or_nan(r.analytic_residual), number_or_nan(r.analytic_error),
             number_or_nan(r.tail_mass), number_or_nan(r.quadrature_residual),
             number_or_nan(r.quadrature_error), number_or_nan(r.t_late), opt(r.grid_residual),
             opt(r.grid_error), opt(r.grid_t), err});
  }
  csv.close();
  io::write_manifest(cfg.output_dir, cfg.to_json(),
                     {{"command", "sweep"},
                      {"seconds", seconds_since(start)},
                      {"build", build_info()},
                      {"k0", k0_list},
                      {"gamma", gamma_list}});
  return rows;
}

ScanResult cmd_singularity_scan(const RunConfig& cfg) {
  prepare_dir(cfg.output_dir);
  const auto start = Clock::now();
  const double gamma = cfg.params.gamma;
  const spectral::InteractionParams ip(gamma);
  const auto& sc = cfg.scan;
  ScanResult out;
  out.step = (sc.k_max - sc.k_min) / static_cast<double>(sc.points - 1);
  out.minimum = std::numeric_limits<double>::infinity();
  {
    io::CsvWriter csv(cfg.output_dir / "singularity_scan.csv", {"k", "residual"},
                      {{"gamma", io::format_number(gamma)},
                       {"r_probe", io::format_number(sc.r_probe)}});
    for (double k : linspace(sc.k_min, sc.k_max, sc.points)) {
      const double res = spectral::singularity_residual(k, ip, sc.r_probe);
      csv.row({k, res});
      if (res < out.minimum) {
        out.minimum = res;
        out.k_at_minimum = k;
      }
    }
    csv.close();
  }
  out.residual_at_singularity = spectral::singularity_residual(-gamma, ip, sc.r_probe);
  {
    io::CsvWriter csv(cfg.output_dir / "singularity_energy.csv", {"K", "E_ss", "E_at_k_minus_gamma"},
                      {{"gamma", io::format_number(gamma)}});
    const std::size_t n = sc.K_points;
    for (std::size_t i = 0; i < n; ++i) {
      const double K =
          n == 1 ? 0.0 : -sc.K_max + 2.0 * sc.K_max * static_cast<double>(i) / static_cast<double>(n - 1);
      csv.row({K, spectral::singularity_energy(K, ip), spectral::energy({K, -gamma})});
    }
    csv.close();
  }
  io::write_manifest(cfg.output_dir, cfg.to_json(),
                     {{"command", "singularity-scan"},
                      {"seconds", seconds_since(start)},
                      {"build", build_info()},
                      {"k_at_minimum", out.k_at_minimum},
                      {"residual_at_singularity", out.residual_at_singularity}});
  return out;
}

json cmd_convergence(const RunConfig& cfg) {
  prepare_dir(cfg.output_dir);
  const auto start = Clock::now();
  const PacketParams& p = cfg.params;
  const double t = p.r0 / p.k0;
  const grid::GridSpec base = grid_for(cfg, p, t);
  std::vector<grid::GridSpec> ladder;
  for (std::size_t n : {base.N / 2, base.N, base.N * 2}) {
    grid::GridSpec s = base;
    s.N = n;
    s.dt = base.dt > 0.0 ? base.dt * static_cast<double>(base.N) / static_cast<double>(n) : 0.0;
    s.a = base.a > 0.0 ? base.a * static_cast<double>(base.N) / static_cast<double>(n) : 0.0;
    ladder.push_back(s);
  }
  const auto state = packets::initial_state_exact(p, cfg.kind);
  const auto rep = convergence::convergence_report(state, ladder, t);
  const analytic::SeparableEvolution ev(p, cfg.kind);
  const double reference = analytic_norm_at(ev, t);

  io::CsvWriter csv(cfg.output_dir / "convergence.csv", {"N", "h", "dt", "a", "value", "seconds"},
                    {{"params", io::params_to_json(p).dump()},
                     {"kind", to_string(cfg.kind)},
                     {"t", io::format_number(t)}});
  for (const auto& r : rep.rungs) {
    csv.row({std::to_string(r.spec.N), io::format_number(r.h), io::format_number(r.dt),
             io::format_number(r.a), io::format_number(r.value), io::format_number(r.seconds)});
  }
  csv.close();
  json summary = {{"t", t},
                  {"extrapolated", rep.extrapolated},
                  {"uncertainty", rep.uncertainty},
                  {"observed_order", std::isfinite(rep.observed_order)
                                         ? json(rep.observed_order)
                                         : json(std::to_string(rep.observed_order))},
                  {"monotone", rep.monotone},
                  {"closed_form", reference},
                  {"note", rep.note}};
  io::write_manifest(cfg.output_dir, cfg.to_json(),
                     {{"command", "convergence"},
                      {"seconds", seconds_since(start)},
                      {"build", build_info()},
                      {"summary", summary}});
  return summary;
}

}  // namespace pairsim::experiments
