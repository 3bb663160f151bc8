#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pairsim/analytic.hpp"
#include "pairsim/experiments.hpp"
#include "pairsim/io.hpp"
#include "pairsim/packets.hpp"
#include "pairsim/quadrature_oracle.hpp"
#include "pairsim/spectral.hpp"

namespace {

using namespace pairsim;
using nlohmann::json;

enum Exit { ok = 0, config_error = 2, accuracy_error = 3, io_error = 4 };

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void echo_config(const experiments::RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  std::ofstream os(cfg.output_dir / "config.json", std::ios::binary | std::ios::trunc);
  os << cfg.to_json().dump(2) << '\n';
  if (!os) throw io::IoError("cannot write config echo in " + cfg.output_dir.string());
}

json summaries_json(const std::vector<experiments::ResidualSummary>& rows) {
  json out = json::array();
  for (const auto& s : rows) {
    out.push_back({{"set", s.label},
                   {"params", io::params_to_json(s.params)},
                   {"printed", number_or_null(s.printed)},
                   {"integrated", s.integrated},
                   {"integrated_error", s.integrated_error},
                   {"tail_mass", s.tail_mass},
                   {"localized", s.integrated - s.tail_mass},
                   {"t_late", s.t_late},
                   {"grid_t", s.grid_t},
                   {"analytic_at_grid_t", s.analytic_at_grid_t},
                   {"grid", number_or_null(s.grid)},
                   {"grid_error", number_or_null(s.grid_error)}});
  }
  return out;
}

struct EvalArgs {
  double x1 = 0.0;
  double x2 = 0.0;
  double t = 0.0;
  std::optional<double> K;
  std::optional<double> k;
};

json run_eval(const experiments::RunConfig& cfg, const EvalArgs& a) {
  const PacketParams& p = cfg.params;
  const double K = a.K.value_or(p.K0);
  const double k = a.k.value_or(p.k0);
  const spectral::CoordinatePair pos{a.x1, a.x2};
  json out = {{"x1", a.x1}, {"x2", a.x2}, {"t", a.t}, {"K", K}, {"k", k},
              {"energy", spectral::energy({K, k})}};
  out["psi_antisymmetric"] = complex_json(spectral::psi_antisymmetric({K, k}, pos));
  if (p.gamma > 0.0) {
    const spectral::InteractionParams ip(p.gamma);
    out["psi_symmetric"] = complex_json(spectral::psi_symmetric({K, k}, pos, ip));
    out["psi_singularity"] = complex_json(spectral::psi_singularity(K, pos, ip));
    out["singularity_energy"] = spectral::singularity_energy(K, ip);
  }
  const analytic::SeparableEvolution ev(p, cfg.kind);
  const double r = pos.r();
  out["rel_closed_form"] = complex_json(ev.rel(r, a.t));
  out["com"] = complex_json(ev.com(pos.R(), a.t));
  out["amplitude"] = complex_json(ev(a.x1, a.x2, a.t));
  const oracle::QuadratureOracle q(p, cfg.kind, cfg.quadrature);
  const auto est = q.phi_with_error(r, a.t);
  out["rel_quadrature"] = complex_json(est.value);
  out["rel_quadrature_error"] = est.error;
  if (p.k0 != p.gamma) out["rel_printed"] = complex_json(analytic::rel_wave_printed(r, a.t, p, cfg.kind));
  if (a.t == 0.0) {
    out["initial_exact"] = complex_json(packets::initial_state_exact(p, cfg.kind)(a.x1, a.x2));
  }
  if (analytic::asymptotic_regime(a.t, p)) {
    out["asymptotic_density"] = analytic::asymptotic_density(r, a.t, p, cfg.kind);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-particle collisions with an imaginary contact interaction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  unsigned workers = 0;
  bool with_grid = false;
  std::string kind;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_flag("--with-grid-oracle", with_grid, "add split-step grid results");
  app.add_option("--kind", kind, "envelope: plain or node-excited");

  auto* fig1 = app.add_subcommand("fig1", "plain-envelope profiles for the three reference sets");
  auto* fig2 = app.add_subcommand("fig2", "node-excited profiles for the three reference sets");

  auto* sweep = app.add_subcommand("sweep", "residual probability over (k0, gamma) pairs");
  std::vector<double> k0_list;
  std::vector<double> gamma_list;
  sweep->add_option("--k0", k0_list, "relative momenta")->delimiter(',');
  sweep->add_option("--gamma", gamma_list, "interaction strengths")->delimiter(',');

  auto* scan = app.add_subcommand("singularity-scan", "locate the spectral singularity in k");
  std::optional<double> k_min, k_max;
  std::optional<std::size_t> points;
  scan->add_option("--k-min", k_min);
  scan->add_option("--k-max", k_max);
  scan->add_option("--points", points);

  auto* eval = app.add_subcommand("eval", "pointwise evaluation of every representation");
  EvalArgs ea;
  eval->add_option("--x1", ea.x1)->required();
  eval->add_option("--x2", ea.x2)->required();
  eval->add_option("--t", ea.t);
  eval->add_option("--K", ea.K, "eigenfunction centre-of-mass momentum (default K0)");
  eval->add_option("--k", ea.k, "eigenfunction relative momentum (default k0)");

  auto* conv = app.add_subcommand("convergence", "grid refinement study at t = r0/k0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    experiments::RunConfig cfg =
        config_path.empty() ? experiments::RunConfig{} : experiments::RunConfig::from_file(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (workers) cfg.workers = workers;
    if (with_grid) cfg.with_grid_oracle = true;
    if (!kind.empty()) cfg.kind = envelope_kind_from_string(kind);
    if (k_min) cfg.scan.k_min = *k_min;
    if (k_max) cfg.scan.k_max = *k_max;
    if (points) cfg.scan.points = *points;
    if (!k0_list.empty()) cfg.sweep.k0 = k0_list;
    if (!gamma_list.empty()) cfg.sweep.gamma = gamma_list;
    cfg.experiment = app.get_subcommands().front()->get_name();
    if (cfg.scan.points < 2 || !(cfg.scan.k_max > cfg.scan.k_min)) {
      throw ConfigError("scan range is empty");
    }
    // Re-validate the resolved echo so command-line overrides go through the same checks.
    cfg = experiments::RunConfig::from_json(cfg.to_json());
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    json result;
    if (*eval) {
      result = run_eval(cfg, ea);
    } else {
      echo_config(cfg);
      if (*fig1) {
        result = summaries_json(experiments::cmd_fig1(cfg));
      } else if (*fig2) {
        result = summaries_json(experiments::cmd_fig2(cfg));
      } else if (*sweep) {
        const auto rows = experiments::cmd_sweep(cfg, cfg.sweep.k0, cfg.sweep.gamma);
        result = json::array();
        for (const auto& r : rows) {
          result.push_back({{"k0", r.k0},
                            {"gamma", r.gamma},
                            {"printed", number_or_null(r.printed_residual)},
                            {"analytic", number_or_null(r.analytic_residual)},
                            {"quadrature", number_or_null(r.quadrature_residual)},
                            {"error", r.error}});
        }
      } else if (*scan) {
        const auto s = experiments::cmd_singularity_scan(cfg);
        result = {{"k_at_minimum", s.k_at_minimum},
                  {"minimum", s.minimum},
                  {"residual_at_singularity", s.residual_at_singularity},
                  {"step", s.step}};
      } else if (*conv) {
        result = experiments::cmd_convergence(cfg);
      }
    }
    std::cout << result.dump(2) << '\n';
    return ok;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return config_error;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy: " << e.what() << '\n';
    return accuracy_error;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return accuracy_error;
  } catch (const io::IoError& e) {
    std::cerr << "io: " << e.what() << '\n';
    return io_error;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io: " << e.what() << '\n';
    return io_error;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io: " << e.what() << '\n';
    return io_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
