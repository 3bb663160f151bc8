#include <fstream>
#include <set>

#include "pairsim/experiments.hpp"
#include "pairsim/io.hpp"

namespace pairsim::experiments {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

grid::Regularization regularization_from(const std::string& s) {
  if (s == "lattice") return grid::Regularization::lattice;
  if (s == "gaussian") return grid::Regularization::gaussian;
  throw ConfigError("grid.regularization must be 'lattice' or 'gaussian'");
}

grid::Boundary boundary_from(const std::string& s) {
  if (s == "periodic") return grid::Boundary::periodic;
  if (s == "absorbing") return grid::Boundary::absorbing;
  throw ConfigError("grid.boundary must be 'periodic' or 'absorbing'");
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j,
             {"experiment", "params", "kind", "grid", "quadrature", "output_dir", "seed",
              "workers", "with_grid_oracle", "frames", "r_points", "sweep", "scan"},
             "config");
  RunConfig c;
  read(j, "experiment", c.experiment, "config");
  if (j.contains("params")) {
    const json& p = j.at("params");
    check_keys(p, {"gamma", "alpha", "beta", "K0", "k0", "r0", "R0"}, "params");
    read(p, "gamma", c.params.gamma, "params");
    read(p, "beta", c.params.beta, "params");
    c.params.alpha = 2.0 * c.params.beta;
    read(p, "alpha", c.params.alpha, "params");
    read(p, "K0", c.params.K0, "params");
    read(p, "k0", c.params.k0, "params");
    read(p, "R0", c.params.R0, "params");
    if (p.contains("r0")) {
      read(p, "r0", c.params.r0, "params");
      c.r0 = c.params.r0;
    }
    try {
      c.params.validate();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("params: ") + e.what());
    }
  }
  if (j.contains("kind")) {
    std::string kind;
    read(j, "kind", kind, "config");
    c.kind = envelope_kind_from_string(kind);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"L", "N", "dt", "regularization", "a", "boundary"}, "grid");
    grid::GridSpec s;
    read(g, "L", s.L, "grid");
    read(g, "N", s.N, "grid");
    read(g, "dt", s.dt, "grid");
    read(g, "a", s.a, "grid");
    std::string text;
    if (g.contains("regularization")) {
      read(g, "regularization", text, "grid");
      s.regularization = regularization_from(text);
    }
    if (g.contains("boundary")) {
      read(g, "boundary", text, "grid");
      s.boundary = boundary_from(text);
    }
    c.grid = s;
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    check_keys(q, {"n_sigma", "abs_tol", "rel_tol", "max_subdivisions"}, "quadrature");
    read(q, "n_sigma", c.quadrature.n_sigma, "quadrature");
    read(q, "abs_tol", c.quadrature.abs_tol, "quadrature");
    read(q, "rel_tol", c.quadrature.rel_tol, "quadrature");
    read(q, "max_subdivisions", c.quadrature.max_subdivisions, "quadrature");
    c.quadrature.validate();
  }
  std::string out;
  if (j.contains("output_dir")) {
    read(j, "output_dir", out, "config");
    c.output_dir = out;
  }
  read(j, "seed", c.seed, "config");
  read(j, "workers", c.workers, "config");
  read(j, "with_grid_oracle", c.with_grid_oracle, "config");
  read(j, "frames", c.frames, "config");
  read(j, "r_points", c.r_points, "config");
  if (c.workers == 0) throw ConfigError("workers must be >= 1");
  if (c.frames < 2 || c.r_points < 2) throw ConfigError("frames and r_points must be >= 2");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"k0", "gamma", "beta"}, "sweep");
    read(s, "k0", c.sweep.k0, "sweep");
    read(s, "gamma", c.sweep.gamma, "sweep");
    read(s, "beta", c.sweep.beta, "sweep");
  }
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    check_keys(s, {"k_min", "k_max", "points", "K_max", "K_points", "r_probe"}, "scan");
    read(s, "k_min", c.scan.k_min, "scan");
    read(s, "k_max", c.scan.k_max, "scan");
    read(s, "points", c.scan.points, "scan");
    read(s, "K_max", c.scan.K_max, "scan");
    read(s, "K_points", c.scan.K_points, "scan");
    read(s, "r_probe", c.scan.r_probe, "scan");
    if (!(c.scan.k_max > c.scan.k_min) || c.scan.points < 2 || c.scan.K_points < 1 ||
        !(c.scan.r_probe > 0.0)) {
      throw ConfigError("scan range is empty or r_probe <= 0");
    }
  }
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json params = io::params_to_json(this->params);
  if (!r0) params.erase("r0");
  json j = {{"experiment", experiment},
            {"params", params},
            {"kind", to_string(kind)},
            {"quadrature",
             {{"n_sigma", quadrature.n_sigma},
              {"abs_tol", quadrature.abs_tol},
              {"rel_tol", quadrature.rel_tol},
              {"max_subdivisions", quadrature.max_subdivisions}}},
            {"output_dir", output_dir.string()},
            {"seed", seed},
            {"workers", workers},
            {"with_grid_oracle", with_grid_oracle},
            {"frames", frames},
            {"r_points", r_points},
            {"sweep", {{"k0", sweep.k0}, {"gamma", sweep.gamma}, {"beta", sweep.beta}}},
            {"scan",
             {{"k_min", scan.k_min},
              {"k_max", scan.k_max},
              {"points", scan.points},
              {"K_max", scan.K_max},
              {"K_points", scan.K_points},
              {"r_probe", scan.r_probe}}}};
  if (grid) {
    j["grid"] = {
        {"L", grid->L},
        {"N", grid->N},
        {"dt", grid->dt},
        {"regularization",
         grid->regularization == grid::Regularization::lattice ? "lattice" : "gaussian"},
        {"a", grid->a},
        {"boundary", grid->boundary == grid::Boundary::periodic ? "periodic" : "absorbing"}};
  }
  return j;
}

}  // namespace pairsim::experiments
