#include "pairsim/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace pairsim::grid {
namespace {

constexpr Complex I{0.0, 1.0};

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// Distance x1 - x2 folded onto [-L, L): the contact line of the torus.
double folded(double u, double L) {
  const double period = 2.0 * L;
  u = std::fmod(u + L, period);
  if (u < 0.0) u += period;
  return u - L;
}

double gaussian_delta(double u, double a) {
  return std::exp(-u * u / (a * a)) / (a * std::sqrt(kPi));
}

// Smooth absorbing profile: 1 in the interior, cos^(1/8) ramp to 0 over the
// outer `w` of each edge.
double mask_value(double x, double L, double w) {
  const double d = L - std::abs(x);
  if (d >= w) return 1.0;
  if (d <= 0.0) return 0.0;
  return std::pow(std::cos(0.5 * kPi * (1.0 - d / w)), 0.125);
}

class FftPair {
 public:
  FftPair(std::vector<Complex>& buf, std::size_t n) {
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    const int m = static_cast<int>(n);
    forward_ = fftw_plan_dft_2d(m, m, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(m, m, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  fftw_plan forward_;
  fftw_plan backward_;
};

void fill_measured_rates(std::vector<NormSample>& hist) {
  const std::size_t n = hist.size();
  if (n < 2) return;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    hist[i].measured_rate = (hist[hi].norm - hist[lo].norm) / (hist[hi].t - hist[lo].t);
  }
}

std::string to_string(Regularization r) {
  return r == Regularization::lattice ? "lattice" : "gaussian";
}
std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "absorbing"; }

}  // namespace

double GridSpec::default_time_step(double gamma) const {
  const double hh = h();
  return std::min(hh * hh / (2.0 * kPi), hh / (20.0 * std::max(gamma, 1.0)));
}

void GridSpec::validate(const PacketParams& p) const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid half width L must be > 0");
  if (!power_of_two(N) || N < 16) throw ConfigError("grid N must be a power of two >= 16");
  const double hh = h();
  const double step = time_step(p.gamma);
  if (!(step > 0.0) || step > hh * hh / kPi) {
    throw ConfigError("time step " + std::to_string(step) + " exceeds h^2/pi");
  }
  const double k_max = std::abs(p.K0) / 2.0 + p.k0 + 6.0 * p.beta;
  if (hh > kPi / k_max) {
    throw ConfigError("grid spacing " + std::to_string(hh) + " does not resolve momentum " +
                      std::to_string(k_max));
  }
  if (regularization == Regularization::gaussian && hh > width() / 4.0) {
    throw ConfigError("Gaussian contact width must be at least 4 h");
  }
  const double margin = boundary == Boundary::absorbing ? L / 8.0 : 0.0;
  if (std::abs(p.R0) + p.r0 / 2.0 + 8.0 / p.beta >= L - margin) {
    throw ConfigError("initial packets do not fit inside the grid");
  }
}

double GridState2D::norm() const {
  double s = 0.0;
  for (const Complex& v : field) s += std::norm(v);
  const double hh = spec.h();
  return s * hh * hh;
}

double GridState2D::exchange_defect(Symmetry sym) const {
  const std::size_t n = spec.N;
  const double sgn = sym == Symmetry::symmetric ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      worst = std::max(worst, std::abs(at(i, j) - sgn * at(j, i)));
    }
  }
  return worst;
}

GridState2D sample_state(const packets::TwoParticleState& state, const GridSpec& spec) {
  GridState2D s;
  s.spec = spec;
  s.gamma = state.params().gamma;
  s.field.resize(spec.N * spec.N);
  for (std::size_t i = 0; i < spec.N; ++i) {
    for (std::size_t j = 0; j < spec.N; ++j) s.field[i * spec.N + j] = state(s.x(i), s.x(j));
  }
  return s;
}

double predicted_loss_rate(const GridState2D& s) {
  const std::size_t n = s.spec.N;
  const double hh = s.spec.h();
  double acc = 0.0;
  if (s.spec.regularization == Regularization::lattice) {
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(s.at(i, i));
    return -4.0 * s.gamma * hh * acc;
  }
  const double a = s.spec.width();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      acc += gaussian_delta(folded(s.x(i) - s.x(j), s.spec.L), a) * std::norm(s.at(i, j));
    }
  }
  return -4.0 * s.gamma * hh * hh * acc;
}

Trajectory evolve_grid(const packets::TwoParticleState& initial, const GridSpec& spec,
                       double t_final, const EvolveOptions& opts) {
  const PacketParams& p = initial.params();
  spec.validate(p);
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
  const std::size_t n = spec.N;
  const double hh = spec.h();
  const double gamma = p.gamma;
  const auto steps =
      static_cast<std::size_t>(std::max(0.0, std::ceil(t_final / spec.time_step(gamma) - 1e-9)));
  const double dt = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;

  GridState2D state = sample_state(initial, spec);
  state.spec.dt = dt > 0.0 ? dt : spec.time_step(gamma);

  // Kinetic phase with the 1/N^2 of the unnormalised inverse transform.
  std::vector<Complex> kinetic(n * n);
  {
    std::vector<double> k(n);
    const double dk = 2.0 * kPi / (2.0 * spec.L);
    for (std::size_t i = 0; i < n; ++i) {
      const long m = i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
      k[i] = dk * static_cast<double>(m);
    }
    const double inv = 1.0 / static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        kinetic[i * n + j] = inv * std::exp(-0.5 * I * (k[i] * k[i] + k[j] * k[j]) * dt);
      }
    }
  }

  // Half-step contact factor.
  const bool lattice = spec.regularization == Regularization::lattice;
  const double diag_half = std::exp(-gamma * dt / hh);
  std::vector<double> contact_half;
  if (!lattice && gamma != 0.0) {
    contact_half.resize(n * n);
    const double a = spec.width();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double u = folded(state.x(i) - state.x(j), spec.L);
        contact_half[i * n + j] = std::exp(-gamma * gaussian_delta(u, a) * dt);
      }
    }
  }
  auto apply_contact = [&](std::vector<Complex>& f) {
    if (gamma == 0.0) return;
    if (lattice) {
      for (std::size_t i = 0; i < n; ++i) f[i * n + i] *= diag_half;
    } else {
      for (std::size_t q = 0; q < n * n; ++q) f[q] *= contact_half[q];
    }
  };

  std::vector<double> mask;
  if (spec.boundary == Boundary::absorbing) {
    mask.resize(n * n);
    const double w = spec.L / 8.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mask[i * n + j] = mask_value(state.x(i), spec.L, w) * mask_value(state.x(j), spec.L, w);
      }
    }
  }

  std::vector<std::size_t> snapshot_steps;
  for (double ts : opts.snapshot_times) {
    if (ts < 0.0 || ts > t_final) throw ConfigError("snapshot time outside [0, t_final]");
    snapshot_steps.push_back(dt > 0.0 ? static_cast<std::size_t>(std::llround(ts / dt)) : 0);
  }
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);

  Trajectory traj;
  auto record = [&](std::size_t step, double norm) {
    state.history.push_back({step, state.t, norm, 0.0, predicted_loss_rate(state)});
  };
  auto maybe_snapshot = [&](std::size_t step) {
    for (std::size_t s : snapshot_steps) {
      if (s == step) {
        if (opts.observer) {
          opts.observer(state);
        } else {
          traj.snapshots.push_back(state);
        }
        break;
      }
    }
  };

  double norm = state.norm();
  record(0, norm);
  maybe_snapshot(0);
  FftPair fft(state.field, n);
  for (std::size_t step = 1; step <= steps; ++step) {
    apply_contact(state.field);
    fft.forward();
    for (std::size_t q = 0; q < n * n; ++q) state.field[q] *= kinetic[q];
    fft.backward();
    apply_contact(state.field);
    state.t = static_cast<double>(step) * dt;
    double next = state.norm();
    if (next > norm + 1e-6) {
      throw InstabilityError("grid norm grew from " + std::to_string(norm) + " to " +
                             std::to_string(next) + " at t = " + std::to_string(state.t));
    }
    if (!mask.empty()) {
      for (std::size_t q = 0; q < n * n; ++q) state.field[q] *= mask[q];
      const double kept = state.norm();
      state.absorbed += next - kept;
      next = kept;
    }
    norm = next;
    if (step % every == 0 || step == steps) record(step, norm + state.absorbed);
    maybe_snapshot(step);
  }
  fill_measured_rates(state.history);
  for (auto& snap : traj.snapshots) snap.history = state.history;
  traj.final = std::move(state);
  return traj;
}

LossRate norm_and_loss_rate(const GridState2D& state) {
  LossRate out;
  out.norm = state.norm();
  if (state.history.size() < 2) return out;
  const auto nearest = std::min_element(
      state.history.begin(), state.history.end(), [&](const NormSample& a, const NormSample& b) {
        return std::abs(a.t - state.t) < std::abs(b.t - state.t);
      });
  const NormSample& s = *nearest;
  out.measured_rate = s.measured_rate;
  out.predicted_rate = s.predicted_rate;
  const double scale = std::max(std::abs(s.predicted_rate), 1e-300);
  out.relative_mismatch =
      s.predicted_rate == 0.0 && s.measured_rate == 0.0
          ? 0.0
          : std::abs(s.measured_rate - s.predicted_rate) / scale;
  return out;
}

std::vector<std::pair<double, double>> relative_density(const GridState2D& s) {
  const std::size_t n = s.spec.N;
  const double h = s.spec.h();
  const long half = static_cast<long>(n / 2);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  // Periodic box: i - j is taken modulo N.
  for (long m = -half; m < half; ++m) {
    double sum = 0.0;
    const std::size_t shift = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::norm(s.field[i * n + (i + n - shift) % n]);
    }
    out.emplace_back(static_cast<double>(m) * h, h * sum);
  }
  return out;
}

namespace {

std::uint64_t swap_if_big(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out = (out << 8) | ((bits >> (8 * i)) & 0xffu);
    return out;
  }
  return bits;
}

void put_le(std::ostream& os, double v) {
  const auto bits = swap_if_big(std::bit_cast<std::uint64_t>(v));
  os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get_le(std::istream& is) {
  std::uint64_t bits = 0;
  is.read(reinterpret_cast<char*>(&bits), sizeof bits);
  return std::bit_cast<double>(swap_if_big(bits));
}

}  // namespace

void write_snapshot(std::ostream& os, const GridState2D& s) {
  nlohmann::json header = {{"L", s.spec.L},
                           {"N", s.spec.N},
                           {"dt", s.spec.dt},
                           {"regularization", to_string(s.spec.regularization)},
                           {"a", s.spec.width()},
                           {"boundary", to_string(s.spec.boundary)},
                           {"gamma", s.gamma},
                           {"t", s.t},
                           {"absorbed", s.absorbed}};
  os << header.dump() << '\n';
  for (const Complex& v : s.field) {
    put_le(os, v.real());
    put_le(os, v.imag());
  }
  if (!os) throw std::ios_base::failure("snapshot write failed");
}

GridState2D read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::ios_base::failure("missing snapshot header");
  const auto header = nlohmann::json::parse(line);
  GridState2D s;
  s.spec.L = header.at("L").get<double>();
  s.spec.N = header.at("N").get<std::size_t>();
  s.spec.dt = header.at("dt").get<double>();
  s.spec.regularization = header.at("regularization").get<std::string>() == "lattice"
                              ? Regularization::lattice
                              : Regularization::gaussian;
  s.spec.a = header.at("a").get<double>();
  s.spec.boundary = header.at("boundary").get<std::string>() == "periodic" ? Boundary::periodic
                                                                            : Boundary::absorbing;
  s.gamma = header.at("gamma").get<double>();
  s.t = header.at("t").get<double>();
  s.absorbed = header.at("absorbed").get<double>();
  s.field.resize(s.spec.N * s.spec.N);
  for (Complex& v : s.field) {
    const double re = get_le(is);
    const double im = get_le(is);
    v = {re, im};
  }
  if (!is) throw std::ios_base::failure("truncated snapshot payload");
  return s;
}

void write_norm_history(std::ostream& os, const GridState2D& s) {
  os << "step,t,norm,measured_rate,predicted_rate\n";
  char buf[160];
  for (const NormSample& h : s.history) {
    std::snprintf(buf, sizeof buf, "%zu,%.17e,%.17e,%.17e,%.17e\n", h.step, h.t, h.norm,
                  h.measured_rate, h.predicted_rate);
    os << buf;
  }
}

}  // namespace pairsim::grid
