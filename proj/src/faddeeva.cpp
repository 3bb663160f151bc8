#include "pairsim/faddeeva.hpp"

#include <array>
#include <cmath>

namespace pairsim {
namespace {

constexpr int kTerms = 40;

struct WeidemanTable {
  double L = 0.0;
  std::array<double, kTerms> a{};  // polynomial coefficients, highest power first
};

// Coefficients of the expansion in Z = (L + iz)/(L - iz), from the
// discrete Fourier transform of f(t) = exp(-t^2)(L^2 + t^2) sampled at
// t = L tan(theta/2).
WeidemanTable build_table() {
  WeidemanTable tab;
  const int M = 2 * kTerms;
  const int M2 = 2 * M;
  tab.L = std::sqrt(kTerms / std::sqrt(2.0));

  // f laid out as [0, f(-M+1), ..., f(M-1)], length M2, then fftshifted.
  std::array<double, 4 * kTerms> f{};
  f[0] = 0.0;
  for (int k = -M + 1; k <= M - 1; ++k) {
    const double theta = k * kPi / M;
    const double t = tab.L * std::tan(0.5 * theta);
    f[k + M] = std::exp(-t * t) * (tab.L * tab.L + t * t);
  }
  std::array<double, 4 * kTerms> shifted{};
  for (int i = 0; i < M2; ++i) shifted[i] = f[(i + M) % M2];

  // Real part of the DFT at frequencies 1..kTerms.
  std::array<double, kTerms + 1> re{};
  for (int n = 1; n <= kTerms; ++n) {
    double s = 0.0;
    for (int j = 0; j < M2; ++j) s += shifted[j] * std::cos(2.0 * kPi * n * j / M2);
    re[n] = s / M2;
  }
  for (int n = 1; n <= kTerms; ++n) tab.a[kTerms - n] = re[n];
  return tab;
}

const WeidemanTable& table() {
  static const WeidemanTable tab = build_table();
  return tab;
}

Complex weideman_upper(Complex z) {
  const auto& tab = table();
  const Complex iz{-z.imag(), z.real()};
  const Complex denom = tab.L - iz;
  const Complex Z = (tab.L + iz) / denom;
  Complex p = 0.0;
  for (double c : tab.a) p = p * Z + c;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return weideman_upper(z);
  return 2.0 * std::exp(-z * z) - weideman_upper(-z);
}

Complex shifted_erfc(Complex z, Complex shift, Complex gauss) {
  const Complex iz{-z.imag(), z.real()};
  if (z.real() >= 0.0) return std::exp(gauss) * weideman_upper(iz);
  return 2.0 * std::exp(-shift) - std::exp(gauss) * weideman_upper(-iz);
}

}  // namespace pairsim
