#pragma once

// Exact two-particle eigenfunctions of
//   H = -(d^2/dx1^2 + d^2/dx2^2)/2 - i 2 gamma delta(x1 - x2)
// in centre-of-mass / relative coordinates R = (x1 + x2)/2, r = x1 - x2.
//
// The symmetric solution is sometimes written psi and the antisymmetric
// one phi in the literature; here they are psi_symmetric and
// psi_antisymmetric.

#include <span>

#include "pairsim/types.hpp"

namespace pairsim::spectral {

class InteractionParams {
 public:
  /// gamma must be finite and > 0.
  explicit InteractionParams(double gamma);
  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

struct MomentumPair {
  double K = 0.0;  ///< centre-of-mass momentum
  double k = 0.0;  ///< relative momentum
};

struct CoordinatePair {
  double x1 = 0.0;
  double x2 = 0.0;

  double R() const { return 0.5 * (x1 + x2); }
  double r() const { return x1 - x2; }
  static CoordinatePair from_com_relative(double R, double r) {
    return {R + 0.5 * r, R - 0.5 * r};
  }
};

/// Relative part of the symmetric eigenfunction,
/// cos(k r) - i gamma sin(k|r|)/k, with the k -> 0 limit taken analytically.
Complex relative_symmetric(double k, double r, double gamma);

/// d/dr of relative_symmetric for r != 0; at r == 0 returns the one-sided
/// derivative from the side given by `side` (+1 or -1).
Complex relative_symmetric_derivative(double k, double r, double gamma, int side = 0);

Complex psi_symmetric(MomentumPair mom, CoordinatePair pos, InteractionParams ip);
Complex psi_antisymmetric(MomentumPair mom, CoordinatePair pos);

/// The singular state e^{iKR} e^{-i gamma |r|}.
Complex psi_singularity(double K, CoordinatePair pos, InteractionParams ip);

/// E(K, k) = K^2/4 + k^2.
double energy(MomentumPair mom);

/// E_ss(K) = K^2/4 + gamma^2.
double singularity_energy(double K, InteractionParams ip);

/// |psi' + i gamma psi| at r = +r_probe plus |psi' - i gamma psi| at r = -r_probe
/// for the K = 0 symmetric eigenfunction. Vanishes only at k = -gamma.
double singularity_residual(double k, InteractionParams ip, double r_probe);

struct EigenResidual {
  double bulk = 0.0;  ///< max |-psi'' - k^2 psi| by central differences
  double jump = 0.0;  ///< |psi'(0+) - psi'(0-) + 2 i gamma psi(0)|
};

/// Checks the relative eigen-relation on the given samples (none may have a
/// stencil r +- h crossing r = 0) and the contact condition at r = 0.
EigenResidual verify_eigen_relation(MomentumPair mom, InteractionParams ip, Symmetry symmetry,
                                    std::span<const double> r_samples, double h);

}  // namespace pairsim::spectral
