#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pairsim {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Momentum-space envelope family of the relative coordinate.
/// `plain` is a Gaussian, `node_excited` is the (k - k0)-weighted Gaussian.
enum class EnvelopeKind { plain, node_excited };

enum class Symmetry { symmetric, antisymmetric };

std::string to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(const std::string& s);

// Error taxonomy. Each maps onto one CLI exit code.

/// Non-finite or out-of-domain argument.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid run configuration (unknown keys, bad grid, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical method failed to reach its tolerance. Carries the best
/// estimate it did reach.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, Complex estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
  Complex estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  Complex estimate_;
  double error_bound_;
};

/// The grid propagator detected norm growth beyond its slack.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical configuration of one collision experiment (hbar = m = 1).
///
/// gamma  interaction strength of -i 2 gamma delta(x1 - x2), gamma >= 0
/// alpha  centre-of-mass envelope width in momentum space
/// beta   relative envelope width in momentum space
/// K0     centre-of-mass central momentum
/// k0     relative central momentum (> 0, the packets approach each other)
/// r0     initial separation (> 0)
/// R0     initial centre-of-mass position
struct PacketParams {
  double gamma = 5.0;
  double alpha = 2.0;
  double beta = 1.0;
  double K0 = 0.0;
  double k0 = 5.0;
  double r0 = 10.0;
  double R0 = 0.0;

  /// Throws DomainError on non-finite or non-positive widths/momenta.
  void validate() const;

  /// True when alpha == 2 beta (to relative precision 1e-12), the
  /// condition under which the product-state representation exists.
  bool separable() const;

  /// Throws PreconditionError unless separable().
  void require_separable() const;

  /// exp(-beta^2 r0^2 / 2): size of the neglected overlap terms.
  double separability_quality() const;

  /// Same configuration with alpha set to 2 beta.
  static PacketParams with_equal_widths(double gamma, double beta, double k0, double r0,
                                        double K0 = 0.0, double R0 = 0.0);
};

}  // namespace pairsim
