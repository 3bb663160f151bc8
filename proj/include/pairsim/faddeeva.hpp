#pragma once

#include "pairsim/types.hpp"

namespace pairsim {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), full complex plane.
/// Weideman's rational expansion (40 terms) in the upper half plane,
/// reflection w(z) = 2 exp(-z^2) - w(-z) below it. Relative accuracy is
/// about 1e-15 where the result does not overflow.
Complex faddeeva_w(Complex z);

/// exp(-shift) * erfc(z), evaluated as exp(gauss) w(iz) for Re z >= 0 and
/// 2 exp(-shift) - exp(gauss) w(-iz) otherwise, where the caller supplies
/// gauss == -shift - z^2 in a form free of cancellation. Neither exp(-z^2)
/// nor erfc(z) is formed on its own, so large shifts do not overflow.
Complex shifted_erfc(Complex z, Complex shift, Complex gauss);

}  // namespace pairsim
