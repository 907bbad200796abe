#pragma once

#include <cmath>
#include <stdexcept>

namespace fitbvp {

/// 1/sinh(x) as 2e^{-x} / (1 - e^{-2x}). Underflows to 0 for large x instead
/// of overflowing sinh.
template <typename Scalar>
Scalar stable_csch(Scalar x) {
  using std::exp;
  using std::expm1;
  if (!(x > Scalar(0))) throw std::domain_error("stable_csch: argument must be positive");
  return Scalar(2) * exp(-x) / -expm1(Scalar(-2) * x);
}

/// coth(x) - csch(x), evaluated as tanh(x/2).
template <typename Scalar>
Scalar stable_delta_d(Scalar x) {
  using std::tanh;
  if (!(x > Scalar(0))) throw std::domain_error("stable_delta_d: argument must be positive");
  return tanh(x / Scalar(2));
}

}  // namespace fitbvp
