#pragma once

#include <cmath>

#include "budgetbo/dual.hpp"

namespace budgetbo {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

// Standard normal pdf/cdf.  The cdf goes through erfc so both tails stay
// accurate far beyond |x| = 6.
template <typename T>
T norm_pdf(const T& x) {
  return kInvSqrt2Pi * exp(-0.5 * x * x);
}

template <typename T>
T norm_cdf(const T& x) {
  return 0.5 * erfc(-kInvSqrt2 * x);
}

}  // namespace budgetbo
