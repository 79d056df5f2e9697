#pragma once

#include "bsp/types.hpp"

#include <span>
#include <vector>

namespace bsp {

struct ThresholdResult {
  double tau = 0.0;
  std::vector<Index> rejected;  // ascending positions j with p_j <= tau
};

// H_m = Σ_{i=1}^m 1/i, summed in extended precision from the small terms up.
long double harmonic_number(std::size_t m);

// Benjamini–Yekutieli step-up threshold: tau is the largest order statistic
// p_(k) with m p_(k) / k <= alpha / H_m (inclusive). No passing rank gives
// tau = 0 and an empty rejection set.
ThresholdResult by_threshold(std::span<const double> pvalues, double alpha);

}  // namespace bsp
