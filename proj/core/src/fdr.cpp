#include "bsp/fdr.hpp"

#include "bsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bsp {

long double harmonic_number(std::size_t m) {
  long double h = 0.0L;
  for (std::size_t i = m; i >= 1; --i) h += 1.0L / static_cast<long double>(i);
  return h;
}

ThresholdResult by_threshold(std::span<const double> pvalues, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("by_threshold: alpha must lie in (0, 1]");
  ThresholdResult result;
  const std::size_t m = pvalues.size();
  if (m == 0) return result;
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("by_threshold: p-values must lie in [0, 1]");

  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());
  const long double level = static_cast<long double>(alpha) / harmonic_number(m);
  const long double lm = static_cast<long double>(m);
  bool found = false;
  for (std::size_t k = m; k >= 1 && !found; --k) {
    if (lm * static_cast<long double>(sorted[k - 1]) / static_cast<long double>(k) <= level) {
      result.tau = sorted[k - 1];
      found = true;
    }
  }
  if (!found) return result;
  for (std::size_t j = 0; j < m; ++j)
    if (pvalues[j] <= result.tau) result.rejected.push_back(static_cast<Index>(j));
  return result;
}

}  // namespace bsp
