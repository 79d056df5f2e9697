#include "bsp/types.hpp"

#include "bsp/error.hpp"

#include <iterator>

namespace bsp {

std::size_t intersection_size(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

FeatureSet intersect(const FeatureSet& a, const FeatureSet& b) {
  if (a.view() != b.view()) throw PreconditionError("intersect: sets from different views");
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FeatureSet(a.view(), std::move(out));
}

}  // namespace bsp
