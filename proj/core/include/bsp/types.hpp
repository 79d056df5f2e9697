#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <utility>
#include <vector>

namespace bsp {

using Index = Eigen::Index;

// The two data types. TypeOne features live in the columns of X, TypeTwo in Y.
enum class View : std::uint8_t { TypeOne, TypeTwo };

constexpr View opposite(View v) noexcept {
  return v == View::TypeOne ? View::TypeTwo : View::TypeOne;
}

constexpr std::string_view to_string(View v) noexcept {
  return v == View::TypeOne ? "S" : "T";
}

// A sorted, duplicate-free set of column indices of one view.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(View view) : view_(view) {}
  FeatureSet(View view, std::vector<Index> indices) : view_(view), indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }
  FeatureSet(View view, std::initializer_list<Index> indices)
      : FeatureSet(view, std::vector<Index>(indices)) {}

  View view() const noexcept { return view_; }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(Index i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  View view_ = View::TypeOne;
  std::vector<Index> indices_;
};

// |a ∩ b| for sorted index vectors.
std::size_t intersection_size(const std::vector<Index>& a, const std::vector<Index>& b);

FeatureSet intersect(const FeatureSet& a, const FeatureSet& b);

inline std::size_t intersection_size(const FeatureSet& a, const FeatureSet& b) {
  return intersection_size(a.indices(), b.indices());
}

// Pack an (s, t) pair into a single key for hashing.
constexpr std::uint64_t pair_key(Index s, Index t) noexcept {
  return (static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(static_cast<std::uint32_t>(t));
}

}  // namespace bsp
