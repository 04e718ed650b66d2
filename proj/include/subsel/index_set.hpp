#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "subsel/errors.hpp"

namespace subsel {

/// A subset of a ground set [0, n), stored as a strictly increasing list of
/// indices. All set algebra keeps the sorted/unique representation intact.
class IndexSet {
 public:
  IndexSet() = default;

  explicit IndexSet(std::vector<std::size_t> sorted_unique)
      : idx_(std::move(sorted_unique)) {}

  IndexSet(std::initializer_list<std::size_t> values)
      : IndexSet(from_unsorted(std::vector<std::size_t>(values))) {}

  /// Builds a set from arbitrary input: sorts and removes duplicates.
  static IndexSet from_unsorted(std::vector<std::size_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return IndexSet(std::move(values));
  }

  /// The full ground set {0, ..., n-1}.
  static IndexSet full(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return IndexSet(std::move(v));
  }

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  const std::vector<std::size_t>& indices() const { return idx_; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }
  std::size_t operator[](std::size_t i) const { return idx_[i]; }

  bool contains(std::size_t e) const {
    return std::binary_search(idx_.begin(), idx_.end(), e);
  }

  /// Throws DataError unless every index lies in [0, ground_size).
  void validate(std::size_t ground_size) const {
    if (!idx_.empty() && idx_.back() >= ground_size) {
      throw DataError("index " + std::to_string(idx_.back()) +
                      " out of range for ground set of size " +
                      std::to_string(ground_size));
    }
  }

  IndexSet unioned(const IndexSet& other) const {
    std::vector<std::size_t> out;
    out.reserve(idx_.size() + other.idx_.size());
    std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(),
                   other.idx_.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
  }

  IndexSet minus(const IndexSet& other) const {
    std::vector<std::size_t> out;
    out.reserve(idx_.size());
    std::set_difference(idx_.begin(), idx_.end(), other.idx_.begin(),
                        other.idx_.end(), std::back_inserter(out));
    return IndexSet(std::move(out));
  }

  IndexSet with(std::size_t e) const {
    if (contains(e)) return *this;
    std::vector<std::size_t> out = idx_;
    out.insert(std::upper_bound(out.begin(), out.end(), e), e);
    return IndexSet(std::move(out));
  }

  IndexSet without(std::size_t e) const {
    std::vector<std::size_t> out = idx_;
    auto it = std::lower_bound(out.begin(), out.end(), e);
    if (it != out.end() && *it == e) out.erase(it);
    return IndexSet(std::move(out));
  }

  std::size_t intersection_size(const IndexSet& other) const {
    std::size_t c = 0;
    auto a = idx_.begin();
    auto b = other.idx_.begin();
    while (a != idx_.end() && b != other.idx_.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++c;
        ++a;
        ++b;
      }
    }
    return c;
  }

  /// Bitmask encoding, valid for ground sets of at most 64 elements.
  std::uint64_t as_mask() const {
    std::uint64_t m = 0;
    for (std::size_t e : idx_) m |= std::uint64_t{1} << e;
    return m;
  }

  static IndexSet from_mask(std::uint64_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; mask != 0; ++e, mask >>= 1) {
      if (mask & 1) out.push_back(e);
    }
    return IndexSet(std::move(out));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (i > 0) os << ',';
      os << idx_[i];
    }
    os << '}';
    return os.str();
  }

  // Lexicographic order on the index sequence; used for deterministic
  // tie-breaking.
  friend auto operator<=>(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> idx_;
};

}  // namespace subsel
