#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "pdt/random.hpp"

namespace pdt {

// Canonical set of channel-use indices: sorted, duplicate-free. Two equal
// sets serialize identically, so announcements carry no covert ordering.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::uint32_t> indices)
      : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  }
  IndexSet(std::initializer_list<std::uint32_t> init)
      : IndexSet(std::vector<std::uint32_t>(init)) {}

  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  const std::vector<std::uint32_t>& indices() const { return idx_; }
  std::uint32_t operator[](std::size_t i) const { return idx_[i]; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool contains(std::uint32_t v) const {
    return std::binary_search(idx_.begin(), idx_.end(), v);
  }

  bool operator==(const IndexSet&) const = default;

  // First k indices in increasing order.
  IndexSet prefix(std::size_t k) const {
    if (k > idx_.size()) throw std::out_of_range("IndexSet::prefix");
    return IndexSet(std::vector<std::uint32_t>(idx_.begin(), idx_.begin() + k));
  }

 private:
  std::vector<std::uint32_t> idx_;
};

inline IndexSet set_intersect(const IndexSet& a, const IndexSet& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return IndexSet(std::move(out));
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<std::uint32_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return IndexSet(std::move(out));
}

inline IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
  std::vector<std::uint32_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return IndexSet(std::move(out));
}

inline bool disjoint(const IndexSet& a, const IndexSet& b) {
  return set_intersect(a, b).empty();
}

inline bool is_subset(const IndexSet& sub, const IndexSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

// Uniform subset draws. A scripted implementation replaces this in tests and
// in the audit oracle, where choices are enumerated instead of sampled.
class SubsetSampler {
 public:
  virtual ~SubsetSampler() = default;
  virtual IndexSet pick(const IndexSet& from, std::size_t k) = 0;
};

class RngSampler final : public SubsetSampler {
 public:
  explicit RngSampler(CounterRng rng) : rng_(rng) {}

  IndexSet pick(const IndexSet& from, std::size_t k) override {
    if (k > from.size()) throw std::invalid_argument("RngSampler: k > |from|");
    std::vector<std::uint32_t> pool = from.indices();
    // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng_.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return IndexSet(std::move(pool));
  }

 private:
  CounterRng rng_;
};

}  // namespace pdt
