//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_BITSET_HPP_
#define COSETPACK_BITSET_HPP_

#include <bit>
#include <cstdint>
#include <vector>

namespace cosetpack {

/// Fixed-size bitset over vertex ids 0..n-1.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : n_(n), bits_((static_cast<size_t>(n) + 63) / 64, 0) {}

  int universe() const { return n_; }
  void set(int i) { bits_[static_cast<size_t>(i) >> 6] |= (1ULL << (i & 63)); }
  void reset(int i) { bits_[static_cast<size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const { return (bits_[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1; }

  int count() const {
    int c = 0;
    for (uint64_t w : bits_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (uint64_t w : bits_) {
      if (w) return false;
    }
    return true;
  }
  bool operator==(const VertexSet&) const = default;

  VertexSet& operator&=(const VertexSet& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    return *this;
  }
  VertexSet& operator|=(const VertexSet& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    return *this;
  }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }

  bool subsetOf(const VertexSet& o) const {
    for (size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] & ~o.bits_[i]) return false;
    }
    return true;
  }
  bool intersects(const VertexSet& o) const {
    for (size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] & o.bits_[i]) return true;
    }
    return false;
  }
  int firstSet() const {
    for (size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) return static_cast<int>(i * 64) + std::countr_zero(bits_[i]);
    }
    return -1;
  }
  std::vector<int> toVector() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i) {
      if (test(i)) out.push_back(i);
    }
    return out;
  }

 private:
  int n_ = 0;
  std::vector<uint64_t> bits_;
};

/// Exact maximum clique by branch and bound with greedy coloring bounds.
/// Deterministic: vertices are ordered by descending degree (ties by id).
/// Returns the first maximum clique found in that order.
std::vector<int> maxClique(int n, const std::vector<VertexSet>& adjacency);

}  // namespace cosetpack

#endif  // COSETPACK_BITSET_HPP_
