//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_BALL_HPP_
#define COSETPACK_BALL_HPP_

#include <unordered_map>
#include <vector>

#include "cosetpack/errors.hpp"
#include "cosetpack/group.hpp"
#include "json.hpp"

namespace cosetpack {

/// A word-metric distance: exact when computed inside an exhaustive ball,
/// else a certified upper bound with the guarantee that the true distance
/// exceeds radius_used.
struct DistanceCert {
  int value = 0;
  bool exact = false;
  int radius_used = 0;

  nlohmann::json toJson() const {
    return {{"value", value}, {"exact", exact}, {"radius_used", radius_used}};
  }
};

/// Exhaustively enumerated metric ball of a Cayley graph, with distances and
/// parent links for geodesic reconstruction. Construction is all-or-nothing:
/// a budget overflow refuses the whole ball and reports the layer reached.
/// BFS order is deterministic (generators in index order, then inverses), so
/// parents and geodesics are reproducible.
class Ball {
 public:
  struct Entry {
    Element elem;
    int dist = 0;
    int parent = -1;  // index of the BFS parent, -1 for the identity
    int step = -1;    // step applied to the parent (2*i = gen i, 2*i+1 = inverse)
  };

  /// generators default to the backend alphabet; custom generating sets are
  /// lists of words (each used together with its inverse).
  static Ball create(GroupPtr group, int radius, std::vector<Word> generators = {},
                     long long budget = 2'000'000);

  const GroupPtr& group() const { return group_; }
  int radius() const { return radius_; }
  size_t size() const { return entries_.size(); }
  const Entry& at(size_t i) const { return entries_[i]; }
  const std::vector<Word>& generators() const { return gens_; }
  bool defaultGenerators() const { return defaultGens_; }

  int indexOf(const Element& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(const Element& e) const { return index_.count(e) > 0; }

  /// Exact distance from the identity, or -1 when outside the ball.
  int distTo(const Element& e) const {
    int i = indexOf(e);
    return i < 0 ? -1 : entries_[static_cast<size_t>(i)].dist;
  }

  /// d(x,y) = d(1, x^-1 y); exact iff nf(x^-1 y) lies in the ball, otherwise
  /// a certified upper bound (canonical word length) with exact=false.
  DistanceCert dist(const Element& x, const Element& y) const;

  /// Geodesic word w with x*w = y and steps(w) = dist(x,y).
  /// Refuses when the distance is not exact.
  Word geodesic(const Element& x, const Element& y) const;

  /// Step indices along the geodesic from the identity to e.
  std::vector<int> stepsTo(const Element& e) const;

  /// Neighbors of a ball element inside the ball (by generator steps).
  std::vector<int> neighborsOf(int idx) const;

  nlohmann::json toJson() const;

 private:
  GroupPtr group_;
  int radius_ = 0;
  bool defaultGens_ = true;
  std::vector<Word> gens_;
  std::vector<int> letterCost_;  // exact step-cost per alphabet letter, for bounds
  std::vector<Entry> entries_;
  std::unordered_map<Element, int, ElementHash> index_;
};

}  // namespace cosetpack

#endif  // COSETPACK_BALL_HPP_
