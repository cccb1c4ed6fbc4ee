//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/ball.hpp"

#include <algorithm>
#include <deque>

namespace cosetpack {

Ball Ball::create(GroupPtr group, int radius, std::vector<Word> generators, long long budget) {
  if (radius < 0) throw ConfigError("ball radius must be >= 0");
  Ball ball;
  ball.group_ = std::move(group);
  ball.radius_ = radius;
  ball.defaultGens_ = generators.empty();
  if (ball.defaultGens_) {
    for (int g = 0; g < ball.group_->rank(); ++g) {
      generators.push_back(Word(1, static_cast<char>(letter(g))));
    }
  }
  ball.gens_ = generators;

  const size_t m = ball.gens_.size();
  std::vector<Element> stepElems(2 * m);
  for (size_t i = 0; i < m; ++i) {
    stepElems[2 * i] = ball.group_->nf(ball.gens_[i]);
    stepElems[2 * i + 1] = ball.group_->inverse(stepElems[2 * i]);
  }

  ball.entries_.push_back({ball.group_->identity(), 0, -1, -1});
  ball.index_[ball.group_->identity()] = 0;
  size_t head = 0;
  while (head < ball.entries_.size()) {
    const Entry cur = ball.entries_[head];
    if (cur.dist == radius) break;  // deeper layers complete by BFS order
    for (size_t s = 0; s < 2 * m; ++s) {
      Element next = ball.group_->mul(cur.elem, stepElems[s]);
      if (ball.index_.count(next)) continue;
      if (static_cast<long long>(ball.entries_.size()) >= budget) {
        throw BudgetError("ball element budget exceeded at layer " + std::to_string(cur.dist + 1),
                          cur.dist + 1);
      }
      ball.index_[next] = static_cast<int>(ball.entries_.size());
      ball.entries_.push_back({next, cur.dist + 1, static_cast<int>(head), static_cast<int>(s)});
    }
    ++head;
  }

  // exact step cost of each alphabet letter, so that inexact distance
  // queries still return certified upper bounds
  ball.letterCost_.assign(2 * static_cast<size_t>(ball.group_->rank()), -1);
  if (ball.defaultGens_) {
    std::fill(ball.letterCost_.begin(), ball.letterCost_.end(), 1);
  } else {
    int found = 0;
    const int need = 2 * ball.group_->rank();
    std::unordered_map<Element, int, ElementHash> seen;
    std::deque<Element> queue;
    Element id = ball.group_->identity();
    seen[id] = 0;
    queue.push_back(id);
    const int capRadius = 10;
    const long long capSize = 200000;
    while (!queue.empty() && found < need) {
      Element cur = queue.front();
      queue.pop_front();
      int d = seen[cur];
      if (d >= capRadius) break;
      for (size_t s = 0; s < 2 * m; ++s) {
        Element next = ball.group_->mul(cur, stepElems[s]);
        if (seen.count(next)) continue;
        if (static_cast<long long>(seen.size()) >= capSize) break;
        seen[next] = d + 1;
        queue.push_back(next);
        if (next.w.size() == 1) {
          const Letter l = static_cast<Letter>(next.w[0]);
          if (ball.letterCost_[l] < 0) {
            ball.letterCost_[l] = d + 1;
            ++found;
          }
        }
      }
    }
    for (int l = 0; l < need; ++l) {
      if (ball.letterCost_[static_cast<size_t>(l)] < 0) {
        throw OracleRefusal(
            "generating set does not express every alphabet letter within 10 steps; "
            "distance bounds would be uncertified");
      }
    }
  }
  return ball;
}

DistanceCert Ball::dist(const Element& x, const Element& y) const {
  Element d = group_->mul(group_->inverse(x), y);
  int i = indexOf(d);
  if (i >= 0) return {entries_[static_cast<size_t>(i)].dist, true, radius_};
  long long bound = 0;
  for (char c : d.w) bound += letterCost_[static_cast<size_t>(static_cast<Letter>(c))];
  return {static_cast<int>(bound), false, radius_};
}

std::vector<int> Ball::stepsTo(const Element& e) const {
  int i = indexOf(e);
  if (i < 0) throw OracleRefusal("element outside the ball; no exact geodesic available");
  std::vector<int> steps;
  while (entries_[static_cast<size_t>(i)].parent >= 0) {
    steps.push_back(entries_[static_cast<size_t>(i)].step);
    i = entries_[static_cast<size_t>(i)].parent;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

Word Ball::geodesic(const Element& x, const Element& y) const {
  Element d = group_->mul(group_->inverse(x), y);
  if (!contains(d)) {
    throw OracleRefusal("geodesic requires an exact distance certificate; enlarge the ball");
  }
  Word out;
  for (int s : stepsTo(d)) {
    const Word& g = gens_[static_cast<size_t>(s) / 2];
    out += (s % 2 == 0) ? g : wordInverse(g);
  }
  return out;
}

std::vector<int> Ball::neighborsOf(int idx) const {
  std::vector<int> out;
  const Element& e = entries_[static_cast<size_t>(idx)].elem;
  for (size_t i = 0; i < gens_.size(); ++i) {
    for (int sign = 0; sign < 2; ++sign) {
      Element n = group_->nf(sign == 0 ? e.w + gens_[i] : e.w + wordInverse(gens_[i]));
      int j = indexOf(n);
      if (j >= 0 && j != idx) out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json Ball::toJson() const {
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j{{"word", group_->render(e.elem)}, {"dist", e.dist}};
    if (e.parent >= 0) {
      j["parent"] = group_->render(entries_[static_cast<size_t>(e.parent)].elem);
    } else {
      j["parent"] = nullptr;
    }
    elems.push_back(j);
  }
  return {{"radius", radius_}, {"elements", elems}};
}

}  // namespace cosetpack
