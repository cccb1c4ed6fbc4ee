//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <numeric>

#include "cosetpack/bitset.hpp"

namespace cosetpack {

namespace {

struct CliqueSearch {
  int n;
  const std::vector<VertexSet>& adj;
  std::vector<int> order;    // vertices by descending degree
  std::vector<int> best;
  std::vector<int> current;

  // greedy coloring upper bound on the candidate set
  int colorBound(const VertexSet& cand) const {
    int colors = 0;
    VertexSet rest = cand;
    while (!rest.empty()) {
      ++colors;
      VertexSet cls = rest;
      for (int v = cls.firstSet(); v != -1; v = cls.firstSet()) {
        cls.reset(v);
        rest.reset(v);
        // remove neighbors of v from this color class
        VertexSet masked = cls;
        masked &= adj[static_cast<size_t>(v)];
        for (int u : masked.toVector()) cls.reset(u);
      }
    }
    return colors;
  }

  void expand(VertexSet cand) {
    if (cand.empty()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    if (current.size() + static_cast<size_t>(cand.count()) <= best.size()) return;
    if (current.size() + static_cast<size_t>(colorBound(cand)) <= best.size()) return;
    for (int v : order) {
      if (!cand.test(v)) continue;
      current.push_back(v);
      VertexSet next = cand;
      next &= adj[static_cast<size_t>(v)];
      expand(next);
      current.pop_back();
      cand.reset(v);
      if (current.size() + static_cast<size_t>(cand.count()) <= best.size()) return;
    }
  }
};

}  // namespace

std::vector<int> maxClique(int n, const std::vector<VertexSet>& adjacency) {
  if (n == 0) return {};
  CliqueSearch s{n, adjacency, {}, {}, {}};
  s.order.resize(static_cast<size_t>(n));
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(), [&](int a, int b) {
    return adjacency[static_cast<size_t>(a)].count() > adjacency[static_cast<size_t>(b)].count();
  });
  VertexSet all(n);
  for (int i = 0; i < n; ++i) all.set(i);
  s.expand(all);
  std::sort(s.best.begin(), s.best.end());
  return s.best;
}

}  // namespace cosetpack
