//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/median.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace cosetpack::cube {

MedianGraph MedianGraph::fromEdges(int n, const std::vector<std::pair<int, int>>& edges) {
  MedianGraph g;
  g.n_ = n;
  g.adj_.assign(static_cast<size_t>(n), {});
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw ConfigError("edge endpoint out of range");
    if (u == v) throw ConfigError("loops are not allowed");
    g.adj_[static_cast<size_t>(u)].push_back(v);
    g.adj_[static_cast<size_t>(v)].push_back(u);
  }
  for (auto& nb : g.adj_) {
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
      throw ConfigError("parallel edges are not allowed");
    }
  }
  // all-pairs BFS
  g.dist_.assign(static_cast<size_t>(n), std::vector<uint16_t>(static_cast<size_t>(n), UINT16_MAX));
  for (int s = 0; s < n; ++s) {
    auto& d = g.dist_[static_cast<size_t>(s)];
    d[static_cast<size_t>(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int t : g.adj_[static_cast<size_t>(v)]) {
        if (d[static_cast<size_t>(t)] == UINT16_MAX) {
          d[static_cast<size_t>(t)] = static_cast<uint16_t>(d[static_cast<size_t>(v)] + 1);
          queue.push_back(t);
        }
      }
    }
    for (int t = 0; t < n; ++t) {
      if (d[static_cast<size_t>(t)] == UINT16_MAX) throw ConfigError("graph is not connected");
    }
  }
  for (int u = 0; u < n; ++u) {
    for (int v : g.adj_[static_cast<size_t>(u)]) {
      if (u < v) g.edgeList_.push_back({u, v});
    }
  }
  return g;
}

int MedianGraph::edgeCount() const { return static_cast<int>(edgeList_.size()); }

MedianGraph MedianGraph::fromJson(const nlohmann::json& j) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return fromEdges(j.at("vertices").get<int>(), edges);
}

nlohmann::json MedianGraph::toJson() const {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : edgeList_) edges.push_back({u, v});
  return {{"vertices", n_}, {"edges", edges}};
}

VertexSet MedianGraph::interval(int u, int v) const {
  VertexSet s(n_);
  const int duv = dist(u, v);
  for (int m = 0; m < n_; ++m) {
    if (dist(u, m) + dist(m, v) == duv) s.set(m);
  }
  return s;
}

const MedianVerification& MedianGraph::verifyMedian(int exhaustiveLimit, unsigned long long seed,
                                                    int samples) const {
  if (verification_) return *verification_;
  MedianVerification result;
  result.median = true;
  // interval bitsets once per pair
  std::vector<VertexSet> iv(static_cast<size_t>(n_) * static_cast<size_t>(n_));
  for (int u = 0; u < n_; ++u) {
    for (int v = u; v < n_; ++v) {
      VertexSet s = interval(u, v);
      iv[static_cast<size_t>(u) * static_cast<size_t>(n_) + static_cast<size_t>(v)] = s;
      iv[static_cast<size_t>(v) * static_cast<size_t>(n_) + static_cast<size_t>(u)] = s;
    }
  }
  auto tripleOk = [&](int u, int v, int w) {
    VertexSet s = iv[static_cast<size_t>(u) * static_cast<size_t>(n_) + static_cast<size_t>(v)];
    s &= iv[static_cast<size_t>(v) * static_cast<size_t>(n_) + static_cast<size_t>(w)];
    s &= iv[static_cast<size_t>(u) * static_cast<size_t>(n_) + static_cast<size_t>(w)];
    return s.count() == 1;
  };
  if (n_ <= exhaustiveLimit) {
    for (int u = 0; u < n_ && result.median; ++u) {
      for (int v = u; v < n_ && result.median; ++v) {
        for (int w = v; w < n_; ++w) {
          if (!tripleOk(u, v, w)) {
            result.median = false;
            result.counterexample = {u, v, w};
            break;
          }
        }
      }
    }
  } else {
    result.exhaustive = false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n_ - 1);
    for (int i = 0; i < samples && result.median; ++i) {
      int u = pick(rng), v = pick(rng), w = pick(rng);
      if (!tripleOk(u, v, w)) {
        result.median = false;
        result.counterexample = {u, v, w};
      }
    }
  }
  verification_ = result;
  return *verification_;
}

int MedianGraph::median(int u, int v, int w) const {
  requireVerified();
  VertexSet s = interval(u, v);
  s &= interval(v, w);
  s &= interval(u, w);
  int m = s.firstSet();
  if (m < 0 || s.count() != 1) throw std::logic_error("median: triple intersection not a single vertex");
  return m;
}

bool MedianGraph::isConvex(const VertexSet& s) const {
  auto members = s.toVector();
  for (size_t i = 0; i < members.size(); ++i) {
    for (size_t j = i + 1; j < members.size(); ++j) {
      if (!interval(members[i], members[j]).subsetOf(s)) return false;
    }
  }
  return true;
}

VertexSet MedianGraph::hull(const VertexSet& s) const {
  VertexSet cur = s;
  while (true) {
    VertexSet next = cur;
    auto members = cur.toVector();
    for (size_t i = 0; i < members.size(); ++i) {
      for (size_t j = i + 1; j < members.size(); ++j) {
        next |= interval(members[i], members[j]);
      }
    }
    if (next == cur) return cur;
    cur = next;
  }
}

const std::vector<Hyperplane>& MedianGraph::hyperplanes() const {
  if (hyperplanes_) return *hyperplanes_;
  requireVerified();
  const int m = static_cast<int>(edgeList_.size());
  std::map<std::pair<int, int>, int> edgeId;
  for (int i = 0; i < m; ++i) edgeId[edgeList_[static_cast<size_t>(i)]] = i;
  auto idOf = [&](int a, int b) { return edgeId.at({std::min(a, b), std::max(a, b)}); };

  // union-find over edges; square opposition relation
  std::vector<int> parent(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) parent[static_cast<size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };
  for (int i = 0; i < m; ++i) {
    auto [a, b] = edgeList_[static_cast<size_t>(i)];
    for (int c : adj_[static_cast<size_t>(a)]) {
      if (c == b) continue;
      for (int d : adj_[static_cast<size_t>(b)]) {
        if (d == a || d == c) continue;
        // square a-b, c-d with sides a-c, b-d and no diagonals
        if (dist(c, d) == 1 && dist(a, d) == 2 && dist(b, c) == 2) {
          unite(i, idOf(c, d));
        }
      }
    }
  }
  std::map<int, int> classIndex;
  std::vector<Hyperplane> planes;
  edgeClass_.emplace(static_cast<size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    int root = find(i);
    auto [it, fresh] = classIndex.insert({root, static_cast<int>(planes.size())});
    if (fresh) planes.push_back(Hyperplane{{}, VertexSet(n_), VertexSet(n_), VertexSet(n_)});
    (*edgeClass_)[static_cast<size_t>(i)] = it->second;
    planes[static_cast<size_t>(it->second)].edges.push_back(edgeList_[static_cast<size_t>(i)]);
  }
  // halfspaces: delete class edges, must leave exactly two components
  for (auto& plane : planes) {
    std::set<std::pair<int, int>> cut(plane.edges.begin(), plane.edges.end());
    std::vector<int> comp(static_cast<size_t>(n_), -1);
    int comps = 0;
    for (int s = 0; s < n_; ++s) {
      if (comp[static_cast<size_t>(s)] >= 0) continue;
      comp[static_cast<size_t>(s)] = comps;
      std::deque<int> queue{s};
      while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int t : adj_[static_cast<size_t>(v)]) {
          if (cut.count({std::min(v, t), std::max(v, t)})) continue;
          if (comp[static_cast<size_t>(t)] < 0) {
            comp[static_cast<size_t>(t)] = comps;
            queue.push_back(t);
          }
        }
      }
      ++comps;
    }
    if (comps != 2) {
      throw std::logic_error("hyperplane class does not split the graph into two halfspaces");
    }
    for (int v = 0; v < n_; ++v) {
      (comp[static_cast<size_t>(v)] == 0 ? plane.side0 : plane.side1).set(v);
    }
    for (auto [u, v] : plane.edges) {
      plane.carrier.set(u);
      plane.carrier.set(v);
    }
  }
  // wall-metric identity (bug trap)
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      int sep = 0;
      for (const auto& plane : planes) {
        if (plane.side0.test(u) != plane.side0.test(v)) ++sep;
      }
      if (sep != dist(u, v)) {
        throw std::logic_error("wall metric identity failed: d(u,v) != #separating hyperplanes");
      }
    }
  }
  hyperplanes_ = std::move(planes);
  return *hyperplanes_;
}

int MedianGraph::separatorCount(int u, int v) const {
  int sep = 0;
  for (const auto& plane : hyperplanes()) {
    if (plane.side0.test(u) != plane.side0.test(v)) ++sep;
  }
  return sep;
}

const std::vector<std::vector<int>>& MedianGraph::deltaAdjacency() const {
  if (deltaAdj_) return *deltaAdj_;
  requireVerified();
  std::vector<std::vector<int>> adj(static_cast<size_t>(n_));
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      int d = dist(u, v);
      if (d == 0) continue;
      if (d >= 20) continue;  // 2^d would exceed any finite graph here
      long long need = 1LL << d;
      if (need > n_) continue;
      if (interval(u, v).count() == need) {
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
      }
    }
  }
  deltaAdj_ = std::move(adj);
  // Delta distances by BFS
  deltaDist_.emplace(static_cast<size_t>(n_),
                     std::vector<uint16_t>(static_cast<size_t>(n_), UINT16_MAX));
  for (int s = 0; s < n_; ++s) {
    auto& d = (*deltaDist_)[static_cast<size_t>(s)];
    d[static_cast<size_t>(s)] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int t : (*deltaAdj_)[static_cast<size_t>(v)]) {
        if (d[static_cast<size_t>(t)] == UINT16_MAX) {
          d[static_cast<size_t>(t)] = static_cast<uint16_t>(d[static_cast<size_t>(v)] + 1);
          queue.push_back(t);
        }
      }
    }
  }
  return *deltaAdj_;
}

int MedianGraph::deltaDist(int u, int v) const {
  deltaAdjacency();
  return (*deltaDist_)[static_cast<size_t>(u)][static_cast<size_t>(v)];
}

VertexSet MedianGraph::deltaNeighborhood(const VertexSet& s, int n) const {
  deltaAdjacency();
  VertexSet out = s;
  for (int v = 0; v < n_; ++v) {
    if (out.test(v)) continue;
    for (int m : s.toVector()) {
      if (deltaDist(v, m) <= n) {
        out.set(v);
        break;
      }
    }
  }
  return out;
}

MedianGraph::IntervalNeighborhoodCheck MedianGraph::checkIntervalNeighborhood(int r, int s, int t,
                                                                              int u) const {
  requireVerified();
  IntervalNeighborhoodCheck result;
  VertexSet nbd = deltaNeighborhood(interval(r, s), 1);
  result.preconditionOk = nbd.test(t) && nbd.test(u);
  if (!result.preconditionOk) return result;
  result.holds = interval(t, u).subsetOf(nbd);
  return result;
}

int MedianGraph::helly(const std::vector<VertexSet>& sets) const {
  requireVerified();
  if (sets.empty()) throw OracleRefusal("helly: no sets given");
  for (size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) throw OracleRefusal("helly: set " + std::to_string(i) + " is empty");
    if (!isConvex(sets[i])) {
      throw OracleRefusal("helly: set " + std::to_string(i) + " is not d-convex");
    }
  }
  for (size_t i = 0; i < sets.size(); ++i) {
    for (size_t j = i + 1; j < sets.size(); ++j) {
      if (!sets[i].intersects(sets[j])) {
        throw OracleRefusal("helly: sets " + std::to_string(i) + " and " + std::to_string(j) +
                            " do not intersect");
      }
    }
  }
  VertexSet total = sets[0];
  for (size_t i = 1; i < sets.size(); ++i) total &= sets[i];
  int v = total.firstSet();
  if (v < 0) {
    throw std::logic_error(
        "helly: pairwise-intersecting convex sets with empty total intersection on a verified "
        "median graph");
  }
  return v;
}

bool MedianGraph::hyperplanesCross(int i, int j) const {
  const auto& planes = hyperplanes();
  const auto& a = planes[static_cast<size_t>(i)];
  const auto& b = planes[static_cast<size_t>(j)];
  return (a.side0 & b.side0).count() > 0 && (a.side0 & b.side1).count() > 0 &&
         (a.side1 & b.side0).count() > 0 && (a.side1 & b.side1).count() > 0;
}

int MedianGraph::dimension() const {
  const auto& planes = hyperplanes();
  const int m = static_cast<int>(planes.size());
  std::vector<VertexSet> adj(static_cast<size_t>(m), VertexSet(m));
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (hyperplanesCross(i, j)) {
        adj[static_cast<size_t>(i)].set(j);
        adj[static_cast<size_t>(j)].set(i);
      }
    }
  }
  return static_cast<int>(maxClique(m, adj).size());
}

MedianGraph::HyperplanePackingReport MedianGraph::hyperplanePacking(
    const std::vector<int>& hyperplaneIds, int dPrime) const {
  HyperplanePackingReport report;
  const auto& planes = hyperplanes();
  // precondition: carriers pairwise Delta-close
  for (size_t i = 0; i < hyperplaneIds.size(); ++i) {
    for (size_t j = i + 1; j < hyperplaneIds.size(); ++j) {
      const auto& a = planes[static_cast<size_t>(hyperplaneIds[i])].carrier;
      const auto& b = planes[static_cast<size_t>(hyperplaneIds[j])].carrier;
      int best = INT32_MAX;
      for (int x : a.toVector()) {
        for (int y : b.toVector()) best = std::min(best, deltaDist(x, y));
      }
      if (best > dPrime) return report;  // preconditionOk stays false
    }
  }
  report.preconditionOk = true;
  // carriers are convex; their Delta-D'-neighborhoods are convex and pairwise
  // intersect, so Helly yields a common vertex
  std::vector<VertexSet> nbds;
  for (int id : hyperplaneIds) {
    nbds.push_back(deltaNeighborhood(planes[static_cast<size_t>(id)].carrier, dPrime));
  }
  report.vertex = helly(nbds);
  // hyperplanes crossing the Delta-ball of radius D' at the vertex
  VertexSet ball(n_);
  for (int v = 0; v < n_; ++v) {
    if (deltaDist(report.vertex, v) <= dPrime) ball.set(v);
  }
  for (const auto& plane : planes) {
    if (plane.side0.intersects(ball) && plane.side1.intersects(ball)) ++report.crossingCount;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Corpus generators
// ---------------------------------------------------------------------------

MedianGraph makePath(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return MedianGraph::fromEdges(n, edges);
}

MedianGraph makeCycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return MedianGraph::fromEdges(n, edges);
}

MedianGraph makeGrid(int rows, int cols) {
  std::vector<std::pair<int, int>> edges;
  auto id = [&](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  }
  return MedianGraph::fromEdges(rows * cols, edges);
}

MedianGraph makeHypercube(int dim) {
  const int n = 1 << dim;
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < dim; ++b) {
      int u = v ^ (1 << b);
      if (v < u) edges.push_back({v, u});
    }
  }
  return MedianGraph::fromEdges(n, edges);
}

MedianGraph randomTree(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.push_back({pick(rng), v});
  }
  return MedianGraph::fromEdges(n, edges);
}

Wallspace randomWallspace(int points, int wallCount, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  Wallspace ws;
  ws.points = points;
  std::set<std::vector<bool>> seen;
  int guard = 0;
  while (static_cast<int>(ws.side0.size()) < wallCount && ++guard < 10000) {
    std::vector<bool> side(static_cast<size_t>(points));
    int ones = 0;
    for (int p = 0; p < points; ++p) {
      side[static_cast<size_t>(p)] = (rng() & 1) != 0;
      ones += side[static_cast<size_t>(p)] ? 1 : 0;
    }
    if (ones == 0 || ones == points) continue;
    // canonical orientation: side containing point 0
    if (!side[0]) side.flip();
    if (!seen.insert(side).second) continue;
    VertexSet s(points);
    for (int p = 0; p < points; ++p) {
      if (side[static_cast<size_t>(p)]) s.set(p);
    }
    ws.side0.push_back(s);
  }
  return ws;
}

}  // namespace cosetpack::cube
