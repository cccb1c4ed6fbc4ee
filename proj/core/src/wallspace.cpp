//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <set>

#include "cosetpack/median.hpp"

namespace cosetpack::cube {

void Wallspace::validate() const {
  if (static_cast<int>(side0.size()) > 31) throw ConfigError("at most 31 walls are supported");
  std::set<std::vector<int>> seen;
  for (size_t w = 0; w < side0.size(); ++w) {
    int c = side0[w].count();
    if (c == 0 || c == points) {
      throw ConfigError("wall " + std::to_string(w) + " is trivial (one side empty)");
    }
    // canonical key: the side containing point 0
    VertexSet canon(points);
    const bool flip = !side0[w].test(0);
    for (int p = 0; p < points; ++p) {
      if (side0[w].test(p) != flip) canon.set(p);
    }
    if (!seen.insert(canon.toVector()).second) {
      throw ConfigError("duplicate wall " + std::to_string(w));
    }
  }
}

Wallspace Wallspace::fromJson(const nlohmann::json& j) {
  Wallspace ws;
  ws.points = j.at("points").get<int>();
  for (const auto& wall : j.at("walls")) {
    VertexSet s(ws.points);
    for (const auto& p : wall) s.set(p.get<int>());
    ws.side0.push_back(s);
  }
  ws.validate();
  return ws;
}

nlohmann::json Wallspace::toJson() const {
  nlohmann::json walls = nlohmann::json::array();
  for (const auto& s : side0) walls.push_back(s.toVector());
  return {{"points", points}, {"walls", walls}};
}

DualResult dual(const Wallspace& ws) {
  ws.validate();
  const int W = static_cast<int>(ws.side0.size());
  if (W == 0) {
    DualResult r;
    r.graph = MedianGraph::fromEdges(1, {});
    r.orientations = {0};
    r.principal = 0;
    return r;
  }
  std::vector<VertexSet> side1(static_cast<size_t>(W), VertexSet(ws.points));
  for (int w = 0; w < W; ++w) {
    for (int p = 0; p < ws.points; ++p) {
      if (!ws.side0[static_cast<size_t>(w)].test(p)) side1[static_cast<size_t>(w)].set(p);
    }
  }
  auto sideOf = [&](uint32_t mask, int w) -> const VertexSet& {
    return (mask >> w) & 1 ? side1[static_cast<size_t>(w)] : ws.side0[static_cast<size_t>(w)];
  };
  auto consistent = [&](uint32_t mask, int changed) {
    for (int w = 0; w < W; ++w) {
      if (w == changed) continue;
      if (!sideOf(mask, changed).intersects(sideOf(mask, w))) return false;
    }
    return true;
  };
  // principal orientation: sides containing point 0
  uint32_t principal = 0;
  for (int w = 0; w < W; ++w) {
    if (!ws.side0[static_cast<size_t>(w)].test(0)) principal |= (1u << w);
  }
  std::map<uint32_t, int> id;
  std::vector<uint32_t> orientations{principal};
  id[principal] = 0;
  std::vector<std::pair<int, int>> edges;
  for (size_t head = 0; head < orientations.size(); ++head) {
    uint32_t mask = orientations[head];
    for (int w = 0; w < W; ++w) {
      uint32_t next = mask ^ (1u << w);
      if (!consistent(next, w)) continue;
      auto it = id.find(next);
      if (it == id.end()) {
        it = id.insert({next, static_cast<int>(orientations.size())}).first;
        orientations.push_back(next);
      }
      if (static_cast<int>(head) < it->second) edges.push_back({static_cast<int>(head), it->second});
    }
  }
  DualResult r;
  r.graph = MedianGraph::fromEdges(static_cast<int>(orientations.size()), edges);
  r.orientations = std::move(orientations);
  r.principal = 0;
  return r;
}

Wallspace walls(const MedianGraph& g) {
  Wallspace ws;
  ws.points = g.vertexCount();
  for (const auto& plane : g.hyperplanes()) ws.side0.push_back(plane.side0);
  ws.validate();
  return ws;
}

bool dualRoundTripIsomorphic(const MedianGraph& g) {
  Wallspace ws = walls(g);
  DualResult d = dual(ws);
  if (d.graph.vertexCount() != g.vertexCount() || d.graph.edgeCount() != g.edgeCount()) {
    return false;
  }
  // natural map: vertex -> its orientation (the side containing it per wall)
  std::map<uint32_t, int> dualId;
  for (size_t i = 0; i < d.orientations.size(); ++i) {
    dualId[d.orientations[i]] = static_cast<int>(i);
  }
  const int W = static_cast<int>(ws.side0.size());
  std::vector<int> image(static_cast<size_t>(g.vertexCount()), -1);
  std::set<int> hit;
  for (int v = 0; v < g.vertexCount(); ++v) {
    uint32_t mask = 0;
    for (int w = 0; w < W; ++w) {
      if (!ws.side0[static_cast<size_t>(w)].test(v)) mask |= (1u << w);
    }
    auto it = dualId.find(mask);
    if (it == dualId.end()) return false;
    image[static_cast<size_t>(v)] = it->second;
    if (!hit.insert(it->second).second) return false;  // not injective
  }
  // edge preservation both ways (counts already match)
  for (int v = 0; v < g.vertexCount(); ++v) {
    for (int u : g.neighbors(v)) {
      if (u < v) continue;
      const auto& nb = d.graph.neighbors(image[static_cast<size_t>(v)]);
      if (std::find(nb.begin(), nb.end(), image[static_cast<size_t>(u)]) == nb.end()) return false;
    }
  }
  return true;
}

}  // namespace cosetpack::cube
