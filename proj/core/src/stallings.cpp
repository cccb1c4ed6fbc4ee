//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/stallings.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "cosetpack/bitset.hpp"
#include "cosetpack/errors.hpp"

namespace cosetpack::stallings {

namespace {

std::vector<std::string> freeLabels(int rank) {
  std::vector<std::string> out;
  for (int i = 0; i < rank; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i));
  }
  return out;
}

/// Mutable multigraph with union-find, folded on demand.
class Arena {
 public:
  explicit Arena(int rank) : rank_(rank) {}

  int addVertex() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return static_cast<int>(parent_.size()) - 1;
  }

  void addEdge(int u, int gen, int v) { edges_.push_back({u, gen, v}); }

  void unite(int a, int b) { parent_[static_cast<size_t>(find(a))] = find(b); }

  int find(int v) {
    while (parent_[static_cast<size_t>(v)] != v) {
      parent_[static_cast<size_t>(v)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(v)])];
      v = parent_[static_cast<size_t>(v)];
    }
    return v;
  }

  /// Attach a fresh path spelling w from 'from' to 'to' (loop if from == to).
  void addPath(int from, const Word& w, int to) {
    if (w.empty()) {
      if (from != to) unite(from, to);
      return;
    }
    int cur = from;
    for (size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? to : addVertex();
      const Letter l = static_cast<Letter>(w[i]);
      if (letterInverse(l)) {
        addEdge(next, letterGen(l), cur);
      } else {
        addEdge(cur, letterGen(l), next);
      }
      cur = next;
    }
  }

  /// Import a core graph; returns the arena id of its basepoint.
  int import(const CoreGraph& g) {
    std::vector<int> ids(static_cast<size_t>(g.vertexCount()));
    for (int v = 0; v < g.vertexCount(); ++v) ids[static_cast<size_t>(v)] = addVertex();
    for (int v = 0; v < g.vertexCount(); ++v) {
      for (int gen = 0; gen < g.rank(); ++gen) {
        int t = g.target(v, letter(gen));
        if (t >= 0) addEdge(ids[static_cast<size_t>(v)], gen, ids[static_cast<size_t>(t)]);
      }
    }
    return ids[0];
  }

  void fold() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<int, int>, int> slot;  // (vertex, signed letter) -> target
      for (const auto& e : edges_) {
        int u = find(e[0]), v = find(e[2]);
        const int out = 2 * e[1];
        const int in = 2 * e[1] + 1;
        auto tryMerge = [&](int from, int sl, int to) {
          auto [it, fresh] = slot.insert({{from, sl}, to});
          if (!fresh && find(it->second) != find(to)) {
            unite(it->second, to);
            changed = true;
            return true;
          }
          return false;
        };
        if (tryMerge(u, out, v) || tryMerge(v, in, u)) break;
      }
    }
  }

  /// Folded graph reachable from base, optionally pruned to a core
  /// (iteratively removing degree<=1 vertices other than the basepoint).
  /// Vertices are renumbered by BFS in letter order; `track` ids are
  /// translated into the new numbering (-1 if pruned/unreachable).
  CoreGraph extract(int base, bool prune, const std::vector<int>& track = {},
                    std::vector<int>* trackedOut = nullptr) {
    base = find(base);
    // canonical deduped adjacency
    std::map<int, std::vector<int>> adj;  // vertex -> slots[2*rank]
    auto row = [&](int v) -> std::vector<int>& {
      auto it = adj.find(v);
      if (it == adj.end()) it = adj.emplace(v, std::vector<int>(2 * static_cast<size_t>(rank_), -1)).first;
      return it->second;
    };
    row(base);
    for (const auto& e : edges_) {
      int u = find(e[0]), v = find(e[2]);
      row(u)[static_cast<size_t>(2 * e[1])] = v;
      row(v)[static_cast<size_t>(2 * e[1] + 1)] = u;
    }
    // reachable set from base
    std::set<int> alive;
    std::deque<int> queue{base};
    alive.insert(base);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int t : row(v)) {
        if (t >= 0 && !alive.count(t)) {
          alive.insert(t);
          queue.push_back(t);
        }
      }
    }
    if (prune) {
      bool removed = true;
      while (removed) {
        removed = false;
        for (auto it = alive.begin(); it != alive.end();) {
          int v = *it;
          if (v != base) {
            int deg = 0;
            for (int t : row(v)) {
              if (t >= 0 && alive.count(t)) ++deg;
            }
            if (deg <= 1) {
              it = alive.erase(it);
              removed = true;
              continue;
            }
          }
          ++it;
        }
      }
    }
    // BFS renumbering
    std::map<int, int> newId;
    std::vector<int> order;
    newId[base] = 0;
    order.push_back(base);
    for (size_t head = 0; head < order.size(); ++head) {
      int v = order[head];
      for (int l = 0; l < 2 * rank_; ++l) {
        int t = row(v)[static_cast<size_t>(l)];
        if (t >= 0 && alive.count(t) && !newId.count(t)) {
          newId[t] = static_cast<int>(order.size());
          order.push_back(t);
        }
      }
    }
    std::vector<std::vector<int>> adjOut(order.size(), std::vector<int>(2 * static_cast<size_t>(rank_), -1));
    for (size_t i = 0; i < order.size(); ++i) {
      for (int l = 0; l < 2 * rank_; ++l) {
        int t = row(order[i])[static_cast<size_t>(l)];
        if (t >= 0 && alive.count(t)) adjOut[i][static_cast<size_t>(l)] = newId[t];
      }
    }
    if (trackedOut) {
      trackedOut->clear();
      for (int v : track) {
        int c = find(v);
        trackedOut->push_back(alive.count(c) && newId.count(c) ? newId[c] : -1);
      }
    }
    return CoreGraph::raw(rank_, std::move(adjOut));
  }

 private:
  int rank_;
  std::vector<int> parent_;
  std::vector<std::array<int, 3>> edges_;  // (u, gen, v) meaning u --gen--> v
};

/// Deterministic enumeration of reduced words of length <= bound, shortlex.
void reducedWords(int rank, int bound, const std::function<void(const Word&)>& visit) {
  Word w;
  std::function<void()> rec = [&] {
    visit(w);
    if (static_cast<int>(w.size()) >= bound) return;
    for (int l = 0; l < 2 * rank; ++l) {
      if (!w.empty() && static_cast<Letter>(w.back()) == letterInv(static_cast<Letter>(l))) continue;
      w.push_back(static_cast<char>(l));
      rec();
      w.pop_back();
    }
  };
  rec();
}

}  // namespace

// ---------------------------------------------------------------------------
// CoreGraph
// ---------------------------------------------------------------------------

CoreGraph CoreGraph::fold(int rank, const std::vector<Word>& generators) {
  Arena arena(rank);
  int base = arena.addVertex();
  for (const Word& g : generators) {
    Word r = freeReduce(g);
    if (r.empty()) continue;
    arena.addPath(base, r, base);
  }
  arena.fold();
  return arena.extract(base, /*prune=*/true);
}

int CoreGraph::trace(int from, const Word& reduced) const {
  int v = from;
  for (char c : reduced) {
    if (v < 0) return -1;
    v = adj_[static_cast<size_t>(v)][static_cast<size_t>(static_cast<Letter>(c))];
  }
  return v;
}

bool CoreGraph::member(const Word& w) const { return trace(0, freeReduce(w)) == 0; }

int CoreGraph::edgeCount() const {
  int e = 0;
  for (const auto& row : adj_) {
    for (int gen = 0; gen < rank_; ++gen) {
      if (row[static_cast<size_t>(2 * gen)] >= 0) ++e;
    }
  }
  return e;
}

int CoreGraph::firstBetti() const { return edgeCount() - vertexCount() + 1; }

int CoreGraph::degree(int v) const {
  int d = 0;
  for (int t : adj_[static_cast<size_t>(v)]) {
    if (t >= 0) ++d;
  }
  return d;
}

int CoreGraph::diameterFromBase() const {
  std::vector<int> dist(adj_.size(), -1);
  std::deque<int> queue{0};
  dist[0] = 0;
  int far = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    far = std::max(far, dist[static_cast<size_t>(v)]);
    for (int t : adj_[static_cast<size_t>(v)]) {
      if (t >= 0 && dist[static_cast<size_t>(t)] < 0) {
        dist[static_cast<size_t>(t)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(t);
      }
    }
  }
  return far;
}

std::vector<Word> CoreGraph::vertexWords() const {
  std::vector<Word> words(adj_.size());
  std::vector<bool> seen(adj_.size(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int l = 0; l < 2 * rank_; ++l) {
      int t = adj_[static_cast<size_t>(v)][static_cast<size_t>(l)];
      if (t >= 0 && !seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = true;
        words[static_cast<size_t>(t)] = words[static_cast<size_t>(v)] + static_cast<char>(l);
        queue.push_back(t);
      }
    }
  }
  return words;
}

CoreGraph CoreGraph::strictCore() const {
  // iterated removal of degree<=1 vertices with no basepoint protection
  std::vector<bool> alive(adj_.size(), true);
  bool removed = true;
  while (removed) {
    removed = false;
    for (size_t v = 0; v < adj_.size(); ++v) {
      if (!alive[v]) continue;
      int deg = 0;
      for (int t : adj_[v]) {
        if (t >= 0 && alive[static_cast<size_t>(t)]) ++deg;
      }
      if (deg <= 1) {
        alive[v] = false;
        removed = true;
      }
    }
  }
  std::vector<int> newId(adj_.size(), -1);
  int n = 0;
  for (size_t v = 0; v < adj_.size(); ++v) {
    if (alive[v]) newId[v] = n++;
  }
  std::vector<std::vector<int>> adjOut(static_cast<size_t>(n), std::vector<int>(2 * static_cast<size_t>(rank_), -1));
  for (size_t v = 0; v < adj_.size(); ++v) {
    if (!alive[v]) continue;
    for (int l = 0; l < 2 * rank_; ++l) {
      int t = adj_[v][static_cast<size_t>(l)];
      if (t >= 0 && alive[static_cast<size_t>(t)]) {
        adjOut[static_cast<size_t>(newId[v])][static_cast<size_t>(l)] = newId[static_cast<size_t>(t)];
      }
    }
  }
  return CoreGraph::raw(rank_, std::move(adjOut));
}

nlohmann::json CoreGraph::toJson() const {
  nlohmann::json edges = nlohmann::json::array();
  auto labels = freeLabels(rank_);
  for (int v = 0; v < vertexCount(); ++v) {
    for (int gen = 0; gen < rank_; ++gen) {
      int t = target(v, letter(gen));
      if (t >= 0) edges.push_back({{"from", v}, {"to", t}, {"label", labels[static_cast<size_t>(gen)]}});
    }
  }
  return {{"vertices", vertexCount()}, {"basepoint", 0}, {"rank", rank_}, {"edges", edges}};
}

CoreGraph CoreGraph::fromJson(const nlohmann::json& j) {
  const int rank = j.at("rank").get<int>();
  const int n = j.at("vertices").get<int>();
  std::vector<std::vector<int>> adj(static_cast<size_t>(n),
                                    std::vector<int>(2 * static_cast<size_t>(rank), -1));
  auto labels = freeLabels(rank);
  for (const auto& e : j.at("edges")) {
    int u = e.at("from").get<int>();
    int v = e.at("to").get<int>();
    std::string lab = e.at("label").get<std::string>();
    auto it = std::find(labels.begin(), labels.end(), lab);
    if (it == labels.end()) throw WordError("unknown edge label " + lab);
    int gen = static_cast<int>(it - labels.begin());
    adj[static_cast<size_t>(u)][static_cast<size_t>(2 * gen)] = v;
    adj[static_cast<size_t>(v)][static_cast<size_t>(2 * gen + 1)] = u;
  }
  return CoreGraph::raw(rank, std::move(adj));
}

CoreGraph CoreGraph::raw(int rank, std::vector<std::vector<int>> adj) {
  CoreGraph g;
  g.rank_ = rank;
  g.adj_ = std::move(adj);
  return g;
}

// ---------------------------------------------------------------------------
// Double cosets
// ---------------------------------------------------------------------------

ShortestDouble doubleCosetShortest(const CoreGraph& coreH, const Word& g, const CoreGraph& coreK) {
  Arena arena(coreH.rank());
  int baseH = arena.import(coreH);
  int baseK = arena.import(coreK);
  arena.addPath(baseH, freeReduce(g), baseK);
  arena.fold();
  std::vector<int> tracked;
  CoreGraph folded = arena.extract(baseH, /*prune=*/false, {baseH, baseK}, &tracked);
  const int src = tracked[0], dst = tracked[1];
  // BFS in letter order: first arrival is the shortlex-minimal geodesic.
  std::vector<int> parent(static_cast<size_t>(folded.vertexCount()), -2);
  std::vector<char> via(static_cast<size_t>(folded.vertexCount()), 0);
  std::deque<int> queue{src};
  parent[static_cast<size_t>(src)] = -1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == dst) break;
    for (int l = 0; l < 2 * folded.rank(); ++l) {
      int t = folded.target(v, static_cast<Letter>(l));
      if (t >= 0 && parent[static_cast<size_t>(t)] == -2) {
        parent[static_cast<size_t>(t)] = v;
        via[static_cast<size_t>(t)] = static_cast<char>(l);
        queue.push_back(t);
      }
    }
  }
  Word w;
  for (int v = dst; v != src; v = parent[static_cast<size_t>(v)]) w.push_back(via[static_cast<size_t>(v)]);
  std::reverse(w.begin(), w.end());
  return {w, static_cast<int>(w.size())};
}

DoubleCosetReport fiberProduct(const CoreGraph& coreH, const CoreGraph& coreK) {
  const int nH = coreH.vertexCount(), nK = coreK.vertexCount();
  const int rank = coreH.rank();
  auto id = [&](int u, int v) { return u * nK + v; };
  std::vector<int> comp(static_cast<size_t>(nH) * static_cast<size_t>(nK), -1);
  const auto wordsH = coreH.vertexWords();
  const auto wordsK = coreK.vertexWords();

  DoubleCosetReport report;
  int nComps = 0;
  for (int u0 = 0; u0 < nH; ++u0) {
    for (int v0 = 0; v0 < nK; ++v0) {
      if (comp[static_cast<size_t>(id(u0, v0))] >= 0) continue;
      const int c = nComps++;
      std::vector<std::pair<int, int>> members;
      std::deque<std::pair<int, int>> queue{{u0, v0}};
      comp[static_cast<size_t>(id(u0, v0))] = c;
      int compEdges = 0;
      while (!queue.empty()) {
        auto [u, v] = queue.front();
        queue.pop_front();
        members.push_back({u, v});
        for (int l = 0; l < 2 * rank; ++l) {
          int tu = coreH.target(u, static_cast<Letter>(l));
          int tv = coreK.target(v, static_cast<Letter>(l));
          if (tu < 0 || tv < 0) continue;
          if (!letterInverse(static_cast<Letter>(l))) ++compEdges;
          if (comp[static_cast<size_t>(id(tu, tv))] < 0) {
            comp[static_cast<size_t>(id(tu, tv))] = c;
            queue.push_back({tu, tv});
          }
        }
      }
      DoubleCosetEntry entry;
      const Word& p = wordsH[static_cast<size_t>(u0)];
      const Word& q = wordsK[static_cast<size_t>(v0)];
      entry.representative = freeReduce(p + wordInverse(q));
      entry.rank = compEdges - static_cast<int>(members.size()) + 1;
      // rebase the component subgroup p^-1 H p ∩ q^-1 K q to H ∩ gKg^-1
      Arena arena(rank);
      std::map<int, int> ids;
      for (auto [u, v] : members) ids[id(u, v)] = arena.addVertex();
      for (auto [u, v] : members) {
        for (int gen = 0; gen < rank; ++gen) {
          int tu = coreH.target(u, letter(gen));
          int tv = coreK.target(v, letter(gen));
          if (tu >= 0 && tv >= 0) arena.addEdge(ids[id(u, v)], gen, ids[id(tu, tv)]);
        }
      }
      int nb = arena.addVertex();
      arena.addPath(nb, p, ids[id(u0, v0)]);
      arena.fold();
      entry.intersection = arena.extract(nb, /*prune=*/true);
      entry.shortestLength = doubleCosetShortest(coreH, entry.representative, coreK).length;
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

namespace {

std::vector<int> distancesToBase(const CoreGraph& g) {
  std::vector<int> dist(static_cast<size_t>(g.vertexCount()), -1);
  std::deque<int> queue{0};
  dist[0] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int l = 0; l < 2 * g.rank(); ++l) {
      int t = g.target(v, static_cast<Letter>(l));
      if (t >= 0 && dist[static_cast<size_t>(t)] < 0) {
        dist[static_cast<size_t>(t)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

}  // namespace

DoubleCosetOracle::DoubleCosetOracle(const CoreGraph& coreH, const CoreGraph& coreK)
    : h_(coreH), k_(coreK), distH_(distancesToBase(coreH)), distK_(distancesToBase(coreK)) {}

int DoubleCosetOracle::length(const Word& w) const {
  // maximal prefix traceable in H from its basepoint
  int v = 0;
  size_t i = 0;
  while (i < w.size()) {
    int t = h_.target(v, static_cast<Letter>(w[i]));
    if (t < 0) break;
    v = t;
    ++i;
  }
  // maximal suffix whose inverse traces in K from its basepoint
  int u = 0;
  size_t j = w.size();
  while (j > i) {
    int t = k_.target(u, letterInv(static_cast<Letter>(w[j - 1])));
    if (t < 0) break;
    u = t;
    --j;
  }
  if (i == j) {
    // the bridge is fully absorbed; fold the whole automaton
    return doubleCosetShortest(h_, w, k_).length;
  }
  return distH_[static_cast<size_t>(v)] + static_cast<int>(j - i) + distK_[static_cast<size_t>(u)];
}

nlohmann::json DoubleCosetReport::toJson(const Group& g) const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) {
    out.push_back({{"representative", g.render(e.representative)},
                   {"rank", e.rank},
                   {"shortest_length", e.shortestLength},
                   {"intersection", e.intersection.toJson()}});
  }
  return out;
}

CoreGraph conjugateIntersection(const CoreGraph& core, const Word& g) {
  // based graph for gHg^-1: fresh basepoint, path g into a copy of the core
  Arena arena(core.rank());
  int baseCopy = arena.import(core);
  int nb = arena.addVertex();
  arena.addPath(nb, freeReduce(g), baseCopy);
  arena.fold();
  std::vector<int> tracked;
  CoreGraph based = arena.extract(nb, /*prune=*/false, {nb}, &tracked);
  const int b2 = tracked[0];
  // component of the fiber product at (basepoint, b2)
  const int nK = based.vertexCount();
  auto id = [&](int u, int v) { return u * nK + v; };
  std::map<int, int> ids;
  Arena prod(core.rank());
  std::deque<std::pair<int, int>> queue{{0, b2}};
  ids[id(0, b2)] = prod.addVertex();
  std::vector<std::pair<int, int>> members{{0, b2}};
  while (!queue.empty()) {
    auto [u, v] = queue.front();
    queue.pop_front();
    for (int l = 0; l < 2 * core.rank(); ++l) {
      int tu = core.target(u, static_cast<Letter>(l));
      int tv = based.target(v, static_cast<Letter>(l));
      if (tu < 0 || tv < 0) continue;
      if (!ids.count(id(tu, tv))) {
        ids[id(tu, tv)] = prod.addVertex();
        members.push_back({tu, tv});
        queue.push_back({tu, tv});
      }
    }
  }
  for (auto [u, v] : members) {
    for (int gen = 0; gen < core.rank(); ++gen) {
      int tu = core.target(u, letter(gen));
      int tv = based.target(v, letter(gen));
      if (tu >= 0 && tv >= 0 && ids.count(id(tu, tv))) {
        prod.addEdge(ids[id(u, v)], gen, ids[id(tu, tv)]);
      }
    }
  }
  prod.fold();
  return prod.extract(ids[id(0, b2)], /*prune=*/true);
}

// ---------------------------------------------------------------------------
// Finite index via the covering criterion on strict cores
// ---------------------------------------------------------------------------

long long finiteIndex(const CoreGraph& sub, const CoreGraph& sup) {
  CoreGraph s = sub.strictCore();
  CoreGraph S = sup.strictCore();
  if (S.vertexCount() == 0 || S.edgeCount() == 0) {
    // sup is trivial; any subgroup of it is trivial
    return 1;
  }
  if (s.vertexCount() == 0 || s.edgeCount() == 0) return -1;  // trivial in infinite

  // immersion f: strict(sub) -> sup via path words traced in the full sup core,
  // then required to land in strict(sup)
  // map strict(sup) vertices back: recompute masks on the full graphs instead
  // (trace words of the full sub core, mark strict vertices of both).
  auto strictMask = [](const CoreGraph& g) {
    std::vector<bool> alive(static_cast<size_t>(g.vertexCount()), true);
    bool removed = true;
    while (removed) {
      removed = false;
      for (int v = 0; v < g.vertexCount(); ++v) {
        if (!alive[static_cast<size_t>(v)]) continue;
        int deg = 0;
        for (int l = 0; l < 2 * g.rank(); ++l) {
          int t = g.target(v, static_cast<Letter>(l));
          if (t >= 0 && alive[static_cast<size_t>(t)]) ++deg;
        }
        if (deg <= 1) {
          alive[static_cast<size_t>(v)] = false;
          removed = true;
        }
      }
    }
    return alive;
  };
  const auto maskSub = strictMask(sub);
  const auto maskSup = strictMask(sup);
  const auto words = sub.vertexWords();
  std::vector<int> f(static_cast<size_t>(sub.vertexCount()), -1);
  for (int v = 0; v < sub.vertexCount(); ++v) {
    f[static_cast<size_t>(v)] = sup.trace(0, words[static_cast<size_t>(v)]);
    if (f[static_cast<size_t>(v)] < 0) {
      throw std::logic_error("finiteIndex: first argument is not a subgroup of the second");
    }
  }
  // covering conditions
  std::vector<int> fiber(static_cast<size_t>(sup.vertexCount()), 0);
  for (int v = 0; v < sub.vertexCount(); ++v) {
    if (!maskSub[static_cast<size_t>(v)]) continue;
    int fv = f[static_cast<size_t>(v)];
    if (!maskSup[static_cast<size_t>(fv)]) return -1;
    ++fiber[static_cast<size_t>(fv)];
    for (int l = 0; l < 2 * sub.rank(); ++l) {
      int tSup = sup.target(fv, static_cast<Letter>(l));
      bool supStrict = tSup >= 0 && maskSup[static_cast<size_t>(tSup)];
      int tSub = sub.target(v, static_cast<Letter>(l));
      bool subStrict = tSub >= 0 && maskSub[static_cast<size_t>(tSub)];
      if (supStrict && !subStrict) return -1;  // missing lift
    }
  }
  // surjective with uniform fiber size
  long long deg = -1;
  for (int v = 0; v < sup.vertexCount(); ++v) {
    if (!maskSup[static_cast<size_t>(v)]) continue;
    if (fiber[static_cast<size_t>(v)] == 0) return -1;
    if (deg < 0) deg = fiber[static_cast<size_t>(v)];
    if (deg != fiber[static_cast<size_t>(v)]) {
      throw std::logic_error("finiteIndex: covering with non-uniform fibers (internal error)");
    }
  }
  return deg;
}

// ---------------------------------------------------------------------------
// Height / width / commensurator
// ---------------------------------------------------------------------------

namespace {

/// Fiber-product component of W with the based graph of gHg^-1 at the
/// identity pair: the core of W ∩ gHg^-1.
CoreGraph intersectWithConjugate(const CoreGraph& W, const CoreGraph& H, const Word& g) {
  Arena arena(H.rank());
  int baseCopy = arena.import(H);
  int nb = arena.addVertex();
  arena.addPath(nb, freeReduce(g), baseCopy);
  arena.fold();
  std::vector<int> tracked;
  CoreGraph based = arena.extract(nb, false, {nb}, &tracked);
  const int b2 = tracked[0];

  const int nK = based.vertexCount();
  auto id = [&](int u, int v) { return u * nK + v; };
  std::map<int, int> ids;
  Arena prod(H.rank());
  std::deque<std::pair<int, int>> queue{{0, b2}};
  ids[id(0, b2)] = prod.addVertex();
  std::vector<std::pair<int, int>> members{{0, b2}};
  while (!queue.empty()) {
    auto [u, v] = queue.front();
    queue.pop_front();
    for (int l = 0; l < 2 * W.rank(); ++l) {
      int tu = W.target(u, static_cast<Letter>(l));
      int tv = based.target(v, static_cast<Letter>(l));
      if (tu < 0 || tv < 0) continue;
      if (!ids.count(id(tu, tv))) {
        ids[id(tu, tv)] = prod.addVertex();
        members.push_back({tu, tv});
        queue.push_back({tu, tv});
      }
    }
  }
  for (auto [u, v] : members) {
    for (int gen = 0; gen < W.rank(); ++gen) {
      int tu = W.target(u, letter(gen));
      int tv = based.target(v, letter(gen));
      if (tu >= 0 && tv >= 0) prod.addEdge(ids[id(u, v)], gen, ids[id(tu, tv)]);
    }
  }
  prod.fold();
  return prod.extract(ids[id(0, b2)], true);
}

struct HeightSearch {
  const CoreGraph& H;
  std::vector<std::pair<Word, CoreGraph>> baseEntries;  // rank>=1, rep not in H
  int best = 1;
  std::vector<Word> bestWitness;
  long long nodes = 0;

  void dfs(const CoreGraph& W, std::vector<Word>& chosen) {
    if (++nodes > 200000) throw std::logic_error("height search exceeded node cap (internal)");
    if (static_cast<int>(chosen.size()) > best) {
      best = static_cast<int>(chosen.size());
      bestWitness = chosen;
    }
    for (const auto& [rep, K] : baseEntries) {
      auto inner = fiberProduct(W, K);
      for (const auto& comp : inner.entries) {
        if (comp.rank < 1) continue;
        if (!H.member(comp.representative)) continue;
        Word g = freeReduce(comp.representative + rep);
        bool dup = false;
        for (const Word& c : chosen) {
          if (H.member(freeReduce(wordInverse(c) + g))) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        CoreGraph Wnew = intersectWithConjugate(W, H, g);
        if (Wnew.trivial()) continue;
        chosen.push_back(g);
        dfs(Wnew, chosen);
        chosen.pop_back();
      }
    }
  }
};

}  // namespace

HeightWidthReport height(const CoreGraph& core) {
  HeightWidthReport report;
  report.completeness = {true, 0, "recursive descent over fiber-product double cosets"};
  if (core.trivial()) {
    report.height = 0;
    return report;
  }
  HeightSearch search{core};
  for (auto& e : fiberProduct(core, core).entries) {
    if (e.rank >= 1 && !core.member(e.representative)) {
      search.baseEntries.push_back({e.representative, std::move(e.intersection)});
    }
  }
  std::vector<Word> chosen{Word()};
  search.dfs(core, chosen);
  report.height = search.best;
  report.heightWitness = search.bestWitness;
  return report;
}

std::vector<Word> cosetSweep(const CoreGraph& core, int bound) {
  SchreierOracle oracle(core);
  std::map<long long, Word> reps;
  std::vector<Word> order;
  reducedWords(core.rank(), bound, [&](const Word& w) {
    long long key = oracle.leftCosetKey(w);
    auto [it, fresh] = reps.insert({key, w});
    if (fresh) {
      order.push_back(w);
    } else if (shortlexLess(w, it->second)) {
      it->second = w;  // cannot happen with shortlex enumeration, kept as a guard
    }
  });
  return order;
}

HeightWidthReport width(const CoreGraph& core, int searchBound) {
  HeightWidthReport report;
  const int c0 = 2 * core.diameterFromBase() + 2;
  report.completeness.search_bound = searchBound;
  if (core.trivial()) {
    report.width = 0;
    report.completeness.exact = true;
    report.completeness.note = "trivial subgroup";
    return report;
  }
  if (searchBound < c0) {
    report.completeness.exact = false;
    report.completeness.note =
        "search_bound " + std::to_string(searchBound) + " is below the confinement bound C0=" +
        std::to_string(c0) + "; sweep incomplete";
  } else {
    report.completeness.exact = true;
    report.completeness.note = "exhaustive sweep to search_bound with confinement C0=" + std::to_string(c0);
  }
  auto reps = cosetSweep(core, searchBound);
  const int n = static_cast<int>(reps.size());
  std::vector<VertexSet> adj(static_cast<size_t>(n), VertexSet(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Word d = freeReduce(wordInverse(reps[static_cast<size_t>(i)]) + reps[static_cast<size_t>(j)]);
      if (doubleCosetShortest(core, d, core).length > c0) continue;
      if (conjugateIntersection(core, d).trivial()) continue;
      adj[static_cast<size_t>(i)].set(j);
      adj[static_cast<size_t>(j)].set(i);
    }
  }
  auto clique = maxClique(n, adj);
  report.width = static_cast<int>(clique.size());
  for (int v : clique) report.widthWitness.push_back(reps[static_cast<size_t>(v)]);
  return report;
}

std::vector<Word> commensuratorBall(const CoreGraph& core, int radius) {
  std::vector<Word> out;
  reducedWords(core.rank(), radius, [&](const Word& g) {
    CoreGraph i1 = conjugateIntersection(core, g);
    if (finiteIndex(i1, core) < 0) return;
    CoreGraph i2 = conjugateIntersection(core, wordInverse(g));
    if (finiteIndex(i2, core) < 0) return;
    out.push_back(g);
  });
  return out;
}

nlohmann::json HeightWidthReport::toJson(const Group& g) const {
  nlohmann::json j;
  if (height >= 0) {
    j["height"] = height;
    nlohmann::json w = nlohmann::json::array();
    for (const auto& c : heightWitness) w.push_back(g.render(c));
    j["height_witness"] = w;
  }
  if (width >= 0) {
    j["width"] = width;
    nlohmann::json w = nlohmann::json::array();
    for (const auto& c : widthWitness) w.push_back(g.render(c));
    j["width_witness"] = w;
  }
  j["completeness"] = {{"exact", completeness.exact},
                       {"search_bound", completeness.search_bound},
                       {"note", completeness.note}};
  return j;
}

// ---------------------------------------------------------------------------
// Schreier oracle
// ---------------------------------------------------------------------------

SchreierOracle::SchreierOracle(const CoreGraph& core) : rank_(core.rank()) {
  adj_.assign(static_cast<size_t>(core.vertexCount()), std::vector<int>(2 * static_cast<size_t>(rank_), -1));
  for (int v = 0; v < core.vertexCount(); ++v) {
    for (int l = 0; l < 2 * rank_; ++l) adj_[static_cast<size_t>(v)][static_cast<size_t>(l)] = core.target(v, static_cast<Letter>(l));
  }
}

int SchreierOracle::stateOf(const Word& reduced) {
  std::lock_guard<std::mutex> lock(mu_);
  int v = 0;
  for (char c : reduced) {
    const Letter l = static_cast<Letter>(c);
    int t = adj_[static_cast<size_t>(v)][l];
    if (t < 0) {
      t = static_cast<int>(adj_.size());
      adj_.emplace_back(2 * static_cast<size_t>(rank_), -1);
      adj_[static_cast<size_t>(v)][l] = t;
      adj_[static_cast<size_t>(t)][letterInv(l)] = v;
    }
    v = t;
  }
  return v;
}

long long SchreierOracle::leftCosetKey(const Word& reducedRep) {
  return stateOf(freeReduce(wordInverse(reducedRep)));
}

}  // namespace cosetpack::stallings
