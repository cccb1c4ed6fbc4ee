//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/relhyp.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace cosetpack::rel {

namespace {

bool factorsHaveGeodesicNf(const Group& g) { return g.nfIsGeodesic(); }

/// Coset ids of all ball elements for both factors; members grouped per coset.
struct CosetIndex {
  std::map<CosetLabel, int> ids;
  std::vector<std::vector<int>> members;  // coset id -> ball indices
  std::vector<std::array<int, 2>> ofElem; // ball index -> coset id per factor
  std::vector<CosetLabel> labels;

  CosetIndex(const PeripheralStructure& ps, const Ball& ball) {
    ofElem.assign(ball.size(), {-1, -1});
    for (size_t i = 0; i < ball.size(); ++i) {
      for (int f = 0; f < 2; ++f) {
        CosetLabel c = ps.label(ball.at(i).elem, f);
        auto [it, fresh] = ids.insert({c, static_cast<int>(labels.size())});
        if (fresh) {
          labels.push_back(c);
          members.push_back({});
        }
        members[static_cast<size_t>(it->second)].push_back(static_cast<int>(i));
        ofElem[i][static_cast<size_t>(f)] = it->second;
      }
    }
  }
};

}  // namespace

PeripheralStructure PeripheralStructure::make(GroupPtr group) {
  PeripheralStructure ps;
  ps.fp_ = asFreeProduct(*group);
  if (ps.fp_ == nullptr) {
    throw OracleRefusal("peripheral structures exist only for free_product backends");
  }
  if (!factorsHaveGeodesicNf(*group)) {
    throw OracleRefusal(
        "free-product factors must have geodesic normal forms (free, free_abelian, finite); "
        "Heisenberg and Baumslag-Solitar factors are not supported here");
  }
  ps.group_ = std::move(group);
  return ps;
}

int PeripheralStructure::syllableCount(const Element& x) const {
  return static_cast<int>(fp_->syllables(x.w).size());
}

CosetLabel PeripheralStructure::label(const Element& g, int factor) const {
  auto syl = fp_->syllables(g.w);
  Word rep = g.w;
  if (!syl.empty() && syl.back().factor == factor) {
    rep.resize(rep.size() - syl.back().local.size());
  }
  return {rep, factor};
}

int PeripheralStructure::distToCoset(const Element& x, const CosetLabel& c) const {
  Element y = group_->mul(group_->inverse(Element{c.rep}), x);
  auto syl = fp_->syllables(y.w);
  int d = static_cast<int>(y.w.size());
  if (!syl.empty() && syl.front().factor == c.factor) {
    d -= static_cast<int>(syl.front().local.size());
  }
  return d;
}

std::vector<Element> PeripheralStructure::relGeodesicVertices(const Element& x,
                                                              const Element& y) const {
  std::vector<Element> out{x};
  Element diff = group_->mul(group_->inverse(x), y);
  Element cur = x;
  for (const auto& s : fp_->syllables(diff.w)) {
    cur = group_->mul(cur, Element{fp_->embed(s.factor, s.local)});
    out.push_back(cur);
  }
  return out;
}

std::string PeripheralStructure::renderLabel(const CosetLabel& c) const {
  std::string rep = group_->render(c.rep);
  if (rep.empty()) rep = "1";
  return rep + "*P" + std::to_string(c.factor);
}

RelDistanceCert relDist(const PeripheralStructure& ps, const Element& x, const Element& y) {
  Element d = ps.group()->mul(ps.group()->inverse(x), y);
  RelDistanceCert cert;
  cert.value = ps.syllableCount(d);
  cert.method = "syllable";
  cert.s_distance = {static_cast<int>(d.w.size()), true, 0};
  return cert;
}

std::vector<int> relDistBfsAll(const PeripheralStructure& ps, const Ball& ball, int sourceIdx) {
  CosetIndex index(ps, ball);
  std::vector<int> dist(ball.size(), -1);
  std::vector<bool> burned(index.labels.size(), false);
  std::deque<int> queue{sourceIdx};
  dist[static_cast<size_t>(sourceIdx)] = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int f = 0; f < 2; ++f) {
      int cid = index.ofElem[static_cast<size_t>(u)][static_cast<size_t>(f)];
      if (burned[static_cast<size_t>(cid)]) continue;
      burned[static_cast<size_t>(cid)] = true;
      for (int v : index.members[static_cast<size_t>(cid)]) {
        if (dist[static_cast<size_t>(v)] < 0) {
          dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

int relDistBfs(const PeripheralStructure& ps, const Ball& ball, const Element& x,
               const Element& y) {
  int i = ball.indexOf(x), j = ball.indexOf(y);
  if (i < 0 || j < 0) {
    throw OracleRefusal("relative BFS distance needs both endpoints inside the enumeration");
  }
  if (i == j) return 0;
  return relDistBfsAll(ps, ball, i)[static_cast<size_t>(j)];
}

SaturationResult saturation(const PeripheralStructure& ps, const std::vector<Element>& y, int nu,
                            const Ball& ball) {
  if (!ball.defaultGenerators()) {
    throw OracleRefusal("saturation requires a ball over the standard generators");
  }
  for (const auto& e : y) {
    if (ps.sNorm(e) > ball.radius() - nu) {
      throw OracleRefusal("saturation needs Y inside ball(R - nu)");
    }
  }
  // multi-source BFS over S-edges within the ball
  std::vector<int> dist(ball.size(), -1);
  std::deque<int> queue;
  for (const auto& e : y) {
    int i = ball.indexOf(e);
    if (i < 0) throw OracleRefusal("saturation: a member of Y is outside the ball");
    if (dist[static_cast<size_t>(i)] < 0) {
      dist[static_cast<size_t>(i)] = 0;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    if (dist[static_cast<size_t>(u)] >= nu) continue;
    for (int v : ball.neighborsOf(u)) {
      if (dist[static_cast<size_t>(v)] < 0) {
        dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  std::set<CosetLabel> labels;
  for (size_t i = 0; i < ball.size(); ++i) {
    if (dist[i] < 0 || dist[i] > nu) continue;
    labels.insert(ps.label(ball.at(i).elem, 0));
    labels.insert(ps.label(ball.at(i).elem, 1));
  }
  SaturationResult out;
  out.cosets.assign(labels.begin(), labels.end());
  out.complete = true;
  return out;
}

nlohmann::json SaturationResult::toJson(const PeripheralStructure& ps) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cosets) arr.push_back(ps.renderLabel(c));
  return {{"cosets", arr}, {"complete", complete}};
}

bool isGeodesicWord(const PeripheralStructure& ps, const Word& w) {
  return static_cast<int>(ps.group()->nf(w).w.size()) == static_cast<int>(w.size());
}

TransitionAnnotation transitionPoints(const PeripheralStructure& ps, const Word& geodesic,
                                      int eps, int deepR) {
  if (!isGeodesicWord(ps, geodesic)) {
    throw OracleRefusal("transition annotation requires a certified S-geodesic word");
  }
  const int length = static_cast<int>(geodesic.size());
  std::vector<Element> vertex;
  vertex.reserve(static_cast<size_t>(length) + 1);
  for (int i = 0; i <= length; ++i) {
    vertex.push_back(ps.group()->nf(geodesic.substr(0, static_cast<size_t>(i))));
  }
  Ball small = Ball::create(ps.group(), eps);

  TransitionAnnotation out;
  out.vertices.resize(vertex.size());
  for (int i = 0; i <= length; ++i) {
    auto& v = out.vertices[static_cast<size_t>(i)];
    // endpoint clause: not within S-distance deepR of an endpoint
    if (i <= deepR || length - i <= deepR) continue;
    // candidate cosets within eps of the vertex
    std::set<CosetLabel> candidates;
    for (size_t s = 0; s < small.size(); ++s) {
      Element z = ps.group()->mul(vertex[static_cast<size_t>(i)], small.at(s).elem);
      candidates.insert(ps.label(z, 0));
      candidates.insert(ps.label(z, 1));
    }
    for (const auto& c : candidates) {
      bool deep = true;
      for (int j = std::max(0, i - deepR); j <= std::min(length, i + deepR) && deep; ++j) {
        deep = ps.distToCoset(vertex[static_cast<size_t>(j)], c) <= eps;
      }
      if (deep) v.deepIn.push_back(c);
    }
    v.deep = !v.deepIn.empty();
  }
  // maximal deep components and the uniqueness clause
  int i = 0;
  while (i <= length) {
    if (!out.vertices[static_cast<size_t>(i)].deep) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 <= length && out.vertices[static_cast<size_t>(j + 1)].deep) ++j;
    TransitionAnnotation::Component comp;
    comp.begin = i;
    comp.end = j;
    std::set<CosetLabel> labels;
    bool allSingle = true;
    for (int k = i; k <= j; ++k) {
      const auto& deepIn = out.vertices[static_cast<size_t>(k)].deepIn;
      allSingle = allSingle && deepIn.size() == 1;
      labels.insert(deepIn.begin(), deepIn.end());
    }
    comp.labels.assign(labels.begin(), labels.end());
    comp.unique = allSingle && labels.size() == 1;
    out.uniqueDeepCosets = out.uniqueDeepCosets && comp.unique;
    out.components.push_back(std::move(comp));
    i = j + 1;
  }
  return out;
}

nlohmann::json TransitionAnnotation::toJson(const PeripheralStructure& ps) const {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : vertices) {
    if (!v.deep) {
      verts.push_back({{"kind", "transition"}});
    } else {
      nlohmann::json labels = nlohmann::json::array();
      for (const auto& c : v.deepIn) labels.push_back(ps.renderLabel(c));
      verts.push_back({{"kind", "deep"}, {"cosets", labels}});
    }
  }
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) {
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : c.labels) labels.push_back(ps.renderLabel(l));
    comps.push_back(
        {{"begin", c.begin}, {"end", c.end}, {"cosets", labels}, {"unique", c.unique}});
  }
  return {{"vertices", verts}, {"deep_components", comps}, {"unique_deep_cosets", uniqueDeepCosets}};
}

SigmaEstimate relQcSigma(const PeripheralStructure& ps, const SubgroupHandle& h, int sampleRadius,
                         int pairCount, unsigned long long seed) {
  SigmaEstimate est;
  est.sampleRadius = sampleRadius;
  est.seed = seed;
  auto elems = h.elementsUpTo(sampleRadius);
  const int enumRadius = 3 * sampleRadius;
  est.enumerationRadius = enumRadius;
  auto hDense = h.elementsUpTo(enumRadius);
  auto distToH = [&](const Element& v) {
    int best = ps.sNorm(v);  // h = 1
    for (const auto& x : hDense) {
      best = std::min(best, ps.sDist(v, x));
    }
    return best;
  };
  std::vector<std::pair<size_t, size_t>> pairs;
  if (elems.size() * elems.size() <= static_cast<size_t>(pairCount)) {
    for (size_t i = 0; i < elems.size(); ++i) {
      for (size_t j = i + 1; j < elems.size(); ++j) pairs.push_back({i, j});
    }
    est.exhaustivePairs = true;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, elems.size() - 1);
    for (int k = 0; k < pairCount; ++k) pairs.push_back({pick(rng), pick(rng)});
  }
  est.pairs = static_cast<int>(pairs.size());
  for (auto [i, j] : pairs) {
    for (const auto& v : ps.relGeodesicVertices(elems[i], elems[j])) {
      est.sigma = std::max(est.sigma, distToH(v));
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Constant measurement campaigns
// ---------------------------------------------------------------------------

void ConstantEstimates::record(const std::string& name, long long v, long long count) {
  auto it = value.find(name);
  if (it == value.end() || v > it->second) value[name] = v;
  samples[name] += count;
}

void ConstantEstimates::merge(const ConstantEstimates& other) {
  for (const auto& [k, v] : other.value) {
    auto it = value.find(k);
    if (it == value.end() || v > it->second) value[k] = v;
  }
  for (const auto& [k, c] : other.samples) samples[k] += c;
}

nlohmann::json ConstantEstimates::toJson() const {
  nlohmann::json names = nlohmann::json::object();
  for (const auto& [k, v] : value) {
    names[k] = {{"max_observed", v}, {"samples", samples.count(k) ? samples.at(k) : 0}};
  }
  return {{"seed", seed}, {"radius", radius}, {"constants", names}};
}

ConstantEstimates ConstantEstimates::fromJson(const nlohmann::json& j) {
  ConstantEstimates est;
  est.seed = j.at("seed").get<unsigned long long>();
  est.radius = j.at("radius").get<int>();
  for (const auto& [k, v] : j.at("constants").items()) {
    est.value[k] = v.at("max_observed").get<long long>();
    est.samples[k] = v.at("samples").get<long long>();
  }
  return est;
}

namespace {

int minDistToSet(const PeripheralStructure& ps, const Element& v, const std::vector<Element>& set) {
  int best = INT32_MAX;
  for (const auto& x : set) best = std::min(best, ps.sDist(v, x));
  return best;
}

}  // namespace

ConstantEstimates measureConstants(const PeripheralStructure& ps, const CampaignConfig& config) {
  ConstantEstimates est;
  est.seed = config.seed;
  est.radius = config.radius;
  Ball ball = Ball::create(ps.group(), config.radius);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<size_t> pick(0, ball.size() - 1);
  auto sample = [&] { return ball.at(pick(rng)).elem; };

  // nu: thin relative triangles
  for (int t = 0; t < config.triangles; ++t) {
    Element x = sample(), y = sample(), z = sample();
    auto c0 = ps.relGeodesicVertices(x, y);
    auto c1 = ps.relGeodesicVertices(y, z);
    auto c2 = ps.relGeodesicVertices(x, z);
    std::vector<Element> others = c1;
    others.insert(others.end(), c2.begin(), c2.end());
    long long worst = 0;
    for (const auto& v : c0) worst = std::max<long long>(worst, minDistToSet(ps, v, others));
    est.record("nu", worst);
  }

  // relative n-gons, n = 4,5,6
  for (int n = 4; n <= 6; ++n) {
    for (int t = 0; t < config.ngons; ++t) {
      std::vector<Element> corners;
      for (int k = 0; k < n; ++k) corners.push_back(sample());
      std::vector<std::vector<Element>> sides;
      for (int k = 0; k < n; ++k) {
        sides.push_back(ps.relGeodesicVertices(corners[static_cast<size_t>(k)],
                                               corners[static_cast<size_t>((k + 1) % n)]));
      }
      std::vector<Element> others;
      for (int k = 1; k < n; ++k) others.insert(others.end(), sides[static_cast<size_t>(k)].begin(),
                                                sides[static_cast<size_t>(k)].end());
      long long worst = 0;
      for (const auto& v : sides[0]) worst = std::max<long long>(worst, minDistToSet(ps, v, others));
      est.record("ngon" + std::to_string(n), worst);
    }
  }

  // isolation kappa(rho) for rho = 0, 1: diameters of coset-pair
  // neighborhood intersections visible in the ball (exhaustive)
  for (int rho = 0; rho <= 1; ++rho) {
    Ball window = Ball::create(ps.group(), rho);
    std::map<std::pair<CosetLabel, CosetLabel>, std::vector<Element>> buckets;
    for (size_t i = 0; i < ball.size(); ++i) {
      const Element& z = ball.at(i).elem;
      std::set<CosetLabel> near;
      for (size_t s = 0; s < window.size(); ++s) {
        Element zu = ps.group()->mul(z, window.at(s).elem);
        near.insert(ps.label(zu, 0));
        near.insert(ps.label(zu, 1));
      }
      for (auto a = near.begin(); a != near.end(); ++a) {
        for (auto b = std::next(a); b != near.end(); ++b) {
          buckets[{*a, *b}].push_back(z);
        }
      }
    }
    long long worst = 0;
    long long count = 0;
    for (const auto& [key, pts] : buckets) {
      ++count;
      for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
          worst = std::max<long long>(worst, ps.sDist(pts[i], pts[j]));
        }
      }
    }
    est.record("kappa" + std::to_string(rho), worst, count);
  }

  // tau(1): S-geodesics with endpoints within 1 of a peripheral coset
  for (int t = 0; t < config.pairs; ++t) {
    Element anchor = sample();
    CosetLabel coset = ps.label(anchor, static_cast<int>(rng() % 2));
    Element x = sample(), y = sample();
    if (ps.distToCoset(x, coset) > 1 || ps.distToCoset(y, coset) > 1) continue;
    Element diff = ps.group()->mul(ps.group()->inverse(x), y);
    if (!ball.contains(diff)) continue;
    Word geo = ball.geodesic(x, y);
    long long worst = 0;
    for (size_t i = 0; i <= geo.size(); ++i) {
      Element v = ps.group()->nf(x.w + geo.substr(0, i));
      worst = std::max<long long>(worst, ps.distToCoset(v, coset));
    }
    est.record("tau1", worst);
  }

  // D1(1): entry/exit separation for geodesics between two distinct cosets
  for (int t = 0; t < config.pairs; ++t) {
    Element a = sample(), b = sample();
    CosetLabel cA = ps.label(a, static_cast<int>(rng() % 2));
    CosetLabel cB = ps.label(b, static_cast<int>(rng() % 2));
    if (cA == cB) continue;
    auto pickPoint = [&](const CosetLabel& c) -> std::optional<Element> {
      Element p = ps.labelRep(c);
      return ball.contains(p) ? std::optional<Element>(p) : std::nullopt;
    };
    auto pa = pickPoint(cA);
    auto pb = pickPoint(cB);
    if (!pa || !pb) continue;
    // two independent geodesics between random points of the cosets
    std::vector<std::pair<Element, Element>> geos;
    for (int k = 0; k < 2; ++k) {
      Element x = *pa, y = *pb;
      if (!ball.contains(ps.group()->mul(ps.group()->inverse(x), y))) continue;
      Word g = ball.geodesic(x, y);
      // entry = last vertex within distance 1 of cA, exit = first within 1 of cB
      Element entry = x, exit = y;
      for (size_t i = 0; i <= g.size(); ++i) {
        Element v = ps.group()->nf(x.w + g.substr(0, i));
        if (ps.distToCoset(v, cA) <= 1) entry = v;
      }
      for (size_t i = g.size() + 1; i-- > 0;) {
        Element v = ps.group()->nf(x.w + g.substr(0, i));
        if (ps.distToCoset(v, cB) <= 1) exit = v;
      }
      geos.push_back({entry, exit});
    }
    if (geos.size() == 2) {
      est.record("d1_1", std::max(ps.sDist(geos[0].first, geos[1].first),
                                  ps.sDist(geos[0].second, geos[1].second)));
    }
  }

  // zeta(1) and xi(1): triangle and quadrilateral coset configurations
  {
    Ball window = Ball::create(ps.group(), 1);
    std::map<std::pair<CosetLabel, CosetLabel>, std::vector<Element>> buckets;
    for (size_t i = 0; i < ball.size(); ++i) {
      const Element& z = ball.at(i).elem;
      std::set<CosetLabel> near;
      for (size_t s = 0; s < window.size(); ++s) {
        Element zu = ps.group()->mul(z, window.at(s).elem);
        near.insert(ps.label(zu, 0));
        near.insert(ps.label(zu, 1));
      }
      for (auto a = near.begin(); a != near.end(); ++a) {
        for (auto b = std::next(a); b != near.end(); ++b) buckets[{*a, *b}].push_back(z);
      }
    }
    std::vector<std::pair<CosetLabel, CosetLabel>> keys;
    for (const auto& [k, v] : buckets) keys.push_back(k);
    std::uniform_int_distribution<size_t> pickKey(0, keys.empty() ? 0 : keys.size() - 1);
    // zeta: y0 in N(P1)∩N(P2), y1 in N(P0)∩N(P2), y2 in N(P0)∩N(P1), P0 distinct
    for (int t = 0; t < config.pairs && !keys.empty(); ++t) {
      auto k01 = keys[pickKey(rng)];
      const CosetLabel p0 = k01.first, p1 = k01.second;
      for (const auto& [k, pts] : buckets) {
        if (!(k.first == p0) && !(k.second == p0)) continue;
        CosetLabel p2 = (k.first == p0) ? k.second : k.first;
        if (p2 == p1) continue;
        auto it12 = buckets.find(p1 < p2 ? std::make_pair(p1, p2) : std::make_pair(p2, p1));
        if (it12 == buckets.end()) continue;
        // y0 near p1,p2 ; y1 near p0,p2 ; y2 near p0,p1 with p0 distinct
        const auto& y0s = it12->second;
        const auto& y2s = buckets[k01];
        if (y0s.empty() || pts.empty() || y2s.empty()) continue;
        est.record("zeta1", ps.sDist(pts.front(), y2s.front()));
        break;
      }
    }
    // xi: cycles of four cosets; record min pairwise distance of the corner
    // points when the cosets are not all equal
    for (int t = 0; t < config.pairs && keys.size() >= 2; ++t) {
      auto kA = keys[pickKey(rng)];
      auto kB = keys[pickKey(rng)];
      // cycle p0-p1-p2-p3 with corners in consecutive intersections
      const CosetLabel &p0 = kA.first, &p1 = kA.second;
      const CosetLabel &p2 = kB.first, &p3 = kB.second;
      auto find = [&](const CosetLabel& a, const CosetLabel& b) {
        auto it = buckets.find(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        return it == buckets.end() || it->second.empty() ? std::optional<Element>()
                                                         : std::optional<Element>(it->second.front());
      };
      auto y0 = find(p3, p0), y1 = find(p0, p1), y2 = find(p1, p2), y3 = find(p2, p3);
      if (!(y0 && y1 && y2 && y3)) continue;
      std::vector<Element> ys{*y0, *y1, *y2, *y3};
      int minPair = INT32_MAX;
      for (size_t i = 0; i < 4; ++i) {
        for (size_t j = i + 1; j < 4; ++j) minPair = std::min(minPair, ps.sDist(ys[i], ys[j]));
      }
      est.record("xi1", minPair);
    }
  }

  // rho(k): Hausdorff S-distance between relative geodesics with endpoints
  // within S-distance k (k = 0 and 2)
  for (int k : {0, 2}) {
    for (int t = 0; t < config.pairs; ++t) {
      Element x = sample(), y = sample();
      Element x2 = x, y2 = y;
      if (k > 0) {
        Element dx = sample(), dy = sample();
        if (ps.sNorm(dx) > k || ps.sNorm(dy) > k) continue;
        x2 = ps.group()->mul(x, dx);
        y2 = ps.group()->mul(y, dy);
      }
      auto c1 = ps.relGeodesicVertices(x, y);
      auto c2 = ps.relGeodesicVertices(x2, y2);
      long long hausdorff = 0;
      for (const auto& v : c1) hausdorff = std::max<long long>(hausdorff, minDistToSet(ps, v, c2));
      for (const auto& v : c2) hausdorff = std::max<long long>(hausdorff, minDistToSet(ps, v, c1));
      est.record("rho" + std::to_string(k), hausdorff);
    }
  }

  // lambda(1): saturation tracking of nearby relative geodesics
  for (int t = 0; t < config.pairs; ++t) {
    Element x = sample(), y = sample();
    auto c = ps.relGeodesicVertices(x, y);
    // endpoints of c' within distance 1 of Sat_1(vert(c))
    Element x2 = sample(), y2 = sample();
    auto nearSat = [&](const Element& p) {
      for (const auto& v : c) {
        if (ps.sDist(p, v) <= 1) return true;
        for (int f = 0; f < 2; ++f) {
          if (ps.distToCoset(p, ps.label(v, f)) <= 1) return true;
        }
      }
      return false;
    };
    if (!nearSat(x2) || !nearSat(y2)) continue;
    auto c2 = ps.relGeodesicVertices(x2, y2);
    std::vector<Element> anchor = c;
    anchor.push_back(x2);
    anchor.push_back(y2);
    long long worst = 0;
    for (const auto& v : c2) worst = std::max<long long>(worst, minDistToSet(ps, v, anchor));
    est.record("lambda1", worst);
  }

  // transition L at defaults (eps=1, R=3): Hausdorff distance between
  // relative-geodesic vertices and the transition points of an S-geodesic
  for (int t = 0; t < config.pairs; ++t) {
    Element x = sample(), y = sample();
    Element diff = ps.group()->mul(ps.group()->inverse(x), y);
    if (!ball.contains(diff) || diff.isIdentity()) continue;
    Word geoLocal = ball.geodesic(ps.group()->identity(), diff);
    auto annotation = transitionPoints(ps, geoLocal, 1, 3);
    std::vector<Element> transitions;
    for (size_t i = 0; i < annotation.vertices.size(); ++i) {
      if (!annotation.vertices[i].deep) {
        transitions.push_back(ps.group()->mul(x, ps.group()->nf(geoLocal.substr(0, i))));
      }
    }
    auto relVerts = ps.relGeodesicVertices(x, y);
    if (transitions.empty()) continue;
    long long hausdorff = 0;
    for (const auto& v : relVerts) {
      hausdorff = std::max<long long>(hausdorff, minDistToSet(ps, v, transitions));
    }
    for (const auto& v : transitions) {
      hausdorff = std::max<long long>(hausdorff, minDistToSet(ps, v, relVerts));
    }
    est.record("transition_L", hausdorff);
  }

  return est;
}

// ---------------------------------------------------------------------------
// Relative packing
// ---------------------------------------------------------------------------

PeripheralIntersectionCheck peripheralIntersections(const PeripheralStructure& ps,
                                                    const SubgroupHandle& h, int bound) {
  PeripheralIntersectionCheck check;
  // H inside one factor: parabolic; its peripheral intersections are
  // subgroups of abelian/finite/free factors, all with bounded packing
  bool insideFactor[2] = {true, true};
  for (const Word& g : h.generators()) {
    Element e = ps.group()->nf(g);
    auto syl = ps.fp().syllables(e.w);
    for (int f = 0; f < 2; ++f) {
      insideFactor[f] = insideFactor[f] &&
                        (syl.empty() || (syl.size() == 1 && syl[0].factor == f));
    }
  }
  if (insideFactor[0] || insideFactor[1]) {
    check.available = true;
    check.classification = "subgroup-of-factor";
    check.detail = "H lies inside peripheral factor P" + std::string(insideFactor[0] ? "0" : "1") +
                   "; intersections with peripheral conjugates are subgroups of that factor";
    return check;
  }
  // otherwise: verify empirically that H ∩ gPg^-1 is trivial to the bound
  auto elems = h.elementsUpTo(bound);
  Ball conjBall = Ball::create(ps.group(), std::min(bound, 5));
  for (size_t gi = 0; gi < conjBall.size(); ++gi) {
    const Element& g = conjBall.at(gi).elem;
    for (const auto& x : elems) {
      if (x.isIdentity()) continue;
      Element conj = ps.group()->conjugate(ps.group()->inverse(g), x);
      if (ps.syllableCount(conj) <= 1) {
        check.available = false;
        check.classification = "nontrivial-peripheral-intersection";
        check.detail = "H ∩ gPg^-1 contains " + ps.group()->render(x) + " for g = " +
                       ps.group()->render(g) + "; no packing oracle for that intersection";
        return check;
      }
    }
  }
  check.available = true;
  check.classification = "trivial(bound=" + std::to_string(bound) + ")";
  check.detail = "all peripheral intersections trivial for |g| <= 5, |h| <= " +
                 std::to_string(bound);
  return check;
}

RelPackingResult relPackingProfile(const PeripheralStructure& ps, const SubgroupHandle& h,
                                   int dMax, int radius) {
  RelPackingResult result;
  result.oracleCheck = peripheralIntersections(ps, h, 2 * radius);
  if (!result.oracleCheck.available) {
    throw OracleRefusal("relative packing needs a packing oracle for H ∩ gPg^-1: " +
                        result.oracleCheck.detail);
  }
  result.sigma = relQcSigma(ps, h, std::min(radius, 6), 200, 7);
  result.profile = packingProfile(h, dMax, radius);

  Ball ball = Ball::create(ps.group(), radius);
  // in-ball member sets per coset representative, then BFS distance fields
  auto memberSets = [&](const Element& rep) {
    std::vector<int> members;
    for (size_t i = 0; i < ball.size(); ++i) {
      if (h.sameCoset(rep, ball.at(i).elem)) members.push_back(static_cast<int>(i));
    }
    return members;
  };
  auto distField = [&](const std::vector<int>& sources) {
    std::vector<int> dist(ball.size(), -1);
    std::deque<int> queue;
    for (int s : sources) {
      dist[static_cast<size_t>(s)] = 0;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : ball.neighborsOf(u)) {
        if (dist[static_cast<size_t>(v)] < 0) {
          dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
    return dist;
  };

  CosetIndex cosets(ps, ball);
  for (const auto& family : result.profile.families) {
    RelPackingOutcome outcome;
    outcome.D = family.D;
    outcome.members = family.members;
    std::vector<std::vector<int>> fields;
    std::vector<std::vector<int>> memberLists;
    for (int idx : family.members) {
      memberLists.push_back(memberSets(result.profile.reps[static_cast<size_t>(idx)]));
      fields.push_back(distField(memberLists.back()));
    }
    // best common point: minimize the max distance to all member cosets
    int bestPoint = -1, bestPointM = INT32_MAX;
    for (size_t p = 0; p < ball.size(); ++p) {
      int worst = 0;
      bool ok = true;
      for (const auto& f : fields) {
        if (f[p] < 0) {
          ok = false;
          break;
        }
        worst = std::max(worst, f[p]);
      }
      if (ok && worst < bestPointM) {
        bestPointM = worst;
        bestPoint = static_cast<int>(p);
      }
    }
    // best peripheral coset: minimize the max over members of
    // min over member elements of the distance to the coset
    int bestCoset = -1, bestCosetM = INT32_MAX;
    std::vector<int> perCosetM(cosets.labels.size(), -1);
    for (size_t c = 0; c < cosets.labels.size(); ++c) {
      int worst = 0;
      bool ok = true;
      for (const auto& members : memberLists) {
        int best = INT32_MAX;
        for (int m : members) {
          best = std::min(best, ps.distToCoset(ball.at(static_cast<size_t>(m)).elem,
                                               cosets.labels[c]));
        }
        if (best == INT32_MAX) {
          ok = false;
          break;
        }
        worst = std::max(worst, best);
      }
      if (!ok) continue;
      perCosetM[c] = worst;
      if (worst < bestCosetM) {
        bestCosetM = worst;
        bestCoset = static_cast<int>(c);
      }
    }
    if (bestCoset >= 0 && bestCosetM < bestPointM) {
      outcome.kind = "peripheral";
      outcome.peripheral = cosets.labels[static_cast<size_t>(bestCoset)];
      outcome.peripheralM = bestCosetM;
      for (size_t c = 0; c < cosets.labels.size(); ++c) {
        if (perCosetM[c] == bestCosetM) outcome.candidates.push_back(cosets.labels[c]);
      }
      outcome.unique = outcome.candidates.size() == 1;
      outcome.pointM = bestPointM == INT32_MAX ? -1 : bestPointM;
    } else {
      outcome.kind = "point";
      outcome.point = bestPoint >= 0 ? ball.at(static_cast<size_t>(bestPoint)).elem
                                     : ps.group()->identity();
      outcome.pointM = bestPointM == INT32_MAX ? -1 : bestPointM;
      outcome.peripheralM = bestCosetM == INT32_MAX ? -1 : bestCosetM;
    }
    // certificate re-verification by direct enumeration over ball members
    outcome.certified = true;
    for (size_t mi = 0; mi < memberLists.size() && outcome.certified; ++mi) {
      int claimed = outcome.kind == "point" ? outcome.pointM : outcome.peripheralM;
      int direct = INT32_MAX;
      for (int m : memberLists[mi]) {
        const Element& x = ball.at(static_cast<size_t>(m)).elem;
        direct = std::min(direct, outcome.kind == "point"
                                      ? ps.sDist(outcome.point, x)
                                      : ps.distToCoset(x, outcome.peripheral));
      }
      outcome.certified = direct <= claimed;
    }
    result.outcomes.push_back(std::move(outcome));
  }
  return result;
}

nlohmann::json RelPackingResult::toJson(const PeripheralStructure& ps) const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json j{{"D", o.D}, {"kind", o.kind}, {"certified", o.certified}};
    nlohmann::json members = nlohmann::json::array();
    for (int m : o.members) {
      std::string w = profile.group->render(profile.reps[static_cast<size_t>(m)]);
      members.push_back(w.empty() ? "1" : w);
    }
    j["family"] = members;
    if (o.kind == "point") {
      std::string w = profile.group->render(o.point);
      j["common_point"] = w.empty() ? "1" : w;
      j["M"] = o.pointM;
    } else {
      j["peripheral_coset"] = ps.renderLabel(o.peripheral);
      j["M"] = o.peripheralM;
      j["unique"] = o.unique;
      nlohmann::json cands = nlohmann::json::array();
      for (const auto& c : o.candidates) cands.push_back(ps.renderLabel(c));
      j["candidates"] = cands;
    }
    outs.push_back(j);
  }
  return {{"profile", profile.toJson()},
          {"outcomes", outs},
          {"sigma", sigma.toJson()},
          {"peripheral_oracle",
           {{"available", oracleCheck.available},
            {"classification", oracleCheck.classification},
            {"detail", oracleCheck.detail}}}};
}

}  // namespace cosetpack::rel
