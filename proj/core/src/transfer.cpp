//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <map>
#include <set>

#include "cosetpack/bitset.hpp"
#include "cosetpack/errors.hpp"
#include "cosetpack/packing.hpp"

namespace cosetpack {

namespace {

std::vector<Word> parseWords(const Group& g, const nlohmann::json& arr) {
  std::vector<Word> out;
  for (const auto& s : arr) out.push_back(g.parse(s.get<std::string>()));
  return out;
}

/// Sound coset distance in the metric of a (possibly non-standard) ball:
/// minimum of ball.dist over coset elements inside the ball. Always an upper
/// bound of the true distance, so closeness edges derived from it are sound.
int cosetDistUnderBall(const SubgroupHandle& H, const Ball& ball, const Element& g1,
                       const Element& g2) {
  long long k1 = H.cosetKey(g1), k2 = H.cosetKey(g2);
  std::vector<int> a, b;
  for (size_t i = 0; i < ball.size(); ++i) {
    long long k = H.cosetKey(ball.at(i).elem);
    if (k == k1) a.push_back(static_cast<int>(i));
    if (k == k2) b.push_back(static_cast<int>(i));
  }
  int best = -1;
  for (int i : a) {
    for (int j : b) {
      auto c = ball.dist(ball.at(static_cast<size_t>(i)).elem, ball.at(static_cast<size_t>(j)).elem);
      if (c.exact && (best < 0 || c.value < best)) best = std::min(best < 0 ? c.value : best, c.value);
    }
  }
  return best;  // -1 if no exact pair was visible
}

/// Independent max-family computation over enumerated cosets with edges from
/// a sound pairwise-distance functional.
int maxFamilySize(int n, const std::function<int(int, int)>& distOf, int D) {
  std::vector<VertexSet> adj(static_cast<size_t>(n), VertexSet(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int d = distOf(i, j);
      if (d >= 0 && d < D) {
        adj[static_cast<size_t>(i)].set(j);
        adj[static_cast<size_t>(j)].set(i);
      }
    }
  }
  return static_cast<int>(maxClique(n, adj).size());
}

nlohmann::json metricLaw(const nlohmann::json& instance) {
  auto g = Group::fromJson(instance.at("backend"));
  auto subgroupGens = parseWords(*g, instance.at("subgroup"));
  const int dMax = instance.at("D_max").get<int>();
  const int radius = instance.at("R").get<int>();
  std::vector<Word> gens1, gens2;
  if (instance.contains("genset1")) gens1 = parseWords(*g, instance.at("genset1"));
  gens2 = parseWords(*g, instance.at("genset2"));

  Ball b1 = Ball::create(g, radius, gens1);
  // grow the second ball until it resolves everything the reindex needs
  int r2 = radius;
  Ball b2 = Ball::create(g, r2, gens2);
  for (int tries = 0; tries < 6; ++tries) {
    bool ok = true;
    for (size_t i = 0; i < b1.size() && ok; ++i) ok = b2.contains(b1.at(i).elem);
    if (ok) break;
    r2 += 2;
    b2 = Ball::create(g, r2, gens2);
  }

  // pointwise reindex rho21(n) = max{ d1(1,x) : d2(1,x) <= n } with d1 <= rho21(d2)
  std::vector<int> rho21(static_cast<size_t>(r2) + 1, 0);
  for (size_t i = 0; i < b2.size(); ++i) {
    int d2 = b2.at(i).dist;
    int d1 = b1.distTo(b2.at(i).elem);
    if (d1 < 0) continue;  // outside ball 1; only affects entries beyond our range
    for (int n = d2; n <= r2; ++n) rho21[static_cast<size_t>(n)] = std::max(rho21[static_cast<size_t>(n)], d1);
  }
  bool pointwise = true;
  for (size_t i = 0; i < b2.size() && pointwise; ++i) {
    const auto& e = b2.at(i);
    int d1 = b1.distTo(e.elem);
    if (d1 < 0) continue;
    pointwise = d1 <= rho21[static_cast<size_t>(e.dist)];
  }

  // profile reindex rho12(D) = 1 + max{ d2(1,x) : d1(1,x) <= D-1 }
  std::vector<int> rho12(static_cast<size_t>(dMax) + 1, 1);
  for (size_t i = 0; i < b1.size(); ++i) {
    int d1 = b1.at(i).dist;
    int d2 = b2.distTo(b1.at(i).elem);
    if (d2 < 0) throw OracleRefusal("metric law: second ball too small to resolve reindex");
    for (int D = d1 + 1; D <= dMax; ++D) {
      rho12[static_cast<size_t>(D)] = std::max(rho12[static_cast<size_t>(D)], d2 + 1);
    }
  }

  auto handle = SubgroupHandle::make(g, subgroupGens);
  Ball enumBall = Ball::create(g, radius);
  auto reps = enumerateCosets(handle, enumBall);
  const int n = static_cast<int>(reps.size());
  auto d1Of = [&](int i, int j) {
    return cosetDistUnderBall(handle, b1, reps[static_cast<size_t>(i)], reps[static_cast<size_t>(j)]);
  };
  auto d2Of = [&](int i, int j) {
    return cosetDistUnderBall(handle, b2, reps[static_cast<size_t>(i)], reps[static_cast<size_t>(j)]);
  };

  nlohmann::json rows = nlohmann::json::array();
  bool holds = true;
  for (int D = 1; D <= dMax; ++D) {
    int n1 = maxFamilySize(n, d1Of, D);
    int rD = rho12[static_cast<size_t>(D)];
    int n2 = maxFamilySize(n, d2Of, rD);
    bool ok = n1 <= n2;
    holds = holds && ok;
    rows.push_back({{"D", D}, {"rho", rD}, {"N1", n1}, {"N2_at_rho", n2}, {"ok", ok}});
  }
  return {{"law", "metric"},
          {"holds", holds && pointwise},
          {"pointwise_reindex_ok", pointwise},
          {"rows", rows}};
}

nlohmann::json quotientLaw(const nlohmann::json& instance) {
  auto g = Group::fromJson(instance.at("backend"));
  if (g->kind() != GroupKind::FreeAbelian) {
    throw OracleRefusal("quotient law runner supports free_abelian instances");
  }
  auto nGens = parseWords(*g, instance.at("N"));
  auto hGens = parseWords(*g, instance.at("H"));
  const int radius = instance.at("R").get<int>();

  Quotient q = makeQuotient(g, nGens);
  // HN in G: lattice generated by both gen sets
  std::vector<Word> hnGens = hGens;
  hnGens.insert(hnGens.end(), nGens.begin(), nGens.end());
  auto hn = SubgroupHandle::make(g, hnGens);

  // the image lattice of HN and of N, for exact membership upstairs
  std::vector<std::vector<long long>> hnRows;
  for (const Word& w : hnGens) hnRows.push_back(exponentVector(*g, w));
  IntLattice hnLattice(g->rank(), hnRows);

  Ball ballG = Ball::create(g, radius);
  auto reps = enumerateCosets(hn, ballG);

  // independent route in Q: BFS ball of the quotient backend, coset distance
  // as a minimum of exact ball distances over coset members
  Ball ballQ = Ball::create(q.quotient, radius + 2);
  auto inImage = [&](const Element& qe) {
    return hnLattice.contains(exponentVector(*q.quotient, qe.w));
  };
  auto qCosetDist = [&](const Element& qa) {
    // d(Hbar, qa Hbar) via pairs in the quotient ball
    int best = -1;
    std::vector<Element> left, right;
    for (size_t i = 0; i < ballQ.size(); ++i) {
      const Element& e = ballQ.at(i).elem;
      if (inImage(e)) left.push_back(e);
      if (inImage(q.quotient->mul(q.quotient->inverse(qa), e))) right.push_back(e);
    }
    for (const auto& x : left) {
      for (const auto& y : right) {
        auto c = ballQ.dist(x, y);
        if (c.exact && (best < 0 || c.value < best)) best = c.value;
      }
    }
    return best;
  };

  nlohmann::json rows = nlohmann::json::array();
  bool holds = true;
  for (const auto& rep : reps) {
    int lhs = cosetDistance(hn, g->identity(), rep, radius).value;
    Element qa = q.project(rep);
    int rhs = qCosetDist(qa);
    bool ok = rhs >= 0 && lhs == rhs;
    holds = holds && ok;
    rows.push_back({{"a", g->render(rep)},
                    {"d_G(HN, aHN)", lhs},
                    {"d_Q(Hbar, aHbar)", rhs},
                    {"equal", ok}});
  }
  return {{"law", "quotient"}, {"holds", holds}, {"samples", rows}};
}

nlohmann::json intersectionLaw(const nlohmann::json& instance) {
  auto g = Group::fromJson(instance.at("backend"));
  if (g->kind() != GroupKind::FreeAbelian) {
    throw OracleRefusal("intersection law runner supports free_abelian instances");
  }
  auto hGens = parseWords(*g, instance.at("H"));
  auto kGens = parseWords(*g, instance.at("K"));
  std::vector<Word> lGens;
  if (instance.contains("L")) lGens = parseWords(*g, instance.at("L"));
  const int dMax = instance.at("D_max").get<int>();
  const int radius = instance.at("R").get<int>();

  auto H = SubgroupHandle::make(g, hGens);
  auto K = SubgroupHandle::make(g, kGens);
  auto L = SubgroupHandle::make(g, lGens);

  // verify L = H ∩ K within the ball (L subset, and no extra intersections)
  Ball ball = Ball::create(g, radius);
  for (const Word& w : lGens) {
    Element e = g->nf(w);
    if (!H.member(e) || !K.member(e)) throw OracleRefusal("intersection law: L is not inside H ∩ K");
  }
  for (size_t i = 0; i < ball.size(); ++i) {
    const Element& e = ball.at(i).elem;
    if (H.member(e) && K.member(e) && !L.member(e)) {
      throw OracleRefusal("intersection law: H ∩ K contains " + g->render(e) + " outside L");
    }
  }

  // cosets hL with representative h in H (the correspondence hL = H ∩ hK)
  std::vector<Element> hReps;
  {
    std::set<long long> seen;
    for (size_t i = 0; i < ball.size(); ++i) {
      const Element& e = ball.at(i).elem;
      if (!H.member(e)) continue;
      long long key = L.cosetKey(e);
      if (seen.insert(key).second) hReps.push_back(e);
    }
  }
  const int n = static_cast<int>(hReps.size());
  bool edges = true;
  bool contraction = true;
  int checked = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int dl = cosetDistance(L, hReps[static_cast<size_t>(i)], hReps[static_cast<size_t>(j)], radius).value;
      int dk = cosetDistance(K, hReps[static_cast<size_t>(i)], hReps[static_cast<size_t>(j)], radius).value;
      contraction = contraction && dk <= dl;
      for (int D = 1; D <= dMax; ++D) {
        if (dl < D && !(dk < D)) edges = false;
      }
      ++checked;
    }
  }

  // trivial-L cross-check: certified profile vs direct point clique
  nlohmann::json profileCheck = nullptr;
  if (lGens.empty()) {
    auto profile = packingProfile(L, dMax, radius);
    nlohmann::json rows = nlohmann::json::array();
    bool ok = true;
    for (int D = 1; D <= dMax; ++D) {
      auto distOf = [&](int i, int j) {
        auto c = ball.dist(ball.at(static_cast<size_t>(i)).elem, ball.at(static_cast<size_t>(j)).elem);
        return c.exact ? c.value : -1;
      };
      int direct = maxFamilySize(static_cast<int>(ball.size()), distOf, D);
      int fromProfile = profile.families[static_cast<size_t>(D - 1)].size;
      ok = ok && direct == fromProfile;
      rows.push_back({{"D", D}, {"profile", fromProfile}, {"direct", direct}});
    }
    profileCheck = {{"equal", ok}, {"rows", rows}};
  }

  return {{"law", "intersection"},
          {"holds", edges && contraction},
          {"pairs_checked", checked},
          {"edge_preservation", edges},
          {"distance_contraction", contraction},
          {"trivial_profile_check", profileCheck}};
}

nlohmann::json commensurabilityLaw(const nlohmann::json& instance) {
  auto g = Group::fromJson(instance.at("backend"));
  auto kGens = parseWords(*g, instance.at("K"));
  auto hGens = parseWords(*g, instance.at("H"));
  const int dMax = instance.at("D_max").get<int>();
  const int radius = instance.at("R").get<int>();
  auto H = SubgroupHandle::make(g, hGens);
  auto K = SubgroupHandle::make(g, kGens);
  for (const Word& w : hGens) {
    if (!K.member(g->nf(w))) throw OracleRefusal("commensurability law: H is not inside K");
  }
  // observed Hausdorff constant: sup over K-ball elements of d(k, H)
  int c = 0;
  for (const Element& k : K.elementsUpTo(radius)) {
    int d;
    if (H.oracle() == OracleKind::Lattice) {
      d = static_cast<int>(H.lattice()->l1DistanceToLattice(exponentVector(*g, k.w)));
    } else if (H.oracle() == OracleKind::Stallings) {
      stallings::CoreGraph trivialCore = stallings::CoreGraph::fold(g->rank(), {});
      d = stallings::doubleCosetShortest(trivialCore, wordInverse(k.w), *H.core()).length;
    } else {
      throw OracleRefusal("commensurability law needs an exact oracle for H");
    }
    c = std::max(c, d);
  }
  auto profK = packingProfile(K, dMax, radius);
  auto profH = packingProfile(H, dMax + 2 * c, std::max(radius, dMax + 2 * c));
  nlohmann::json rows = nlohmann::json::array();
  bool holds = true;
  for (int D = 1; D <= dMax; ++D) {
    int nk = profK.families[static_cast<size_t>(D - 1)].size;
    int nh = profH.families[static_cast<size_t>(D + 2 * c - 1)].size;
    bool ok = nk <= nh;
    holds = holds && ok;
    rows.push_back({{"D", D}, {"N_K", nk}, {"N_H_at_D_plus_2C", nh}, {"ok", ok}});
  }
  return {{"law", "commensurability"}, {"holds", holds}, {"hausdorff_C", c}, {"rows", rows}};
}

nlohmann::json transitivityLaw(const nlohmann::json& instance) {
  auto g = Group::fromJson(instance.at("backend"));
  if (g->kind() != GroupKind::FreeAbelian) {
    throw OracleRefusal("transitivity law runner supports free_abelian instances");
  }
  auto kGens = parseWords(*g, instance.at("K"));
  auto hGens = parseWords(*g, instance.at("H"));
  auto kBackend = Group::fromJson(instance.at("K_backend"));
  auto hInK = parseWords(*kBackend, instance.at("H_in_K"));
  auto kCoords = instance.at("k_coordinates").get<std::vector<int>>();
  const int dMax = instance.at("D_max").get<int>();
  const int radius = instance.at("R").get<int>();

  auto H = SubgroupHandle::make(g, hGens);
  auto K = SubgroupHandle::make(g, kGens);
  for (const Word& w : hGens) {
    if (!K.member(g->nf(w))) throw OracleRefusal("transitivity law: H is not inside K");
  }
  auto HK = SubgroupHandle::make(kBackend, hInK);

  auto profH = packingProfile(H, dMax, radius);
  auto profHK = packingProfile(HK, dMax, radius);
  auto profK = packingProfile(K, dMax, radius);

  auto toK = [&](const Element& e) {
    auto v = exponentVector(*g, e.w);
    Word w;
    for (size_t i = 0; i < kCoords.size(); ++i) appendPower(w, static_cast<int>(i), v[static_cast<size_t>(kCoords[i])]);
    return kBackend->nf(w);
  };

  nlohmann::json rows = nlohmann::json::array();
  bool holds = true;
  for (int D = 1; D <= dMax; ++D) {
    const auto& fam = profH.families[static_cast<size_t>(D - 1)];
    std::map<long long, std::vector<Element>> byK;
    for (int idx : fam.members) {
      const Element& rep = profH.reps[static_cast<size_t>(idx)];
      byK[K.cosetKey(rep)].push_back(rep);
    }
    int c1 = static_cast<int>(byK.size());
    int maxPer = 0;
    for (auto& [key, members] : byK) {
      // distinct H-cosets within one K-coset, seen inside K's own backend
      std::set<long long> inner;
      for (const auto& m : members) inner.insert(HK.cosetKey(toK(m)));
      maxPer = std::max(maxPer, static_cast<int>(inner.size()));
    }
    int nK = profK.families[static_cast<size_t>(D - 1)].size;
    int nHK = profHK.families[static_cast<size_t>(D - 1)].size;
    bool ok = c1 <= nK && maxPer <= nHK && fam.size <= nK * nHK;
    holds = holds && ok;
    rows.push_back({{"D", D},
                    {"family", fam.size},
                    {"K_cosets_hit", c1},
                    {"max_per_K_coset", maxPer},
                    {"N_K", nK},
                    {"N_H_in_K", nHK},
                    {"ok", ok}});
  }
  return {{"law", "transitivity"}, {"holds", holds}, {"rows", rows}};
}

}  // namespace

nlohmann::json checkTransferLaw(const std::string& law, const nlohmann::json& instance) {
  if (law == "metric") return metricLaw(instance);
  if (law == "quotient") return quotientLaw(instance);
  if (law == "intersection") return intersectionLaw(instance);
  if (law == "commensurability") return commensurabilityLaw(instance);
  if (law == "transitivity") return transitivityLaw(instance);
  throw ConfigError("unknown transfer law '" + law +
                    "' (known: metric, quotient, intersection, commensurability, transitivity)");
}

}  // namespace cosetpack
