//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/packing.hpp"

#include <algorithm>
#include <map>

#include "cosetpack/bitset.hpp"

namespace cosetpack {

std::vector<Element> enumerateCosets(const SubgroupHandle& H, const Ball& ball) {
  if (H.oracle() == OracleKind::Enumerative && H.enumerationRadius() < 2 * ball.radius()) {
    throw OracleRefusal("enumerative membership oracle needs radius >= 2R = " +
                        std::to_string(2 * ball.radius()) + " (has " +
                        std::to_string(H.enumerationRadius()) + ")");
  }
  std::map<long long, Element> reps;
  for (size_t i = 0; i < ball.size(); ++i) {
    const Element& g = ball.at(i).elem;
    long long key = H.cosetKey(g);
    auto [it, fresh] = reps.insert({key, g});
    if (!fresh && g < it->second) it->second = g;
  }
  std::vector<Element> out;
  out.reserve(reps.size());
  for (auto& [k, rep] : reps) out.push_back(rep);
  std::sort(out.begin(), out.end());
  return out;
}

DistanceCert cosetDistance(const SubgroupHandle& H, const Element& g1, const Element& g2,
                           int radius) {
  const Group& g = *H.group();
  Element d = g.mul(g.inverse(g1), g2);
  if (H.member(d)) return {0, true, radius};
  switch (H.oracle()) {
    case OracleKind::Stallings:
      return {stallings::doubleCosetShortest(*H.core(), d.w, *H.core()).length, true, radius};
    case OracleKind::Lattice:
      return {static_cast<int>(H.lattice()->l1DistanceToLattice(exponentVector(g, d.w))), true,
              radius};
    case OracleKind::Table: {
      int best = static_cast<int>(d.w.size());
      for (const Element& h : *H.tableElements()) {
        Element left = g.mul(g.inverse(h), d);
        for (const Element& h2 : *H.tableElements()) {
          best = std::min(best, static_cast<int>(g.mul(left, h2).w.size()));
        }
      }
      return {best, true, radius};
    }
    case OracleKind::Enumerative: {
      if (auto fast = H.fpCosetDistance(d)) {
        fast->radius_used = radius;
        return *fast;
      }
      // upper bound: canonical-word length is >= the word metric
      int best = static_cast<int>(d.w.size());
      const auto& elems = *H.enumeratedElements();
      for (const Element& h : elems) {
        Element left = g.mul(g.inverse(h), d);
        if (static_cast<int>(left.w.size()) > best + static_cast<int>(h.w.size())) continue;
        for (const Element& h2 : elems) {
          best = std::min(best, static_cast<int>(g.mul(left, h2).w.size()));
        }
      }
      return {best, false, H.enumerationRadius()};
    }
  }
  return {0, false, 0};
}

namespace {

struct ProfileCore {
  std::vector<Element> reps;
  std::map<std::pair<int, int>, DistanceCert> closePairs;
  std::vector<std::vector<int>> families;  // per D
  std::string note;
};

constexpr size_t kAnchoredThreshold = 2500;

ProfileCore profileAt(const SubgroupHandle& H, int dMax, int radius, long long budget) {
  ProfileCore out;
  Ball ball = Ball::create(H.group(), radius, {}, budget);
  const Group& g = *H.group();

  if (H.oracle() == OracleKind::Enumerative && ball.size() > kAnchoredThreshold) {
    // Translation-anchored candidate set: every pairwise-close family
    // left-translates to one containing H whose members stay within D_max of
    // H, so the cosets h*s*H with h in the subgroup window and |s| < D_max
    // carry a maximum family. N_lower stays a certified lower bound.
    out.note = "enumerative oracle: translation-anchored candidate sweep";
    std::map<long long, Element> reps;
    Ball shifts = Ball::create(H.group(), dMax - 1);
    auto addCandidate = [&](const Element& e) {
      long long key = H.cosetKey(e);
      auto [it, fresh] = reps.insert({key, e});
      if (!fresh && e < it->second) it->second = e;
    };
    addCandidate(g.identity());
    for (const Element& h : H.elementsUpTo(std::min(2 * radius, H.enumerationRadius()))) {
      for (size_t s = 0; s < shifts.size(); ++s) {
        addCandidate(g.mul(h, shifts.at(s).elem));
      }
    }
    for (auto& [key, rep] : reps) out.reps.push_back(rep);
    std::sort(out.reps.begin(), out.reps.end());
  } else {
    out.reps = enumerateCosets(H, ball);
  }
  const int n = static_cast<int>(out.reps.size());

  if (H.oracle() == OracleKind::Stallings) {
    // batched double-coset lengths with a triangle-inequality prune:
    // |d(H,g_iH) - d(H,g_jH)| is a lower bound for d(g_iH, g_jH)
    stallings::DoubleCosetOracle oracle(*H.core(), *H.core());
    std::vector<int> phi(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) phi[static_cast<size_t>(i)] = oracle.length(out.reps[static_cast<size_t>(i)].w);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(phi[static_cast<size_t>(i)] - phi[static_cast<size_t>(j)]) >= dMax) continue;
        Word w = freeReduce(wordInverse(out.reps[static_cast<size_t>(i)].w) +
                            out.reps[static_cast<size_t>(j)].w);
        int d = oracle.length(w);
        if (d < dMax) out.closePairs[{i, j}] = {d, true, radius};
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        DistanceCert c = cosetDistance(H, out.reps[static_cast<size_t>(i)],
                                       out.reps[static_cast<size_t>(j)], radius);
        if (c.value < dMax) out.closePairs[{i, j}] = c;
      }
    }
  }
  for (int D = 1; D <= dMax; ++D) {
    std::vector<VertexSet> adj(static_cast<size_t>(n), VertexSet(n));
    for (const auto& [pair, cert] : out.closePairs) {
      if (cert.value < D) {
        adj[static_cast<size_t>(pair.first)].set(pair.second);
        adj[static_cast<size_t>(pair.second)].set(pair.first);
      }
    }
    out.families.push_back(maxClique(n, adj));
  }
  return out;
}

}  // namespace

PackingProfile packingProfile(const SubgroupHandle& H, int dMax, int radius, int saturationStep,
                              long long budget) {
  if (radius < dMax) throw ConfigError("packing profile requires R >= D_max");
  PackingProfile profile;
  profile.group = H.group();
  profile.radius = radius;
  profile.dMax = dMax;
  profile.saturationStep = saturationStep;

  ProfileCore base = profileAt(H, dMax, radius, budget);
  profile.reps = base.reps;
  profile.closePairs = base.closePairs;
  profile.note = base.note;

  std::vector<int> grownSizes;
  bool grownOk = true;
  try {
    ProfileCore grown = profileAt(H, dMax, radius + saturationStep, budget);
    for (const auto& f : grown.families) grownSizes.push_back(static_cast<int>(f.size()));
  } catch (const BudgetError& e) {
    grownOk = false;
    if (!profile.note.empty()) profile.note += "; ";
    profile.note += std::string("saturation sweep skipped: ") + e.what();
  }

  for (int D = 1; D <= dMax; ++D) {
    PackingFamily fam;
    fam.D = D;
    fam.members = base.families[static_cast<size_t>(D - 1)];
    fam.size = static_cast<int>(fam.members.size());
    fam.saturated = grownOk && grownSizes[static_cast<size_t>(D - 1)] == fam.size;
    profile.families.push_back(std::move(fam));
  }
  // monotonicity invariant of the definition
  for (size_t i = 1; i < profile.families.size(); ++i) {
    if (profile.families[i].size < profile.families[i - 1].size) {
      throw std::logic_error("packing profile is not monotone in D (internal error)");
    }
  }
  return profile;
}

const DistanceCert* PackingProfile::pairCert(int i, int j) const {
  if (i == j) return nullptr;
  auto it = closePairs.find({std::min(i, j), std::max(i, j)});
  return it == closePairs.end() ? nullptr : &it->second;
}

nlohmann::json PackingProfile::toJson() const {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : families) {
    nlohmann::json members = nlohmann::json::array();
    for (int i : f.members) members.push_back(group->render(reps[static_cast<size_t>(i)]));
    nlohmann::json certs = nlohmann::json::array();
    for (size_t a = 0; a < f.members.size(); ++a) {
      for (size_t b = a + 1; b < f.members.size(); ++b) {
        const DistanceCert* c = pairCert(f.members[a], f.members[b]);
        if (c != nullptr) {
          certs.push_back({{"i", f.members[a]}, {"j", f.members[b]}, {"cert", c->toJson()}});
        }
      }
    }
    fams.push_back({{"D", f.D},
                    {"N_lower", f.size},
                    {"saturated", f.saturated},
                    {"family", members},
                    {"pairwise", certs}});
  }
  nlohmann::json repsJson = nlohmann::json::array();
  for (const auto& r : reps) repsJson.push_back(group->render(r));
  nlohmann::json j{{"radius", radius},
                   {"D_max", dMax},
                   {"saturation_step", saturationStep},
                   {"representatives", repsJson},
                   {"profile", fams}};
  if (!note.empty()) j["note"] = note;
  return j;
}

std::string PackingProfile::toCsv() const {
  std::string out = "D,N_lower,saturated,family\n";
  for (const auto& f : families) {
    std::string fam;
    for (size_t i = 0; i < f.members.size(); ++i) {
      if (i) fam += " ";
      std::string w = group->render(reps[static_cast<size_t>(f.members[i])]);
      fam += w.empty() ? "1" : w;
    }
    out += std::to_string(f.D) + "," + std::to_string(f.size) + "," +
           (f.saturated ? "true" : "false") + "," + fam + "\n";
  }
  return out;
}

NormalCloseReport normalCloseCount(const SubgroupHandle& N, int D, int radius,
                                   int saturationStep) {
  const Group& g = *N.group();
  // normality spot check on ball conjugations
  Ball small = Ball::create(N.group(), std::min(radius, 3));
  for (size_t i = 0; i < small.size(); ++i) {
    for (const Word& w : N.generators()) {
      Element n = g.nf(w);
      if (!N.member(g.conjugate(small.at(i).elem, n))) {
        throw OracleRefusal("normality check failed: conjugation of " + g.render(n) + " by " +
                            g.render(small.at(i).elem) + " leaves the subgroup");
      }
    }
  }
  auto countAt = [&](int R) {
    Ball ball = Ball::create(N.group(), R);
    auto reps = enumerateCosets(N, ball);
    int count = 0;
    for (const auto& rep : reps) {
      if (cosetDistance(N, g.identity(), rep, R).value < D) ++count;
    }
    return count;
  };
  NormalCloseReport report;
  report.radius = radius;
  report.count = countAt(radius);
  report.saturated = countAt(radius + saturationStep) == report.count;
  return report;
}

}  // namespace cosetpack
