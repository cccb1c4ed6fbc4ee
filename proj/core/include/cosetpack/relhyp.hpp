//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_RELHYP_HPP_
#define COSETPACK_RELHYP_HPP_

#include <map>

#include "cosetpack/ball.hpp"
#include "cosetpack/group.hpp"
#include "cosetpack/packing.hpp"
#include "cosetpack/subgroup.hpp"
#include "json.hpp"

namespace cosetpack::rel {

/// Canonical label of a peripheral coset g P_factor: the representative is
/// the normal form of g with a trailing factor syllable dropped, so distinct
/// labels denote distinct cosets.
struct CosetLabel {
  Word rep;
  int factor = 0;
  bool operator==(const CosetLabel&) const = default;
  bool operator<(const CosetLabel& o) const {
    if (factor != o.factor) return factor < o.factor;
    return shortlexLess(rep, o.rep);
  }
};

/// A free-product backend viewed as a relatively hyperbolic pair: the
/// peripheral subgroups are the two factors. Only backends whose canonical
/// words are geodesic are accepted (free, free_abelian, finite factors and
/// their products); for those, |nf(g)| is the word metric d_S. That
/// structural identity is enforced by exhaustive BFS tests, never assumed
/// for other backends.
class PeripheralStructure {
 public:
  static PeripheralStructure make(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  const FreeProductGroup& fp() const { return *fp_; }

  int sNorm(const Element& x) const { return static_cast<int>(x.w.size()); }
  int sDist(const Element& x, const Element& y) const {
    return static_cast<int>(group_->mul(group_->inverse(x), y).w.size());
  }
  int syllableCount(const Element& x) const;
  CosetLabel label(const Element& g, int factor) const;
  Element labelRep(const CosetLabel& c) const { return Element{c.rep}; }
  /// Exact S-distance from a point to a peripheral coset.
  int distToCoset(const Element& x, const CosetLabel& c) const;
  /// The unique relative geodesic from x to y: x followed by the syllable
  /// prefixes of nf(x^-1 y).
  std::vector<Element> relGeodesicVertices(const Element& x, const Element& y) const;

  std::string renderLabel(const CosetLabel& c) const;

 private:
  GroupPtr group_;
  const FreeProductGroup* fp_ = nullptr;
};

struct RelDistanceCert {
  int value = 0;
  std::string method;        // "syllable" or "bfs"
  DistanceCert s_distance;   // the S-distance of the same pair
  nlohmann::json toJson() const {
    return {{"value", value}, {"method", method}, {"s_distance", s_distance.toJson()}};
  }
};

/// Relative distance d_{S∪P}(x,y) via the alternating-syllable count.
RelDistanceCert relDist(const PeripheralStructure& ps, const Element& x, const Element& y);

/// BFS relative distances from a source within the enumerated ball: one step
/// is any jump inside a peripheral coset (which subsumes S-letters for free
/// products). -1 where unreachable inside the enumeration.
std::vector<int> relDistBfsAll(const PeripheralStructure& ps, const Ball& ball, int sourceIdx);
int relDistBfs(const PeripheralStructure& ps, const Ball& ball, const Element& x,
               const Element& y);

struct SaturationResult {
  std::vector<CosetLabel> cosets;
  bool complete = false;  // certified relative to the ball radius
  nlohmann::json toJson(const PeripheralStructure& ps) const;
};

/// Sat_nu(Y): every peripheral coset meeting the nu-neighborhood of Y,
/// complete relative to the ball (requires Y inside ball(R - nu)).
SaturationResult saturation(const PeripheralStructure& ps, const std::vector<Element>& y, int nu,
                            const Ball& ball);

struct TransitionAnnotation {
  struct Vertex {
    bool deep = false;
    std::vector<CosetLabel> deepIn;
  };
  struct Component {
    int begin = 0, end = 0;  // vertex index range [begin, end]
    std::vector<CosetLabel> labels;
    bool unique = false;
  };
  std::vector<Vertex> vertices;
  std::vector<Component> components;
  bool uniqueDeepCosets = true;  // second clause of the transition proposition
  nlohmann::json toJson(const PeripheralStructure& ps) const;
};

/// Exact (eps,R)-deep / transition annotation of a certified S-geodesic word.
TransitionAnnotation transitionPoints(const PeripheralStructure& ps, const Word& geodesic,
                                      int eps, int deepR);

/// A word is a geodesic iff its length equals the word metric of its
/// endpoint (canonical-word length for these backends).
bool isGeodesicWord(const PeripheralStructure& ps, const Word& w);

struct SigmaEstimate {
  int sigma = 0;
  int pairs = 0;
  int sampleRadius = 0;
  int enumerationRadius = 0;
  unsigned long long seed = 0;
  bool exhaustivePairs = false;
  nlohmann::json toJson() const {
    return {{"sigma", sigma},          {"pairs", pairs},
            {"sample_radius", sampleRadius}, {"enumeration_radius", enumerationRadius},
            {"seed", seed},            {"exhaustive_pairs", exhaustivePairs}};
  }
};

/// Relative quasiconvexity estimate: max over sampled pairs of H-elements of
/// the min S-distance from relative-geodesic vertices to H.
SigmaEstimate relQcSigma(const PeripheralStructure& ps, const SubgroupHandle& h, int sampleRadius,
                         int pairCount, unsigned long long seed);

/// Measured constants: monotone accumulators of observed maxima with sample
/// provenance. A later sample exceeding a stored estimate is a regression
/// signal (estimates only grow under merge).
struct ConstantEstimates {
  std::map<std::string, long long> value;
  std::map<std::string, long long> samples;
  unsigned long long seed = 0;
  int radius = 0;

  void record(const std::string& name, long long v, long long count = 1);
  void merge(const ConstantEstimates& other);
  nlohmann::json toJson() const;
  static ConstantEstimates fromJson(const nlohmann::json& j);
};

struct CampaignConfig {
  int radius = 6;
  int triangles = 200;
  int ngons = 60;
  int pairs = 150;
  unsigned long long seed = 1;
};

ConstantEstimates measureConstants(const PeripheralStructure& ps, const CampaignConfig& config);

struct PeripheralIntersectionCheck {
  bool available = false;
  std::string classification;  // e.g. "subgroup-of-factor", "trivial(bound=...)"
  std::string detail;
};

/// Classifies H ∩ gPg^-1 for the shipped instances: subgroups of a factor
/// (parabolic; bounded packing inherited from the abelian/finite/free
/// factor) or empirically trivial to a stated bound. Anything else is
/// reported unavailable; rel_packing refuses on it.
PeripheralIntersectionCheck peripheralIntersections(const PeripheralStructure& ps,
                                                    const SubgroupHandle& h, int bound);

struct RelPackingOutcome {
  int D = 0;
  std::vector<int> members;
  std::string kind;  // "point" or "peripheral"
  Element point;
  int pointM = -1;
  CosetLabel peripheral;
  int peripheralM = -1;
  bool unique = false;
  std::vector<CosetLabel> candidates;
  bool certified = false;
};

struct RelPackingResult {
  PackingProfile profile;
  std::vector<RelPackingOutcome> outcomes;
  SigmaEstimate sigma;
  PeripheralIntersectionCheck oracleCheck;
  nlohmann::json toJson(const PeripheralStructure& ps) const;
};

/// Packing profile plus the point-or-peripheral classification of each
/// maximal close family (the dichotomy of the relative packing theorem).
RelPackingResult relPackingProfile(const PeripheralStructure& ps, const SubgroupHandle& h,
                                   int dMax, int radius);

}  // namespace cosetpack::rel

#endif  // COSETPACK_RELHYP_HPP_
