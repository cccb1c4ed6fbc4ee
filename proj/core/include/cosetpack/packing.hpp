//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_PACKING_HPP_
#define COSETPACK_PACKING_HPP_

#include "cosetpack/ball.hpp"
#include "cosetpack/subgroup.hpp"
#include "json.hpp"

namespace cosetpack {

/// Shortlex-minimal representative of every coset gH intersecting the ball;
/// exhaustive relative to the ball radius.
std::vector<Element> enumerateCosets(const SubgroupHandle& H, const Ball& ball);

/// d(g1 H, g2 H): exact for stallings (double-coset automaton), lattice
/// (closest-vector search) and table oracles; a certified upper bound with
/// exact=false for enumerative oracles.
DistanceCert cosetDistance(const SubgroupHandle& H, const Element& g1, const Element& g2,
                           int radius);

struct PackingFamily {
  int D = 0;
  std::vector<int> members;  // indices into reps
  int size = 0;              // N_lower(D)
  bool saturated = false;
};

/// The computable face of N(G,H,D): certified maximum pairwise-close families
/// over the cosets enumerated at radius R, with a saturation flag from a
/// sweep at a larger radius.
struct PackingProfile {
  GroupPtr group;
  int radius = 0;
  int dMax = 0;
  int saturationStep = 0;
  std::vector<Element> reps;
  /// Certificates for every pair at distance < D_max (the closeness graph);
  /// pairs not listed are certified to be at distance >= D_max.
  std::map<std::pair<int, int>, DistanceCert> closePairs;
  std::vector<PackingFamily> families;  // families[D-1] for D = 1..dMax
  std::string note;

  const DistanceCert* pairCert(int i, int j) const;
  nlohmann::json toJson() const;
  std::string toCsv() const;
};

PackingProfile packingProfile(const SubgroupHandle& H, int dMax, int radius,
                              int saturationStep = 2, long long budget = 2'000'000);

struct NormalCloseReport {
  int count = 0;
  bool saturated = false;
  int radius = 0;
};

/// Exact number of cosets gN with d(N, gN) < D intersecting ball(R); the
/// normality of N is spot-checked on ball conjugations first.
NormalCloseReport normalCloseCount(const SubgroupHandle& N, int D, int radius,
                                   int saturationStep = 2);

/// Executable shadows of the transfer laws. `law` is one of
/// "metric", "quotient", "intersection", "commensurability", "transitivity".
nlohmann::json checkTransferLaw(const std::string& law, const nlohmann::json& instance);

}  // namespace cosetpack

#endif  // COSETPACK_PACKING_HPP_
