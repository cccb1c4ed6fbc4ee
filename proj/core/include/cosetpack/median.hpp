//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_MEDIAN_HPP_
#define COSETPACK_MEDIAN_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cosetpack/bitset.hpp"
#include "cosetpack/errors.hpp"
#include "json.hpp"

namespace cosetpack::cube {

/// An edge Theta-class of a median graph: deleting its edges splits the
/// graph into the two halfspaces; the carrier is the set of endpoints.
struct Hyperplane {
  std::vector<std::pair<int, int>> edges;
  VertexSet side0, side1;
  VertexSet carrier;
};

struct MedianVerification {
  bool median = false;
  bool exhaustive = true;
  std::array<int, 3> counterexample{-1, -1, -1};
};

/// Finite connected simple graph with (verified) median structure. All
/// distances are precomputed; hyperplanes and the Delta-graph (vertices
/// joined when they span a common cube) are derived lazily and cached.
class MedianGraph {
 public:
  MedianGraph() = default;
  static MedianGraph fromEdges(int n, const std::vector<std::pair<int, int>>& edges);
  static MedianGraph fromJson(const nlohmann::json& j);
  nlohmann::json toJson() const;

  int vertexCount() const { return n_; }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<size_t>(v)]; }
  int dist(int u, int v) const { return dist_[static_cast<size_t>(u)][static_cast<size_t>(v)]; }
  int edgeCount() const;

  /// Exhaustive triple check up to `exhaustiveLimit` vertices; beyond that,
  /// `samples` seeded random triples with exhaustive=false in the result.
  const MedianVerification& verifyMedian(int exhaustiveLimit = 400, unsigned long long seed = 1,
                                         int samples = 200000) const;
  bool verified() const { return verification_ && verification_->median; }
  void requireVerified() const {
    if (!verified()) throw OracleRefusal("operation requires a verified median graph");
  }

  int median(int u, int v, int w) const;
  VertexSet interval(int u, int v) const;
  bool isConvex(const VertexSet& s) const;
  VertexSet hull(const VertexSet& s) const;

  const std::vector<Hyperplane>& hyperplanes() const;
  /// Number of hyperplanes separating u from v (must equal dist(u,v)).
  int separatorCount(int u, int v) const;

  /// Delta-graph: u ~ v iff they span a common cube, decided combinatorially
  /// by |interval(u,v)| == 2^dist(u,v).
  const std::vector<std::vector<int>>& deltaAdjacency() const;
  int deltaDist(int u, int v) const;
  VertexSet deltaNeighborhood(const VertexSet& s, int n) const;

  /// Lemma check: with t,u in the Delta-1-neighborhood of [r,s], every vertex
  /// of [t,u] must lie in that neighborhood as well.
  struct IntervalNeighborhoodCheck {
    bool preconditionOk = false;
    bool holds = false;
  };
  IntervalNeighborhoodCheck checkIntervalNeighborhood(int r, int s, int t, int u) const;

  /// Common vertex of pairwise-intersecting convex sets. Throws OracleRefusal
  /// naming a non-convex input; a Helly failure on a verified median graph is
  /// an internal error (logic_error).
  int helly(const std::vector<VertexSet>& sets) const;

  /// Max family of pairwise-crossing hyperplanes (the dimension of the
  /// underlying cube complex).
  int dimension() const;
  bool hyperplanesCross(int i, int j) const;

  struct HyperplanePackingReport {
    int vertex = -1;
    int crossingCount = 0;
    bool preconditionOk = false;
  };
  /// The Helly step of the hyperplane-stabilizer packing argument: given
  /// hyperplanes with pairwise Delta-close carriers, find one vertex
  /// Delta-close to all carriers and count hyperplanes crossing its ball.
  HyperplanePackingReport hyperplanePacking(const std::vector<int>& hyperplaneIds,
                                            int dPrime) const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<uint16_t>> dist_;
  mutable std::optional<MedianVerification> verification_;
  mutable std::optional<std::vector<Hyperplane>> hyperplanes_;
  mutable std::optional<std::vector<int>> edgeClass_;  // aligned with edgeList_
  mutable std::vector<std::pair<int, int>> edgeList_;
  mutable std::optional<std::vector<std::vector<int>>> deltaAdj_;
  mutable std::optional<std::vector<std::vector<uint16_t>>> deltaDist_;
};

/// Finite wallspace: walls are nontrivial bipartitions of a point set.
struct Wallspace {
  int points = 0;
  std::vector<VertexSet> side0;  // one side per wall; the other is implied

  static Wallspace fromJson(const nlohmann::json& j);
  nlohmann::json toJson() const;
  void validate() const;  // nontrivial, pairwise distinct walls
};

struct DualResult {
  MedianGraph graph;
  std::vector<uint32_t> orientations;  // bitmask per dual vertex (bit w = side1 of wall w)
  int principal = 0;                   // index of the principal orientation
};

/// Sageev dual of a finite wallspace: consistent orientations, edges between
/// orientations differing on one wall, restricted to the principal component.
DualResult dual(const Wallspace& ws);

/// The wallspace of a median graph: points = vertices, walls = halfspaces.
Wallspace walls(const MedianGraph& g);

/// Round trip dual(walls(g)) ~ g via the natural vertex->orientation map;
/// returns true iff that map is a graph isomorphism onto the dual.
bool dualRoundTripIsomorphic(const MedianGraph& g);

// Corpus generators (seeded, deterministic).
MedianGraph makePath(int n);
MedianGraph makeCycle(int n);
MedianGraph makeGrid(int rows, int cols);
MedianGraph makeHypercube(int dim);
MedianGraph randomTree(int n, unsigned long long seed);
Wallspace randomWallspace(int points, int wallCount, unsigned long long seed);

}  // namespace cosetpack::cube

#endif  // COSETPACK_MEDIAN_HPP_
