//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_STALLINGS_HPP_
#define COSETPACK_STALLINGS_HPP_

#include <mutex>
#include <optional>
#include <vector>

#include "cosetpack/group.hpp"
#include "json.hpp"

namespace cosetpack::stallings {

/// Folded core graph of a finitely generated subgroup of a free group.
/// Vertices are 0..n-1 with basepoint 0, renumbered by BFS in letter order so
/// equal subgroups produce identical graphs. Edges are deterministic: at most
/// one out-edge and one in-edge per letter per vertex. The reduced words that
/// trace basepoint-to-basepoint loops are exactly the subgroup elements.
class CoreGraph {
 public:
  CoreGraph() = default;

  /// Fold the wedge of the given generator words (reduced first).
  static CoreGraph fold(int rank, const std::vector<Word>& generators);

  int rank() const { return rank_; }
  int vertexCount() const { return static_cast<int>(adj_.size()); }
  int basepoint() const { return 0; }

  /// Target of the edge labelled l at v, or -1.
  int target(int v, Letter l) const { return adj_[static_cast<size_t>(v)][l]; }

  /// Trace a reduced word from a vertex; -1 if it falls off the graph.
  int trace(int from, const Word& reduced) const;

  /// Membership: does the freely reduced form of w trace a basepoint loop?
  bool member(const Word& w) const;

  int edgeCount() const;                    // geometric edges
  int firstBetti() const;                   // rank of the subgroup
  bool trivial() const { return edgeCount() == 0; }

  /// Max graph distance from the basepoint (the quasiconvexity constant
  /// kappa used for free groups).
  int diameterFromBase() const;

  /// Shortlex-minimal path word from the basepoint to each vertex.
  std::vector<Word> vertexWords() const;

  /// Core with the basepoint spur pruned as well (every vertex degree >= 2).
  /// Used by the finite-index (covering) test.
  CoreGraph strictCore() const;

  /// Degree of a vertex counting both edge ends of a loop.
  int degree(int v) const;

  nlohmann::json toJson() const;
  static CoreGraph fromJson(const nlohmann::json& j);

  /// Assemble from a raw deterministic adjacency table (adj[v][letter]).
  static CoreGraph raw(int rank, std::vector<std::vector<int>> adj);

  bool operator==(const CoreGraph&) const = default;

 private:
  int rank_ = 0;
  // adj_[v][letter]; letter in [0, 2*rank)
  std::vector<std::vector<int>> adj_;
};

/// Shortest element of the double coset H g K together with its length.
/// The length is the exact coset distance d(H, gK) in the tree.
struct ShortestDouble {
  Word element;
  int length = 0;
};
ShortestDouble doubleCosetShortest(const CoreGraph& coreH, const Word& g, const CoreGraph& coreK);

/// One double coset HgK discovered by the fiber product, with the core graph
/// of H ∩ gKg^-1 rebased at the identity.
struct DoubleCosetEntry {
  Word representative;
  CoreGraph intersection;
  int rank = 0;
  int shortestLength = 0;
};

struct DoubleCosetReport {
  std::vector<DoubleCosetEntry> entries;
  nlohmann::json toJson(const Group& g) const;
};

/// Components of the labelled fiber product of the two cores; one entry per
/// component. Every double coset HgK with H ∩ gKg^-1 nontrivial appears.
DoubleCosetReport fiberProduct(const CoreGraph& coreH, const CoreGraph& coreK);

/// Batched double-coset lengths for one pair of cores. Tracing w into the
/// cores from both ends leaves a bridge path between them, so the shortest
/// element of HwK has length distH(base, v) + |middle| + distK(u, base);
/// the rare fully-absorbed case falls back to the folded automaton. Exact.
class DoubleCosetOracle {
 public:
  DoubleCosetOracle(const CoreGraph& coreH, const CoreGraph& coreK);
  int length(const Word& reduced) const;

 private:
  const CoreGraph &h_, &k_;
  std::vector<int> distH_, distK_;  // distance to the basepoint
};

/// Core graph of H ∩ gHg^-1 (based at the identity).
CoreGraph conjugateIntersection(const CoreGraph& core, const Word& g);

/// Is sub of finite index in sup? Decided by the covering criterion: the
/// immersion strictCore(sub) -> strictCore(sup) must be a surjective covering.
/// Requires sub <= sup (the immersion exists). Returns the index, or -1.
long long finiteIndex(const CoreGraph& sub, const CoreGraph& sup);

struct Completeness {
  bool exact = false;
  int search_bound = 0;
  std::string note;
};

struct HeightWidthReport {
  int height = -1;
  int width = -1;
  std::vector<Word> heightWitness;  // coset representatives
  std::vector<Word> widthWitness;
  Completeness completeness;
  nlohmann::json toJson(const Group& g) const;
};

/// Exact height by recursive descent over fiber-product double cosets;
/// terminates by the strict height decrease of nested conjugate intersections.
HeightWidthReport height(const CoreGraph& core);

/// Width by exhaustive sweep over coset representatives of length <=
/// search_bound, candidate pairs confined to coset distance <= C0 =
/// 2*diameterFromBase + 2. Soundness of the witness is always exact;
/// completeness is flagged exact iff search_bound >= C0.
HeightWidthReport width(const CoreGraph& core, int searchBound);

/// All g with |g| <= R such that H ∩ gHg^-1 has finite index in both H and
/// gHg^-1 (the commensurator elements in the R-ball).
std::vector<Word> commensuratorBall(const CoreGraph& core, int radius);

/// Distinct coset representatives gH for all reduced |g| <= bound,
/// shortlex-minimal per coset, in shortlex order.
std::vector<Word> cosetSweep(const CoreGraph& core, int bound);

/// Lazily grown coset automaton for right cosets H\F. Exact: two reduced
/// words reach the same state iff they lie in the same right coset. Left
/// cosets gH are keyed by the state of g^-1. Thread-safe.
class SchreierOracle {
 public:
  explicit SchreierOracle(const CoreGraph& core);
  int stateOf(const Word& reduced);
  long long leftCosetKey(const Word& reducedRep);

 private:
  int rank_;
  std::vector<std::vector<int>> adj_;
  std::mutex mu_;
};

}  // namespace cosetpack::stallings

#endif  // COSETPACK_STALLINGS_HPP_
