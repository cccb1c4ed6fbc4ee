//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_SUBGROUP_HPP_
#define COSETPACK_SUBGROUP_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>

#include "cosetpack/ball.hpp"
#include "cosetpack/group.hpp"
#include "cosetpack/quotient.hpp"
#include "cosetpack/stallings.hpp"

namespace cosetpack {

/// Membership oracle kinds, in decreasing strength:
///  - stallings: free backends; exact via the folded core graph
///  - lattice:   free_abelian backends; exact via integer row reduction
///  - table:     finite backends; exact via subgroup closure
///  - enumerative: fallback; membership decided only within a stated ball,
///    carries an honesty flag (exactMembership() == false)
enum class OracleKind { Stallings, Lattice, Table, Enumerative };

class SubgroupHandle {
 public:
  static SubgroupHandle make(GroupPtr group, std::vector<Word> generators,
                             int enumerationRadius = 12);

  const GroupPtr& group() const { return group_; }
  const std::vector<Word>& generators() const { return gens_; }
  OracleKind oracle() const { return oracle_; }
  bool exactMembership() const { return oracle_ != OracleKind::Enumerative; }
  int enumerationRadius() const { return enumRadius_; }

  /// Free-product refinements of the enumerative oracle: subgroups of a
  /// single factor admit exact syllable-split coset distances; cyclic
  /// subgroups with a length-homogeneous generator get windowed sweeps.
  enum class FpKind { None, FactorLattice, FactorFree, FactorFinite, Cyclic };
  FpKind fpKind() const { return fpKind_; }
  /// d(H, dH) for free-product subgroups; nullopt when not applicable.
  std::optional<DistanceCert> fpCosetDistance(const Element& d) const;

  bool member(const Element& e) const;
  bool sameCoset(const Element& a, const Element& b) const;

  /// Canonical key of the left coset gH; exact for every oracle kind
  /// (enumerative keys are the shortlex-minimal coset element over the
  /// membership window).
  long long cosetKey(const Element& g) const;

  /// Subgroup elements with canonical-word length <= bound (closure search;
  /// complete for exact oracles restricted to the bound, best-effort for
  /// enumerative ones).
  std::vector<Element> elementsUpTo(int bound) const;

  // oracle internals
  const stallings::CoreGraph* core() const { return core_ ? &*core_ : nullptr; }
  const IntLattice* lattice() const { return lattice_ ? &*lattice_ : nullptr; }
  const std::vector<Element>* tableElements() const {
    return tableElems_ ? &*tableElems_ : nullptr;
  }
  const std::set<Element>* enumeratedElements() const {
    return enumElems_ ? &*enumElems_ : nullptr;
  }

  std::string describe() const;

 private:
  GroupPtr group_;
  std::vector<Word> gens_;
  OracleKind oracle_ = OracleKind::Enumerative;
  int enumRadius_ = 0;

  std::optional<stallings::CoreGraph> core_;
  std::shared_ptr<stallings::SchreierOracle> schreier_;
  std::optional<IntLattice> lattice_;
  mutable std::map<std::vector<long long>, long long> latticeKeys_;
  std::optional<std::vector<Element>> tableElems_;  // sorted subgroup elements
  std::optional<std::set<Element>> enumElems_;
  mutable std::map<Word, long long> enumKeys_;  // min coset element -> key

  FpKind fpKind_ = FpKind::None;
  int fpFactor_ = 0;
  std::optional<IntLattice> fpLattice_;           // FactorLattice
  std::optional<stallings::CoreGraph> fpCore_;    // FactorFree
  std::optional<std::vector<Element>> fpFinite_;  // FactorFinite, factor-local closure
  Element fpCyclicGen_;                           // Cyclic
};

}  // namespace cosetpack

#endif  // COSETPACK_SUBGROUP_HPP_
