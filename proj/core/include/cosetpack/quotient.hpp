//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_QUOTIENT_HPP_
#define COSETPACK_QUOTIENT_HPP_

#include <functional>

#include "cosetpack/group.hpp"

namespace cosetpack {

/// A quotient backend G/N together with the projection G -> G/N.
struct Quotient {
  GroupPtr base;
  GroupPtr quotient;
  std::function<Element(const Element&)> project;
};

/// Effective quotients: free_abelian by any sublattice; free by a
/// finite-index normal closure certified by the supplied transversal;
/// direct products by a full factor. Anything else is rejected with a
/// message naming the limitation.
Quotient makeQuotient(GroupPtr base, const std::vector<Word>& normalGens,
                      const std::vector<Word>& transversal = {});

/// Hermite normal form machinery for integer row lattices (row space of the
/// generator matrix). Rows are returned in echelon form with positive pivots.
class IntLattice {
 public:
  IntLattice(int dim, std::vector<std::vector<long long>> rows);

  int dim() const { return dim_; }
  const std::vector<std::vector<long long>>& hnf() const { return hnf_; }

  bool contains(const std::vector<long long>& v) const;
  /// Canonical residue: unique representative of v + L.
  std::vector<long long> reduce(std::vector<long long> v) const;
  /// Exact closest vector in L to v under the L1 norm.
  long long l1DistanceToLattice(const std::vector<long long>& v) const;
  /// Full rank sublattices have finite index det(H); otherwise -1.
  long long indexInZn() const;

 private:
  int dim_;
  std::vector<std::vector<long long>> hnf_;
  std::vector<int> pivotCol_;
};

std::vector<long long> exponentVector(const Group& g, const Word& w);

}  // namespace cosetpack

#endif  // COSETPACK_QUOTIENT_HPP_
