//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/quotient.hpp"

#include <algorithm>
#include <set>

#include "cosetpack/stallings.hpp"

namespace cosetpack {

namespace {

long long fdiv(long long a, long long b) {
  // floor division, b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

}  // namespace

std::vector<long long> exponentVector(const Group& g, const Word& w) {
  std::vector<long long> v(static_cast<size_t>(g.rank()), 0);
  for (char c : w) {
    const Letter l = static_cast<Letter>(c);
    v[static_cast<size_t>(letterGen(l))] += letterInverse(l) ? -1 : 1;
  }
  return v;
}

// ---------------------------------------------------------------------------
// IntLattice
// ---------------------------------------------------------------------------

IntLattice::IntLattice(int dim, std::vector<std::vector<long long>> rows) : dim_(dim) {
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim) throw GroupError("lattice row has wrong dimension");
  }
  // integer row echelon (Hermite normal form)
  size_t row = 0;
  for (int col = 0; col < dim && row < rows.size(); ++col) {
    // gcd elimination in this column among rows >= row
    while (true) {
      size_t pivot = rows.size();
      for (size_t i = row; i < rows.size(); ++i) {
        if (rows[i][static_cast<size_t>(col)] != 0 &&
            (pivot == rows.size() ||
             std::llabs(rows[i][static_cast<size_t>(col)]) <
                 std::llabs(rows[pivot][static_cast<size_t>(col)]))) {
          pivot = i;
        }
      }
      if (pivot == rows.size()) break;  // column clear
      std::swap(rows[row], rows[pivot]);
      bool reducedAny = false;
      for (size_t i = row + 1; i < rows.size(); ++i) {
        if (rows[i][static_cast<size_t>(col)] == 0) continue;
        long long q = rows[i][static_cast<size_t>(col)] / rows[row][static_cast<size_t>(col)];
        for (int j = 0; j < dim; ++j) rows[i][static_cast<size_t>(j)] -= q * rows[row][static_cast<size_t>(j)];
        if (rows[i][static_cast<size_t>(col)] != 0) reducedAny = true;
      }
      if (!reducedAny) {
        if (rows[row][static_cast<size_t>(col)] < 0) {
          for (int j = 0; j < dim; ++j) rows[row][static_cast<size_t>(j)] = -rows[row][static_cast<size_t>(j)];
        }
        // reduce the entries above the pivot
        for (size_t i = 0; i < row; ++i) {
          long long q = fdiv(rows[i][static_cast<size_t>(col)], rows[row][static_cast<size_t>(col)]);
          if (q != 0) {
            for (int j = 0; j < dim; ++j) rows[i][static_cast<size_t>(j)] -= q * rows[row][static_cast<size_t>(j)];
          }
        }
        pivotCol_.push_back(col);
        ++row;
        break;
      }
    }
  }
  rows.resize(row);
  hnf_ = std::move(rows);
}

std::vector<long long> IntLattice::reduce(std::vector<long long> v) const {
  for (size_t i = 0; i < hnf_.size(); ++i) {
    const int col = pivotCol_[i];
    long long q = fdiv(v[static_cast<size_t>(col)], hnf_[i][static_cast<size_t>(col)]);
    if (q != 0) {
      for (int j = 0; j < dim_; ++j) v[static_cast<size_t>(j)] -= q * hnf_[i][static_cast<size_t>(j)];
    }
  }
  return v;
}

bool IntLattice::contains(const std::vector<long long>& v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](long long x) { return x == 0; });
}

long long IntLattice::indexInZn() const {
  if (static_cast<int>(hnf_.size()) != dim_) return -1;
  long long det = 1;
  for (size_t i = 0; i < hnf_.size(); ++i) det *= hnf_[i][static_cast<size_t>(pivotCol_[i])];
  return det;
}

long long IntLattice::l1DistanceToLattice(const std::vector<long long>& v) const {
  long long best = 0;
  for (long long x : v) best += std::llabs(x);  // u = 0
  if (hnf_.empty() || best == 0) return best;

  const size_t k = hnf_.size();
  std::vector<long long> residual = v;  // v - sum c_i h_i so far
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == k) {
      long long cost = 0;
      for (long long x : residual) cost += std::llabs(x);
      best = std::min(best, cost);
      return;
    }
    // columns before this pivot are fixed from here on
    long long fixed = 0;
    for (int j = 0; j < pivotCol_[i]; ++j) fixed += std::llabs(residual[static_cast<size_t>(j)]);
    if (fixed >= best) return;
    const long long p = hnf_[i][static_cast<size_t>(pivotCol_[i])];
    const long long r = residual[static_cast<size_t>(pivotCol_[i])];
    // need |r - c*p| <= best for any improvement
    long long lo = fdiv(r - best, p), hi = fdiv(r + best, p) + 1;
    for (long long c = lo; c <= hi; ++c) {
      if (c != 0) {
        for (int j = 0; j < dim_; ++j) residual[static_cast<size_t>(j)] -= c * hnf_[i][static_cast<size_t>(j)];
      }
      rec(i + 1);
      if (c != 0) {
        for (int j = 0; j < dim_; ++j) residual[static_cast<size_t>(j)] += c * hnf_[i][static_cast<size_t>(j)];
      }
    }
  };
  rec(0);
  return best;
}

// ---------------------------------------------------------------------------
// Lattice quotient backend (free_abelian modulo a sublattice)
// ---------------------------------------------------------------------------

class LatticeQuotientGroup final : public Group {
 public:
  LatticeQuotientGroup(int rank, IntLattice lattice, std::vector<std::string> labels)
      : lattice_(std::move(lattice)) {
    labels_ = std::move(labels);
    (void)rank;
  }
  GroupKind kind() const override { return GroupKind::LatticeQuotient; }
  Word normalForm(const Word& w) const override {
    checkLetters(w);
    auto v = lattice_.reduce(exponentVector(*this, w));
    Word out;
    for (int i = 0; i < rank(); ++i) appendPower(out, i, v[static_cast<size_t>(i)]);
    return out;
  }
  bool isFinite() const override { return lattice_.indexInZn() > 0; }
  long long order() const override { return lattice_.indexInZn(); }
  const IntLattice& lattice() const { return lattice_; }

 private:
  IntLattice lattice_;
};

// ---------------------------------------------------------------------------
// makeQuotient
// ---------------------------------------------------------------------------

namespace {

Quotient quotientOfFreeAbelian(GroupPtr base, const std::vector<Word>& normalGens) {
  std::vector<std::vector<long long>> rows;
  for (const Word& g : normalGens) rows.push_back(exponentVector(*base, g));
  auto q = std::make_shared<LatticeQuotientGroup>(base->rank(), IntLattice(base->rank(), rows),
                                                  base->labels());
  Quotient out;
  out.base = base;
  out.quotient = q;
  out.project = [q](const Element& e) { return q->nf(e.w); };
  return out;
}

Quotient quotientOfFree(GroupPtr base, const std::vector<Word>& normalGens,
                        const std::vector<Word>& transversal) {
  if (transversal.empty()) {
    throw GroupError(
        "quotient of a free backend needs a finite transversal of the normal closure "
        "(field \"transversal\")");
  }
  const int rank = base->rank();
  std::vector<Word> conjugated;
  for (const Word& t : transversal) {
    Word tr = freeReduce(t);
    for (const Word& g : normalGens) {
      conjugated.push_back(freeReduce(tr + freeReduce(g) + wordInverse(tr)));
    }
  }
  auto cover = stallings::CoreGraph::fold(rank, conjugated);
  // complete covering: every letter defined at every vertex
  for (int v = 0; v < cover.vertexCount(); ++v) {
    for (int l = 0; l < 2 * rank; ++l) {
      if (cover.target(v, static_cast<Letter>(l)) < 0) {
        throw GroupError(
            "quotient rejected: the conjugates of the normal generators over the given "
            "transversal do not generate a finite-index subgroup");
      }
    }
  }
  // normality certificate: every normal generator loops at every vertex
  for (int v = 0; v < cover.vertexCount(); ++v) {
    for (const Word& g : normalGens) {
      if (cover.trace(v, freeReduce(g)) != v) {
        throw GroupError(
            "quotient rejected: the transversal does not close the normal closure "
            "(a normal generator fails to stabilize a coset)");
      }
    }
  }
  // the transversal must hit each coset exactly once
  std::set<int> hit;
  for (const Word& t : transversal) hit.insert(cover.trace(0, freeReduce(t)));
  if (static_cast<int>(hit.size()) != cover.vertexCount() ||
      static_cast<int>(transversal.size()) != cover.vertexCount()) {
    throw GroupError("quotient rejected: the given transversal is not a transversal (size " +
                     std::to_string(transversal.size()) + ", index " +
                     std::to_string(cover.vertexCount()) + ")");
  }

  // finite quotient: elements are cosets (vertices), multiplication by tracing
  const int n = cover.vertexCount();
  std::vector<Word> repOf(static_cast<size_t>(n));
  for (const Word& t : transversal) repOf[static_cast<size_t>(cover.trace(0, freeReduce(t)))] = freeReduce(t);
  std::vector<std::vector<int>> table(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table[static_cast<size_t>(i)][static_cast<size_t>(j)] =
        cover.trace(i, repOf[static_cast<size_t>(j)]);
  }
  std::vector<int> gens;
  for (int g = 0; g < rank; ++g) {
    int img = cover.trace(0, Word(1, static_cast<char>(letter(g))));
    if (img != 0 && std::find(gens.begin(), gens.end(), img) == gens.end()) gens.push_back(img);
  }
  auto q = makeFinite(table, gens);
  Quotient out;
  out.base = base;
  out.quotient = q;
  auto coverPtr = std::make_shared<stallings::CoreGraph>(std::move(cover));
  out.project = [q, coverPtr](const Element& e) {
    return q->elementByOrdinal(coverPtr->trace(0, freeReduce(e.w)));
  };
  return out;
}

}  // namespace

Quotient makeQuotient(GroupPtr base, const std::vector<Word>& normalGens,
                      const std::vector<Word>& transversal) {
  switch (base->kind()) {
    case GroupKind::FreeAbelian:
      return quotientOfFreeAbelian(base, normalGens);
    case GroupKind::Free:
      return quotientOfFree(base, normalGens, transversal);
    case GroupKind::DirectProduct: {
      const auto* dp = asDirectProduct(*base);
      // every normal generator must be a single letter, all in one factor,
      // together covering that factor's generators
      int factor = -1;
      std::set<int> covered;
      for (const Word& g : normalGens) {
        Word nf = base->normalForm(g);
        if (nf.size() != 1) {
          throw GroupError(
              "quotient of a direct product is supported only by a full factor "
              "(normal generators must be single factor letters)");
        }
        const Letter l = static_cast<Letter>(nf[0]);
        int f = letterGen(l) < dp->splitRank() ? 0 : 1;
        if (factor >= 0 && f != factor) {
          throw GroupError("quotient of a direct product: normal generators span both factors");
        }
        factor = f;
        covered.insert(f == 0 ? letterGen(l) : letterGen(l) - dp->splitRank());
      }
      const GroupPtr killed = factor == 0 ? dp->left() : dp->right();
      const GroupPtr kept = factor == 0 ? dp->right() : dp->left();
      if (factor < 0 || static_cast<int>(covered.size()) != killed->rank()) {
        throw GroupError(
            "quotient of a direct product is supported only by a full factor "
            "(the normal generators must cover all generators of one factor)");
      }
      Quotient out;
      out.base = base;
      out.quotient = kept;
      const int split = dp->splitRank();
      const bool dropLeft = factor == 0;
      out.project = [kept, split, dropLeft](const Element& e) {
        Word w;
        for (char c : e.w) {
          const Letter l = static_cast<Letter>(c);
          const bool isLeft = letterGen(l) < split;
          if (isLeft == dropLeft) continue;
          w.push_back(static_cast<char>(dropLeft ? letter(letterGen(l) - split, letterInverse(l))
                                                 : l));
        }
        return kept->nf(w);
      };
      return out;
    }
    default:
      throw GroupError(
          "unsupported quotient kind: effective quotients exist for free_abelian (any "
          "sublattice), free (finite-index normal closure with a transversal), and "
          "direct_product (by a full factor)");
  }
}

}  // namespace cosetpack
