//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_GROUP_HPP_
#define COSETPACK_GROUP_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosetpack/word.hpp"
#include "json.hpp"

namespace cosetpack {

/// A group element in the canonical normal form of its backend.
/// Two elements are equal in the group iff their words are identical.
struct Element {
  Word w;
  bool operator==(const Element&) const = default;
  bool operator<(const Element& o) const { return shortlexLess(w, o.w); }
  bool isIdentity() const { return w.empty(); }
};

struct ElementHash {
  size_t operator()(const Element& e) const {
    return std::hash<Word>()(e.w);
  }
};

struct GroupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GroupKind {
  Free,
  FreeAbelian,
  Heisenberg,
  BaumslagSolitar,
  Finite,
  DirectProduct,
  FreeProduct,
  LatticeQuotient,
};

/// Exact multiplication / normal-form engine for one group. The backend is
/// the sole source of group truth: nf(w) == nf(v) iff w and v represent the
/// same element. Backends are immutable after construction.
class Group {
 public:
  virtual ~Group() = default;

  virtual GroupKind kind() const = 0;
  int rank() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Canonical normal form. The input may be any word over the alphabet.
  virtual Word normalForm(const Word& w) const = 0;

  /// True when canonical words are geodesic for the standard generators,
  /// i.e. |nf(g)| equals the word metric d_S(1,g). This is a structural
  /// property of the normal form (free and free-abelian words, shortlex
  /// words of finite groups, and their direct/free products); it is never
  /// assumed for Heisenberg or Baumslag-Solitar backends.
  virtual bool nfIsGeodesic() const { return false; }

  /// True when the group is finite; order() is then its size.
  virtual bool isFinite() const { return false; }
  virtual long long order() const { return -1; }

  /// Finite backends enumerate their elements by table index.
  virtual Element elementByOrdinal(long long) const {
    throw GroupError("backend does not enumerate elements by ordinal");
  }
  virtual long long ordinalOf(const Element&) const {
    throw GroupError("backend does not enumerate elements by ordinal");
  }

  Element nf(const Word& w) const { return Element{normalForm(w)}; }
  Element identity() const { return Element{}; }
  Element mul(const Element& a, const Element& b) const {
    return Element{normalForm(a.w + b.w)};
  }
  Element inverse(const Element& a) const {
    return Element{normalForm(wordInverse(a.w))};
  }
  Element conjugate(const Element& g, const Element& x) const {
    // g x g^-1
    return Element{normalForm(g.w + x.w + wordInverse(g.w))};
  }

  Word parse(const std::string& text) const { return parseWord(text, labels_); }
  Element parseElement(const std::string& text) const { return nf(parse(text)); }
  std::string render(const Word& w) const { return renderWord(w, labels_); }
  std::string render(const Element& e) const { return renderWord(e.w, labels_); }

  /// Build a backend from a JSON descriptor, e.g. {"kind":"free","rank":2}.
  /// Descriptors for products and quotients nest descriptors.
  static std::shared_ptr<const Group> fromJson(const nlohmann::json& spec);

 protected:
  std::vector<std::string> labels_;
  void checkLetters(const Word& w) const {
    for (char c : w) {
      if (letterGen(static_cast<Letter>(c)) >= rank()) {
        throw GroupError("letter out of range for this backend");
      }
    }
  }
};

using GroupPtr = std::shared_ptr<const Group>;

GroupPtr makeFree(int rank);
GroupPtr makeFreeAbelian(int rank);
GroupPtr makeHeisenberg();
GroupPtr makeBaumslagSolitar(long long n);
/// Row-major k*k multiplication table of element indices; index 0 need not be
/// the identity (it is located and validated). Generators default to all
/// non-identity elements.
GroupPtr makeFinite(const std::vector<std::vector<int>>& table,
                    const std::vector<int>& generators = {});
GroupPtr makeDirectProduct(GroupPtr a, GroupPtr b);
GroupPtr makeFreeProduct(GroupPtr a, GroupPtr b);

/// Accessors used by modules that need backend structure.
const class FreeProductGroup* asFreeProduct(const Group& g);
const class DirectProductGroup* asDirectProduct(const Group& g);

class DirectProductGroup : public Group {
 public:
  DirectProductGroup(GroupPtr a, GroupPtr b);
  GroupKind kind() const override { return GroupKind::DirectProduct; }
  Word normalForm(const Word& w) const override;
  bool nfIsGeodesic() const override;
  bool isFinite() const override { return a_->isFinite() && b_->isFinite(); }
  long long order() const override {
    return isFinite() ? a_->order() * b_->order() : -1;
  }

  const GroupPtr& left() const { return a_; }
  const GroupPtr& right() const { return b_; }
  int splitRank() const { return a_->rank(); }
  /// Component words in factor-local letters.
  std::pair<Word, Word> split(const Word& w) const;
  Word embedLeft(const Word& w) const;
  Word embedRight(const Word& w) const;

 private:
  GroupPtr a_, b_;
};

class FreeProductGroup : public Group {
 public:
  FreeProductGroup(GroupPtr a, GroupPtr b);
  GroupKind kind() const override { return GroupKind::FreeProduct; }
  Word normalForm(const Word& w) const override;
  bool nfIsGeodesic() const override;

  const GroupPtr& factor(int i) const { return i == 0 ? a_ : b_; }
  int splitRank() const { return a_->rank(); }
  int factorOf(Letter l) const { return letterGen(l) < a_->rank() ? 0 : 1; }

  /// Syllable decomposition of a canonical word: (factor, local word) pairs,
  /// strictly alternating factors, each local word a factor normal form.
  struct Syllable {
    int factor;
    Word local;  // in factor-local letters
  };
  std::vector<Syllable> syllables(const Word& canonical) const;
  Word embed(int factor, const Word& local) const;

 private:
  GroupPtr a_, b_;
};

}  // namespace cosetpack

#endif  // COSETPACK_GROUP_HPP_
