//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/group.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "cosetpack/quotient.hpp"

namespace cosetpack {

namespace {

std::vector<std::string> defaultLabels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i < 26) {
      out.push_back(std::string(1, static_cast<char>('a' + i)));
    } else {
      out.push_back("g" + std::to_string(i));
    }
  }
  return out;
}

long long checkedMul(long long a, long long b, const char* what) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw GroupError(std::string("overflow in ") + what);
  return r;
}
long long checkedAdd(long long a, long long b, const char* what) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw GroupError(std::string("overflow in ") + what);
  return r;
}
long long checkedPow(long long base, int exp, const char* what) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r = checkedMul(r, base, what);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Free groups
// ---------------------------------------------------------------------------

class FreeGroup final : public Group {
 public:
  explicit FreeGroup(int rank) {
    if (rank < 1) throw GroupError("free group rank must be >= 1");
    labels_ = defaultLabels(rank);
  }
  GroupKind kind() const override { return GroupKind::Free; }
  Word normalForm(const Word& w) const override {
    checkLetters(w);
    return freeReduce(w);
  }
  bool nfIsGeodesic() const override { return true; }
};

GroupPtr makeFree(int rank) { return std::make_shared<FreeGroup>(rank); }

// ---------------------------------------------------------------------------
// Free abelian groups
// ---------------------------------------------------------------------------

class FreeAbelianGroup final : public Group {
 public:
  explicit FreeAbelianGroup(int rank) {
    if (rank < 1) throw GroupError("free abelian rank must be >= 1");
    labels_ = defaultLabels(rank);
  }
  GroupKind kind() const override { return GroupKind::FreeAbelian; }
  Word normalForm(const Word& w) const override {
    checkLetters(w);
    std::vector<long long> v(static_cast<size_t>(rank()), 0);
    for (char c : w) {
      const Letter l = static_cast<Letter>(c);
      v[static_cast<size_t>(letterGen(l))] += letterInverse(l) ? -1 : 1;
    }
    Word out;
    for (int i = 0; i < rank(); ++i) appendPower(out, i, v[static_cast<size_t>(i)]);
    return out;
  }
  bool nfIsGeodesic() const override { return true; }
};

GroupPtr makeFreeAbelian(int rank) { return std::make_shared<FreeAbelianGroup>(rank); }

// ---------------------------------------------------------------------------
// Integer Heisenberg group, generators x, y, center generated by z = xyx^-1y^-1.
// Elements are triples (a, b, c) = x^a y^b z^c with product
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
// ---------------------------------------------------------------------------

class HeisenbergGroup final : public Group {
 public:
  HeisenbergGroup() { labels_ = {"x", "y"}; }
  GroupKind kind() const override { return GroupKind::Heisenberg; }
  Word normalForm(const Word& w) const override {
    checkLetters(w);
    long long a = 0, b = 0, c = 0;
    for (char ch : w) {
      const Letter l = static_cast<Letter>(ch);
      const int s = letterInverse(l) ? -1 : 1;
      if (letterGen(l) == 0) {
        a = checkedAdd(a, s, "heisenberg");
      } else {
        // right-multiply by y^s: c += a*s
        b = checkedAdd(b, s, "heisenberg");
        c = checkedAdd(c, checkedMul(a, s, "heisenberg"), "heisenberg");
      }
    }
    Word out;
    appendPower(out, 0, a);
    appendPower(out, 1, b);
    // z^c spelled as commutator words
    const Word zPos = {static_cast<char>(letter(0)), static_cast<char>(letter(1)),
                       static_cast<char>(letter(0, true)), static_cast<char>(letter(1, true))};
    const Word zNeg = {static_cast<char>(letter(1)), static_cast<char>(letter(0)),
                       static_cast<char>(letter(1, true)), static_cast<char>(letter(0, true))};
    if (c > (1LL << 20) || c < -(1LL << 20)) throw GroupError("heisenberg normal form too large");
    for (long long i = 0; i < (c < 0 ? -c : c); ++i) out += (c > 0 ? zPos : zNeg);
    return out;
  }
};

GroupPtr makeHeisenberg() { return std::make_shared<HeisenbergGroup>(); }

// ---------------------------------------------------------------------------
// BS(1,n) = <a,t | t a t^-1 = a^n>. Element = (r, k) with r in Z[1/n], where
// a = (1,0), t = (0,1) and (r,k)(r',k') = (r + n^k r', k+k'). The affine part
// is kept as an exact fraction num / |n|^e. Canonical word: t^-p a^m t^q.
// ---------------------------------------------------------------------------

class BaumslagSolitarGroup final : public Group {
 public:
  explicit BaumslagSolitarGroup(long long n) : n_(n), nabs_(n < 0 ? -n : n) {
    if (n == 0) throw GroupError("baumslag_solitar parameter n must be nonzero");
    labels_ = {"a", "t"};
  }
  GroupKind kind() const override { return GroupKind::BaumslagSolitar; }

  Word normalForm(const Word& w) const override {
    checkLetters(w);
    long long num = 0;
    int e = 0;       // r = num / |n|^e
    long long k = 0; // t-exponent
    for (char ch : w) {
      const Letter l = static_cast<Letter>(ch);
      const int s = letterInverse(l) ? -1 : 1;
      if (letterGen(l) == 1) {
        k += s;
        continue;
      }
      // r += s * n^k
      if (k >= 0) {
        if (k > 62) throw GroupError("BS(1,n) exponent too large");
        long long term = checkedMul(static_cast<long long>(s),
                                    checkedPow(n_, static_cast<int>(k), "BS(1,n)"), "BS(1,n)");
        num = checkedAdd(num, checkedMul(term, checkedPow(nabs_, e, "BS(1,n)"), "BS(1,n)"),
                         "BS(1,n)");
      } else {
        const int j = static_cast<int>(-k);
        if (j > 62) throw GroupError("BS(1,n) exponent too large");
        const int m = std::max(e, j);
        // num/|n|^e + s*sgn(n)^k/|n|^j over the common denominator |n|^m
        long long sgn = (n_ < 0 && (j % 2 == 1)) ? -1 : 1;
        num = checkedMul(num, checkedPow(nabs_, m - e, "BS(1,n)"), "BS(1,n)");
        num = checkedAdd(num,
                         checkedMul(static_cast<long long>(s) * sgn,
                                    checkedPow(nabs_, m - j, "BS(1,n)"), "BS(1,n)"),
                         "BS(1,n)");
        e = m;
      }
      while (e > 0 && nabs_ > 1 && num % nabs_ == 0) {
        num /= nabs_;
        --e;
      }
      if (nabs_ == 1) e = 0;
    }

    // p minimal with q = k+p >= 0 and m = r * n^p integral
    long long p = std::max<long long>(e, -k);
    if (p > 62) throw GroupError("BS(1,n) exponent too large");
    long long sgn = (n_ < 0 && (p - e) % 2 == 1) ? -1 : 1;
    // m = num / |n|^e * n^p ; sign of n^p relative to |n|^(p-e) factors
    long long m = checkedMul(num, checkedPow(nabs_, static_cast<int>(p - e), "BS(1,n)"), "BS(1,n)");
    if (n_ < 0) {
      // n^p = (-1)^p |n|^p, and the e low factors were |n|; track full sign:
      long long signNp = (p % 2 == 1) ? -1 : 1;
      (void)sgn;
      m = (signNp == 1) ? m : -m;
    }
    long long q = k + p;
    if (m > (1LL << 20) || m < -(1LL << 20)) throw GroupError("BS(1,n) normal form too large");
    Word out;
    appendPower(out, 1, -p);
    appendPower(out, 0, m);
    appendPower(out, 1, q);
    return out;
  }

 private:
  long long n_, nabs_;
};

GroupPtr makeBaumslagSolitar(long long n) { return std::make_shared<BaumslagSolitarGroup>(n); }

// ---------------------------------------------------------------------------
// Finite groups from multiplication tables
// ---------------------------------------------------------------------------

class FiniteGroup final : public Group {
 public:
  FiniteGroup(const std::vector<std::vector<int>>& table, std::vector<int> gens)
      : table_(table) {
    const int k = static_cast<int>(table.size());
    if (k == 0) throw GroupError("finite table is empty");
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != k) throw GroupError("finite table is not square");
      for (int v : row) {
        if (v < 0 || v >= k) throw GroupError("finite table entry out of range");
      }
    }
    // identity
    id_ = -1;
    for (int e = 0; e < k; ++e) {
      bool ok = true;
      for (int x = 0; x < k && ok; ++x) ok = table[static_cast<size_t>(e)][static_cast<size_t>(x)] == x &&
                                             table[static_cast<size_t>(x)][static_cast<size_t>(e)] == x;
      if (ok) {
        id_ = e;
        break;
      }
    }
    if (id_ < 0) throw GroupError("finite table has no identity element");
    // inverses
    inv_.assign(static_cast<size_t>(k), -1);
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) {
        if (table[static_cast<size_t>(x)][static_cast<size_t>(y)] == id_ &&
            table[static_cast<size_t>(y)][static_cast<size_t>(x)] == id_) {
          inv_[static_cast<size_t>(x)] = y;
          break;
        }
      }
      if (inv_[static_cast<size_t>(x)] < 0) throw GroupError("finite table element without inverse");
    }
    // associativity
    for (int x = 0; x < k; ++x) {
      for (int y = 0; y < k; ++y) {
        for (int z = 0; z < k; ++z) {
          int xy = table[static_cast<size_t>(x)][static_cast<size_t>(y)];
          int yz = table[static_cast<size_t>(y)][static_cast<size_t>(z)];
          if (table[static_cast<size_t>(xy)][static_cast<size_t>(z)] !=
              table[static_cast<size_t>(x)][static_cast<size_t>(yz)]) {
            throw GroupError("finite table is not associative (not a group table)");
          }
        }
      }
    }
    if (gens.empty()) {
      for (int x = 0; x < k; ++x) {
        if (x != id_) gens.push_back(x);
      }
      if (gens.empty()) gens.push_back(id_);  // trivial group
    }
    for (int g : gens) {
      if (g < 0 || g >= k) throw GroupError("finite generator index out of range");
    }
    gens_ = gens;
    labels_.clear();
    for (int g : gens_) labels_.push_back("g" + std::to_string(g));

    // shortlex-minimal words by BFS in generator-letter order
    canon_.assign(static_cast<size_t>(k), Word());
    std::vector<bool> seen(static_cast<size_t>(k), false);
    std::deque<int> queue;
    seen[static_cast<size_t>(id_)] = true;
    queue.push_back(id_);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int li = 0; li < 2 * static_cast<int>(gens_.size()); ++li) {
        const Letter l = static_cast<Letter>(li);
        int gElem = gens_[static_cast<size_t>(letterGen(l))];
        if (letterInverse(l)) gElem = inv_[static_cast<size_t>(gElem)];
        int u = table_[static_cast<size_t>(v)][static_cast<size_t>(gElem)];
        if (!seen[static_cast<size_t>(u)]) {
          seen[static_cast<size_t>(u)] = true;
          canon_[static_cast<size_t>(u)] = canon_[static_cast<size_t>(v)] + static_cast<char>(l);
          queue.push_back(u);
        }
      }
    }
    for (int x = 0; x < k; ++x) {
      if (!seen[static_cast<size_t>(x)]) {
        throw GroupError("finite generators do not generate the whole group");
      }
    }
  }

  GroupKind kind() const override { return GroupKind::Finite; }
  bool isFinite() const override { return true; }
  long long order() const override { return static_cast<long long>(table_.size()); }
  bool nfIsGeodesic() const override { return true; }
  Element elementByOrdinal(long long i) const override {
    return Element{canon_.at(static_cast<size_t>(i))};
  }
  long long ordinalOf(const Element& e) const override { return evaluate(e.w); }

  int evaluate(const Word& w) const {
    int v = id_;
    for (char ch : w) {
      const Letter l = static_cast<Letter>(ch);
      int gElem = gens_.at(static_cast<size_t>(letterGen(l)));
      if (letterInverse(l)) gElem = inv_[static_cast<size_t>(gElem)];
      v = table_[static_cast<size_t>(v)][static_cast<size_t>(gElem)];
    }
    return v;
  }

  Word normalForm(const Word& w) const override {
    checkLetters(w);
    return canon_[static_cast<size_t>(evaluate(w))];
  }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> gens_;
  std::vector<int> inv_;
  std::vector<Word> canon_;
  int id_ = 0;
};

GroupPtr makeFinite(const std::vector<std::vector<int>>& table, const std::vector<int>& generators) {
  return std::make_shared<FiniteGroup>(table, generators);
}

// ---------------------------------------------------------------------------
// Direct products
// ---------------------------------------------------------------------------

namespace {
std::vector<std::string> productLabels(const Group& a, const Group& b) {
  std::vector<std::string> out = a.labels();
  out.insert(out.end(), b.labels().begin(), b.labels().end());
  std::set<std::string> uniq(out.begin(), out.end());
  if (uniq.size() != out.size()) return defaultLabels(static_cast<int>(out.size()));
  return out;
}
}  // namespace

DirectProductGroup::DirectProductGroup(GroupPtr a, GroupPtr b) : a_(std::move(a)), b_(std::move(b)) {
  labels_ = productLabels(*a_, *b_);
}

std::pair<Word, Word> DirectProductGroup::split(const Word& w) const {
  Word left, right;
  const int r = a_->rank();
  for (char ch : w) {
    const Letter l = static_cast<Letter>(ch);
    if (letterGen(l) < r) {
      left.push_back(ch);
    } else {
      right.push_back(static_cast<char>(letter(letterGen(l) - r, letterInverse(l))));
    }
  }
  return {left, right};
}

Word DirectProductGroup::embedLeft(const Word& w) const { return w; }

Word DirectProductGroup::embedRight(const Word& w) const {
  Word out;
  const int r = a_->rank();
  for (char ch : w) {
    const Letter l = static_cast<Letter>(ch);
    out.push_back(static_cast<char>(letter(letterGen(l) + r, letterInverse(l))));
  }
  return out;
}

Word DirectProductGroup::normalForm(const Word& w) const {
  checkLetters(w);
  auto [left, right] = split(w);
  return embedLeft(a_->normalForm(left)) + embedRight(b_->normalForm(right));
}

bool DirectProductGroup::nfIsGeodesic() const { return a_->nfIsGeodesic() && b_->nfIsGeodesic(); }

GroupPtr makeDirectProduct(GroupPtr a, GroupPtr b) {
  return std::make_shared<DirectProductGroup>(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Free products; canonical words concatenate alternating factor syllables.
// ---------------------------------------------------------------------------

FreeProductGroup::FreeProductGroup(GroupPtr a, GroupPtr b) : a_(std::move(a)), b_(std::move(b)) {
  labels_ = productLabels(*a_, *b_);
}

Word FreeProductGroup::embed(int factor, const Word& local) const {
  if (factor == 0) return local;
  Word out;
  const int r = a_->rank();
  for (char ch : local) {
    const Letter l = static_cast<Letter>(ch);
    out.push_back(static_cast<char>(letter(letterGen(l) + r, letterInverse(l))));
  }
  return out;
}

Word FreeProductGroup::normalForm(const Word& w) const {
  checkLetters(w);
  const int r = a_->rank();
  struct Frame {
    int factor;
    Word local;  // factor-local canonical word
  };
  std::vector<Frame> stack;
  size_t i = 0;
  while (i < w.size()) {
    // maximal run of letters from one factor
    const int f = letterGen(static_cast<Letter>(w[i])) < r ? 0 : 1;
    Word run;
    while (i < w.size() && (letterGen(static_cast<Letter>(w[i])) < r ? 0 : 1) == f) {
      const Letter l = static_cast<Letter>(w[i]);
      run.push_back(static_cast<char>(f == 0 ? l : letter(letterGen(l) - r, letterInverse(l))));
      ++i;
    }
    if (!stack.empty() && stack.back().factor == f) {
      stack.back().local = factor(f)->normalForm(stack.back().local + run);
    } else {
      stack.push_back({f, factor(f)->normalForm(run)});
    }
    if (stack.back().local.empty()) stack.pop_back();
  }
  Word out;
  for (const auto& fr : stack) out += embed(fr.factor, fr.local);
  return out;
}

bool FreeProductGroup::nfIsGeodesic() const { return a_->nfIsGeodesic() && b_->nfIsGeodesic(); }

std::vector<FreeProductGroup::Syllable> FreeProductGroup::syllables(const Word& canonical) const {
  std::vector<Syllable> out;
  const int r = a_->rank();
  for (char ch : canonical) {
    const Letter l = static_cast<Letter>(ch);
    const int f = letterGen(l) < r ? 0 : 1;
    const Letter local = f == 0 ? l : letter(letterGen(l) - r, letterInverse(l));
    if (out.empty() || out.back().factor != f) out.push_back({f, Word()});
    out.back().local.push_back(static_cast<char>(local));
  }
  return out;
}

GroupPtr makeFreeProduct(GroupPtr a, GroupPtr b) {
  return std::make_shared<FreeProductGroup>(std::move(a), std::move(b));
}

const FreeProductGroup* asFreeProduct(const Group& g) {
  return dynamic_cast<const FreeProductGroup*>(&g);
}
const DirectProductGroup* asDirectProduct(const Group& g) {
  return dynamic_cast<const DirectProductGroup*>(&g);
}

// ---------------------------------------------------------------------------
// JSON descriptors
// ---------------------------------------------------------------------------

GroupPtr Group::fromJson(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw GroupError("backend descriptor must be an object with a \"kind\"");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "free") return makeFree(spec.at("rank").get<int>());
  if (kind == "free_abelian") return makeFreeAbelian(spec.at("rank").get<int>());
  if (kind == "heisenberg") return makeHeisenberg();
  if (kind == "baumslag_solitar") return makeBaumslagSolitar(spec.at("n").get<long long>());
  if (kind == "finite") {
    const auto& t = spec.at("table");
    std::vector<std::vector<int>> table;
    if (!t.empty() && t.at(0).is_array()) {
      table = t.get<std::vector<std::vector<int>>>();
    } else {
      // flat row-major
      std::vector<int> flat = t.get<std::vector<int>>();
      size_t k = 0;
      while (k * k < flat.size()) ++k;
      if (k * k != flat.size()) throw GroupError("flat finite table length is not a square");
      table.resize(k, std::vector<int>(k));
      for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) table[i][j] = flat[i * k + j];
      }
    }
    std::vector<int> gens;
    if (spec.contains("generators")) gens = spec.at("generators").get<std::vector<int>>();
    return makeFinite(table, gens);
  }
  if (kind == "direct_product" || kind == "free_product") {
    const auto& f = spec.at("factors");
    if (!f.is_array() || f.size() != 2) throw GroupError("product descriptor needs two factors");
    auto a = fromJson(f.at(0));
    auto b = fromJson(f.at(1));
    return kind == "direct_product" ? makeDirectProduct(a, b) : makeFreeProduct(a, b);
  }
  if (kind == "quotient") {
    auto base = fromJson(spec.at("base"));
    std::vector<Word> gens;
    for (const auto& s : spec.at("normal_generators")) gens.push_back(base->parse(s.get<std::string>()));
    std::vector<Word> transversal;
    if (spec.contains("transversal")) {
      for (const auto& s : spec.at("transversal")) transversal.push_back(base->parse(s.get<std::string>()));
    }
    return makeQuotient(base, gens, transversal).quotient;
  }
  throw GroupError("unknown backend kind '" + kind + "'");
}

}  // namespace cosetpack
