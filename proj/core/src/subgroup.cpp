//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "cosetpack/errors.hpp"

namespace cosetpack {

SubgroupHandle SubgroupHandle::make(GroupPtr group, std::vector<Word> generators,
                                    int enumerationRadius) {
  SubgroupHandle h;
  h.group_ = std::move(group);
  h.gens_ = std::move(generators);
  h.enumRadius_ = enumerationRadius;
  switch (h.group_->kind()) {
    case GroupKind::Free: {
      h.oracle_ = OracleKind::Stallings;
      h.core_ = stallings::CoreGraph::fold(h.group_->rank(), h.gens_);
      h.schreier_ = std::make_shared<stallings::SchreierOracle>(*h.core_);
      break;
    }
    case GroupKind::FreeAbelian: {
      h.oracle_ = OracleKind::Lattice;
      std::vector<std::vector<long long>> rows;
      for (const Word& g : h.gens_) rows.push_back(exponentVector(*h.group_, g));
      h.lattice_.emplace(h.group_->rank(), rows);
      break;
    }
    case GroupKind::Finite: {
      h.oracle_ = OracleKind::Table;
      std::set<Element> closure{h.group_->identity()};
      std::deque<Element> queue{h.group_->identity()};
      std::vector<Element> genElems;
      for (const Word& g : h.gens_) {
        genElems.push_back(h.group_->nf(g));
        genElems.push_back(h.group_->inverse(genElems.back()));
      }
      while (!queue.empty()) {
        Element cur = queue.front();
        queue.pop_front();
        for (const Element& g : genElems) {
          Element next = h.group_->mul(cur, g);
          if (closure.insert(next).second) queue.push_back(next);
        }
      }
      h.tableElems_.emplace(closure.begin(), closure.end());
      break;
    }
    default: {
      h.oracle_ = OracleKind::Enumerative;
      if (const auto* fp = asFreeProduct(*h.group_)) {
        // classify the subgroup against the free-product structure
        std::vector<Element> genElems;
        for (const Word& g : h.gens_) {
          Element e = h.group_->nf(g);
          if (!e.isIdentity()) genElems.push_back(e);
        }
        int factor = -1;
        bool singleFactor = !genElems.empty();
        for (const Element& e : genElems) {
          auto syl = fp->syllables(e.w);
          if (syl.size() != 1 || (factor >= 0 && syl[0].factor != factor)) {
            singleFactor = false;
            break;
          }
          factor = syl[0].factor;
        }
        if (singleFactor) {
          h.fpFactor_ = factor;
          const Group& fac = *fp->factor(factor);
          std::vector<Word> local;
          for (const Element& e : genElems) local.push_back(fp->syllables(e.w)[0].local);
          if (fac.kind() == GroupKind::FreeAbelian) {
            h.fpKind_ = FpKind::FactorLattice;
            std::vector<std::vector<long long>> rows;
            for (const Word& w : local) rows.push_back(exponentVector(fac, w));
            h.fpLattice_.emplace(fac.rank(), rows);
          } else if (fac.kind() == GroupKind::Free) {
            h.fpKind_ = FpKind::FactorFree;
            h.fpCore_ = stallings::CoreGraph::fold(fac.rank(), local);
          } else if (fac.isFinite()) {
            h.fpKind_ = FpKind::FactorFinite;
            std::set<Element> cl{fac.identity()};
            std::deque<Element> q{fac.identity()};
            while (!q.empty()) {
              Element cur = q.front();
              q.pop_front();
              for (const Word& w : local) {
                for (const Element& step : {fac.nf(w), fac.inverse(fac.nf(w))}) {
                  Element next = fac.mul(cur, step);
                  if (cl.insert(next).second) q.push_back(next);
                }
              }
            }
            h.fpFinite_.emplace(cl.begin(), cl.end());
          }
        } else if (genElems.size() == 1 && fp->syllables(genElems[0].w).size() >= 2) {
          // length-homogeneous cyclic generator: |g^2| = 2|g|
          Element sq = h.group_->mul(genElems[0], genElems[0]);
          if (sq.w.size() == 2 * genElems[0].w.size()) {
            h.fpKind_ = FpKind::Cyclic;
            h.fpCyclicGen_ = genElems[0];
          }
        }
      }
      std::set<Element> closure{h.group_->identity()};
      std::deque<Element> queue{h.group_->identity()};
      std::vector<Element> genElems;
      for (const Word& g : h.gens_) {
        genElems.push_back(h.group_->nf(g));
        genElems.push_back(h.group_->inverse(genElems.back()));
      }
      while (!queue.empty()) {
        Element cur = queue.front();
        queue.pop_front();
        for (const Element& g : genElems) {
          Element next = h.group_->mul(cur, g);
          if (static_cast<int>(next.w.size()) > h.enumRadius_) continue;
          if (closure.insert(next).second) queue.push_back(next);
        }
      }
      h.enumElems_ = std::move(closure);
      break;
    }
  }
  return h;
}

bool SubgroupHandle::member(const Element& e) const {
  switch (oracle_) {
    case OracleKind::Stallings:
      return core_->member(e.w);
    case OracleKind::Lattice:
      return lattice_->contains(exponentVector(*group_, e.w));
    case OracleKind::Table:
      return std::binary_search(tableElems_->begin(), tableElems_->end(), e,
                                [](const Element& a, const Element& b) { return a < b; });
    case OracleKind::Enumerative:
      return enumElems_->count(e) > 0;
  }
  return false;
}

bool SubgroupHandle::sameCoset(const Element& a, const Element& b) const {
  return member(group_->mul(group_->inverse(a), b));
}

long long SubgroupHandle::cosetKey(const Element& g) const {
  switch (oracle_) {
    case OracleKind::Stallings:
      return schreier_->leftCosetKey(g.w);
    case OracleKind::Lattice: {
      auto residue = lattice_->reduce(exponentVector(*group_, g.w));
      auto [it, fresh] = latticeKeys_.insert({residue, static_cast<long long>(latticeKeys_.size())});
      return it->second;
    }
    case OracleKind::Table: {
      // shortlex-minimal element of gH
      Element best = group_->mul(g, (*tableElems_)[0]);
      for (const Element& h : *tableElems_) {
        Element cand = group_->mul(g, h);
        if (cand < best) best = cand;
      }
      return group_->ordinalOf(best);
    }
    case OracleKind::Enumerative: {
      Element best = g;
      for (const Element& h : *enumElems_) {
        Element cand = group_->mul(g, h);
        if (cand < best) best = cand;
      }
      auto [it, fresh] = enumKeys_.insert({best.w, static_cast<long long>(enumKeys_.size())});
      return it->second;
    }
  }
  return -1;
}

std::vector<Element> SubgroupHandle::elementsUpTo(int bound) const {
  std::vector<Element> out;
  switch (oracle_) {
    case OracleKind::Stallings: {
      // all basepoint loops of length <= bound in the core graph
      std::function<void(int, Word&)> rec = [&](int v, Word& w) {
        if (v == 0) out.push_back(Element{w});
        if (static_cast<int>(w.size()) >= bound) return;
        for (int l = 0; l < 2 * core_->rank(); ++l) {
          if (!w.empty() && static_cast<Letter>(w.back()) == letterInv(static_cast<Letter>(l))) continue;
          int t = core_->target(v, static_cast<Letter>(l));
          if (t < 0) continue;
          w.push_back(static_cast<char>(l));
          rec(t, w);
          w.pop_back();
        }
      };
      Word w;
      rec(0, w);
      break;
    }
    case OracleKind::Lattice: {
      // lattice points with L1 norm <= bound: walk the integer box of
      // coefficient combinations via BFS over generators
      std::set<Element> seen{group_->identity()};
      std::deque<Element> queue{group_->identity()};
      std::vector<Element> genElems;
      for (const auto& row : lattice_->hnf()) {
        Word w;
        for (int i = 0; i < group_->rank(); ++i) appendPower(w, i, row[static_cast<size_t>(i)]);
        genElems.push_back(group_->nf(w));
        genElems.push_back(group_->inverse(genElems.back()));
      }
      while (!queue.empty()) {
        Element cur = queue.front();
        queue.pop_front();
        for (const Element& g : genElems) {
          Element next = group_->mul(cur, g);
          if (static_cast<int>(next.w.size()) > bound) continue;
          if (seen.insert(next).second) queue.push_back(next);
        }
      }
      out.assign(seen.begin(), seen.end());
      break;
    }
    case OracleKind::Table: {
      for (const Element& e : *tableElems_) {
        if (static_cast<int>(e.w.size()) <= bound) out.push_back(e);
      }
      break;
    }
    case OracleKind::Enumerative: {
      for (const Element& e : *enumElems_) {
        if (static_cast<int>(e.w.size()) <= bound) out.push_back(e);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

stallings::CoreGraph trivialCore(int rank) {
  return stallings::CoreGraph::raw(
      rank, {std::vector<int>(2 * static_cast<size_t>(rank), -1)});
}

int shortestInRightCoset(const stallings::CoreGraph& core, const Word& s) {
  // min over h of |h^-1 s| = shortest element of the coset Hs
  return stallings::doubleCosetShortest(core, s, trivialCore(core.rank())).length;
}

int shortestInLeftCoset(const stallings::CoreGraph& core, const Word& s) {
  // min over h of |s h| = shortest element of the coset sH
  return stallings::doubleCosetShortest(trivialCore(core.rank()), s, core).length;
}

}  // namespace

std::optional<DistanceCert> SubgroupHandle::fpCosetDistance(const Element& d) const {
  if (fpKind_ == FpKind::None) return std::nullopt;
  const auto* fp = asFreeProduct(*group_);
  auto syl = fp->syllables(d.w);
  const int k = static_cast<int>(syl.size());
  if (k == 0) return DistanceCert{0, true, 0};

  if (fpKind_ == FpKind::FactorLattice || fpKind_ == FpKind::FactorFree ||
      fpKind_ == FpKind::FactorFinite) {
    const Group& fac = *fp->factor(fpFactor_);
    // one-sided trims: min_h |h^-1 s| and min_h |s h| inside the factor
    auto leftTrim = [&](const FreeProductGroup::Syllable& s) -> int {
      if (s.factor != fpFactor_) return static_cast<int>(s.local.size());
      if (fpKind_ == FpKind::FactorLattice) {
        return static_cast<int>(fpLattice_->l1DistanceToLattice(exponentVector(fac, s.local)));
      }
      if (fpKind_ == FpKind::FactorFree) return shortestInRightCoset(*fpCore_, s.local);
      int best = static_cast<int>(s.local.size());
      for (const Element& h : *fpFinite_) {
        best = std::min(best,
                        static_cast<int>(fac.mul(fac.inverse(h), Element{s.local}).w.size()));
      }
      return best;
    };
    auto rightTrim = [&](const FreeProductGroup::Syllable& s) -> int {
      if (s.factor != fpFactor_) return static_cast<int>(s.local.size());
      if (fpKind_ == FpKind::FactorLattice) {
        return static_cast<int>(fpLattice_->l1DistanceToLattice(exponentVector(fac, s.local)));
      }
      if (fpKind_ == FpKind::FactorFree) return shortestInLeftCoset(*fpCore_, s.local);
      int best = static_cast<int>(s.local.size());
      for (const Element& h : *fpFinite_) {
        best = std::min(best, static_cast<int>(fac.mul(Element{s.local}, h).w.size()));
      }
      return best;
    };
    if (k == 1) {
      const auto& s = syl[0];
      if (s.factor != fpFactor_) return DistanceCert{static_cast<int>(s.local.size()), true, 0};
      // min over h,h' of |h^-1 s h'| inside the factor
      if (fpKind_ == FpKind::FactorLattice) {
        return DistanceCert{
            static_cast<int>(fpLattice_->l1DistanceToLattice(exponentVector(fac, s.local))), true,
            0};
      }
      if (fpKind_ == FpKind::FactorFree) {
        return DistanceCert{stallings::doubleCosetShortest(*fpCore_, s.local, *fpCore_).length,
                            true, 0};
      }
      int best = static_cast<int>(s.local.size());
      for (const Element& h : *fpFinite_) {
        Element left = fac.mul(fac.inverse(h), Element{s.local});
        for (const Element& h2 : *fpFinite_) {
          best = std::min(best, static_cast<int>(fac.mul(left, h2).w.size()));
        }
      }
      return DistanceCert{best, true, 0};
    }
    // k >= 2: the trims are independent because syllables alternate factors
    int total = leftTrim(syl[0]) + rightTrim(syl[static_cast<size_t>(k - 1)]);
    for (int i = 1; i + 1 < k; ++i) total += static_cast<int>(syl[static_cast<size_t>(i)].local.size());
    return DistanceCert{total, true, 0};
  }

  // Cyclic: windowed sweep over |g0^-i d g0^j|; a certified upper bound
  const Element& g0 = fpCyclicGen_;
  const int window =
      static_cast<int>(d.w.size() / std::max<size_t>(1, g0.w.size())) + 2;
  Element g0inv = group_->inverse(g0);
  std::vector<Element> lefts{d};  // g0^-i d for i = 0..window, then i = -1..-window
  for (int i = 1; i <= window; ++i) lefts.push_back(group_->mul(g0inv, lefts.back()));
  Element back = d;
  for (int i = 1; i <= window; ++i) {
    back = group_->mul(g0, back);
    lefts.push_back(back);
  }
  int best = static_cast<int>(d.w.size());
  for (const Element& li : lefts) {
    Element cur = li;
    best = std::min(best, static_cast<int>(cur.w.size()));
    for (int j = 1; j <= window; ++j) {
      cur = group_->mul(cur, g0);
      best = std::min(best, static_cast<int>(cur.w.size()));
    }
    cur = li;
    for (int j = 1; j <= window; ++j) {
      cur = group_->mul(cur, g0inv);
      best = std::min(best, static_cast<int>(cur.w.size()));
    }
  }
  return DistanceCert{best, false, window};
}

std::string SubgroupHandle::describe() const {
  switch (oracle_) {
    case OracleKind::Stallings:
      return "stallings";
    case OracleKind::Lattice:
      return "lattice";
    case OracleKind::Table:
      return "table";
    case OracleKind::Enumerative:
      return "enumerative(R=" + std::to_string(enumRadius_) + ")";
  }
  return "?";
}

}  // namespace cosetpack
