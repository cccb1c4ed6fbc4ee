//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#ifndef COSETPACK_WORD_HPP_
#define COSETPACK_WORD_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosetpack {

// A letter is a generator with a direction: generator g forward is 2g,
// its formal inverse is 2g+1. Words are byte strings of letters, so they
// hash and compare like ordinary strings and the shortlex order on words
// (length, then byte order a < a^-1 < b < b^-1 < ...) is the string order.
using Letter = unsigned char;
using Word = std::string;

constexpr Letter letter(int gen, bool inverse = false) {
  return static_cast<Letter>(2 * gen + (inverse ? 1 : 0));
}
constexpr int letterGen(Letter l) { return l >> 1; }
constexpr bool letterInverse(Letter l) { return (l & 1) != 0; }
constexpr Letter letterInv(Letter l) { return l ^ 1; }

/// Formal inverse: reverse the word and invert each letter.
Word wordInverse(const Word& w);

/// Free reduction (cancel adjacent x x^-1 pairs to a fixpoint).
Word freeReduce(const Word& w);

/// Append a power of a single generator: gen^k (k may be negative).
void appendPower(Word& w, int gen, long long k);

/// Shortlex comparison; equivalent to operator< on Word by construction.
inline bool shortlexLess(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct WordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse "a*b^-1*a^3" against an ordered list of generator labels.
/// The empty string (or "1") is the empty word.
Word parseWord(const std::string& text, const std::vector<std::string>& labels);

/// Render with '*' separators and '^k' exponent collection, inverse of parseWord.
std::string renderWord(const Word& w, const std::vector<std::string>& labels);

}  // namespace cosetpack

#endif  // COSETPACK_WORD_HPP_
