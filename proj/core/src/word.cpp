//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//

#include "cosetpack/word.hpp"

#include <algorithm>
#include <cstdlib>

namespace cosetpack {

Word wordInverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    out.push_back(static_cast<char>(letterInv(static_cast<Letter>(*it))));
  }
  return out;
}

Word freeReduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (char c : w) {
    if (!out.empty() &&
        static_cast<Letter>(out.back()) ==
            letterInv(static_cast<Letter>(c))) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

void appendPower(Word& w, int gen, long long k) {
  const Letter l = letter(gen, k < 0);
  long long n = k < 0 ? -k : k;
  for (long long i = 0; i < n; ++i) w.push_back(static_cast<char>(l));
}

namespace {

int findLabel(const std::string& s, const std::vector<std::string>& labels) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == s) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

Word parseWord(const std::string& text, const std::vector<std::string>& labels) {
  Word out;
  size_t pos = 0;
  auto skipSpace = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skipSpace();
  if (pos >= text.size()) return out;
  if (text.compare(pos, std::string::npos, "1") == 0) return out;

  while (pos < text.size()) {
    skipSpace();
    size_t start = pos;
    while (pos < text.size() && text[pos] != '*' && text[pos] != '^' &&
           !std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    std::string name = text.substr(start, pos - start);
    int gen = findLabel(name, labels);
    if (gen < 0) throw WordError("unknown generator label '" + name + "'");
    long long exp = 1;
    skipSpace();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      skipSpace();
      size_t e0 = pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == e0) throw WordError("malformed exponent in word '" + text + "'");
      exp = std::strtoll(text.substr(e0, pos - e0).c_str(), nullptr, 10);
    }
    appendPower(out, gen, exp);
    skipSpace();
    if (pos < text.size()) {
      if (text[pos] != '*') throw WordError("expected '*' in word '" + text + "'");
      ++pos;
    }
  }
  return out;
}

std::string renderWord(const Word& w, const std::vector<std::string>& labels) {
  if (w.empty()) return "";
  std::string out;
  size_t i = 0;
  while (i < w.size()) {
    const Letter l = static_cast<Letter>(w[i]);
    size_t j = i;
    while (j < w.size() && static_cast<Letter>(w[j]) == l) ++j;
    long long exp = static_cast<long long>(j - i);
    if (letterInverse(l)) exp = -exp;
    if (!out.empty()) out += "*";
    out += labels.at(static_cast<size_t>(letterGen(l)));
    if (exp != 1) out += "^" + std::to_string(exp);
    i = j;
  }
  return out;
}

}  // namespace cosetpack
