#include "freesplit/word.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "freesplit/error.hpp"

namespace freesplit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::NumericalTolerance: return "NumericalTolerance";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::FixtureInvalid: return "FixtureInvalid";
  }
  return "Error";
}

Word inverse(const Word& w) {
  Word out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[w.size() - 1 - i] = inv(w[i]);
  return out;
}

void append_reduced(Word& acc, std::span<const Letter> w) {
  for (Letter l : w) {
    if (!acc.empty() && acc.back() == inv(l)) {
      acc.pop_back();
    } else {
      acc.push_back(l);
    }
  }
}

void append_inverse_reduced(Word& acc, std::span<const Letter> w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Letter l = inv(*it);
    if (!acc.empty() && acc.back() == inv(l)) {
      acc.pop_back();
    } else {
      acc.push_back(l);
    }
  }
}

Word free_reduce(std::span<const Letter> w) {
  Word out;
  out.reserve(w.size());
  append_reduced(out, w);
  return out;
}

bool is_reduced(std::span<const Letter> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == inv(w[i - 1])) return false;
  }
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> w) {
  if (!is_reduced(w)) return false;
  return w.size() < 2 || w.front() != inv(w.back());
}

Word cyclic_reduce(const Word& w, Word* conjugator) {
  std::size_t i = 0;
  std::size_t j = w.size();
  while (j - i >= 2 && w[i] == inv(w[j - 1])) {
    ++i;
    --j;
  }
  if (conjugator) conjugator->assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n < 2) return 0;
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    Letter a = s[(i + k) % n];
    Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

Word rotate(std::span<const Letter> w, std::size_t start) {
  Word out;
  out.reserve(w.size());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(start), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(start));
  return out;
}

bool contains(std::span<const Letter> hay, std::span<const Letter> needle) {
  if (needle.empty()) return true;
  if (needle.size() > hay.size()) return false;
  auto it = std::search(hay.begin(), hay.end(),
                        std::boyer_moore_horspool_searcher(needle.begin(), needle.end()));
  return it != hay.end();
}

bool cyclic_contains(std::span<const Letter> hay, std::span<const Letter> needle) {
  if (needle.empty()) return true;
  if (hay.empty()) return false;
  // Read the periodic line: enough copies that every window of length
  // |needle| starting in the first period is present.
  std::size_t copies = needle.size() / hay.size() + 2;
  Word line;
  line.reserve(hay.size() * copies);
  for (std::size_t c = 0; c < copies; ++c) line.insert(line.end(), hay.begin(), hay.end());
  return contains(line, needle);
}

std::size_t letter_count(std::span<const Letter> w, std::uint32_t edge) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [edge](Letter l) { return edge_of(l) == edge; }));
}

CyclicWord CyclicWord::from_word(std::span<const Letter> w) {
  Word reduced = cyclic_reduce(free_reduce(w));
  CyclicWord out;
  if (reduced.empty()) return out;
  Word fwd = rotate(reduced, least_rotation(reduced));
  Word back = freesplit::inverse(reduced);
  back = rotate(back, least_rotation(back));
  if (back < fwd) {
    out.letters_ = std::move(back);
    out.inverted_ = true;
  } else {
    out.letters_ = std::move(fwd);
  }
  return out;
}

Word CyclicWord::oriented() const { return inverted_ ? freesplit::inverse(letters_) : letters_; }

CyclicWord CyclicWord::inverse() const {
  CyclicWord out = *this;
  out.inverted_ = !inverted_;
  return out;
}

std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b) {
  if (a.letters_.size() != b.letters_.size()) return a.letters_.size() <=> b.letters_.size();
  return a.letters_ <=> b.letters_;
}

std::size_t hash_word(std::span<const Letter> w) noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Letter l : w) {
    h ^= l + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::size_t CyclicWordHash::operator()(const CyclicWord& c) const noexcept {
  return hash_word(c.letters());
}

std::string format_word(std::span<const Letter> w, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    std::uint32_t e = edge_of(w[i]);
    out += e < names.size() ? names[e] : "?" + std::to_string(e);
    if (is_barred(w[i])) out += '\'';
  }
  return out;
}

Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  std::istringstream in(text);
  std::string tok;
  Word out;
  while (in >> tok) {
    bool bar = false;
    if (!tok.empty() && tok.back() == '\'') {
      bar = true;
      tok.pop_back();
    }
    auto it = std::find(names.begin(), names.end(), tok);
    if (it == names.end()) invalid_input("unknown letter '" + tok + "'");
    auto e = static_cast<std::uint32_t>(it - names.begin());
    out.push_back(bar ? barred(e) : forward(e));
  }
  return out;
}

}  // namespace freesplit
