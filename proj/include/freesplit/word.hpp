#pragma once

// Reduced words over oriented letters.
//
// Letter 2e is edge (or basis element) e read forwards, 2e+1 is its reverse.
// The integer value of a letter is the total order used everywhere.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace freesplit {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

constexpr Letter inv(Letter l) noexcept { return l ^ 1u; }
constexpr std::uint32_t edge_of(Letter l) noexcept { return l >> 1; }
constexpr bool is_barred(Letter l) noexcept { return (l & 1u) != 0; }
constexpr Letter forward(std::uint32_t e) noexcept { return e << 1; }
constexpr Letter barred(std::uint32_t e) noexcept { return (e << 1) | 1u; }

Word inverse(const Word& w);

// Appends `w` to the reduced word `acc`, cancelling at the junction.
void append_reduced(Word& acc, std::span<const Letter> w);
void append_inverse_reduced(Word& acc, std::span<const Letter> w);

Word free_reduce(std::span<const Letter> w);
bool is_reduced(std::span<const Letter> w);

// Removes a maximal conjugating prefix/suffix pair. Input must be reduced.
// If `conjugator` is non-null it receives the stripped prefix.
Word cyclic_reduce(const Word& w, Word* conjugator = nullptr);
bool is_cyclically_reduced(std::span<const Letter> w);

// Start index of the lexicographically least rotation (Booth).
std::size_t least_rotation(std::span<const Letter> w);
Word rotate(std::span<const Letter> w, std::size_t start);

// Does the cyclic word `hay` contain `needle` as a subword of some rotation?
bool cyclic_contains(std::span<const Letter> hay, std::span<const Letter> needle);
bool contains(std::span<const Letter> hay, std::span<const Letter> needle);

// Occurrences of letter `l` or its inverse.
std::size_t letter_count(std::span<const Letter> w, std::uint32_t edge);

// Conjugacy class of a reduced word, stored in canonical form: the least
// rotation of the word and of its inverse.
class CyclicWord {
 public:
  CyclicWord() = default;

  // Reduces and canonicalizes an arbitrary word.
  static CyclicWord from_word(std::span<const Letter> w);

  const Word& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  // True when the canonical form represents the inverse of the input word.
  bool inverted() const noexcept { return inverted_; }

  // A representative in the orientation of the original input.
  Word oriented() const;

  CyclicWord inverse() const;

  friend bool operator==(const CyclicWord& a, const CyclicWord& b) {
    return a.letters_ == b.letters_;
  }
  // Shortlex on canonical letters.
  friend std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b);

 private:
  Word letters_;
  bool inverted_ = false;
};

struct CyclicWordHash {
  std::size_t operator()(const CyclicWord& c) const noexcept;
};

std::size_t hash_word(std::span<const Letter> w) noexcept;

// Names: index i has name names[i]; bar is a trailing apostrophe.
std::string format_word(std::span<const Letter> w, const std::vector<std::string>& names);
Word parse_word(const std::string& text, const std::vector<std::string>& names);

}  // namespace freesplit
