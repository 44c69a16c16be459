#pragma once

// Endomorphisms of the free group F_n given by basis images.

#include <cstddef>
#include <string>
#include <vector>

#include "freesplit/word.hpp"

namespace freesplit {

class FreeMap {
 public:
  FreeMap() = default;
  explicit FreeMap(std::vector<Word> images);

  static FreeMap identity(std::size_t rank);

  std::size_t rank() const noexcept { return images_.size(); }
  const Word& image(std::size_t i) const { return images_.at(i); }
  const std::vector<Word>& images() const noexcept { return images_; }

  Word apply(std::span<const Letter> w) const;
  CyclicWord apply(const CyclicWord& c) const;

  friend bool operator==(const FreeMap&, const FreeMap&) = default;

 private:
  std::vector<Word> images_;
};

// x -> f(g(x)).
FreeMap compose(const FreeMap& f, const FreeMap& g);
FreeMap power(const FreeMap& f, unsigned k);

// Column i is the abelianized image of basis element i.
std::vector<std::vector<long long>> abelianization(const FreeMap& f);

// Whitehead automorphism (A, a): `cut` marks the letters of A, which must
// contain `multiplier` and not its inverse.
FreeMap whitehead_automorphism(std::size_t rank, Letter multiplier, const std::vector<bool>& cut);

enum class OuterVerdict { Equal, Distinct, Unknown };
const char* to_string(OuterVerdict v);

struct OuterResult {
  OuterVerdict verdict = OuterVerdict::Unknown;
  Word conjugator;  // g(x) = u f(x) u^{-1} when Equal
  std::string reason;
};

// Decides whether f and g differ by an inner automorphism. The conjugator
// is pinned by the first non-trivial image up to a power of its root; the
// power is searched inside a radius certified by word lengths. `budget`
// caps that radius.
OuterResult outer_equal(const FreeMap& f, const FreeMap& g, std::size_t budget = 100000);

// Inverse of an automorphism by length-reducing Nielsen moves, falling back
// to Whitehead automorphisms when no Nielsen move reduces. Throws
// InvalidInput if the images do not form a basis.
FreeMap invert(const FreeMap& f);

// Primitive root of a cyclically reduced word, as the length of its period.
std::size_t primitive_period(std::span<const Letter> w);

}  // namespace freesplit
