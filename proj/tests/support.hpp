#pragma once

// Brute-force oracles and seeded generators shared by the test suites.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "freesplit/free_map.hpp"
#include "freesplit/word.hpp"

namespace oracle {

using freesplit::Letter;
using freesplit::Word;

// Reduction by a plain stack, written independently of free_reduce.
inline Word stack_reduce(const Word& w) {
  Word out;
  for (Letter l : w) {
    if (!out.empty() && (out.back() ^ 1u) == l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline Word invert_word(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l ^= 1u;
  return out;
}

// Least sequence over every rotation of the cyclic reduction and of its
// inverse.
inline Word canonical_cyclic(const Word& w) {
  Word r = stack_reduce(w);
  while (r.size() >= 2 && (r.front() ^ 1u) == r.back()) r = Word(r.begin() + 1, r.end() - 1);
  if (r.empty()) return r;
  Word best;
  for (const Word& v : {r, invert_word(r)}) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      Word rot(v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
      if (best.empty() || rot < best) best = rot;
    }
  }
  return best;
}

inline std::vector<long long> abelian(const Word& w, std::size_t rank) {
  std::vector<long long> v(rank, 0);
  for (Letter l : w) v[l >> 1] += (l & 1u) ? -1 : 1;
  return v;
}

inline Word random_word(std::mt19937& rng, std::size_t rank, std::size_t len) {
  std::uniform_int_distribution<Letter> d(0, static_cast<Letter>(2 * rank - 1));
  Word w;
  while (w.size() < len) {
    Letter l = d(rng);
    if (!w.empty() && (w.back() ^ 1u) == l) continue;
    w.push_back(l);
  }
  return w;
}

// Random automorphism as a product of elementary Nielsen moves
// x_i -> x_i x_j^{+-1}, x_i -> x_j^{+-1} x_i and inversions.
inline freesplit::FreeMap random_automorphism(std::mt19937& rng, std::size_t rank, int moves) {
  std::vector<Word> images;
  for (std::size_t i = 0; i < rank; ++i) images.push_back({static_cast<Letter>(2 * i)});
  std::uniform_int_distribution<std::size_t> pick(0, rank - 1);
  std::uniform_int_distribution<int> kind(0, 4);
  for (int m = 0; m < moves; ++m) {
    std::size_t i = pick(rng), j = pick(rng);
    int k = kind(rng);
    if (k == 4) {
      images[i] = invert_word(images[i]);
      continue;
    }
    if (i == j) continue;
    Word other = (k & 1) ? invert_word(images[j]) : images[j];
    Word w = (k & 2) ? other : images[i];
    const Word& tail = (k & 2) ? images[i] : other;
    w.insert(w.end(), tail.begin(), tail.end());
    images[i] = stack_reduce(w);
  }
  return freesplit::FreeMap(images);
}

// Every canonical cyclic word of length 1..max_len in the given rank.
inline std::vector<Word> all_classes(std::size_t rank, std::size_t max_len) {
  std::set<Word> seen;
  Word w;
  const Letter letters = static_cast<Letter>(2 * rank);
  auto rec = [&](auto&& self) -> void {
    if (!w.empty() && (w.front() ^ 1u) != w.back()) seen.insert(canonical_cyclic(w));
    if (w.size() == max_len) return;
    for (Letter l = 0; l < letters; ++l) {
      if (!w.empty() && (w.back() ^ 1u) == l) continue;
      w.push_back(l);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  std::vector<Word> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
  return out;
}

// Images of the basis under every Whitehead automorphism: signed
// permutations and all (A, a) moves, written out directly.
inline std::vector<std::vector<Word>> all_whitehead_automorphisms(std::size_t rank) {
  std::vector<std::vector<Word>> out;
  std::vector<std::size_t> perm(rank);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t signs = 0; signs < (std::size_t{1} << rank); ++signs) {
      std::vector<Word> img(rank);
      for (std::size_t i = 0; i < rank; ++i) img[i] = {static_cast<Letter>(2 * perm[i] + ((signs >> i) & 1))};
      out.push_back(img);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const Letter letters = static_cast<Letter>(2 * rank);
  for (Letter a = 0; a < letters; ++a) {
    std::vector<Letter> others;
    for (Letter x = 0; x < letters; ++x) {
      if ((x >> 1) != (a >> 1)) others.push_back(x);
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
      std::vector<bool> in(letters, false);
      in[a] = true;
      for (std::size_t b = 0; b < others.size(); ++b) in[others[b]] = (mask >> b) & 1;
      std::vector<Word> img(rank);
      for (std::size_t i = 0; i < rank; ++i) {
        Letter x = static_cast<Letter>(2 * i);
        if ((x >> 1) == (a >> 1)) {
          img[i] = {x};
          continue;
        }
        if (in[x ^ 1u]) img[i].push_back(a ^ 1u);
        img[i].push_back(x);
        if (in[x]) img[i].push_back(a);
      }
      out.push_back(img);
    }
  }
  return out;
}

inline Word substitute(const std::vector<Word>& images, const Word& w) {
  Word out;
  for (Letter l : w) {
    Word img = images[l >> 1];
    if (l & 1u) img = invert_word(img);
    out.insert(out.end(), img.begin(), img.end());
  }
  return stack_reduce(out);
}

// Decides filling for every class of length <= max_len by exploring the
// Whitehead orbit without ever exceeding the class length: a class lies in
// a proper free factor iff some class reachable this way misses a letter.
inline std::map<Word, bool> fills_by_orbit(std::size_t rank, std::size_t max_len) {
  auto classes = all_classes(rank, max_len);
  std::map<Word, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;
  std::vector<std::size_t> parent(classes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<bool> misses(classes.size(), false);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::vector<bool> used(rank, false);
    for (Letter l : classes[i]) used[l >> 1] = true;
    misses[i] = std::find(used.begin(), used.end(), false) != used.end();
  }
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    parent[a] = b;
    misses[b] = misses[b] || misses[a];
  };
  auto autos = all_whitehead_automorphisms(rank);
  std::map<Word, bool> out;
  std::size_t i = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t begin = i;
    while (i < classes.size() && classes[i].size() == len) {
      for (const auto& a : autos) {
        Word img = canonical_cyclic(substitute(a, classes[i]));
        if (img.size() <= len) unite(i, index.at(img));
      }
      ++i;
    }
    for (std::size_t j = begin; j < i; ++j) out[classes[j]] = !misses[find(j)];
  }
  return out;
}

}  // namespace oracle
