#include "freesplit/free_map.hpp"

#include <algorithm>
#include <limits>

#include "freesplit/error.hpp"

namespace freesplit {

FreeMap::FreeMap(std::vector<Word> images) : images_(std::move(images)) {
  for (auto& w : images_) w = free_reduce(w);
}

FreeMap FreeMap::identity(std::size_t rank) {
  std::vector<Word> images(rank);
  for (std::size_t i = 0; i < rank; ++i) images[i] = {forward(static_cast<std::uint32_t>(i))};
  return FreeMap(std::move(images));
}

Word FreeMap::apply(std::span<const Letter> w) const {
  Word out;
  for (Letter l : w) {
    std::uint32_t e = edge_of(l);
    if (e >= images_.size()) invalid_input("letter outside the rank of the map");
    if (is_barred(l)) {
      append_inverse_reduced(out, images_[e]);
    } else {
      append_reduced(out, images_[e]);
    }
  }
  return out;
}

CyclicWord FreeMap::apply(const CyclicWord& c) const { return CyclicWord::from_word(apply(c.letters())); }

FreeMap compose(const FreeMap& f, const FreeMap& g) {
  std::vector<Word> images;
  images.reserve(g.rank());
  for (const auto& w : g.images()) images.push_back(f.apply(w));
  return FreeMap(std::move(images));
}

FreeMap power(const FreeMap& f, unsigned k) {
  FreeMap out = FreeMap::identity(f.rank());
  for (unsigned i = 0; i < k; ++i) out = compose(f, out);
  return out;
}

std::vector<std::vector<long long>> abelianization(const FreeMap& f) {
  const std::size_t n = f.rank();
  std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
  for (std::size_t col = 0; col < n; ++col) {
    for (Letter l : f.image(col)) {
      std::size_t row = edge_of(l);
      if (row >= n) invalid_input("image letter outside the rank");
      m[row][col] += is_barred(l) ? -1 : 1;
    }
  }
  return m;
}

FreeMap whitehead_automorphism(std::size_t rank, Letter a, const std::vector<bool>& cut) {
  if (cut.size() != 2 * rank || !cut[a] || cut[inv(a)]) {
    invalid_input("Whitehead cut must contain the multiplier and not its inverse");
  }
  std::vector<Word> images(rank);
  for (std::uint32_t i = 0; i < rank; ++i) {
    Letter x = forward(i);
    if (edge_of(x) == edge_of(a)) {
      images[i] = {x};
      continue;
    }
    Word img;
    if (cut[inv(x)]) img.push_back(inv(a));
    img.push_back(x);
    if (cut[x]) img.push_back(a);
    images[i] = std::move(img);
  }
  return FreeMap(std::move(images));
}

const char* to_string(OuterVerdict v) {
  switch (v) {
    case OuterVerdict::Equal: return "Equal";
    case OuterVerdict::Distinct: return "Distinct";
    case OuterVerdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::size_t primitive_period(std::span<const Letter> w) {
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<std::size_t> fail(n + 1, 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k];
    if (w[i] == w[k]) ++k;
    fail[i + 1] = k;
  }
  std::size_t p = n - fail[n];
  return n % p == 0 ? p : n;
}

namespace {

Word conj(const Word& u, const Word& x) {
  Word out = u;
  append_reduced(out, x);
  append_inverse_reduced(out, u);
  return out;
}

Word power_word(const Word& z, long long k) {
  Word out;
  for (long long i = 0; i < std::llabs(k); ++i) {
    if (k > 0) {
      append_reduced(out, z);
    } else {
      append_inverse_reduced(out, z);
    }
  }
  return out;
}

bool commutes(const Word& a, const Word& b) {
  Word ab = a;
  append_reduced(ab, b);
  Word ba = b;
  append_reduced(ba, a);
  return ab == ba;
}

}  // namespace

OuterResult outer_equal(const FreeMap& f, const FreeMap& g, std::size_t budget) {
  OuterResult res;
  if (f.rank() != g.rank()) invalid_input("outer_equal: rank mismatch");
  if (abelianization(f) != abelianization(g)) {
    res.verdict = OuterVerdict::Distinct;
    res.reason = "abelianizations differ";
    return res;
  }
  const std::size_t n = f.rank();
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!f.image(i).empty() || !g.image(i).empty()) {
      first = i;
      break;
    }
  }
  if (first == n) {
    res.verdict = OuterVerdict::Equal;
    return res;
  }
  const Word& fx = f.image(first);
  const Word& gx = g.image(first);
  if (fx.empty() || gx.empty()) {
    res.verdict = OuterVerdict::Distinct;
    res.reason = "one image is trivial";
    return res;
  }
  Word a, b;
  Word r = cyclic_reduce(fx, &a);
  Word rp = cyclic_reduce(gx, &b);
  if (r.size() != rp.size()) {
    res.verdict = OuterVerdict::Distinct;
    res.reason = "images of basis element " + std::to_string(first) + " are not conjugate";
    return res;
  }
  std::size_t shift = r.size();
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (std::equal(r.begin() + static_cast<std::ptrdiff_t>(j), r.end(), rp.begin()) &&
        std::equal(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(j),
                   rp.begin() + static_cast<std::ptrdiff_t>(r.size() - j))) {
      shift = j;
      break;
    }
  }
  if (shift == r.size()) {
    res.verdict = OuterVerdict::Distinct;
    res.reason = "images of basis element " + std::to_string(first) + " are not conjugate";
    return res;
  }
  // u0 = b p^{-1} a^{-1} where r = p q and q p = r'.
  Word u0 = b;
  Word p(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(shift));
  append_inverse_reduced(u0, p);
  append_inverse_reduced(u0, a);

  // Centralizer of f(x_first) is generated by z = a s a^{-1}, s the root of r.
  std::size_t period = primitive_period(r);
  Word z = a;
  append_reduced(z, std::span<const Letter>(r.data(), period));
  append_inverse_reduced(z, a);

  long long radius = 0;
  std::size_t pivot = n;
  for (std::size_t t = 0; t < n; ++t) {
    if (t == first) continue;
    if (!commutes(z, f.image(t))) {
      pivot = t;
      break;
    }
  }
  if (pivot != n) {
    Word h = conj(inverse(u0), g.image(pivot));
    std::size_t yl = f.image(pivot).size() + 2 * a.size();
    std::size_t bound = 2 * (h.size() + yl + 2 * a.size()) / period + 4;
    if (bound > budget) {
      res.verdict = OuterVerdict::Unknown;
      res.reason = "conjugator radius exceeds budget";
      return res;
    }
    radius = static_cast<long long>(bound);
  }
  for (long long k = 0; k <= radius; k = k > 0 ? -k : -k + 1) {
    Word u = u0;
    append_reduced(u, power_word(z, k));
    bool ok = true;
    for (std::size_t t = 0; t < n && ok; ++t) {
      ok = conj(u, f.image(t)) == g.image(t);
    }
    if (ok) {
      res.verdict = OuterVerdict::Equal;
      res.conjugator = u;
      return res;
    }
    if (radius == 0) break;
  }
  res.verdict = OuterVerdict::Distinct;
  res.reason = "no conjugator within the certified radius";
  return res;
}

namespace {

std::size_t total_length(const std::vector<Word>& t) {
  std::size_t s = 0;
  for (const auto& w : t) s += w.size();
  return s;
}

bool is_signed_permutation(const std::vector<Word>& t) {
  std::vector<bool> seen(t.size(), false);
  for (const auto& w : t) {
    if (w.size() != 1) return false;
    std::uint32_t e = edge_of(w[0]);
    if (e >= t.size() || seen[e]) return false;
    seen[e] = true;
  }
  return true;
}

}  // namespace

FreeMap invert(const FreeMap& f) {
  const std::size_t n = f.rank();
  std::vector<Word> t = f.images();
  FreeMap left = FreeMap::identity(n);      // B in B f N
  std::vector<Word> right = FreeMap::identity(n).images();  // N

  std::size_t guard = 0;
  while (!is_signed_permutation(t)) {
    if (++guard > 1000000) budget_exhausted("automorphism inversion did not terminate");
    std::size_t len = total_length(t);
    // Best length-reducing Nielsen move T_i <- T_j^e T_i or T_i T_j^e.
    std::size_t best = len;
    std::size_t bi = 0, bj = 0;
    bool bleft = false, binv = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || t[j].empty()) continue;
        for (int side = 0; side < 2; ++side) {
          for (int e = 0; e < 2; ++e) {
            Word w;
            if (side == 0) {
              w = t[i];
              if (e == 0) append_reduced(w, t[j]); else append_inverse_reduced(w, t[j]);
            } else {
              w = e == 0 ? t[j] : inverse(t[j]);
              append_reduced(w, t[i]);
            }
            std::size_t cand = len - t[i].size() + w.size();
            if (cand < best) {
              best = cand;
              bi = i;
              bj = j;
              bleft = side == 1;
              binv = e == 1;
            }
          }
        }
      }
    }
    if (best < len) {
      auto step = [&](std::vector<Word>& v) {
        Word other = binv ? inverse(v[bj]) : v[bj];
        Word w;
        if (bleft) {
          w = other;
          append_reduced(w, v[bi]);
        } else {
          w = v[bi];
          append_reduced(w, other);
        }
        v[bi] = std::move(w);
      };
      step(t);
      step(right);
      continue;
    }
    // Whitehead automorphism applied on the left.
    bool moved = false;
    const std::size_t letters = 2 * n;
    for (Letter a = 0; a < letters && !moved; ++a) {
      std::vector<Letter> others;
      for (Letter x = 0; x < letters; ++x) {
        if (edge_of(x) != edge_of(a)) others.push_back(x);
      }
      const std::size_t subsets = std::size_t{1} << others.size();
      for (std::size_t mask = 1; mask < subsets && !moved; ++mask) {
        std::vector<bool> cut(letters, false);
        cut[a] = true;
        for (std::size_t b = 0; b < others.size(); ++b) {
          if (mask & (std::size_t{1} << b)) cut[others[b]] = true;
        }
        FreeMap w = whitehead_automorphism(n, a, cut);
        std::vector<Word> nt;
        nt.reserve(n);
        for (const auto& x : t) nt.push_back(w.apply(x));
        if (total_length(nt) < len) {
          t = std::move(nt);
          left = compose(w, left);
          moved = true;
        }
      }
    }
    if (!moved) invalid_input("basis images do not reduce to a basis; not an automorphism");
  }
  // left f right = pi, so f^{-1} = right pi^{-1} left.
  std::vector<Word> pinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    Letter l = t[i][0];
    pinv[edge_of(l)] = is_barred(l) ? Word{barred(static_cast<std::uint32_t>(i))}
                                    : Word{forward(static_cast<std::uint32_t>(i))};
  }
  return compose(FreeMap(right), compose(FreeMap(std::move(pinv)), left));
}

}  // namespace freesplit
