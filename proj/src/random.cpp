#include "cinorm/random.hpp"

#include <numeric>

#include "cinorm/error.hpp"

namespace cinorm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidInput("Rng::below(0)");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
}

Element random_reduced_word(const Group& g, Rng& rng, int length) {
  if (g.family() != Family::Free) throw InvalidInput("random_reduced_word needs a free group");
  const int rank = g.degree();
  std::vector<int> letters;
  while (static_cast<int>(letters.size()) < length) {
    int gen = static_cast<int>(rng.below(static_cast<std::uint64_t>(rank))) + 1;
    int l = rng.coin() ? gen : -gen;
    if (!letters.empty() && letters.back() == -l) continue;
    letters.push_back(l);
  }
  return free_word(g, std::move(letters));
}

Element random_element(const Group& g, Rng& rng, int size) {
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      Permutation p;
      p.image.resize(static_cast<std::size_t>(g.degree()));
      std::iota(p.image.begin(), p.image.end(), std::uint16_t{0});
      for (std::size_t i = p.image.size(); i > 1; --i) std::swap(p.image[i - 1], p.image[rng.below(i)]);
      if (g.family() == Family::Alternating) {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < p.image.size(); ++i) {
          for (std::size_t j = i + 1; j < p.image.size(); ++j) inversions += p.image[i] > p.image[j];
        }
        if (inversions % 2) std::swap(p.image[0], p.image[1]);
      }
      return Element(g, std::move(p));
    }
    case Family::Free:
      return random_reduced_word(g, rng, static_cast<int>(rng.below(static_cast<std::uint64_t>(size) + 1)));
    case Family::WreathZ:
    case Family::WreathZn: {
      WreathPayload w;
      if (g.family() == Family::WreathZn) {
        for (int i = 0; i < g.degree(); ++i) {
          w.positions.push_back(i);
          w.values.push_back(random_element(g.base(), rng, size));
        }
        w.shift = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.degree())));
      } else {
        for (std::int64_t i = -size; i <= size; ++i) {
          if (rng.below(3) == 0) {
            w.positions.push_back(i);
            w.values.push_back(random_element(g.base(), rng, size));
          }
        }
        w.shift = rng.between(-size, size);
      }
      return Element(g, std::move(w));
    }
    case Family::AffZ:
      return affz(rng.between(-size, size), rng.coin());
    case Family::Bar:
      return bar_element(g, random_element(g.base(), rng, size), random_element(g.base(), rng, size), rng.coin());
    case Family::Z2Infinity: {
      std::vector<std::uint8_t> bits(rng.below(static_cast<std::uint64_t>(size) + 1));
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
      return binary_word(std::move(bits));
    }
    case Family::SLZ:
    case Family::SLMod: {
      const int n = g.degree();
      Element acc = identity(g);
      for (int k = 0; k < size; ++k) {
        int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        if (j >= i) ++j;
        acc = compose(acc, elementary_matrix(g, i, j, rng.coin() ? 1 : -1));
      }
      return acc;
    }
    case Family::Product: {
      std::vector<Element> parts;
      for (const auto& f : g.factors()) parts.push_back(random_element(f, rng, size));
      return product_element(g, std::move(parts));
    }
  }
  throw InvalidInput("unknown family");
}

}  // namespace cinorm
