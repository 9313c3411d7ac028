#include "cinorm/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "cinorm/error.hpp"

namespace cinorm {

namespace {

using ElementSet = std::unordered_set<Element, ElementHash>;

void check_guard(const Group& g, std::size_t limit) {
  auto order = g.order();
  if (!order) throw InfiniteGroup(g.name() + " is infinite");
  if (*order > Integer(static_cast<unsigned long>(limit))) {
    throw GuardExceeded(g.name() + " has order " + order->get_str() + " above the guard " + std::to_string(limit));
  }
}

std::vector<Element> sorted(std::vector<Element> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Element> enumerate_permutations(const Group& g) {
  std::vector<Element> out;
  std::vector<std::uint16_t> img(static_cast<std::size_t>(g.degree()));
  std::iota(img.begin(), img.end(), std::uint16_t{0});
  const bool even_only = g.family() == Family::Alternating;
  do {
    if (even_only) {
      std::size_t inversions = 0;
      for (std::size_t i = 0; i < img.size(); ++i) {
        for (std::size_t j = i + 1; j < img.size(); ++j) inversions += img[i] > img[j];
      }
      if (inversions % 2) continue;
    }
    out.push_back(make_trusted(g, Permutation{img}));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

/// Breadth-first closure under right multiplication by `gens`.
std::vector<Element> closure_from(const Group& g, const std::vector<Element>& gens, std::size_t limit) {
  ElementSet seen;
  std::vector<Element> frontier{identity(g)};
  seen.insert(frontier.front());
  std::vector<Element> all = frontier;
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        Element y = compose(x, s);
        if (seen.insert(y).second) {
          if (seen.size() > limit) {
            throw GuardExceeded("subgroup closure exceeded the guard " + std::to_string(limit));
          }
          all.push_back(y);
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  return sorted(std::move(all));
}

}  // namespace

std::vector<Element> enumerate_elements(const Group& g, std::size_t limit) {
  check_guard(g, limit);
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating:
      return enumerate_permutations(g);
    case Family::WreathZn: {
      const auto base = enumerate_elements(g.base(), limit);
      const int n = g.degree();
      std::vector<Element> out;
      std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
      while (true) {
        for (std::int64_t s = 0; s < n; ++s) {
          WreathPayload w;
          for (int i = 0; i < n; ++i) {
            const Element& v = base[digits[static_cast<std::size_t>(i)]];
            if (v.is_identity()) continue;
            w.positions.push_back(i);
            w.values.push_back(v);
          }
          w.shift = s;
          out.push_back(make_trusted(g, std::move(w)));
        }
        int k = 0;
        while (k < n && ++digits[static_cast<std::size_t>(k)] == base.size()) {
          digits[static_cast<std::size_t>(k)] = 0;
          ++k;
        }
        if (k == n) break;
      }
      return sorted(std::move(out));
    }
    case Family::Bar: {
      const auto inner = enumerate_elements(g.base(), limit);
      std::vector<Element> out;
      for (int t = 0; t < 2; ++t) {
        for (const auto& a : inner) {
          for (const auto& b : inner) {
            BarPayload p;
            p.coords = {a, b};
            p.t = t == 1;
            out.push_back(make_trusted(g, std::move(p)));
          }
        }
      }
      return sorted(std::move(out));
    }
    case Family::SLMod:
      return closure_from(g, generators(g), limit);
    case Family::Product: {
      std::vector<std::vector<Element>> parts;
      for (const auto& f : g.factors()) parts.push_back(enumerate_elements(f, limit));
      std::vector<Element> out;
      std::vector<std::size_t> idx(parts.size(), 0);
      while (true) {
        ProductPayload p;
        for (std::size_t i = 0; i < parts.size(); ++i) p.parts.push_back(parts[i][idx[i]]);
        out.push_back(make_trusted(g, std::move(p)));
        std::size_t k = parts.size();
        while (k > 0) {
          --k;
          if (++idx[k] < parts[k].size()) break;
          idx[k] = 0;
          if (k == 0) return sorted(std::move(out));
        }
      }
    }
    default:
      throw InfiniteGroup(g.name() + " is infinite");
  }
}

std::vector<Element> generators(const Group& g) {
  std::vector<Element> out;
  switch (g.family()) {
    case Family::Symmetric: {
      const int n = g.degree();
      if (n >= 2) out.push_back(permutation_from_cycles(g, {{1, 2}}));
      if (n >= 3) {
        std::vector<int> cyc(static_cast<std::size_t>(n));
        std::iota(cyc.begin(), cyc.end(), 1);
        out.push_back(permutation_from_cycles(g, {cyc}));
      }
      break;
    }
    case Family::Alternating:
      for (int k = 3; k <= g.degree(); ++k) out.push_back(permutation_from_cycles(g, {{1, 2, k}}));
      break;
    case Family::Free:
      for (int i = 1; i <= g.degree(); ++i) out.push_back(free_word(g, {i}));
      break;
    case Family::WreathZ:
    case Family::WreathZn:
      for (const auto& b : generators(g.base())) out.push_back(wreath_single(g, 0, b));
      out.push_back(wreath_shift(g, 1));
      break;
    case Family::AffZ:
      out = {affz(1, false), affz(0, true)};
      break;
    case Family::Bar: {
      const Element one = identity(g.base());
      for (const auto& b : generators(g.base())) {
        out.push_back(bar_element(g, b, one, false));
        out.push_back(bar_element(g, one, b, false));
      }
      out.push_back(bar_element(g, one, one, true));
      break;
    }
    case Family::Z2Infinity:
      throw InfiniteGroup("z2inf is not finitely generated");
    case Family::SLZ:
    case Family::SLMod:
      for (int i = 0; i < g.degree(); ++i) {
        for (int j = 0; j < g.degree(); ++j) {
          if (i != j) out.push_back(elementary_matrix(g, i, j, 1));
        }
      }
      break;
    case Family::Product: {
      std::vector<Element> ids;
      for (const auto& f : g.factors()) ids.push_back(identity(f));
      for (std::size_t i = 0; i < g.factors().size(); ++i) {
        for (const auto& s : generators(g.factors()[i])) {
          auto parts = ids;
          parts[i] = s;
          out.push_back(product_element(g, std::move(parts)));
        }
      }
      break;
    }
  }
  return out;
}

SubgroupSpec make_subgroup(std::vector<Element> gens, std::string label) {
  if (gens.empty()) throw InvalidInput("subgroup needs at least one generator");
  const Group g = gens.front().group();
  for (const auto& x : gens) {
    if (!(x.group() == g)) throw DescriptorMismatch("subgroup generators from different groups");
  }
  return SubgroupSpec{g, std::move(gens), std::move(label)};
}

SubgroupSpec whole_group(const Group& g) {
  auto gens = generators(g);
  if (gens.empty()) gens.push_back(identity(g));
  return SubgroupSpec{g, std::move(gens), g.name()};
}

std::vector<Element> subgroup_closure(const SubgroupSpec& s, std::size_t limit) {
  return closure_from(s.group, s.generators, limit);
}

std::vector<Element> conjugacy_closure(const std::vector<Element>& base, const Group& g, std::size_t limit) {
  const auto all = enumerate_elements(g, limit);
  ElementSet out;
  for (const auto& b : base) {
    if (!(b.group() == g)) throw DescriptorMismatch("element of " + b.group().name() + " in " + g.name());
    const Element binv = invert(b);
    for (const auto& x : all) {
      out.insert(conjugate_of(b, x));
      out.insert(conjugate_of(binv, x));
    }
  }
  return sorted(std::vector<Element>(out.begin(), out.end()));
}

namespace {

/// Normal closure in <ambient_gens> of the commutators of ambient_gens.
std::vector<Element> derived_from_generators(const Group& g, const std::vector<Element>& gens, std::size_t limit) {
  std::vector<Element> normal_gens;
  for (const auto& a : gens) {
    for (const auto& b : gens) {
      Element c = commutator_of(a, b);
      if (!c.is_identity()) normal_gens.push_back(std::move(c));
    }
  }
  if (normal_gens.empty()) return {identity(g)};
  std::vector<Element> members = closure_from(g, normal_gens, limit);
  ElementSet member_set(members.begin(), members.end());
  for (std::size_t i = 0; i < normal_gens.size(); ++i) {
    for (const auto& s : gens) {
      Element y = conjugate_of(normal_gens[i], s);
      if (member_set.count(y)) continue;
      normal_gens.push_back(y);
      members = closure_from(g, normal_gens, limit);
      member_set = ElementSet(members.begin(), members.end());
    }
  }
  return members;
}

}  // namespace

std::vector<Element> derived_subgroup(const Group& g, std::size_t limit) {
  check_guard(g, limit);
  return derived_from_generators(g, generators(g), limit);
}

std::vector<Element> derived_subgroup(const SubgroupSpec& h, std::size_t limit) {
  return derived_from_generators(h.group, h.generators, limit);
}

std::vector<Element> commutator_set(const std::vector<Element>& elements, std::size_t pair_limit) {
  if (elements.size() > 0 && elements.size() > pair_limit / elements.size()) {
    throw GuardExceeded("commutator set over " + std::to_string(elements.size()) + " elements exceeds the pair guard");
  }
  ElementSet out;
  for (const auto& a : elements) {
    const Element ainv = invert(a);
    for (const auto& b : elements) out.insert(compose(compose(a, b), compose(ainv, invert(b))));
  }
  return sorted(std::vector<Element>(out.begin(), out.end()));
}

std::optional<Integer> abelianization_order(const Group& g) {
  switch (g.family()) {
    case Family::Symmetric:
      return Integer(g.degree() >= 2 ? 2 : 1);
    case Family::Alternating:
      return Integer(g.degree() == 3 || g.degree() == 4 ? 3 : 1);
    case Family::Free:
    case Family::WreathZ:
    case Family::Z2Infinity:
      return std::nullopt;
    case Family::WreathZn: {
      // Coinvariants of H1(A)^N under the cyclic shift, times Z_N.
      auto inner = abelianization_order(g.base());
      if (!inner) return std::nullopt;
      return *inner * g.degree();
    }
    case Family::AffZ:
      return Integer(4);
    case Family::Bar: {
      // H1 of (G x G) semidirect Z_2 is H1(G) x Z_2.
      auto inner = abelianization_order(g.base());
      if (!inner) return std::nullopt;
      return *inner * 2;
    }
    case Family::SLZ:
      return Integer(g.degree() == 2 ? 12 : 1);
    case Family::SLMod: {
      if (g.degree() == 2 && g.modulus() == 2) return Integer(2);
      if (g.degree() == 2 && g.modulus() == 3) return Integer(3);
      return Integer(1);
    }
    case Family::Product: {
      Integer total = 1;
      for (const auto& f : g.factors()) {
        auto o = abelianization_order(f);
        if (!o) return std::nullopt;
        total *= *o;
      }
      return total;
    }
  }
  return std::nullopt;
}

ElementIndex::ElementIndex(std::vector<Element> elements) : elements_(std::move(elements)) {
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
}

std::optional<std::size_t> ElementIndex::find(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ElementIndex::index_of(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) throw InvalidInput("element " + to_literal(e) + " is not in the indexed set");
  return it->second;
}

}  // namespace cinorm
