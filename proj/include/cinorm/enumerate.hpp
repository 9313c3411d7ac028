#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cinorm/group.hpp"

namespace cinorm {

inline constexpr std::size_t kDefaultGuard = 10'000'000;

/// Every element of a finite group exactly once, sorted by payload order.
/// Throws InfiniteGroup or GuardExceeded.
std::vector<Element> enumerate_elements(const Group& g, std::size_t limit = kDefaultGuard);

/// Standard generating set. Empty for trivial groups. Throws InfiniteGroup
/// for z2inf, which is not finitely generated.
std::vector<Element> generators(const Group& g);

/// A subgroup given by generators. All generators share one group.
struct SubgroupSpec {
  Group group;
  std::vector<Element> generators;
  std::string label;
};

SubgroupSpec make_subgroup(std::vector<Element> generators, std::string label = "");
SubgroupSpec whole_group(const Group& g);

/// Sorted element list of the generated subgroup.
std::vector<Element> subgroup_closure(const SubgroupSpec& s, std::size_t limit = kDefaultGuard);

/// All conjugates of base and base^-1 under the whole (finite) group, sorted.
std::vector<Element> conjugacy_closure(const std::vector<Element>& base, const Group& g,
                                       std::size_t limit = kDefaultGuard);

/// Commutator subgroup, computed as the normal closure of generator
/// commutators. Sorted.
std::vector<Element> derived_subgroup(const Group& g, std::size_t limit = kDefaultGuard);
std::vector<Element> derived_subgroup(const SubgroupSpec& h, std::size_t limit = kDefaultGuard);

/// All simple commutators [a, b] with a, b drawn from `elements`. Sorted.
std::vector<Element> commutator_set(const std::vector<Element>& elements, std::size_t pair_limit = 100'000'000);

/// |G / G'|, empty when infinite. Uses per-family formulas where known and
/// enumeration otherwise.
std::optional<Integer> abelianization_order(const Group& g);

/// Membership in the class of groups with finite abelianization.
inline bool has_finite_abelianization(const Group& g) { return abelianization_order(g).has_value(); }

/// Dense indexing of a fixed element list.
class ElementIndex {
 public:
  ElementIndex() = default;
  explicit ElementIndex(std::vector<Element> elements);

  std::size_t size() const { return elements_.size(); }
  const Element& at(std::size_t i) const { return elements_[i]; }
  const std::vector<Element>& elements() const { return elements_; }
  std::optional<std::size_t> find(const Element& e) const;
  std::size_t index_of(const Element& e) const;
  bool contains(const Element& e) const { return find(e).has_value(); }

 private:
  std::vector<Element> elements_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

}  // namespace cinorm
