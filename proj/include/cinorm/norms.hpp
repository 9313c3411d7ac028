#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cinorm/enumerate.hpp"
#include "cinorm/group.hpp"
#include "cinorm/rational.hpp"

namespace cinorm {

using NormFn = std::function<Rational(const Element&)>;
using ElementPair = std::pair<Element, Element>;

struct NormMeta {
  std::string name;
  /// Empty means unbounded.
  std::optional<Rational> diameter;
  bool fine = false;
  bool discrete = true;
  /// Literals of the generating set K, when the norm is generated.
  std::vector<std::string> generator_set;
  /// Constant added off the identity by quasinorm_to_norm.
  Rational added_constant = 0;
};

/// Exact values of a norm on every element of a finite set, usually a whole
/// finite group or its derived subgroup.
class NormTable {
 public:
  NormTable(Group group, std::shared_ptr<const ElementIndex> index, std::vector<Rational> values, NormMeta meta);

  const Group& group() const { return group_; }
  const ElementIndex& index() const { return *index_; }
  std::shared_ptr<const ElementIndex> shared_index() const { return index_; }
  std::size_t size() const { return values_.size(); }
  const Rational& value(const Element& e) const;
  const Rational& value_at(std::size_t i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  const NormMeta& meta() const { return meta_; }
  NormMeta& meta() { return meta_; }
  NormFn as_function() const;

 private:
  Group group_;
  std::shared_ptr<const ElementIndex> index_;
  std::vector<Rational> values_;
  NormMeta meta_;
};

/// Evaluates fn on every element of a finite group.
NormTable tabulate(const Group& g, std::string name, const NormFn& fn, std::size_t limit = kDefaultGuard);

/// 1 off the identity.
Rational trivial_norm(const Element& e);

/// Moved points of a permutation, or set bits of a binary word.
Rational support_norm(const Element& e);

/// On A wr Z_N: the number of non-identity coordinates when the shift is 0,
/// and N otherwise.
Rational wreath_support_norm(const Element& e);

struct AxiomViolation {
  int axiom;  // 1..5: identity, symmetry, triangle, conjugation, positivity
  std::vector<Element> witness;
  std::string detail;
};

struct AxiomReport {
  bool passed = true;
  bool pseudo = false;  // only positivity fails
  std::size_t checked_pairs = 0;
  std::size_t violation_count = 0;
  std::vector<AxiomViolation> violations;  // first few, in scan order
};

/// Exhaustive check of the five axioms. Conjugation is checked against every
/// element of the ambient group when it is finite, otherwise against the
/// table's own domain.
AxiomReport verify_norm_axioms(const NormTable& table, unsigned threads = 1);

inline constexpr std::int64_t kDefaultWindow = 50;

/// Finite window of an infinite group: z^a t^e with |a| <= window on AffZ,
/// otherwise the ball of that radius in the standard generators (units
/// 1..window on z2inf). Sorted. Throws GuardExceeded past `limit`.
std::vector<Element> window_elements(const Group& g, std::int64_t window, std::size_t limit = kDefaultGuard);

/// The five axioms for a norm given as a callable, over every pair drawn
/// from `window`. Products and conjugates are evaluated directly, so they
/// may leave the window.
AxiomReport verify_norm_axioms_window(const NormFn& fn, const std::vector<Element>& window, unsigned threads = 1);

/// Word norm for the conjugacy closure of K ∪ K^-1, by BFS. Throws
/// InvalidInput when K does not conjugation-generate the group.
NormTable qk_norm(const Group& g, const std::vector<Element>& K, std::size_t limit = kDefaultGuard);

/// cl on G' by BFS over the set of simple commutators, with witnesses.
class CommutatorLength {
 public:
  const NormTable& table() const { return table_; }
  Rational value(const Element& g) const { return table_.value(g); }
  /// Pairs (a_i, b_i) with g = [a_1, b_1] ... [a_k, b_k] and k = cl(g).
  std::vector<ElementPair> witness(const Element& g) const;
  /// cld, the largest value.
  Rational diameter() const { return *table_.meta().diameter; }

 private:
  friend CommutatorLength build_commutator_length(const Group&, const std::vector<Element>&,
                                                  const std::vector<Element>&);
  CommutatorLength(NormTable table, std::vector<ElementPair> pairs, std::vector<std::size_t> parent,
                   std::vector<std::size_t> via);
  NormTable table_;
  std::vector<ElementPair> pairs_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> via_;
};

CommutatorLength commutator_length_full(const Group& g, std::size_t limit = kDefaultGuard);
/// cl_H on H' for a subgroup H; the table's group is the ambient group.
CommutatorLength commutator_length_full(const SubgroupSpec& h, std::size_t limit = kDefaultGuard);
NormTable commutator_length(const Group& g, std::size_t limit = kDefaultGuard);

/// cl on AffZ, where G' = <z^2> and every z^{2n} equals [t, z^-n].
Rational affz_commutator_length(const Element& e);
ElementPair affz_commutator_witness(const Element& e);

/// Smallest k such that g lies in the span of generators[0..k). Works on
/// z2inf and on products of free:1 factors (a model of Z^n). Throws
/// InvalidInput when g is outside the span.
std::size_t generator_filtration_norm(const Element& g, const std::vector<Element>& generators);

/// Unit bit i (1-based) of z2inf.
Element z2inf_unit(std::size_t i);

struct QuasiNormSpec {
  std::string name;
  Group group;
  NormFn q;
  Rational c_add = 0;
  Rational c_conj = 0;
};

QuasiNormSpec quasinorm_from_table(const NormTable& table);

struct QuasiNormReport {
  bool passed = true;  // (i) and the (a) reading of (ii)
  std::size_t pairs = 0;
  Rational max_add_excess = 0;  // max q(ab) - q(a) - q(b)
  Rational max_conj_a = 0;      // max |q(b^-1 a b) - q(a)|
  Rational max_conj_b = 0;      // max |q(b^-1 a b) - q(b)|
  bool b_reading_holds = true;
  std::optional<ElementPair> add_violation;
  std::optional<ElementPair> conj_violation;
};

QuasiNormReport verify_quasinorm(const QuasiNormSpec& q, const std::vector<ElementPair>& pairs);

std::vector<ElementPair> all_pairs(const std::vector<Element>& elements);

/// z^a t^e with |a| <= window.
std::vector<Element> affz_window(std::int64_t window);

/// Symmetrize, take the sup over conjugates, then add c_add + c_conj + 1 off
/// the identity. The declared constants are checked on all pairs first.
NormTable quasinorm_to_norm(const QuasiNormSpec& q, std::size_t limit = kDefaultGuard);

struct Homomorphism {
  std::string name;
  Group source;
  Group target;
  std::function<Element(const Element&)> map;
};

Homomorphism identity_homomorphism(const Group& g);
/// AffZ -> S_2 x S_2, z^a t^e -> ((1 2)^a, (1 2)^e).
Homomorphism affz_abelianization();
/// Bar(G) -> S_2, recording the t-bit.
Homomorphism bar_parity(const Group& bar);

/// First pair on which map(ab) != map(a) map(b).
std::optional<ElementPair> homomorphism_violation(const Homomorphism& h, const std::vector<ElementPair>& sample);

/// q composed with the epimorphism; throws InvalidInput when the sample
/// exposes a non-homomorphism.
QuasiNormSpec pullback_qnorm(const QuasiNormSpec& q, const Homomorphism& epi, const std::vector<ElementPair>& sample);

struct CosetExtension {
  QuasiNormSpec q;
  std::vector<Element> reps;
  Rational C;  // max cl of h(s1, s2), where s1 s2 = h(s1, s2) s3
};

/// q(hs) = cl(h) for g = hs with h in G' and s a coset representative.
/// Finite groups use the lexicographically least element of each coset
/// unless reps are given. AffZ uses {1, z, t, zt}.
CosetExtension coset_extension_qnorm(const Group& g, std::vector<Element> reps = {},
                                     std::size_t limit = kDefaultGuard);

struct StabilizationEstimate {
  Element element;
  Rational upper;
  bool exact_zero = false;
  std::size_t n_max = 0;
  std::size_t argmin = 1;
};

/// min over 1 <= n <= n_max of nu(f^n)/n.
StabilizationEstimate stabilization_upper(const NormFn& nu, const Element& f, std::size_t n_max);

struct DominationReport {
  std::string norm_name;
  Rational lambda;
  std::size_t witness_checked = 0;
  bool passed = true;
  std::optional<Element> failure;
};

DominationReport check_extremal_domination(const NormTable& q, const std::vector<Element>& K,
                                           std::size_t limit = kDefaultGuard);

}  // namespace cinorm
