#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cinorm/group.hpp"
#include "cinorm/norms.hpp"

namespace cinorm {

/// An ambient group with a fixed element F and an embedding of a base group
/// H such that Conj_{F^i}(H), 0 <= i <= capacity, pairwise commute.
struct FCommEnvironment {
  Group ambient;
  Group base;
  Element F;
  std::function<Element(const Element&)> embed;
  std::size_t capacity = 0;
};

/// Checks the commuting-conjugates hypothesis on generators of the base
/// group and throws InvalidInput when it fails.
FCommEnvironment make_environment(Group ambient, Group base, Element F, std::function<Element(const Element&)> embed,
                                  std::size_t capacity);
/// Same, for a subgroup H of `base` given by generators.
FCommEnvironment make_environment(Group ambient, Group base, const std::vector<Element>& base_generators, Element F,
                                  std::function<Element(const Element&)> embed, std::size_t capacity);

/// A wr Z_N with F the unit shift and H = A at coordinate 0. Capacity N - 1.
FCommEnvironment wreath_environment(const Group& base, int cycle);

/// A wr Z with F the unit shift; capacity is whatever the caller needs.
FCommEnvironment wreath_z_environment(const Group& base, std::size_t capacity);

/// F^i x F^-i.
Element conj_by_power(const FCommEnvironment& env, const Element& x, std::int64_t i);

/// Conj_f([F, h]).
struct FCommutator {
  Element f;
  Element h;
};

Element value(const FCommEnvironment& env, const FCommutator& c);
/// Conj_{fh}([F, h^-1]), whose value is the inverse.
FCommutator inverse(const FCommutator& c);
/// Conj_by applied to the value: Conj_{by f}([F, h]).
FCommutator conjugated(const FCommutator& c, const Element& by);

struct FCommutatorDecomposition {
  Element target;
  std::vector<FCommutator> factors;
  bool verified = false;
  /// Named intermediate elements, in construction order.
  std::vector<std::pair<std::string, Element>> audit;
};

/// Product of factor values; compares it to the target.
bool verify(const FCommEnvironment& env, FCommutatorDecomposition& d);

struct RearrangeSolution {
  std::vector<Element> phis;  // in the base group
  Element assembled;          // prod Conj_{F^i}(embed(phi_i))
};

/// For g_0 ... g_m with product 1, prod Conj_{F^i}(embed(g_i)) = [F, phi^-1]
/// where phi_k = g_0 ... g_k.
std::pair<RearrangeSolution, FCommutator> solve_rearrange_id(const FCommEnvironment& env,
                                                             const std::vector<Element>& gs);

/// embed(g_m ... g_1) = value(c) * residual with
/// residual = prod_{i=1..m} Conj_{F^i}(embed(g_i)).
std::pair<FCommutator, Element> rearrange(const FCommEnvironment& env, const std::vector<Element>& gs);

/// embed([f, g]) as two F-commutators. Needs capacity >= 2.
FCommutatorDecomposition two_fcommutators(const FCommEnvironment& env, const Element& f, const Element& g);

/// embed([f_m, g_m] ... [f_1, g_1]) as at most seven F-commutators. pairs[0]
/// is (f_1, g_1).
FCommutatorDecomposition seven_fcommutators(const FCommEnvironment& env, const std::vector<ElementPair>& pairs);

/// The same target as an explicit product [a1, b1][a2, b2] in the ambient
/// group, with a1 = F.
std::pair<ElementPair, ElementPair> two_commutator_witness(const FCommEnvironment& env,
                                                           const std::vector<ElementPair>& pairs);

/// embed of the product [f_m, g_m] ... [f_1, g_1] in the base group.
Element commutator_product_target(const FCommEnvironment& env, const std::vector<ElementPair>& pairs);

struct FCommNormReport {
  bool passed = true;
  Rational nu_F;
  Rational nu_target;
  Rational max_factor;  // largest nu(value(c))
  std::size_t factor_count = 0;
};

/// Checks nu(value(c)) <= 2 nu(F) for each factor and nu(target) <= 14 nu(F).
FCommNormReport fcomm_norm_bound(const FCommEnvironment& env, const FCommutatorDecomposition& d, const NormFn& nu);

}  // namespace cinorm
