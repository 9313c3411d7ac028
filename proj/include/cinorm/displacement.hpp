#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cinorm/enumerate.hpp"
#include "cinorm/norms.hpp"

namespace cinorm {

inline constexpr std::size_t kPackingGuard = 1'000'000;

/// Generator-level test; equivalent to elementwise commutation.
bool subgroups_commute(const SubgroupSpec& a, const SubgroupSpec& b);

/// Conj_phi(H), generated by the conjugated generators.
SubgroupSpec conjugate_subgroup(const SubgroupSpec& h, const Element& phi);

/// True when Conj_{phi^i}(H), 0 <= i <= m, pairwise commute.
bool strongly_displaces(const SubgroupSpec& h, const Element& phi, std::size_t m);

/// True when H, Conj_{phis[0]}(H), ... pairwise commute.
bool weakly_displaces(const SubgroupSpec& h, const std::vector<Element>& phis);

enum class DisplacementMode { Weak, Strong };

struct DisplacementReport {
  SubgroupSpec H;
  std::size_t m = 0;
  DisplacementMode mode = DisplacementMode::Weak;
  std::vector<Element> witnesses;  // phi_1..phi_m, or the single phi in strong mode
  bool found = false;
};

/// Lexicographically least strong m-displacer, scanning all of G.
DisplacementReport find_strong_displacer(const Group& g, const SubgroupSpec& h, std::size_t m, unsigned threads = 1,
                                         std::size_t limit = kDefaultGuard);

struct PackingResult {
  /// Empty when H is abelian: every m works with phi = 1.
  std::optional<std::size_t> p;
  bool abelian_degenerate = false;
  DisplacementReport certificate;
  bool exhausted = false;
  /// Number of distinct conjugates of H.
  std::size_t conjugates = 0;
};

/// Weak search over the distinct conjugates Conj_phi(H), up to m_cap
/// displacements (p <= m_cap + 1).
PackingResult packing_number(const Group& g, const SubgroupSpec& h, std::size_t m_cap, unsigned threads = 1,
                             std::size_t limit = kPackingGuard);

struct EnergyResult {
  std::size_t m = 0;
  std::optional<Rational> e_m;  // empty means infinite
  std::optional<Element> minimizer;
};

/// Exact minimum of nu over strong m-displacers. Ties go to the least
/// element, independently of the thread count.
EnergyResult displacement_energy(const Group& g, const SubgroupSpec& h, std::size_t m, const NormFn& nu,
                                 unsigned threads = 1, std::size_t limit = kDefaultGuard);

/// inf nu(phi) over phi with H1 commuting with Conj_phi(H2).
EnergyResult disjunction_energy(const Group& g, const SubgroupSpec& h1, const SubgroupSpec& h2, const NormFn& nu,
                                unsigned threads = 1, std::size_t limit = kDefaultGuard);

struct InequalityCheck {
  Element x;
  std::size_t cl = 0;
  std::string bound;  // "14e_m", "4e_1", "cl_G<=2", "4e(H1,H2)"
  Rational lhs;
  Rational rhs;
  bool ok = true;
};

struct MasterReport {
  bool passed = true;
  EnergyResult energy;
  std::optional<Rational> e1;
  std::vector<InequalityCheck> checks;
  std::size_t chain_checks = 0;
  std::size_t seven_factor_checks = 0;
  std::optional<ElementPair> chain_failure;
};

/// For x in H' with cl_H(x) <= m: nu(x) <= 14 e_m(H) and an explicit
/// two-commutator witness of cl_G(x) <= 2 built from the minimizer. For
/// cl_H(x) = 1: nu(x) <= 4 e_1(H) and, for every (f, g) in H x H, the chain
/// nu([f,g]) <= 2 nu([f,phi]) <= 4 nu(phi) with the e_1 minimizer phi.
MasterReport verify_master_inequalities(const Group& g, const SubgroupSpec& h, std::size_t m, const NormFn& nu,
                                        unsigned threads = 1, std::size_t limit = kDefaultGuard);

/// nu([h1, h2]) <= 4 e(H1, H2) for all h1 in H1, h2 in H2.
MasterReport verify_disjunction_inequality(const Group& g, const SubgroupSpec& h1, const SubgroupSpec& h2,
                                           const NormFn& nu, unsigned threads = 1, std::size_t limit = kDefaultGuard);

}  // namespace cinorm
