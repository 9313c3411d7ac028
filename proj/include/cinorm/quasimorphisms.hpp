#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cinorm/enumerate.hpp"
#include "cinorm/norms.hpp"

namespace cinorm {

enum class QmKind { Homomorphism, Counting, BarExtension, User };

struct QuasiMorphism {
  Group domain;
  std::function<Rational(const Element&)> eval;
  QmKind kind = QmKind::User;
  /// Claimed, and spot-checked by homogeneity_violation.
  bool homogeneous = false;
  std::string name;
  /// Occurrence-counting convention, empty for non-counting kinds.
  std::string convention;
};

std::string to_string(QmKind kind);

QuasiMorphism zero_qm(const Group& g);
QuasiMorphism homomorphism_qm(const Group& g, std::string name, std::function<Rational(const Element&)> eval);
/// Exponent sum of generator `letter` (1-based) on a free group.
QuasiMorphism exponent_sum_qm(const Group& free, int letter);

/// Occurrences of `pattern` in the reduced word minus occurrences of its
/// inverse. Overlapping occurrences all count.
QuasiMorphism counting_qm(const Group& free, const std::vector<int>& pattern);
QuasiMorphism counting_qm(const Group& free, const std::string& pattern_literal);

/// 3(L - 1) for a pattern of length L >= 2, and 0 for a single letter, where
/// the count is a homomorphism. Only windows straddling one of the three
/// junctions in a = a'c, b = c^-1 b', ab = a'b' can change the count, and
/// each contributes at most 1.
Rational counting_defect_bound(const std::vector<int>& pattern);

/// Sum of factor quasi-morphisms on a direct product.
QuasiMorphism product_qm(const Group& product, const std::vector<QuasiMorphism>& factors);

/// First sample g and power n (2 <= n <= max_power) with eval(g^n) != n eval(g).
std::optional<std::pair<Element, std::int64_t>> homogeneity_violation(const QuasiMorphism& q,
                                                                      const std::vector<Element>& samples,
                                                                      std::int64_t max_power = 4);

enum class Certification { Exact, SampledLowerBound, DeclaredUpperBound };
std::string to_string(Certification c);

struct SampleMeta {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  int word_size = 0;
};

struct DefectEstimate {
  Rational value = 0;
  Certification certified = Certification::Exact;
  SampleMeta sample_meta;
  std::optional<ElementPair> witness;
};

enum class EstimateMode { Exact, Sampled };

/// sup |q(ab) - q(a) - q(b)|. Exact mode enumerates a finite domain. Sampled
/// mode draws pair i from Rng::for_sample(seed, i), so a larger budget only
/// adds samples and the value never decreases.
DefectEstimate defect(const QuasiMorphism& q, EstimateMode mode, std::size_t budget = 0, std::uint64_t seed = 0,
                      unsigned threads = 1, int word_size = 8, std::size_t limit = kDefaultGuard);

DefectEstimate declared_defect(const Rational& upper);

struct HomogenizationInterval {
  Element element;
  std::int64_t n = 1;
  Rational center;  // q(g^n) / n
  Rational radius;  // D / n when D is declared
  bool certified = false;
};

/// g^n is formed by repeated squaring.
HomogenizationInterval homogenize(const QuasiMorphism& q, const Element& g, std::int64_t n,
                                  std::optional<Rational> defect_upper);

/// h = (h1, h2) t^e -> r(h1) + r(h2).
QuasiMorphism bar_extension(const QuasiMorphism& r);

struct BarDefectCheck {
  bool twisted = false;  // h carries t, so f's coordinates are swapped
  Rational lhs;          // |rbar(hf) - rbar(h) - rbar(f)|
  Rational rhs;          // sum of the two coordinate defects
  bool ok = true;
};

/// Exact pointwise check of the coordinate-wise defect bound for one pair.
BarDefectCheck bar_defect_check(const QuasiMorphism& r, const Element& h, const Element& f);

struct BarDefectReport {
  bool passed = true;
  std::size_t samples = 0;
  std::size_t twisted = 0;
  Rational max_lhs = 0;
  std::optional<ElementPair> violation;
  std::uint64_t seed = 0;
};

BarDefectReport check_bar_defect(const QuasiMorphism& r, std::size_t samples, std::uint64_t seed, int word_size = 6,
                                 unsigned threads = 1);

struct SplittingReport {
  bool passed = true;
  bool twisted = false;
  Element w1;
  Element w2;
  std::size_t k = 0;
  std::optional<std::size_t> failing_power;
};

/// For w = (g1, g2): w1 = (g1, 1), w2 = (1, g2) and w^j = w1^j w2^j.
/// For w = (g1, g2) t: w1 = (g1 g2, 1), w2 = (1, g2 g1) and w^{2j} = w1^j w2^j.
/// Checked for every 1 <= j <= k.
SplittingReport verify_gbar_splitting(const Element& w, std::size_t k);

struct CommutatorSupEstimate {
  Rational value = 0;
  std::vector<ElementPair> witnesses;  // pairs reaching the value, scan order, at most 8
  Certification certified = Certification::Exact;
  SampleMeta sample_meta;
};

/// sup q([x, y]) over x, y in H.
CommutatorSupEstimate commutator_sup(const QuasiMorphism& q, const SubgroupSpec& h, EstimateMode mode,
                                     std::size_t budget = 0, std::uint64_t seed = 0, unsigned threads = 1,
                                     int word_size = 8, std::size_t limit = kDefaultGuard);

/// Exhaustive sup over pairs from an explicit finite set; a lower bound for
/// any group containing it.
CommutatorSupEstimate commutator_sup_over(const QuasiMorphism& q, const std::vector<Element>& elements,
                                          unsigned threads = 1);

/// Reduced words of length <= radius, sorted.
std::vector<Element> free_ball(const Group& free, int radius);

struct AdditivityReport {
  bool passed = true;
  bool commute_ok = true;
  Rational combined;  // q([x_1 ... x_N, y_1 ... y_N])
  Rational sum;       // sum of q([x_i, y_i])
  std::vector<Rational> factor_values;
  /// The sup itself is never certified; only the witnessed lower bound.
  bool sup_equality_certified = false;
};

/// Factors H_i must pairwise commute (checked on generators and on the
/// witnesses); throws InvalidInput otherwise.
AdditivityReport verify_commutator_additivity(const QuasiMorphism& q, const std::vector<SubgroupSpec>& factors,
                                              const std::vector<ElementPair>& witnesses);

/// Coordinate i embedded into a direct product.
Element embed_factor(const Group& product, std::size_t i, const Element& x);

struct SclBounds {
  Element element;
  std::optional<Rational> lower;
  std::string lower_provenance;
  std::optional<Rational> upper;
  std::string upper_provenance;
  std::optional<std::pair<std::int64_t, Rational>> upper_witness;  // (n, cl(w^n))
  bool degenerate = false;  // finite group, where scl vanishes
};

using ClOracle = std::function<std::optional<Rational>(const Element&)>;

/// lower: with a declared defect bound D of q, |q(w^n)/n| - D/n is a lower
/// bound for the homogenization at w, whose defect is at most 2D, and
/// scl(w) >= value / (4D). A claimed homogeneous q with defect D gives
/// |q(w)| / (2D) directly. upper: min over the listed n of cl(w^n)/n.
SclBounds scl_bounds(const Element& w, const QuasiMorphism& q, std::optional<Rational> defect_upper,
                     std::int64_t n, const std::optional<ClOracle>& cl_oracle = std::nullopt,
                     const std::vector<std::int64_t>& upper_ns = {});

}  // namespace cinorm
