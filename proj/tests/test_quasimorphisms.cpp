#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "cinorm/error.hpp"
#include "cinorm/quasimorphisms.hpp"
#include "cinorm/random.hpp"

using namespace cinorm;

namespace {

// Independent count on a one-character-per-letter string (a, b, A, B).
std::string compact(const Element& e) {
  std::string s;
  for (int l : e.as<ReducedWord>().letters) s.push_back(l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' - l - 1));
  return s;
}

long count_sub(const std::string& hay, const std::string& needle) {
  long c = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++c;
  return c;
}

std::string invert_compact(const std::string& w) {
  std::string out(w.rbegin(), w.rend());
  for (auto& ch : out) ch = static_cast<char>(std::islower(ch) ? std::toupper(ch) : std::tolower(ch));
  return out;
}

}  // namespace

TEST_CASE("counting quasi-morphism examples") {
  const Group f2 = Group::free_group(2);
  const auto q = counting_qm(f2, "a b");
  CHECK(q.eval(identity(f2)) == 0);
  CHECK(q.eval(parse_element(f2, "a b a b")) == 2);
  CHECK(q.eval(parse_element(f2, "B A")) == -1);
  CHECK(q.kind == QmKind::Counting);
  CHECK_FALSE(q.homogeneous);
  CHECK(q.convention == "overlapping");
  CHECK_THROWS_AS(counting_qm(f2, std::vector<int>{}), InvalidInput);
  CHECK_THROWS_AS(counting_qm(Group::symmetric(3), std::vector<int>{1}), DescriptorMismatch);

  // Overlapping occurrences all count.
  const auto qa = counting_qm(f2, "a a");
  CHECK(qa.eval(parse_element(f2, "a a a")) == 2);
  CHECK(qa.eval(parse_element(f2, "A A A")) == -2);

  for (const std::string pattern : {"a b", "a b A", "a a b", "b A b B"}) {
    const auto qp = counting_qm(f2, pattern);
    const std::string pc = compact(parse_element(f2, pattern));
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
      const Element w = random_element(f2, rng, 20);
      const std::string s = compact(w);
      CHECK(qp.eval(w) == count_sub(s, pc) - count_sub(s, invert_compact(pc)));
      CHECK(qp.eval(invert(w)) == -qp.eval(w));
    }
    CHECK(qp.eval(invert(parse_element(f2, pattern))) == -1);
  }
}

TEST_CASE("defect: homomorphisms, finite groups, sampled counting") {
  const Group f2 = Group::free_group(2);
  auto hom = defect(exponent_sum_qm(f2, 1), EstimateMode::Sampled, 2000, 3);
  CHECK(hom.value == 0);
  CHECK(hom.certified == Certification::SampledLowerBound);

  const Group s3 = Group::symmetric(3);
  CHECK(defect(zero_qm(s3), EstimateMode::Exact).value == 0);
  CHECK_THROWS_AS(defect(zero_qm(f2), EstimateMode::Exact), InfiniteGroup);

  // A user function on S_3 against a plain double loop.
  QuasiMorphism moved{s3, support_norm, QmKind::User, false, "support", ""};
  auto exact = defect(moved, EstimateMode::Exact, 0, 0, 3);
  Rational oracle = 0;
  for (const auto& a : enumerate_elements(s3)) {
    for (const auto& b : enumerate_elements(s3)) {
      oracle = std::max<Rational>(oracle, abs(support_norm(compose(a, b)) - support_norm(a) - support_norm(b)));
    }
  }
  CHECK(exact.value == oracle);
  CHECK(exact.certified == Certification::Exact);
  REQUIRE(exact.witness);
  CHECK(abs(support_norm(compose(exact.witness->first, exact.witness->second)) - support_norm(exact.witness->first) -
            support_norm(exact.witness->second)) == oracle);

  const auto q = counting_qm(f2, "a b");
  Rational previous = 0;
  for (std::size_t budget : {10u, 100u, 1000u, 4000u}) {
    auto d = defect(q, EstimateMode::Sampled, budget, 42);
    CHECK(d.value >= previous);
    CHECK(d.value <= counting_defect_bound({1, 2}));
    CHECK(d.sample_meta.seed == 42);
    previous = d.value;
    auto again = defect(q, EstimateMode::Sampled, budget, 42, 4);
    CHECK(again.value == d.value);
    CHECK(again.witness == d.witness);
  }
  // Every pair from the radius-4 ball reaches at most 1 as well.
  Rational ball_max = 0;
  const auto ball = free_ball(f2, 4);
  for (const auto& a : ball) {
    for (const auto& b : ball) ball_max = std::max<Rational>(ball_max, abs(q.eval(compose(a, b)) - q.eval(a) - q.eval(b)));
  }
  CHECK(ball_max == 1);
  CHECK(previous == 1);
  CHECK(declared_defect(3).certified == Certification::DeclaredUpperBound);
}

TEST_CASE("homogenization intervals") {
  const Group f2 = Group::free_group(2);
  auto hom = homogenize(exponent_sum_qm(f2, 2), parse_element(f2, "b a b"), 7, Rational(0));
  CHECK(hom.center == 2);
  CHECK(hom.radius == 0);
  CHECK(hom.certified);

  const auto q = counting_qm(f2, "a b");
  auto ab = homogenize(q, parse_element(f2, "a b a b"), 64, Rational(3));
  std::string word;
  for (int i = 0; i < 128; ++i) word += "ab";
  CHECK(ab.center == rational(count_sub(word, "ab") - count_sub(word, "BA"), 64));
  CHECK(ab.center == 2);
  CHECK(ab.radius == Rational(3, 64));

  // a b A is conjugate to b, whose homogenization vanishes.
  auto conj = homogenize(q, parse_element(f2, "a b A"), 64, Rational(3));
  CHECK(conj.center == Rational(1, 64));
  CHECK(conj.center - conj.radius <= 0);
  CHECK(0 <= conj.center + conj.radius);

  auto heuristic = homogenize(q, parse_element(f2, "a b"), 5, std::nullopt);
  CHECK_FALSE(heuristic.certified);

  // Torsion: at a multiple of the order the center is exactly q(1) = 0.
  const Group s5 = Group::symmetric(5);
  QuasiMorphism moved{s5, support_norm, QmKind::User, false, "support", ""};
  auto t = homogenize(moved, parse_element(s5, "(1 2 3)(4 5)"), 6, Rational(5));
  CHECK(t.center == 0);
  CHECK_THROWS_AS(homogenize(q, identity(f2), 0, std::nullopt), InvalidInput);
}

TEST_CASE("homogeneity spot checks") {
  const Group f2 = Group::free_group(2);
  auto v = homogeneity_violation(counting_qm(f2, "a b"), {parse_element(f2, "a b"), parse_element(f2, "b a")});
  REQUIRE(v);
  CHECK(v->first == parse_element(f2, "b a"));
  CHECK(v->second == 2);
  CHECK_FALSE(homogeneity_violation(exponent_sum_qm(f2, 1), free_ball(f2, 3)));
  const Group s4 = Group::symmetric(4);
  CHECK_FALSE(homogeneity_violation(zero_qm(s4), enumerate_elements(s4), 12));
  // Any function with q(g^n) = n q(g) on a finite group vanishes: g^{ord} = 1.
  QuasiMorphism moved{s4, support_norm, QmKind::User, true, "support", ""};
  CHECK(homogeneity_violation(moved, enumerate_elements(s4), 12));
}

TEST_CASE("bar extension") {
  const Group f2 = Group::free_group(2);
  const auto r = counting_qm(f2, "a b");
  const auto rbar = bar_extension(r);
  const Group bar = Group::bar(f2);
  CHECK(rbar.domain == bar);
  CHECK(rbar.kind == QmKind::BarExtension);
  const Element g = parse_element(f2, "a b a b A");
  CHECK(rbar.eval(bar_element(bar, g, identity(f2), false)) == r.eval(g));
  CHECK(rbar.eval(bar_element(bar, g, g, true)) == 2 * r.eval(g));

  auto hom = bar_extension(exponent_sum_qm(f2, 1));
  auto d = defect(hom, EstimateMode::Sampled, 2000, 9, 1, 6);
  CHECK(d.value == 0);

  auto report = check_bar_defect(r, 2000, 5, 6, 3);
  CHECK(report.passed);
  CHECK(report.samples == 2000);
  CHECK(report.twisted > 800);
  CHECK(report.twisted < 1200);
  CHECK(report.max_lhs > 0);
  CHECK(report.max_lhs <= 2 * counting_defect_bound({1, 2}));
  auto serial = check_bar_defect(r, 2000, 5, 6, 1);
  CHECK(serial.twisted == report.twisted);
  CHECK(serial.max_lhs == report.max_lhs);

  // Mixed case by hand: h = (h1, h2) t, f = (f1, f2), hf = (h1 f2, h2 f1) t.
  const Element h1 = parse_element(f2, "a"), h2 = parse_element(f2, "b b"), f1 = parse_element(f2, "b"),
                f2e = parse_element(f2, "b a");
  auto c = bar_defect_check(r, bar_element(bar, h1, h2, true), bar_element(bar, f1, f2e, false));
  CHECK(c.twisted);
  // r(a b a) - r(a) - r(b a) = 1, r(b b b) - r(b b) - r(b) = 0.
  CHECK(c.rhs == 1);
  CHECK(c.lhs == 1);
  CHECK_THROWS_AS(bar_defect_check(r, bar_element(Group::bar(Group::symmetric(3)), identity(Group::symmetric(3)),
                                                  identity(Group::symmetric(3)), false),
                                   identity(bar)),
                  DescriptorMismatch);
}

TEST_CASE("Bar splitting identities") {
  const Group s5 = Group::symmetric(5);
  const Group bar = Group::bar(s5);
  auto trivial = verify_gbar_splitting(identity(bar), 20);
  CHECK(trivial.passed);
  CHECK(trivial.w1.is_identity());
  CHECK(trivial.w2.is_identity());

  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = Rng::for_sample(2024, i);
    const Element g1 = random_element(s5, rng);
    const Element g2 = random_element(s5, rng);
    for (bool t : {false, true}) {
      const Element w = bar_element(bar, g1, g2, t);
      auto rep = verify_gbar_splitting(w, 20);
      CHECK(rep.passed);
      CHECK(rep.twisted == t);
      if (t) {
        CHECK(rep.w1 == bar_element(bar, compose(g1, g2), identity(s5), false));
        CHECK(rep.w2 == bar_element(bar, identity(s5), compose(g2, g1), false));
        CHECK(power(w, 40) == compose(power(rep.w1, 20), power(rep.w2, 20)));
      } else {
        CHECK(power(w, 20) == compose(power(rep.w1, 20), power(rep.w2, 20)));
      }
    }
  }
  CHECK_THROWS_AS(verify_gbar_splitting(identity(s5), 3), DescriptorMismatch);
}

TEST_CASE("commutator sup") {
  const Group f2 = Group::free_group(2);
  const auto ball = free_ball(f2, 3);
  CHECK(ball.size() == 1 + 4 + 12 + 36);
  CHECK(commutator_sup_over(zero_qm(f2), ball).value == 0);
  CHECK(commutator_sup_over(exponent_sum_qm(f2, 1), ball).value == 0);

  const auto q = counting_qm(f2, "a b");
  auto sup = commutator_sup_over(q, ball, 3);
  Rational oracle = 0;
  for (const auto& x : ball) {
    for (const auto& y : ball) oracle = std::max(oracle, q.eval(commutator_of(x, y)));
  }
  CHECK(sup.value == oracle);
  CHECK(sup.value > 0);
  REQUIRE_FALSE(sup.witnesses.empty());
  for (const auto& [x, y] : sup.witnesses) CHECK(q.eval(commutator_of(x, y)) == sup.value);
  CHECK(commutator_sup_over(q, ball, 1).witnesses == sup.witnesses);

  auto sampled = commutator_sup(q, whole_group(f2), EstimateMode::Sampled, 3000, 11, 2);
  CHECK(sampled.certified == Certification::SampledLowerBound);
  CHECK(sampled.value > 0);
  for (const auto& [x, y] : sampled.witnesses) CHECK(q.eval(commutator_of(x, y)) == sampled.value);
  auto again = commutator_sup(q, whole_group(f2), EstimateMode::Sampled, 3000, 11, 1);
  CHECK(again.value == sampled.value);
  CHECK(again.witnesses == sampled.witnesses);
  CHECK_THROWS_AS(commutator_sup(q, whole_group(f2), EstimateMode::Exact), InfiniteGroup);

  const Group s4 = Group::symmetric(4);
  CHECK(commutator_sup(zero_qm(s4), whole_group(s4), EstimateMode::Exact).value == 0);
}

TEST_CASE("commutator additivity over commuting factors") {
  const Group f2 = Group::free_group(2);
  const Group k2 = Group::product({f2, f2});
  const auto q = counting_qm(f2, "a b");
  const auto phi = product_qm(k2, {q, q});
  const std::vector<SubgroupSpec> factors{
      make_subgroup({embed_factor(k2, 0, parse_element(f2, "a")), embed_factor(k2, 0, parse_element(f2, "b"))}),
      make_subgroup({embed_factor(k2, 1, parse_element(f2, "a")), embed_factor(k2, 1, parse_element(f2, "b"))})};

  auto zero = verify_commutator_additivity(phi, factors, {{identity(k2), identity(k2)}, {identity(k2), identity(k2)}});
  CHECK(zero.passed);
  CHECK(zero.combined == 0);
  CHECK_FALSE(zero.sup_equality_certified);

  const Element a = parse_element(f2, "a"), b = parse_element(f2, "b");
  auto r = verify_commutator_additivity(
      phi, factors,
      {{embed_factor(k2, 0, a), embed_factor(k2, 0, b)}, {embed_factor(k2, 1, a), embed_factor(k2, 1, b)}});
  CHECK(r.passed);
  CHECK(r.factor_values == std::vector<Rational>{1, 1});
  CHECK(r.combined == 2);

  const Group k3 = Group::product({f2, f2, f2});
  const auto phi3 = product_qm(k3, {q, counting_qm(f2, "a b A"), q});
  std::vector<SubgroupSpec> f3;
  for (std::size_t i = 0; i < 3; ++i) f3.push_back(make_subgroup({embed_factor(k3, i, a), embed_factor(k3, i, b)}));
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng = Rng::for_sample(8, s);
    std::vector<ElementPair> w;
    for (std::size_t i = 0; i < 3; ++i) {
      Element x = embed_factor(k3, i, random_element(f2, rng, 6));
      Element y = embed_factor(k3, i, random_element(f2, rng, 6));
      w.emplace_back(std::move(x), std::move(y));
    }
    auto rep = verify_commutator_additivity(phi3, f3, w);
    CHECK(rep.passed);
  }

  // Overlapping factors do not commute.
  std::vector<SubgroupSpec> bad{f3[0], make_subgroup({embed_factor(k3, 0, b)}), f3[2]};
  CHECK_THROWS_AS(verify_commutator_additivity(phi3, bad,
                                               {{identity(k3), identity(k3)},
                                                {identity(k3), identity(k3)},
                                                {identity(k3), identity(k3)}}),
                  InvalidInput);
}

TEST_CASE("scl bounds") {
  const Group f2 = Group::free_group(2);
  const auto q = counting_qm(f2, "a b");
  const Element w = parse_element(f2, "a b A B");
  auto b = scl_bounds(w, q, counting_defect_bound({1, 2}), 64);
  REQUIRE(b.lower);
  // q(w^64) / 64 = 1, so the bound is (1 - 3/64) / 12.
  CHECK(*b.lower == Rational(61, 768));
  CHECK(*b.lower > 0);
  CHECK_FALSE(b.upper);
  CHECK_FALSE(b.degenerate);

  auto trivial = scl_bounds(w, zero_qm(f2), Rational(0), 8);
  CHECK(*trivial.lower == 0);
  CHECK_THROWS_AS(scl_bounds(w, q, Rational(0), 8), InvalidInput);

  const Group s5 = Group::symmetric(5);
  const auto cl = commutator_length_full(s5);
  ClOracle oracle = [&cl](const Element& e) -> std::optional<Rational> { return cl.value(e); };
  const Element x = parse_element(s5, "(1 2 3)");
  auto fin = scl_bounds(x, zero_qm(s5), Rational(0), 1, oracle, {1, 2, 3});
  CHECK(fin.degenerate);
  CHECK(*fin.upper == 0);
  CHECK(*fin.lower == 0);
  CHECK(fin.upper_witness->first == 3);
  auto no_lower = scl_bounds(x, zero_qm(s5), std::nullopt, 1, oracle, {1, 2});
  CHECK_FALSE(no_lower.lower);
  CHECK(*no_lower.upper == Rational(1, 2));
}
