#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cinorm/error.hpp"
#include "cinorm/fcommutator.hpp"
#include "cinorm/random.hpp"

using namespace cinorm;

namespace {

const Group kS3 = Group::symmetric(3);

Element s3(const char* lit) { return parse_element(kS3, lit); }

// Base-group value at coordinate i of a wreath element.
Element coordinate(const Element& w, std::int64_t i) {
  const auto& p = w.as<WreathPayload>();
  for (std::size_t k = 0; k < p.positions.size(); ++k) {
    if (p.positions[k] == i) return p.values[k];
  }
  return identity(w.group().base());
}

std::vector<ElementPair> random_pairs(const Group& base, std::uint64_t seed, std::size_t m) {
  std::vector<ElementPair> out;
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng = Rng::for_sample(seed, i);
    out.emplace_back(random_element(base, rng), random_element(base, rng));
  }
  return out;
}

void check_inverse_closure(const FCommEnvironment& env, const FCommutatorDecomposition& d) {
  for (const auto& c : d.factors) CHECK(value(env, inverse(c)) == invert(value(env, c)));
}

}  // namespace

TEST_CASE("environments") {
  auto env = wreath_environment(kS3, 3);
  CHECK(env.capacity == 2);
  CHECK(conj_by_power(env, env.embed(s3("(1 2)")), 2) == wreath_single(env.ambient, 2, s3("(1 2)")));

  // S_9 with three blocks of Sym{1,2,3} moved by a block 3-cycle.
  const Group s9 = Group::symmetric(9);
  auto block = make_environment(
      s9, kS3, parse_element(s9, "(1 4 7)(2 5 8)(3 6 9)"),
      [s9](const Element& x) {
        const auto& img = x.as<Permutation>().image;
        Permutation p;
        for (std::uint16_t i = 0; i < 9; ++i) p.image.push_back(i < 3 ? img[i] : i);
        return Element(s9, p);
      },
      2);
  CHECK(block.capacity == 2);

  // F of order 2 cannot give three commuting copies.
  const Group s6 = Group::symmetric(6);
  auto embed6 = [s6](const Element& x) {
    const auto& img = x.as<Permutation>().image;
    Permutation p;
    for (std::uint16_t i = 0; i < 6; ++i) p.image.push_back(i < 3 ? img[i] : i);
    return Element(s6, p);
  };
  CHECK_NOTHROW(make_environment(s6, kS3, parse_element(s6, "(1 4)(2 5)(3 6)"), embed6, 1));
  CHECK_THROWS_AS(make_environment(s6, kS3, parse_element(s6, "(1 4)(2 5)(3 6)"), embed6, 2), InvalidInput);
}

TEST_CASE("component-wise product law on WreathZn(S_3, 3)") {
  const Group w = Group::parse("wreath:sn:3:zn:3");
  std::vector<Element> base_part;
  for (const auto& x : enumerate_elements(w)) {
    if (x.as<WreathPayload>().shift == 0) base_part.push_back(x);
  }
  CHECK(base_part.size() == 216);
  for (const auto& a : base_part) {
    for (const auto& b : base_part) {
      Element ab = compose(a, b);
      for (int i = 0; i < 3; ++i) {
        if (!(coordinate(ab, i) == compose(coordinate(a, i), coordinate(b, i)))) FAIL("component law");
      }
    }
  }
}

TEST_CASE("solve_rearrange_id examples") {
  auto env = wreath_environment(kS3, 3);
  const Element one = identity(kS3);

  auto [sol0, c0] = solve_rearrange_id(env, {one, one, one});
  CHECK(sol0.assembled.is_identity());
  CHECK(value(env, c0).is_identity());

  const Element g = s3("(1 2 3)");
  auto [sol1, c1] = solve_rearrange_id(env, {g, invert(g)});
  CHECK(sol1.phis == std::vector<Element>{g});
  CHECK(sol1.assembled == env.embed(g));
  CHECK(value(env, c1) == compose(env.embed(g), conj_by_power(env, env.embed(invert(g)), 1)));
  CHECK(c1.f.is_identity());
  CHECK(c1.h == invert(sol1.assembled));

  std::vector<Element> gs{s3("(1 2)"), s3("(1 3)"), invert(compose(s3("(1 2)"), s3("(1 3)")))};
  auto [sol2, c2] = solve_rearrange_id(env, gs);
  CHECK(sol2.phis.size() == 2);
  CHECK(sol2.phis[0] == gs[0]);
  CHECK(compose(invert(sol2.phis[0]), sol2.phis[1]) == gs[1]);
  for (int i = 0; i < 2; ++i) CHECK(coordinate(sol2.assembled, i) == sol2.phis[static_cast<std::size_t>(i)]);
  Element expected = identity(env.ambient);
  for (int i = 0; i < 3; ++i) expected = compose(expected, wreath_single(env.ambient, i, gs[static_cast<std::size_t>(i)]));
  CHECK(value(env, c2) == expected);

  CHECK_THROWS_AS(solve_rearrange_id(env, {g, g}), InvalidInput);
  CHECK_THROWS_AS(solve_rearrange_id(env, {one, one, one, one}), InvalidInput);
}

TEST_CASE("solve_rearrange_id: seeded tuples satisfy the linear system") {
  for (int m = 1; m <= 4; ++m) {
    auto env = wreath_environment(Group::symmetric(4), m + 1);
    for (std::uint64_t s = 0; s < 50; ++s) {
      Rng rng = Rng::for_sample(1000 + static_cast<std::uint64_t>(m), s);
      std::vector<Element> gs;
      Element prod = identity(env.base);
      for (int i = 0; i < m; ++i) {
        gs.push_back(random_element(env.base, rng));
        prod = compose(prod, gs.back());
      }
      gs.push_back(invert(prod));
      auto [sol, c] = solve_rearrange_id(env, gs);
      CHECK(sol.phis[0] == gs[0]);
      for (std::size_t k = 1; k < sol.phis.size(); ++k) CHECK(compose(invert(sol.phis[k - 1]), sol.phis[k]) == gs[k]);
      CHECK(value(env, c) == commutator_of(env.F, invert(sol.assembled)));
      CHECK(value(env, inverse(c)) == invert(value(env, c)));
    }
  }
}

TEST_CASE("rearrange examples") {
  auto env = wreath_environment(kS3, 3);
  const Element g = s3("(1 2)");
  auto [c1, r1] = rearrange(env, {g});
  CHECK(r1 == conj_by_power(env, env.embed(g), 1));
  CHECK(env.embed(g) == compose(value(env, c1), r1));

  auto all = enumerate_elements(kS3);
  for (const auto& a : all) {
    for (const auto& b : all) {
      auto [c, residual] = rearrange(env, {a, b});
      CHECK(env.embed(compose(b, a)) == compose(value(env, c), residual));
      CHECK(residual == compose(wreath_single(env.ambient, 1, a), wreath_single(env.ambient, 2, b)));
    }
  }

  auto [c0, r0] = rearrange(env, {identity(kS3), identity(kS3)});
  CHECK(value(env, c0).is_identity());
  CHECK(r0.is_identity());
  CHECK_THROWS_AS(rearrange(env, {g, g, g}), InvalidInput);
}

TEST_CASE("two_fcommutators examples") {
  auto env = wreath_environment(kS3, 3);
  auto same = two_fcommutators(env, s3("(1 2)"), s3("(1 2)"));
  CHECK(same.target.is_identity());
  CHECK(same.verified);
  CHECK(compose(value(env, same.factors[0]), value(env, same.factors[1])).is_identity());

  auto d = two_fcommutators(env, s3("(1 2)"), s3("(1 3)"));
  CHECK(d.target == env.embed(s3("(1 2 3)")));
  CHECK(d.factors.size() == 2);

  int verified = 0;
  auto all = enumerate_elements(kS3);
  for (const auto& f : all) {
    for (const auto& g : all) {
      auto x = two_fcommutators(env, f, g);
      verified += x.verified && x.factors.size() == 2;
      check_inverse_closure(env, x);
    }
  }
  CHECK(verified == 36);

  CHECK_THROWS_AS(two_fcommutators(wreath_environment(kS3, 2), s3("(1 2)"), s3("(1 3)")), InvalidInput);
}

TEST_CASE("seven_fcommutators examples") {
  auto env3 = wreath_environment(kS3, 3);
  auto empty = seven_fcommutators(env3, {});
  CHECK(empty.factors.empty());
  CHECK(empty.target.is_identity());
  CHECK(empty.verified);

  auto one = seven_fcommutators(env3, {{s3("(1 2)"), s3("(2 3)")}});
  CHECK(one.verified);
  CHECK(one.factors.size() <= 7);
  check_inverse_closure(env3, one);

  auto env4 = wreath_environment(kS3, 4);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto pairs = random_pairs(kS3, 77 + s, 3);
    auto d = seven_fcommutators(env4, pairs);
    CHECK(d.verified);
    CHECK(d.factors.size() <= 7);
    CHECK(d.target == commutator_product_target(env4, pairs));
    Element prod = identity(env4.ambient);
    for (const auto& c : d.factors) prod = compose(prod, value(env4, c));
    CHECK(prod == d.target);
    check_inverse_closure(env4, d);
  }
}

TEST_CASE("seven_fcommutators audit trail") {
  auto env = wreath_environment(Group::alternating(4), 4);
  auto pairs = random_pairs(env.base, 5, 3);
  auto d = seven_fcommutators(env, pairs);
  std::map<std::string, Element> audit(d.audit.begin(), d.audit.end());
  CHECK(audit.at("theta") == commutator_of(audit.at("phi"), audit.at("psi")));
  CHECK(compose(audit.at("c0"), audit.at("theta")) == d.target);
  CHECK(compose(audit.at("f"), audit.at("x")) == audit.at("phi"));
  CHECK(compose(audit.at("g"), audit.at("y")) == audit.at("psi"));
  for (int i = 1; i <= 3; ++i) {
    CHECK(coordinate(audit.at("phi"), i) == pairs[static_cast<std::size_t>(i - 1)].first);
    CHECK(coordinate(audit.at("psi"), i) == pairs[static_cast<std::size_t>(i - 1)].second);
  }
}

TEST_CASE("seven_fcommutators on A wr Z and on S_9 blocks") {
  auto envz = wreath_z_environment(Group::symmetric(4), 5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto d = seven_fcommutators(envz, random_pairs(envz.base, 300 + s, 5));
    CHECK(d.verified);
    CHECK(d.factors.size() <= 7);
  }
  const Group s9 = Group::symmetric(9);
  auto block = make_environment(
      s9, kS3, parse_element(s9, "(1 4 7)(2 5 8)(3 6 9)"),
      [s9](const Element& x) {
        const auto& img = x.as<Permutation>().image;
        Permutation p;
        for (std::uint16_t i = 0; i < 9; ++i) p.image.push_back(i < 3 ? img[i] : i);
        return Element(s9, p);
      },
      2);
  auto all = enumerate_elements(kS3);
  for (const auto& f : all) {
    for (const auto& g : all) {
      auto d = seven_fcommutators(block, {{f, g}});
      CHECK(d.verified);
      auto [c1, c2] = two_commutator_witness(block, {{f, g}});
      CHECK(compose(commutator_of(c1.first, c1.second), commutator_of(c2.first, c2.second)) == d.target);
    }
  }
}

TEST_CASE("two_commutator_witness examples") {
  auto env3 = wreath_environment(kS3, 3);
  auto pairs = std::vector<ElementPair>{{s3("(1 2 3)"), s3("(1 2)")}};
  auto [a, b] = two_commutator_witness(env3, pairs);
  CHECK(a.first == env3.F);
  CHECK(compose(commutator_of(a.first, a.second), commutator_of(b.first, b.second)) ==
        commutator_product_target(env3, pairs));

  auto [i1, i2] = two_commutator_witness(env3, {});
  CHECK(commutator_of(i1.first, i1.second).is_identity());
  CHECK(commutator_of(i2.first, i2.second).is_identity());

  for (std::uint64_t s = 0; s < 20; ++s) {
    auto p2 = random_pairs(kS3, 900 + s, 2);
    auto [x, y] = two_commutator_witness(env3, p2);
    CHECK(compose(commutator_of(x.first, x.second), commutator_of(y.first, y.second)) ==
          commutator_product_target(env3, p2));
  }
}

TEST_CASE("fcomm_norm_bound examples") {
  auto env = wreath_environment(kS3, 3);
  auto support = tabulate(env.ambient, "wreath-support", wreath_support_norm);
  REQUIRE(verify_norm_axioms(support).passed);

  auto all = enumerate_elements(kS3);
  for (const auto& f : all) {
    for (const auto& g : all) {
      auto d = seven_fcommutators(env, {{f, g}});
      auto r = fcomm_norm_bound(env, d, support.as_function());
      CHECK(r.passed);
      CHECK(r.nu_F == 3);
      CHECK(fcomm_norm_bound(env, d, trivial_norm).passed);
    }
  }
  auto id = seven_fcommutators(env, {{s3("(1 2)"), s3("(1 2)")}});
  auto r = fcomm_norm_bound(env, id, support.as_function());
  CHECK(r.nu_target == 0);
  CHECK(r.passed);
}
