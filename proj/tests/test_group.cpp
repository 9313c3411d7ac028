#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <unordered_set>

#include "cinorm/enumerate.hpp"
#include "cinorm/error.hpp"
#include "cinorm/group.hpp"
#include "cinorm/random.hpp"

using namespace cinorm;

namespace {

Element perm(const Group& g, const char* lit) { return parse_element(g, lit); }

std::vector<Group> sample_families() {
  const Group s3 = Group::symmetric(3);
  return {
      Group::symmetric(5),
      Group::alternating(5),
      Group::free_group(2),
      Group::wreath_z(s3),
      Group::wreath_zn(s3, 3),
      Group::aff_z(),
      Group::bar(s3),
      Group::bar(Group::free_group(2)),
      Group::z2_infinity(),
      Group::slz(3),
      Group::slmod(2, 5),
      Group::product({s3, Group::free_group(1)}),
  };
}

// Faithful action of A wr Z_N on {0..N-1} x {points of A}:
// (f, s) . (i, x) = (i + s, f(i + s)(x)).
std::vector<int> wreath_action(const Element& w, int base_degree) {
  const auto& p = w.as<WreathPayload>();
  const int n = w.group().degree();
  std::vector<int> image(static_cast<std::size_t>(n * base_degree));
  for (int i = 0; i < n; ++i) {
    const int target = (i + static_cast<int>(p.shift)) % n;
    std::vector<std::uint16_t> f(static_cast<std::size_t>(base_degree));
    for (int x = 0; x < base_degree; ++x) f[static_cast<std::size_t>(x)] = static_cast<std::uint16_t>(x);
    for (std::size_t k = 0; k < p.positions.size(); ++k) {
      if (p.positions[k] == target) f = p.values[k].as<Permutation>().image;
    }
    for (int x = 0; x < base_degree; ++x) image[static_cast<std::size_t>(i * base_degree + x)] = target * base_degree + f[static_cast<std::size_t>(x)];
  }
  return image;
}

// Faithful action of Bar(S_k) on two copies of k points; t swaps the copies.
std::vector<int> bar_action(const Element& b) {
  const auto& p = b.as<BarPayload>();
  const auto& g1 = p.coords[0].as<Permutation>().image;
  const auto& g2 = p.coords[1].as<Permutation>().image;
  const int k = static_cast<int>(g1.size());
  // (g1, g2) t : apply t first, then (g1, g2).
  std::vector<int> image(static_cast<std::size_t>(2 * k));
  for (int copy = 0; copy < 2; ++copy) {
    for (int x = 0; x < k; ++x) {
      int c = p.t ? 1 - copy : copy;
      int y = c == 0 ? g1[static_cast<std::size_t>(x)] : g2[static_cast<std::size_t>(x)];
      image[static_cast<std::size_t>(copy * k + x)] = c * k + y;
    }
  }
  return image;
}

std::vector<int> compose_maps(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

}  // namespace

TEST_CASE("descriptor grammar round-trips") {
  for (const char* text : {"sn:3", "an:5", "free:2", "wreath:sn:3:z", "wreath:sn:3:zn:3", "aff-z", "bar:sn:3",
                           "z2inf", "slz:3", "slp:2:5", "product:sn:2,sn:3", "bar:(product:free:2,free:2)",
                           "product:(product:sn:2,sn:2),wreath:an:4:zn:2"}) {
    Group g = Group::parse(text);
    CHECK(g.name() == text);
    CHECK(Group::parse(g.name()) == g);
  }
  CHECK_THROWS_AS(Group::parse("sn"), InvalidInput);
  CHECK_THROWS_AS(Group::parse("slp:2:4"), InvalidInput);
  CHECK_THROWS_AS(Group::parse("wreath:sn:3:zn:1"), InvalidInput);
  CHECK_THROWS_AS(Group::parse("free:0"), InvalidInput);
  CHECK_THROWS_AS(Group::parse("slz:1"), InvalidInput);
  CHECK_THROWS_AS(Group::parse("bogus:3"), InvalidInput);
}

TEST_CASE("compose examples") {
  const Group s3 = Group::symmetric(3);
  CHECK(compose(perm(s3, "(1 2)"), perm(s3, "(1 2)")).is_identity());

  CHECK(compose(affz(1, true), affz(1, true)).is_identity());

  const Group bar = Group::bar(s3);
  Element h1 = perm(s3, "(1 2)"), h2 = perm(s3, "(1 2 3)");
  Element f1 = perm(s3, "(2 3)"), f2 = perm(s3, "(1 3)");
  Element h = bar_element(bar, h1, h2, true);
  Element f = bar_element(bar, f1, f2, false);
  CHECK(compose(h, f) == bar_element(bar, compose(h1, f2), compose(h2, f1), true));

  CHECK_THROWS_AS(compose(perm(s3, "(1 2)"), affz(0, true)), DescriptorMismatch);
}

TEST_CASE("AffZ normal form agrees with the affine action x -> (-1)^e x + a") {
  // z acts as x -> x + 1 and t as x -> -x; this action is faithful.
  auto act = [](const Element& e, long x) {
    const auto& p = e.as<AffZPayload>();
    return (p.t ? -x : x) + p.a;
  };
  for (long a = -3; a <= 3; ++a) {
    for (long b = -3; b <= 3; ++b) {
      for (int e = 0; e < 2; ++e) {
        for (int f = 0; f < 2; ++f) {
          Element x = affz(a, e), y = affz(b, f);
          Element xy = compose(x, y);
          for (long pt : {-5L, 0L, 1L, 7L}) CHECK(act(xy, pt) == act(x, act(y, pt)));
        }
      }
    }
  }
  // Presentation relations.
  Element z = affz(1, false), t = affz(0, true);
  CHECK(compose(t, t).is_identity());
  for (int n = -5; n <= 5; ++n) {
    CHECK(compose(t, power(z, n)) == compose(power(z, -n), t));
  }
}

TEST_CASE("invert examples") {
  const Group f2 = Group::free_group(2);
  CHECK(invert(identity(f2)).is_identity());
  CHECK(invert(parse_element(f2, "a b A")) == parse_element(f2, "a B A"));
  const Group sl3 = Group::slz(3);
  CHECK(invert(elementary_matrix(sl3, 0, 1, 1)) == elementary_matrix(sl3, 0, 1, -1));
  CHECK(to_literal(invert(elementary_matrix(sl3, 0, 1, 1))) == "[1,-1,0,0,1,0,0,0,1]");
}

TEST_CASE("conjugate_of examples and the AffZ orientation") {
  const Group s3 = Group::symmetric(3);
  Element g = perm(s3, "(1 2)");
  CHECK(conjugate_of(g, identity(s3)) == g);
  CHECK(conjugate_of(g, perm(s3, "(1 3)")) == perm(s3, "(2 3)"));

  const Group aff = Group::aff_z();
  Element t = affz(0, true), z = affz(1, false);
  for (int n = -20; n <= 20; ++n) {
    Element t_z2n = compose(t, power(z, 2 * n));
    // Conj by z^-n gives t z^{2n}; conj by z^n gives t z^{-2n}.
    CHECK(conjugate_of(t, power(z, -n)) == t_z2n);
    CHECK(conjugate_of(t, power(z, n)) == compose(t, power(z, -2 * n)));
  }
}

TEST_CASE("commutator_of examples") {
  const Group s3 = Group::symmetric(3);
  Element a = perm(s3, "(1 2 3)");
  CHECK(commutator_of(a, a).is_identity());

  const Group sl3 = Group::slz(3);
  for (int p : {-1000, -7, 0, 1, 2, 999, 1000}) {
    CHECK(commutator_of(elementary_matrix(sl3, 0, 1, 1), elementary_matrix(sl3, 1, 2, p)) ==
          elementary_matrix(sl3, 0, 2, p));
  }
  CHECK(commutator_of(affz(0, true), affz(1, false)) == affz(-2, false));
}

TEST_CASE("enumerate_elements sizes and order formulas") {
  CHECK(enumerate_elements(Group::symmetric(3)).size() == 6);
  CHECK(enumerate_elements(Group::parse("wreath:sn:3:zn:3")).size() == 648);
  CHECK(enumerate_elements(Group::slmod(2, 3)).size() == 24);

  // Brute-force SL(2, Z_3): all 81 matrices, keep det == 1.
  int det_one = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) det_one += ((a * d - b * c) % 3 + 3) % 3 == 1;
  CHECK(det_one == 24);

  for (const char* text : {"sn:1", "sn:4", "an:4", "an:5", "bar:sn:3", "slp:2:5", "slp:3:2", "product:sn:3,an:4",
                           "wreath:sn:2:zn:4", "bar:an:4"}) {
    Group g = Group::parse(text);
    auto all = enumerate_elements(g);
    CHECK(Integer(static_cast<unsigned long>(all.size())) == *g.order());
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
  CHECK_THROWS_AS(enumerate_elements(Group::free_group(2)), InfiniteGroup);
  CHECK_THROWS_AS(enumerate_elements(Group::symmetric(12)), GuardExceeded);
  CHECK_THROWS_AS(enumerate_elements(Group::symmetric(6), 100), GuardExceeded);
}

TEST_CASE("subgroup_closure examples") {
  const Group s3 = Group::symmetric(3);
  CHECK(subgroup_closure(make_subgroup({perm(s3, "(1 2)")})).size() == 2);
  const Group s6 = Group::symmetric(6);
  auto sym3 = subgroup_closure(make_subgroup({perm(s6, "(1 2)"), perm(s6, "(1 2 3)")}));
  CHECK(sym3.size() == 6);
  for (const auto& x : sym3) {
    const auto& img = x.as<Permutation>().image;
    for (std::size_t i = 3; i < 6; ++i) CHECK(img[i] == i);
  }
  const Group sl25 = Group::slmod(2, 5);
  CHECK(subgroup_closure(make_subgroup({elementary_matrix(sl25, 0, 1, 1), elementary_matrix(sl25, 1, 0, 1)})).size() ==
        120);
  CHECK_THROWS_AS(subgroup_closure(make_subgroup({parse_element(Group::free_group(2), "a")}), 50), GuardExceeded);
}

TEST_CASE("conjugacy_closure examples") {
  const Group s4 = Group::symmetric(4);
  CHECK(conjugacy_closure({identity(s4)}, s4).size() == 1);
  auto transpositions = conjugacy_closure({perm(s4, "(1 2)")}, s4);
  CHECK(transpositions.size() == 6);
  const Group a5 = Group::alternating(5);
  // (2 5)(3 4) inverts (1 2 3 4 5) inside A_5, so only one class of 12 appears.
  Element c5 = perm(a5, "(1 2 3 4 5)");
  CHECK(conjugate_of(c5, perm(a5, "(2 5)(3 4)")) == invert(c5));
  auto c5_class = conjugacy_closure({c5}, a5);
  CHECK(c5_class.size() == 12);
  std::set<Element> oracle;
  for (const auto& x : enumerate_elements(a5)) oracle.insert(compose(compose(x, c5), invert(x)));
  CHECK(oracle.size() == 12);
  CHECK(std::equal(oracle.begin(), oracle.end(), c5_class.begin()));
  CHECK(conjugacy_closure({c5, compose(c5, c5)}, a5).size() == 24);
}

TEST_CASE("derived_subgroup agrees with brute-force commutator closure") {
  for (const char* text : {"sn:4", "an:5", "an:4", "bar:sn:3", "slp:2:3", "wreath:sn:3:zn:2", "product:sn:3,sn:2"}) {
    Group g = Group::parse(text);
    auto all = enumerate_elements(g);
    auto comms = commutator_set(all);
    SubgroupSpec spec{g, comms, "brute"};
    CHECK(derived_subgroup(g) == subgroup_closure(spec));
    // Abelianization formula versus |G| / |G'|.
    CHECK(*abelianization_order(g) * Integer(static_cast<unsigned long>(comms.empty() ? 1 : subgroup_closure(spec).size())) ==
          *g.order());
  }
  CHECK(derived_subgroup(Group::symmetric(4)).size() == 12);
  CHECK(derived_subgroup(Group::alternating(5)).size() == 60);
  CHECK(derived_subgroup(Group::product({Group::symmetric(2), Group::symmetric(2)})).size() == 1);
}

TEST_CASE("abelianization_order examples") {
  CHECK(*abelianization_order(Group::alternating(5)) == 1);
  CHECK(*abelianization_order(Group::aff_z()) == 4);
  CHECK_FALSE(abelianization_order(Group::free_group(2)).has_value());
  CHECK(has_finite_abelianization(Group::bar(Group::alternating(5))));
  CHECK_FALSE(has_finite_abelianization(Group::bar(Group::free_group(2))));
  // AffZ: G' = <z^2>; the four cosets of z^a t^e are indexed by (a mod 2, e).
  std::set<std::pair<long, int>> cosets;
  for (long a = -6; a <= 6; ++a) {
    for (int e = 0; e < 2; ++e) cosets.insert({((a % 2) + 2) % 2, e});
  }
  CHECK(cosets.size() == 4);
}

TEST_CASE("wreath multiplication matches the faithful permutation action (exhaustive)") {
  const Group w = Group::parse("wreath:sn:3:zn:3");
  auto all = enumerate_elements(w);
  std::vector<std::vector<int>> rep;
  for (const auto& x : all) rep.push_back(wreath_action(x, 3));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const Element xy = compose(all[i], all[j]);
      if (wreath_action(xy, 3) != compose_maps(rep[i], rep[j])) {
        FAIL("wreath law fails at " << to_literal(all[i]) << " * " << to_literal(all[j]));
      }
    }
  }
  // Shift components add; base components compose after translation.
  Element a = parse_element(w, "W{0:(1 2);1}"), b = parse_element(w, "W{0:(1 3),2:(2 3);2}");
  Element ab = compose(a, b);
  CHECK(ab.as<WreathPayload>().shift == 0);
  CHECK(ab == parse_element(w, "W{0:(1 2 3),1:(1 3);0}"));
}

TEST_CASE("Bar multiplication matches the faithful permutation action (exhaustive)") {
  const Group bar = Group::bar(Group::symmetric(3));
  auto all = enumerate_elements(bar);
  CHECK(all.size() == 72);
  for (const auto& x : all) {
    for (const auto& y : all) {
      Element xy = compose(x, y);
      CHECK(bar_action(xy) == compose_maps(bar_action(x), bar_action(y)));
      CHECK(xy.as<BarPayload>().t == (x.as<BarPayload>().t != y.as<BarPayload>().t));
    }
  }
}

TEST_CASE("group laws on random samples for every family") {
  for (const Group& g : sample_families()) {
    for (std::uint64_t i = 0; i < 40; ++i) {
      Rng rng = Rng::for_sample(7, i);
      Element a = random_element(g, rng, 4), b = random_element(g, rng, 4), c = random_element(g, rng, 4);
      CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
      CHECK(compose(a, invert(a)).is_identity());
      CHECK(compose(invert(a), a).is_identity());
      CHECK(compose(a, identity(g)) == a);
      CHECK(compose(identity(g), a) == a);
      // Canonical idempotence and literal round trip.
      CHECK(Element(g, a.payload()) == a);
      CHECK(parse_element(g, to_literal(a)) == a);
      CHECK((a == b) == (a.hash() == b.hash() && a == b));
      if (a == b) CHECK(a.hash() == b.hash());
      CHECK(power(a, 3) == compose(a, compose(a, a)));
      CHECK(power(a, -2) == invert(compose(a, a)));
    }
  }
}

TEST_CASE("canonical form rejects malformed payloads") {
  const Group s3 = Group::symmetric(3);
  CHECK_THROWS_AS(Element(s3, Permutation{{0, 0, 1}}), InvalidInput);
  CHECK_THROWS_AS(Element(Group::alternating(3), Permutation{{1, 0, 2}}), InvalidInput);
  CHECK_THROWS_AS(parse_element(Group::slz(2), "[2,0,0,1]"), InvalidInput);
  CHECK_THROWS_AS(parse_element(Group::slmod(2, 5), "[2,0,0,2]"), InvalidInput);
  CHECK(parse_element(Group::slmod(2, 5), "[2,0,0,3]").as<ModMatrix>().entries[3] == 3);
  CHECK(binary_word({1, 0, 1, 0, 0}).as<BinaryWord>().bits.size() == 3);
  CHECK(parse_element(Group::free_group(2), "a b B A").is_identity());
  // Identity values vanish from wreath supports.
  const Group w = Group::parse("wreath:sn:3:z");
  CHECK(parse_element(w, "W{0:(),5:(1 2);0}") == wreath_single(w, 5, perm(s3, "(1 2)")));
  CHECK(parse_element(Group::parse("wreath:sn:3:zn:3"), "W{4:(1 2);5}") ==
        parse_element(Group::parse("wreath:sn:3:zn:3"), "W{1:(1 2);2}"));
  CHECK(to_literal(parse_element(Group::aff_z(), "t z^3")) == "z^-3 t");
}
