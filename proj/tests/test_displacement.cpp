#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cinorm/displacement.hpp"
#include "cinorm/error.hpp"

using namespace cinorm;

namespace {

SubgroupSpec sym_on(const Group& g, std::vector<int> points) {
  std::vector<Element> gens{permutation_from_cycles(g, {{points[0], points[1]}})};
  if (points.size() > 2) gens.push_back(permutation_from_cycles(g, {points}));
  return make_subgroup(gens, "Sym");
}

std::set<int> image(const Element& phi, const std::set<int>& pts) {
  std::set<int> out;
  for (int p : pts) out.insert(phi.as<Permutation>().image[static_cast<std::size_t>(p)]);
  return out;
}

bool disjoint(const std::set<int>& a, const std::set<int>& b) {
  for (int x : a) {
    if (b.count(x)) return false;
  }
  return true;
}

// Two symmetric groups on 3-point sets commute iff the sets are disjoint, so
// phi strongly m-displaces Sym{0,1,2} iff {0,1,2}, phi{0,1,2}, ..., phi^m{0,1,2}
// are pairwise disjoint.
bool oracle_strong(const Element& phi, std::size_t m) {
  std::vector<std::set<int>> blocks{{0, 1, 2}};
  for (std::size_t i = 1; i <= m; ++i) blocks.push_back(image(phi, blocks.back()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (!disjoint(blocks[i], blocks[j])) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("subgroups_commute examples") {
  const Group s6 = Group::symmetric(6);
  CHECK(subgroups_commute(sym_on(s6, {1, 2, 3}), sym_on(s6, {4, 5, 6})));
  CHECK_FALSE(subgroups_commute(sym_on(s6, {1, 2, 3}), sym_on(s6, {3, 4, 5})));
  CHECK(subgroups_commute(sym_on(s6, {1, 2, 3}), make_subgroup({identity(s6)})));
  CHECK_THROWS_AS(subgroups_commute(sym_on(s6, {1, 2, 3}), sym_on(Group::symmetric(7), {4, 5, 6})),
                  DescriptorMismatch);
}

TEST_CASE("find_strong_displacer agrees with the disjoint-block oracle") {
  const Group s6 = Group::symmetric(6);
  const auto h6 = sym_on(s6, {1, 2, 3});
  auto r1 = find_strong_displacer(s6, h6, 1);
  REQUIRE(r1.found);
  auto all6 = enumerate_elements(s6);
  auto first = std::find_if(all6.begin(), all6.end(), [](const Element& p) { return oracle_strong(p, 1); });
  CHECK(r1.witnesses.front() == *first);
  CHECK(subgroups_commute(h6, conjugate_subgroup(h6, r1.witnesses.front())));
  for (const auto& p : all6) CHECK(strongly_displaces(h6, p, 1) == oracle_strong(p, 1));

  CHECK_FALSE(find_strong_displacer(s6, h6, 2).found);

  const Group s9 = Group::symmetric(9);
  const auto h9 = sym_on(s9, {1, 2, 3});
  auto r2 = find_strong_displacer(s9, h9, 2, 2);
  REQUIRE(r2.found);
  CHECK(oracle_strong(r2.witnesses.front(), 2));
  CHECK(strongly_displaces(h9, parse_element(s9, "(1 4 7)(2 5 8)(3 6 9)"), 2));
  auto all9 = enumerate_elements(s9);
  auto first9 = std::find_if(all9.begin(), all9.end(), [](const Element& p) { return oracle_strong(p, 2); });
  CHECK(r2.witnesses.front() == *first9);
}

TEST_CASE("packing_number examples") {
  const Group s6 = Group::symmetric(6);
  auto p6 = packing_number(s6, sym_on(s6, {1, 2, 3}), 5);
  REQUIRE(p6.p);
  CHECK(*p6.p == 2);
  CHECK(p6.exhausted);
  CHECK(p6.conjugates == 20);
  CHECK(weakly_displaces(sym_on(s6, {1, 2, 3}), p6.certificate.witnesses));

  const Group s9 = Group::symmetric(9);
  auto p9 = packing_number(s9, sym_on(s9, {1, 2, 3}), 8, 2);
  REQUIRE(p9.p);
  CHECK(*p9.p == 3);
  CHECK(p9.exhausted);
  CHECK(p9.conjugates == 84);
  CHECK(p9.certificate.witnesses.size() == 2);

  auto capped = packing_number(s9, sym_on(s9, {1, 2, 3}), 1);
  CHECK(*capped.p == 2);
  CHECK_FALSE(capped.exhausted);

  auto abelian = packing_number(s6, make_subgroup({parse_element(s6, "(1 2 3)")}), 5);
  CHECK(abelian.abelian_degenerate);
  CHECK_FALSE(abelian.p);
}

TEST_CASE("packing on S_6 matches plain brute force over conjugator tuples") {
  const Group s6 = Group::symmetric(6);
  const auto h = sym_on(s6, {1, 2, 3});
  auto all = enumerate_elements(s6);
  std::size_t best_m = 0;
  for (const auto& a : all) {
    if (!weakly_displaces(h, {a})) continue;
    best_m = std::max<std::size_t>(best_m, 1);
    for (const auto& b : all) {
      if (weakly_displaces(h, {a, b})) best_m = 2;
    }
  }
  CHECK(best_m + 1 == *packing_number(s6, h, 5).p);

  // H = <(1 2 3), (1 2)(4 5)> is not a full symmetric group on its support.
  const auto h2 = make_subgroup({parse_element(s6, "(1 2 3)"), parse_element(s6, "(1 2)(4 5)")});
  std::size_t brute = 0;
  for (const auto& a : all) {
    if (weakly_displaces(h2, {a})) brute = 1;
  }
  CHECK(brute + 1 == *packing_number(s6, h2, 5).p);
}

TEST_CASE("displacement_energy examples") {
  const Group s6 = Group::symmetric(6);
  const auto h6 = sym_on(s6, {1, 2, 3});
  auto e1 = displacement_energy(s6, h6, 1, support_norm);
  REQUIRE(e1.e_m);
  CHECK(*e1.e_m == 6);
  // Oracle: least support among phi with phi{1,2,3} disjoint from {1,2,3}.
  Rational best = 100;
  for (const auto& p : enumerate_elements(s6)) {
    if (oracle_strong(p, 1)) best = std::min(best, support_norm(p));
  }
  CHECK(*e1.e_m == best);
  REQUIRE(e1.minimizer);
  CHECK(support_norm(*e1.minimizer) == 6);

  CHECK_FALSE(displacement_energy(s6, h6, 2, support_norm).e_m);

  auto abelian = displacement_energy(s6, make_subgroup({parse_element(s6, "(1 2 3)")}), 3, support_norm);
  CHECK(*abelian.e_m == 0);
  CHECK(abelian.minimizer->is_identity());

  // Thread count never changes the answer.
  for (unsigned t : {2u, 3u, 7u}) {
    auto et = displacement_energy(s6, h6, 1, support_norm, t);
    CHECK(*et.e_m == *e1.e_m);
    CHECK(*et.minimizer == *e1.minimizer);
  }
}

TEST_CASE("energies are monotone in m on S_9") {
  const Group s9 = Group::symmetric(9);
  const auto h = sym_on(s9, {1, 2, 3});
  auto e1 = displacement_energy(s9, h, 1, support_norm, 2);
  auto e2 = displacement_energy(s9, h, 2, support_norm, 2);
  auto e3 = displacement_energy(s9, h, 3, support_norm, 2);
  REQUIRE(e1.e_m);
  REQUIRE(e2.e_m);
  CHECK(*e1.e_m == 6);
  CHECK(*e2.e_m == 9);
  CHECK(*e1.e_m <= *e2.e_m);
  CHECK_FALSE(e3.e_m);
}

TEST_CASE("verify_master_inequalities") {
  const Group s9 = Group::symmetric(9);
  const auto h = sym_on(s9, {1, 2, 3});
  auto r1 = verify_master_inequalities(s9, h, 1, support_norm, 2);
  CHECK(r1.passed);
  CHECK(r1.chain_checks == 36);
  CHECK(*r1.e1 == 6);
  bool saw_three_cycle = false;
  for (const auto& c : r1.checks) {
    CHECK(c.ok);
    if (c.bound == "4e_1" && support_norm(c.x) == 3) {
      saw_three_cycle = true;
      CHECK(c.lhs == 3);
      CHECK(c.rhs == 24);
    }
  }
  CHECK(saw_three_cycle);

  auto r2 = verify_master_inequalities(s9, h, 2, support_norm, 2);
  CHECK(r2.passed);
  CHECK(r2.seven_factor_checks == 3);
  CHECK(*r2.energy.e_m == 9);

  auto trivial = verify_master_inequalities(s9, h, 2, trivial_norm, 2);
  CHECK(trivial.passed);
}

TEST_CASE("disjunction energy inequality") {
  const Group s8 = Group::symmetric(8);
  auto r = verify_disjunction_inequality(s8, sym_on(s8, {1, 2, 3}), sym_on(s8, {2, 3, 4}), support_norm, 2);
  CHECK(r.passed);
  REQUIRE(r.energy.e_m);
  CHECK(*r.energy.e_m == 4);
  CHECK(r.chain_checks == 36);
}
