#include "cinorm/suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "cinorm/displacement.hpp"
#include "cinorm/error.hpp"
#include "cinorm/fcommutator.hpp"
#include "cinorm/io.hpp"
#include "cinorm/norms.hpp"
#include "cinorm/quasimorphisms.hpp"
#include "cinorm/random.hpp"

namespace cinorm {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys{"group", "k",      "h",     "norm",   "element", "pattern",
                                        "defect_upper", "m", "n", "n_max", "seed",    "budget",
                                        "out",   "format", "threads", "guard", "window"};

template <class Body>
CheckResult timed(std::string name, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult c;
  c.name = std::move(name);
  body(c);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

void fail(CheckResult& c, const std::string& witness) {
  if (c.passed) c.witness = witness;
  c.passed = false;
}

std::string lits(std::initializer_list<Element> es) {
  std::string s;
  for (const auto& e : es) s += (s.empty() ? "" : " ; ") + to_literal(e);
  return s;
}

SubgroupSpec sym_on(const Group& g, const std::vector<int>& points) {
  return make_subgroup({permutation_from_cycles(g, {{points[0], points[1]}}), permutation_from_cycles(g, {points})},
                       "Sym{1,2,3}");
}

// E_ik^p = [E_ij, E_jk^p] for i, j, k distinct.
void elementary_range(CheckResult& c, int n, const std::vector<std::array<int, 3>>& triples, long range) {
  const Group g = Group::slz(n);
  std::size_t checked = 0;
  for (const auto& [i, j, k] : triples) {
    const Element eij = elementary_matrix(g, i, j, 1);
    const Element ejk = elementary_matrix(g, j, k, 1);
    for (long p = -range; p <= range; ++p) {
      const Element lhs = elementary_matrix(g, i, k, p);
      const Element ejk_p = power(ejk, p);
      const Element rhs = commutator_of(eij, ejk_p);
      ++checked;
      if (!(lhs == rhs) || !(ejk_p == elementary_matrix(g, j, k, p))) {
        fail(c, "n=" + std::to_string(n) + " p=" + std::to_string(p) + " : " + lits({eij, ejk_p, lhs, rhs}));
      }
    }
  }
  c.detail["identities"] = checked;
}

std::vector<CheckResult> suite_elementary_sl(const ExperimentConfig&) {
  std::vector<CheckResult> out;
  out.push_back(timed("sl3-e13", [](CheckResult& c) { elementary_range(c, 3, {{0, 1, 2}}, 1000); }));
  out.push_back(timed("sl4-all-triples", [](CheckResult& c) {
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
          if (i != j && j != k && i != k) triples.push_back({i, j, k});
        }
      }
    }
    elementary_range(c, 4, triples, 1000);
  }));
  out.push_back(timed("sl3-huge-exponent", [](CheckResult& c) {
    const Group g = Group::slz(3);
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, 40);
    for (const Integer& q : {Integer(p), Integer(-p), Integer(p + 7)}) {
      const Element lhs = elementary_matrix(g, 0, 2, q);
      const Element rhs = commutator_of(elementary_matrix(g, 0, 1, 1), elementary_matrix(g, 1, 2, q));
      if (!(lhs == rhs)) fail(c, "p=" + to_string(q) + " : " + lits({lhs, rhs}));
    }
    c.detail["exponent"] = to_string(p);
  }));
  return out;
}

std::vector<CheckResult> suite_aff_z(const ExperimentConfig&) {
  std::vector<CheckResult> out;
  const Element t = affz(0, true);
  const Element z = affz(1, false);
  out.push_back(timed("t-conjugacy", [&](CheckResult& c) {
    for (std::int64_t n = -100; n <= 100; ++n) {
      const Element lhs = conjugate_of(t, power(z, -n));
      const Element rhs = compose(t, power(z, 2 * n));
      if (!(lhs == rhs)) fail(c, "n=" + std::to_string(n) + " : " + lits({lhs, rhs}));
    }
    c.detail["range"] = 100;
  }));
  out.push_back(timed("t-z-commutators", [&](CheckResult& c) {
    if (!(commutator_of(t, z) == power(z, -2))) fail(c, lits({commutator_of(t, z)}));
    for (std::int64_t n = -100; n <= 100; ++n) {
      const Element lhs = commutator_of(t, power(z, -n));
      if (!(lhs == power(z, 2 * n))) fail(c, "n=" + std::to_string(n) + " : " + lits({lhs}));
    }
  }));
  out.push_back(timed("cl-witness", [&](CheckResult& c) {
    for (std::int64_t n = 1; n <= 100; ++n) {
      const Element x = power(z, 2 * n);
      const auto [a, b] = affz_commutator_witness(x);
      if (affz_commutator_length(x) != 1 || !(commutator_of(a, b) == x)) fail(c, lits({x, a, b}));
    }
  }));
  return out;
}

std::vector<CheckResult> suite_seven_fcomm(const ExperimentConfig& cfg) {
  const Group s3 = Group::symmetric(3);
  std::map<std::size_t, FCommEnvironment> envs;
  for (std::size_t m = 1; m <= 3; ++m) envs.emplace(m, wreath_environment(s3, static_cast<int>(std::max<std::size_t>(m + 1, 3))));
  constexpr std::size_t kTargets = 100;
  CheckResult decomp, witness, bound;
  decomp.name = "decompositions";
  witness.name = "two-commutator-witness";
  bound.name = "norm-bound";
  std::size_t max_factors = 0;
  std::map<std::string, std::size_t> by_m;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < kTargets; ++i) {
    const std::size_t m = 1 + i % 3;
    const auto& env = envs.at(m);
    Rng rng = Rng::for_sample(cfg.seed, i);
    std::vector<ElementPair> pairs;
    for (std::size_t j = 0; j < m; ++j) {
      Element f = random_element(s3, rng);
      Element g = random_element(s3, rng);
      pairs.emplace_back(std::move(f), std::move(g));
    }
    std::string repro = "seed=" + std::to_string(cfg.seed) + " i=" + std::to_string(i) + " pairs:";
    for (const auto& [f, g] : pairs) repro += " (" + to_literal(f) + ", " + to_literal(g) + ")";
    ++by_m[std::to_string(m)];
    auto d = seven_fcommutators(env, pairs);
    Element prod = identity(env.ambient);
    for (const auto& f : d.factors) prod = compose(prod, value(env, f));
    const Element target = commutator_product_target(env, pairs);
    if (!d.verified || d.factors.size() > 7 || !(prod == target) || !(d.target == target)) fail(decomp, repro);
    max_factors = std::max(max_factors, d.factors.size());
    auto [p1, p2] = two_commutator_witness(env, pairs);
    if (!(compose(commutator_of(p1.first, p1.second), commutator_of(p2.first, p2.second)) == target) ||
        !(p1.first == env.F)) {
      fail(witness, repro);
    }
    auto r = fcomm_norm_bound(env, d, wreath_support_norm);
    if (!r.passed) fail(bound, repro);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  decomp.detail = {{"targets", kTargets}, {"max_factors", max_factors}, {"by_m", by_m}};
  witness.detail = {{"targets", kTargets}};
  bound.detail = {{"norm", "wreath-support"}};
  for (auto* c : {&decomp, &witness, &bound}) c->seconds = secs / 3;
  return {decomp, witness, bound};
}

std::vector<CheckResult> suite_rearrange(const ExperimentConfig& cfg) {
  const Group s3 = Group::symmetric(3);
  std::map<std::size_t, FCommEnvironment> envs;
  for (std::size_t m = 1; m <= 3; ++m) envs.emplace(m, wreath_environment(s3, static_cast<int>(m + 1)));
  constexpr std::size_t kTuples = 1000;
  CheckResult ident, partial;
  ident.name = "fcommutator-identity";
  partial.name = "partial-products";
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < kTuples; ++i) {
    const std::size_t m = 1 + i % 3;
    const auto& env = envs.at(m);
    Rng rng = Rng::for_sample(cfg.seed, i);
    std::vector<Element> gs;
    Element prod = identity(s3);
    for (std::size_t j = 0; j < m; ++j) {
      gs.push_back(random_element(s3, rng));
      prod = compose(prod, gs.back());
    }
    gs.push_back(invert(prod));
    std::string repro = "seed=" + std::to_string(cfg.seed) + " i=" + std::to_string(i) + " g:";
    for (const auto& g : gs) repro += " " + to_literal(g);
    auto [sol, c] = solve_rearrange_id(env, gs);
    Element spread = identity(env.ambient);
    for (std::size_t j = 0; j < gs.size(); ++j) {
      spread = compose(spread, wreath_single(env.ambient, static_cast<std::int64_t>(j), gs[j]));
    }
    if (!(value(env, c) == spread) || !(commutator_of(env.F, invert(sol.assembled)) == spread)) fail(ident, repro);
    Element running = identity(s3);
    for (std::size_t k = 0; k < sol.phis.size(); ++k) {
      running = compose(running, gs[k]);
      if (!(sol.phis[k] == running)) fail(partial, repro + " k=" + std::to_string(k));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ident.detail = {{"tuples", kTuples}};
  partial.detail = {{"tuples", kTuples}};
  ident.seconds = partial.seconds = secs / 2;
  return {ident, partial};
}

std::vector<CheckResult> suite_displacement(const ExperimentConfig& cfg) {
  const Group s9 = Group::symmetric(9);
  const auto h = sym_on(s9, {1, 2, 3});
  std::vector<CheckResult> out;
  MasterReport r1{true, {}, std::nullopt, {}, 0, 0, std::nullopt};
  out.push_back(timed("e1-exhaustive", [&](CheckResult& c) {
    r1 = verify_master_inequalities(s9, h, 1, support_norm, cfg.threads, cfg.guard);
    if (!r1.e1 || !r1.energy.minimizer) {
      fail(c, "no strong 1-displacer");
      return;
    }
    const Element& phi = *r1.energy.minimizer;
    if (!strongly_displaces(h, phi, 1) || support_norm(phi) != *r1.e1) fail(c, lits({phi}));
    c.detail = {{"e1", to_string(*r1.e1)}, {"minimizer", to_literal(phi)}};
  }));
  out.push_back(timed("four-e1-bound", [&](CheckResult& c) {
    std::size_t n = 0;
    for (const auto& ch : r1.checks) {
      if (ch.bound != "4e_1") continue;
      ++n;
      if (!ch.ok) fail(c, lits({ch.x}) + " lhs=" + to_string(ch.lhs) + " rhs=" + to_string(ch.rhs));
    }
    if (n == 0) fail(c, "no elements with cl = 1");
    c.detail = {{"elements", n}};
  }));
  out.push_back(timed("chain", [&](CheckResult& c) {
    if (r1.chain_failure) fail(c, lits({r1.chain_failure->first, r1.chain_failure->second}));
    if (r1.chain_checks != 36) fail(c, "chain covered " + std::to_string(r1.chain_checks) + " pairs");
    c.detail = {{"pairs", r1.chain_checks}};
  }));
  out.push_back(timed("fourteen-e2-bound", [&](CheckResult& c) {
    auto r2 = verify_master_inequalities(s9, h, 2, support_norm, cfg.threads, cfg.guard);
    for (const auto& ch : r2.checks) {
      if (!ch.ok) fail(c, lits({ch.x}) + " bound=" + ch.bound);
    }
    if (!r2.passed) fail(c, "report failed");
    c.detail = {{"e2", r2.energy.e_m ? to_string(*r2.energy.e_m) : "infinite"},
                {"seven_factor_checks", r2.seven_factor_checks}};
  }));
  return out;
}

std::vector<CheckResult> suite_packing(const ExperimentConfig& cfg) {
  std::vector<CheckResult> out;
  for (auto [n, expected] : {std::pair{6, 2}, std::pair{9, 3}}) {
    out.push_back(timed("s" + std::to_string(n) + "-sym3", [&, n = n, expected = expected](CheckResult& c) {
      const Group g = Group::symmetric(n);
      auto r = packing_number(g, sym_on(g, {1, 2, 3}), static_cast<std::size_t>(n), cfg.threads);
      if (!r.p || *r.p != static_cast<std::size_t>(expected) || !r.exhausted) {
        fail(c, "p=" + (r.p ? std::to_string(*r.p) : std::string("none")));
      }
      std::vector<std::string> w;
      for (const auto& phi : r.certificate.witnesses) w.push_back(to_literal(phi));
      if (!weakly_displaces(sym_on(g, {1, 2, 3}), r.certificate.witnesses)) fail(c, "certificate does not displace");
      c.detail = {{"p", r.p ? *r.p : 0}, {"exhausted", r.exhausted}, {"witnesses", w}, {"conjugates", r.conjugates}};
    }));
  }
  return out;
}

std::vector<CheckResult> suite_norm_oracle(const ExperimentConfig& cfg) {
  const Group a5 = Group::alternating(5);
  const Element k = parse_element(a5, "(1 2 3 4 5)");
  std::vector<CheckResult> out;
  const NormTable qk = qk_norm(a5, {k}, cfg.guard);
  out.push_back(timed("qk-a5-axioms", [&](CheckResult& c) {
    auto r = verify_norm_axioms(qk, cfg.threads);
    if (!r.passed) fail(c, r.violations.empty() ? "" : r.violations.front().detail);
    c.detail = {{"pairs", r.checked_pairs}, {"diameter", to_string(*qk.meta().diameter)}};
  }));
  out.push_back(timed("qk-a5-closure-oracle", [&](CheckResult& c) {
    // Level sets S_j = S_{j-1} C with C the conjugates of k and k^-1.
    const auto cls = conjugacy_closure({k}, a5, cfg.guard);
    std::set<Element> level{identity(a5)};
    std::map<Element, std::size_t> first{{identity(a5), 0}};
    for (std::size_t j = 1; first.size() < 60 && j <= 60; ++j) {
      std::set<Element> next;
      for (const auto& s : level) {
        for (const auto& x : cls) next.insert(compose(s, x));
      }
      for (const auto& e : next) first.emplace(e, j);
      level = std::move(next);
    }
    for (const auto& [e, j] : first) {
      if (qk.value(e) != Rational(static_cast<unsigned long>(j))) fail(c, lits({e}));
    }
    if (first.size() != 60) fail(c, "closure reached " + std::to_string(first.size()) + " elements");
    c.detail = {{"elements", first.size()}};
  }));
  out.push_back(timed("cl-a5", [&](CheckResult& c) {
    const auto cl = commutator_length_full(a5, cfg.guard);
    for (const auto& e : enumerate_elements(a5)) {
      const Rational v = cl.value(e);
      if (v != (e.is_identity() ? 0 : 1)) fail(c, lits({e}));
      Element prod = identity(a5);
      for (const auto& [a, b] : cl.witness(e)) prod = compose(prod, commutator_of(a, b));
      if (!(prod == e)) fail(c, "witness " + lits({e}));
    }
    if (cl.diameter() != 1) fail(c, "cld=" + to_string(cl.diameter()));
    c.detail = {{"cld", to_string(cl.diameter())}};
  }));
  return out;
}

std::vector<CheckResult> suite_bar(const ExperimentConfig& cfg) {
  std::vector<CheckResult> out;
  const Group s5 = Group::symmetric(5);
  const Group bar = Group::bar(s5);
  out.push_back(timed("multiplication-law", [&](CheckResult& c) {
    for (std::uint64_t i = 0; i < 500; ++i) {
      Rng rng = Rng::for_sample(cfg.seed, i);
      const Element h = random_element(bar, rng), f = random_element(bar, rng), g = random_element(bar, rng);
      const auto& hp = h.as<BarPayload>();
      const auto& fp = f.as<BarPayload>();
      const Element x1 = hp.t ? fp.coords[1] : fp.coords[0];
      const Element x2 = hp.t ? fp.coords[0] : fp.coords[1];
      const Element expected = bar_element(bar, compose(hp.coords[0], x1), compose(hp.coords[1], x2), hp.t != fp.t);
      if (!(compose(h, f) == expected)) fail(c, lits({h, f}));
      if (!(compose(compose(h, f), g) == compose(h, compose(f, g)))) fail(c, lits({h, f, g}));
    }
    const Element t = bar_element(bar, identity(s5), identity(s5), true);
    const Element w = bar_element(bar, parse_element(s5, "(1 2 3)"), parse_element(s5, "(4 5)"), false);
    if (!(conjugate_of(w, t) == bar_element(bar, parse_element(s5, "(4 5)"), parse_element(s5, "(1 2 3)"), false))) {
      fail(c, lits({w, t}));
    }
    c.detail = {{"samples", 500}};
  }));
  out.push_back(timed("splitting", [&](CheckResult& c) {
    std::size_t n = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
      Rng rng = Rng::for_sample(cfg.seed, 10'000 + i);
      const Element g1 = random_element(s5, rng), g2 = random_element(s5, rng);
      for (bool t : {false, true}) {
        const Element w = bar_element(bar, g1, g2, t);
        auto r = verify_gbar_splitting(w, 20);
        ++n;
        if (!r.passed) fail(c, lits({w}) + " j=" + std::to_string(*r.failing_power));
      }
    }
    c.detail = {{"elements", n}, {"k", 20}};
  }));
  out.push_back(timed("defect-decomposition", [&](CheckResult& c) {
    const Group f2 = Group::free_group(2);
    const auto r = counting_qm(f2, "a b");
    auto rep = check_bar_defect(r, 10'000, cfg.seed, 6, cfg.threads);
    if (!rep.passed) fail(c, lits({rep.violation->first, rep.violation->second}));
    c.detail = {{"samples", rep.samples},
                {"twisted", rep.twisted},
                {"max_lhs", to_string(rep.max_lhs)},
                {"quasimorphism", r.name},
                {"convention", r.convention}};
  }));
  return out;
}

std::vector<CheckResult> suite_additivity(const ExperimentConfig& cfg) {
  const Group f2 = Group::free_group(2);
  const Group k3 = Group::product({f2, f2, f2});
  const auto phi = product_qm(k3, {counting_qm(f2, "a b"), counting_qm(f2, "a b A"), counting_qm(f2, "a a b")});
  const Element a = parse_element(f2, "a"), b = parse_element(f2, "b");
  std::vector<SubgroupSpec> factors;
  for (std::size_t i = 0; i < 3; ++i) factors.push_back(make_subgroup({embed_factor(k3, i, a), embed_factor(k3, i, b)}));
  return {timed("combined-witness", [&](CheckResult& c) {
    Rational best = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      Rng rng = Rng::for_sample(cfg.seed, s);
      std::vector<ElementPair> w;
      for (std::size_t i = 0; i < 3; ++i) {
        Element x = embed_factor(k3, i, random_element(f2, rng, 8));
        Element y = embed_factor(k3, i, random_element(f2, rng, 8));
        w.emplace_back(std::move(x), std::move(y));
      }
      auto r = verify_commutator_additivity(phi, factors, w);
      if (!r.passed) fail(c, lits({w[0].first, w[0].second, w[1].first, w[1].second, w[2].first, w[2].second}));
      best = std::max(best, r.combined);
    }
    c.detail = {{"cases", 1000}, {"best_combined", to_string(best)}, {"quasimorphism", phi.name},
                {"sup_equality_certified", false}};
  })};
}

std::vector<CheckResult> suite_stabilization(const ExperimentConfig& cfg) {
  struct Case {
    std::string label;
    NormFn nu;
    std::vector<Element> elements;
    bool torsion;
  };
  std::vector<Case> cases;
  const Group s5 = Group::symmetric(5);
  cases.push_back({"sn:5 support", support_norm, enumerate_elements(s5), true});
  const Group a5 = Group::alternating(5);
  const auto cl = commutator_length_full(a5, cfg.guard);
  cases.push_back({"an:5 cl", [&cl](const Element& e) { return cl.value(e); }, enumerate_elements(a5), true});
  const Group slp = Group::parse("slp:2:3");
  const NormTable q = qk_norm(slp, {elementary_matrix(slp, 0, 1, 1)}, cfg.guard);
  cases.push_back({"slp:2:3 qk", q.as_function(), enumerate_elements(slp), true});
  const Group w3 = Group::parse("wreath:sn:3:zn:3");
  cases.push_back({"wreath:sn:3:zn:3 support", wreath_support_norm, enumerate_elements(w3), true});
  const Group barg = Group::parse("bar:sn:3");
  cases.push_back({"bar:sn:3 trivial", trivial_norm, enumerate_elements(barg), true});
  std::vector<Element> reflections;
  for (std::int64_t a = -10; a <= 10; ++a) reflections.push_back(affz(a, true));
  cases.push_back({"aff-z trivial", trivial_norm, reflections, true});
  std::vector<Element> bits;
  std::vector<Element> units;
  for (std::size_t i = 1; i <= 8; ++i) units.push_back(z2inf_unit(i));
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = Rng::for_sample(cfg.seed, s);
    bits.push_back(random_element(Group::z2_infinity(), rng, 8));
  }
  cases.push_back({"z2inf filtration",
                   [units](const Element& e) { return Rational(static_cast<unsigned long>(generator_filtration_norm(e, units))); },
                   bits, true});
  std::vector<Element> words;
  const Group f2 = Group::free_group(2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng = Rng::for_sample(cfg.seed, 500 + s);
    words.push_back(random_element(f2, rng, 6));
  }
  cases.push_back({"free:2 trivial", trivial_norm, words, false});

  const std::size_t n_max = std::max<std::size_t>(cfg.n_max, 1);
  CheckResult antitone, zero;
  antitone.name = "antitone";
  zero.name = "torsion-zero";
  json per_family = json::object();
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& cs : cases) {
    std::size_t torsion = 0;
    for (const auto& e : cs.elements) {
      Rational previous = 0;
      for (std::size_t n = 1; n <= n_max; ++n) {
        auto est = stabilization_upper(cs.nu, e, n);
        if (n > 1 && est.upper > previous) fail(antitone, cs.label + " : " + lits({e}) + " n_max=" + std::to_string(n));
        previous = est.upper;
      }
      if (!cs.torsion || e.is_identity()) continue;
      std::size_t order = 1;
      for (Element p = e; !p.is_identity() && order <= 1000; p = compose(p, e)) ++order;
      auto est = stabilization_upper(cs.nu, e, order);
      ++torsion;
      if (est.upper != 0 || !est.exact_zero) fail(zero, cs.label + " : " + lits({e}));
    }
    per_family[cs.label] = {{"elements", cs.elements.size()}, {"torsion_checked", torsion}};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  antitone.detail = {{"n_max", n_max}, {"families", per_family}};
  zero.detail = {{"families", per_family}};
  antitone.seconds = zero.seconds = secs / 2;
  return {antitone, zero};
}

std::vector<CheckResult> suite_scl(const ExperimentConfig&) {
  std::vector<CheckResult> out;
  out.push_back(timed("free-commutator-lower-bound", [](CheckResult& c) {
    const Group f2 = Group::free_group(2);
    const std::vector<int> pattern{1, 2};
    const auto q = counting_qm(f2, pattern);
    const Element w = parse_element(f2, "a b A B");
    auto b = scl_bounds(w, q, counting_defect_bound(pattern), 64);
    if (!b.lower || *b.lower <= 0) fail(c, lits({w}));
    c.detail = {{"lower", b.lower ? to_string(*b.lower) : "none"}, {"provenance", b.lower_provenance}};
  }));
  out.push_back(timed("finite-torsion", [](CheckResult& c) {
    const Group s5 = Group::symmetric(5);
    const auto cl = commutator_length_full(s5);
    ClOracle oracle = [&cl](const Element& e) -> std::optional<Rational> {
      if (!cl.table().index().contains(e)) return std::nullopt;
      return cl.value(e);
    };
    std::size_t n = 0;
    for (const auto& e : enumerate_elements(s5)) {
      auto b = scl_bounds(e, zero_qm(s5), Rational(0), 1, oracle, {1, 2, 3, 4, 5, 6});
      ++n;
      if (!b.upper || *b.upper != 0 || *b.lower != 0) fail(c, lits({e}));
    }
    c.detail = {{"elements", n}};
  }));
  return out;
}

using SuiteFn = std::function<std::vector<CheckResult>(const ExperimentConfig&)>;

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r{
      {"additivity", suite_additivity},     {"aff-z", suite_aff_z},
      {"bar", suite_bar},                   {"displacement", suite_displacement},
      {"elementary-sl", suite_elementary_sl}, {"norm-oracle", suite_norm_oracle},
      {"packing", suite_packing},           {"rearrange", suite_rearrange},
      {"scl", suite_scl},                   {"seven-fcomm", suite_seven_fcomm},
      {"stabilization", suite_stabilization},
  };
  return r;
}

template <class T>
T get_checked(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (!kConfigKeys.count(key)) throw InvalidInput("unknown config key '" + key + "'");
    if (key == "group") c.group = get_checked<std::string>(v, key);
    if (key == "k") c.k = get_checked<std::string>(v, key);
    if (key == "h") c.h = get_checked<std::string>(v, key);
    if (key == "norm") c.norm = get_checked<std::string>(v, key);
    if (key == "element") c.element = get_checked<std::string>(v, key);
    if (key == "pattern") c.pattern = get_checked<std::string>(v, key);
    if (key == "defect_upper") c.defect_upper = get_checked<std::string>(v, key);
    if (key == "m") c.m = get_checked<std::size_t>(v, key);
    if (key == "n") c.n = get_checked<std::size_t>(v, key);
    if (key == "n_max") c.n_max = get_checked<std::size_t>(v, key);
    if (key == "seed") c.seed = get_checked<std::uint64_t>(v, key);
    if (key == "budget") c.budget = get_checked<std::size_t>(v, key);
    if (key == "out") c.out = get_checked<std::string>(v, key);
    if (key == "format") c.format = get_checked<std::string>(v, key);
    if (key == "threads") c.threads = get_checked<unsigned>(v, key);
    if (key == "guard") c.guard = get_checked<std::size_t>(v, key);
    if (key == "window") c.window = get_checked<std::size_t>(v, key);
  }
  parse_format(c.format);
  return c;
}

json config_echo(const ExperimentConfig& c) {
  json j = {{"group", c.group},   {"k", c.k},         {"h", c.h},         {"norm", c.norm},
            {"element", c.element}, {"pattern", c.pattern}, {"m", c.m},     {"n", c.n},
            {"n_max", c.n_max},   {"seed", c.seed},   {"budget", c.budget}, {"format", c.format},
            {"guard", c.guard},   {"window", c.window}};
  j["defect_upper"] = c.defect_upper ? json(*c.defect_upper) : json(nullptr);
  return j;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw InvalidInput("unknown suite '" + name + "'");
  SuiteReport r;
  r.suite = name;
  r.checks = it->second(config);
  std::sort(r.checks.begin(), r.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  for (const auto& c : r.checks) r.passed = r.passed && c.passed;
  return r;
}

json suite_report_json(const SuiteReport& report, const ExperimentConfig& config) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json j = {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
    if (!c.passed) j["witness"] = c.witness;
    checks.push_back(std::move(j));
  }
  return {{"tool", "cinorm"},
          {"version", kToolVersion},
          {"suite", report.suite},
          {"config", config_echo(config)},
          {"passed", report.passed},
          {"checks", checks}};
}

json suite_timing_json(const SuiteReport& report) {
  json t = json::object();
  for (const auto& c : report.checks) t[c.name] = c.seconds;
  return {{"suite", report.suite}, {"seconds", t}};
}

}  // namespace cinorm
