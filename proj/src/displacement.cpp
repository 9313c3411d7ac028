#include "cinorm/displacement.hpp"

#include <algorithm>
#include <map>

#include "cinorm/error.hpp"
#include "cinorm/fcommutator.hpp"
#include "cinorm/parallel.hpp"

namespace cinorm {

namespace {

bool generators_commute(const std::vector<Element>& a, const std::vector<Element>& b) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (!(compose(x, y) == compose(y, x))) return false;
    }
  }
  return true;
}

std::vector<Element> conjugated_generators(const std::vector<Element>& gens, const Element& phi) {
  std::vector<Element> out;
  out.reserve(gens.size());
  for (const auto& s : gens) out.push_back(conjugate_of(s, phi));
  return out;
}

struct Candidate {
  Rational value;
  std::size_t index;
};

/// Least (value, index) over valid elements, merged in shard order.
std::optional<Candidate> scan_minimum(const std::vector<Element>& all, unsigned threads,
                                      const std::function<bool(const Element&)>& valid, const NormFn& nu) {
  std::vector<std::optional<Candidate>> best(shard_count(all.size(), threads));
  parallel_shards(all.size(), threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    for (std::size_t i = begin; i < end; ++i) {
      if (!valid(all[i])) continue;
      Rational v = nu ? nu(all[i]) : Rational(0);
      if (!best[k] || v < best[k]->value) best[k] = Candidate{std::move(v), i};
      if (!nu) break;
    }
  });
  std::optional<Candidate> out;
  for (auto& b : best) {
    if (b && (!out || b->value < out->value || (b->value == out->value && b->index < out->index))) out = b;
  }
  return out;
}

void require_same_ambient(const Group& g, const SubgroupSpec& h) {
  if (!(h.group == g)) throw DescriptorMismatch("subgroup of " + h.group.name() + " used in " + g.name());
}

}  // namespace

bool subgroups_commute(const SubgroupSpec& a, const SubgroupSpec& b) {
  if (!(a.group == b.group)) throw DescriptorMismatch("subgroups of " + a.group.name() + " and " + b.group.name());
  return generators_commute(a.generators, b.generators);
}

SubgroupSpec conjugate_subgroup(const SubgroupSpec& h, const Element& phi) {
  return SubgroupSpec{h.group, conjugated_generators(h.generators, phi), "Conj(" + h.label + ")"};
}

bool strongly_displaces(const SubgroupSpec& h, const Element& phi, std::size_t m) {
  Element p = phi;
  for (std::size_t d = 1; d <= m; ++d) {
    if (d > 1) p = compose(p, phi);
    if (!generators_commute(h.generators, conjugated_generators(h.generators, p))) return false;
  }
  return true;
}

bool weakly_displaces(const SubgroupSpec& h, const std::vector<Element>& phis) {
  std::vector<std::vector<Element>> copies{h.generators};
  for (const auto& phi : phis) copies.push_back(conjugated_generators(h.generators, phi));
  for (std::size_t i = 0; i < copies.size(); ++i) {
    for (std::size_t j = i + 1; j < copies.size(); ++j) {
      if (!generators_commute(copies[i], copies[j])) return false;
    }
  }
  return true;
}

DisplacementReport find_strong_displacer(const Group& g, const SubgroupSpec& h, std::size_t m, unsigned threads,
                                         std::size_t limit) {
  require_same_ambient(g, h);
  const auto all = enumerate_elements(g, limit);
  DisplacementReport r{h, m, DisplacementMode::Strong, {}, false};
  auto hit = scan_minimum(all, threads, [&](const Element& phi) { return strongly_displaces(h, phi, m); }, nullptr);
  if (hit) {
    r.witnesses.push_back(all[hit->index]);
    r.found = true;
  }
  return r;
}

namespace {

/// Largest clique in the subgraph on `candidates`, capped at `cap` vertices.
class CliqueSearch {
 public:
  CliqueSearch(const std::vector<std::vector<bool>>& adj, std::size_t cap) : adj_(adj), cap_(cap) {}

  std::vector<std::size_t> run(const std::vector<std::size_t>& candidates) {
    std::vector<std::size_t> current;
    extend(current, candidates);
    return best_;
  }
  bool capped() const { return best_.size() >= cap_; }

 private:
  void extend(std::vector<std::size_t>& current, const std::vector<std::size_t>& candidates) {
    if (current.size() > best_.size()) best_ = current;
    if (capped()) return;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (current.size() + (candidates.size() - k) <= best_.size()) return;
      const std::size_t v = candidates[k];
      std::vector<std::size_t> next;
      for (std::size_t j = k + 1; j < candidates.size(); ++j) {
        if (adj_[v][candidates[j]]) next.push_back(candidates[j]);
      }
      current.push_back(v);
      extend(current, next);
      current.pop_back();
      if (capped()) return;
    }
  }

  const std::vector<std::vector<bool>>& adj_;
  std::size_t cap_;
  std::vector<std::size_t> best_;
};

}  // namespace

PackingResult packing_number(const Group& g, const SubgroupSpec& h, std::size_t m_cap, unsigned threads,
                             std::size_t limit) {
  require_same_ambient(g, h);
  PackingResult r{std::nullopt, false, DisplacementReport{h, 0, DisplacementMode::Weak, {}, false}, false, 0};
  if (generators_commute(h.generators, h.generators)) {
    r.abelian_degenerate = true;
    return r;
  }
  const auto all = enumerate_elements(g, limit);
  const auto members = subgroup_closure(h, limit);

  // Distinct conjugates keyed by their sorted element lists; each keeps the
  // least conjugator that produces it.
  using Key = std::vector<Element>;
  std::vector<std::map<Key, std::size_t>> shard_maps(shard_count(all.size(), threads));
  parallel_shards(all.size(), threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    auto& out = shard_maps[k];
    for (std::size_t i = begin; i < end; ++i) {
      Key key;
      key.reserve(members.size());
      for (const auto& x : members) key.push_back(conjugate_of(x, all[i]));
      std::sort(key.begin(), key.end());
      out.emplace(std::move(key), i);
    }
  });
  std::map<Key, std::size_t> conjugates;
  for (auto& m : shard_maps) {
    for (auto& [key, idx] : m) {
      auto [it, inserted] = conjugates.emplace(key, idx);
      if (!inserted) it->second = std::min(it->second, idx);
    }
  }
  r.conjugates = conjugates.size();

  std::vector<std::vector<Element>> gens;
  std::vector<std::size_t> conjugator;
  for (const auto& [key, idx] : conjugates) {
    conjugator.push_back(idx);
    gens.push_back(conjugated_generators(h.generators, all[idx]));
  }
  const std::size_t n = gens.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) adj[i][j] = adj[j][i] = generators_commute(gens[i], gens[j]);
  }
  std::vector<std::size_t> neighbours;
  for (std::size_t i = 0; i < n; ++i) {
    if (generators_commute(h.generators, gens[i])) neighbours.push_back(i);
  }
  CliqueSearch search(adj, m_cap);
  const auto clique = search.run(neighbours);
  r.p = clique.size() + 1;
  r.exhausted = !search.capped();
  r.certificate.m = clique.size();
  for (std::size_t v : clique) r.certificate.witnesses.push_back(all[conjugator[v]]);
  r.certificate.found = weakly_displaces(h, r.certificate.witnesses);
  if (!r.certificate.found) throw Error("packing certificate failed its commutation check");
  return r;
}

EnergyResult displacement_energy(const Group& g, const SubgroupSpec& h, std::size_t m, const NormFn& nu,
                                 unsigned threads, std::size_t limit) {
  require_same_ambient(g, h);
  if (m == 0) throw InvalidInput("displacement order m must be at least 1");
  const auto all = enumerate_elements(g, limit);
  EnergyResult r;
  r.m = m;
  auto hit = scan_minimum(all, threads, [&](const Element& phi) { return strongly_displaces(h, phi, m); }, nu);
  if (hit) {
    r.e_m = hit->value;
    r.minimizer = all[hit->index];
  }
  return r;
}

EnergyResult disjunction_energy(const Group& g, const SubgroupSpec& h1, const SubgroupSpec& h2, const NormFn& nu,
                                unsigned threads, std::size_t limit) {
  require_same_ambient(g, h1);
  require_same_ambient(g, h2);
  const auto all = enumerate_elements(g, limit);
  EnergyResult r;
  r.m = 1;
  auto hit = scan_minimum(
      all, threads,
      [&](const Element& phi) { return generators_commute(h1.generators, conjugated_generators(h2.generators, phi)); },
      nu);
  if (hit) {
    r.e_m = hit->value;
    r.minimizer = all[hit->index];
  }
  return r;
}

namespace {

void add_check(MasterReport& r, Element x, std::size_t cl, std::string bound, Rational lhs, Rational rhs) {
  const bool ok = lhs <= rhs;
  if (!ok) r.passed = false;
  r.checks.push_back({std::move(x), cl, std::move(bound), std::move(lhs), std::move(rhs), ok});
}

/// nu(commutator) <= 2 nu([lead, phi]) <= 4 nu(phi).
bool chain_holds(const NormFn& nu, const Element& commutator, const Element& lead, const Element& phi) {
  const Rational lhs = nu(commutator);
  const Rational mid = 2 * nu(commutator_of(lead, phi));
  const Rational rhs = 4 * nu(phi);
  return lhs <= mid && mid <= rhs;
}

}  // namespace

MasterReport verify_master_inequalities(const Group& g, const SubgroupSpec& h, std::size_t m, const NormFn& nu,
                                        unsigned threads, std::size_t limit) {
  MasterReport r;
  r.energy = displacement_energy(g, h, m, nu, threads, limit);
  const EnergyResult e1 = m == 1 ? r.energy : displacement_energy(g, h, 1, nu, threads, limit);
  r.e1 = e1.e_m;
  if (r.e1 && r.energy.e_m && *r.e1 > *r.energy.e_m) r.passed = false;

  const CommutatorLength cl = commutator_length_full(h, limit);
  std::optional<FCommEnvironment> env;
  if (r.energy.minimizer) {
    env = make_environment(g, g, h.generators, *r.energy.minimizer, [](const Element& x) { return x; }, m);
  }
  for (std::size_t i = 0; i < cl.table().size(); ++i) {
    const Element& x = cl.table().index().at(i);
    const std::size_t k = cl.table().value_at(i).get_num().get_ui();
    if (k > m) continue;
    if (r.energy.e_m) add_check(r, x, k, "14e_m", nu(x), 14 * *r.energy.e_m);
    if (k == 1 && r.e1) add_check(r, x, k, "4e_1", nu(x), 4 * *r.e1);
    if (!env) continue;
    auto pairs = cl.witness(x);
    std::reverse(pairs.begin(), pairs.end());
    const auto [c1, c2] = two_commutator_witness(*env, pairs);
    const bool rebuilt = compose(commutator_of(c1.first, c1.second), commutator_of(c2.first, c2.second)) == x;
    add_check(r, x, k, "cl_G<=2", rebuilt ? 2 : 3, 2);
    if (env->capacity >= 2) {
      const auto d = seven_fcommutators(*env, pairs);
      ++r.seven_factor_checks;
      const auto bound = fcomm_norm_bound(*env, d, nu);
      if (!d.verified || d.factors.size() > 7 || !bound.passed) r.passed = false;
    }
  }

  if (e1.minimizer) {
    const Element& phi = *e1.minimizer;
    const auto members = subgroup_closure(h, limit);
    for (const auto& f : members) {
      for (const auto& x : members) {
        ++r.chain_checks;
        const Element c = commutator_of(f, x);
        // [f, phi] = f Conj_phi(f^-1), and Conj_phi(f^-1) commutes with x.
        const bool same = commutator_of(commutator_of(f, phi), x) == c;
        if (!same || !chain_holds(nu, c, f, phi)) {
          r.passed = false;
          if (!r.chain_failure) r.chain_failure = ElementPair{f, x};
        }
      }
    }
  }
  return r;
}

MasterReport verify_disjunction_inequality(const Group& g, const SubgroupSpec& h1, const SubgroupSpec& h2,
                                           const NormFn& nu, unsigned threads, std::size_t limit) {
  MasterReport r;
  r.energy = disjunction_energy(g, h1, h2, nu, threads, limit);
  if (!r.energy.minimizer) return r;
  const Element& phi = *r.energy.minimizer;
  const auto a = subgroup_closure(h1, limit);
  const auto b = subgroup_closure(h2, limit);
  for (const auto& x : a) {
    for (const auto& y : b) {
      ++r.chain_checks;
      const Element c = commutator_of(x, y);
      add_check(r, c, 1, "4e(H1,H2)", nu(c), 4 * *r.energy.e_m);
      // y phi y^-1 phi^-1 = [y, phi] and phi y^-1 phi^-1 commutes with x.
      const bool same = commutator_of(x, commutator_of(y, phi)) == c;
      if (!same || !chain_holds(nu, c, y, phi)) {
        r.passed = false;
        if (!r.chain_failure) r.chain_failure = ElementPair{x, y};
      }
    }
  }
  return r;
}

}  // namespace cinorm
