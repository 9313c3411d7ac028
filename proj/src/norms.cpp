#include "cinorm/norms.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_set>

#include "cinorm/error.hpp"
#include "cinorm/parallel.hpp"

namespace cinorm {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxViolations = 16;

std::vector<std::string> literals(const std::vector<Element>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(to_literal(x));
  return out;
}

Rational max_value(const std::vector<Rational>& values) {
  Rational best = 0;
  for (const auto& v : values) best = std::max(best, v);
  return best;
}

}  // namespace

NormTable::NormTable(Group group, std::shared_ptr<const ElementIndex> index, std::vector<Rational> values,
                     NormMeta meta)
    : group_(std::move(group)), index_(std::move(index)), values_(std::move(values)), meta_(std::move(meta)) {
  if (values_.size() != index_->size()) throw InvalidInput("norm table size does not match its domain");
}

const Rational& NormTable::value(const Element& e) const {
  auto i = index_->find(e);
  if (!i) throw InvalidInput(to_literal(e) + " is outside the domain of " + meta_.name);
  return values_[*i];
}

NormFn NormTable::as_function() const {
  auto index = index_;
  auto values = std::make_shared<const std::vector<Rational>>(values_);
  auto name = meta_.name;
  return [index, values, name](const Element& e) {
    auto i = index->find(e);
    if (!i) throw InvalidInput(to_literal(e) + " is outside the domain of " + name);
    return (*values)[*i];
  };
}

NormTable tabulate(const Group& g, std::string name, const NormFn& fn, std::size_t limit) {
  auto index = std::make_shared<const ElementIndex>(enumerate_elements(g, limit));
  std::vector<Rational> values;
  values.reserve(index->size());
  for (const auto& x : index->elements()) values.push_back(fn(x));
  NormMeta meta;
  meta.name = std::move(name);
  meta.diameter = max_value(values);
  return NormTable(g, std::move(index), std::move(values), std::move(meta));
}

Rational trivial_norm(const Element& e) { return e.is_identity() ? 0 : 1; }

Rational support_norm(const Element& e) {
  if (const auto* p = std::get_if<Permutation>(&e.payload())) {
    long moved = 0;
    for (std::size_t i = 0; i < p->image.size(); ++i) moved += p->image[i] != i;
    return moved;
  }
  if (const auto* w = std::get_if<BinaryWord>(&e.payload())) {
    return static_cast<long>(std::count(w->bits.begin(), w->bits.end(), 1));
  }
  throw InvalidInput("support norm needs a permutation or a binary word, got " + e.group().name());
}

Rational wreath_support_norm(const Element& e) {
  if (e.group().family() != Family::WreathZn) throw InvalidInput("wreath support norm needs wreath:<base>:zn:<N>");
  const auto& w = e.as<WreathPayload>();
  if (w.shift != 0) return e.group().degree();
  return static_cast<long>(w.positions.size());
}

std::vector<Element> window_elements(const Group& g, std::int64_t window, std::size_t limit) {
  if (window < 0) throw InvalidInput("window must be non-negative");
  if (g.family() == Family::AffZ) {
    auto out = affz_window(window);
    std::sort(out.begin(), out.end());
    return out;
  }
  std::vector<Element> gens;
  if (g.family() == Family::Z2Infinity) {
    for (std::int64_t i = 1; i <= window; ++i) gens.push_back(z2inf_unit(static_cast<std::size_t>(i)));
  } else {
    gens = generators(g);
  }
  const std::size_t k = gens.size();
  for (std::size_t i = 0; i < k; ++i) gens.push_back(invert(gens[i]));
  std::unordered_set<Element, ElementHash> seen{identity(g)};
  std::vector<Element> frontier{identity(g)};
  for (std::int64_t r = 0; r < window && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        Element y = compose(x, s);
        if (seen.insert(y).second) {
          if (seen.size() > limit) throw GuardExceeded("window exceeds " + std::to_string(limit) + " elements");
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<Element> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

AxiomReport verify_norm_axioms_window(const NormFn& fn, const std::vector<Element>& window, unsigned threads) {
  const std::size_t n = window.size();
  std::vector<Rational> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = fn(window[i]);

  struct Shard {
    std::vector<AxiomViolation> found;
    std::size_t count = 0;
    std::size_t pairs = 0;
    bool other_axiom = false;
  };
  std::vector<Shard> results(shard_count(n, threads));
  parallel_shards(n, threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    Shard& out = results[k];
    auto report = [&](int axiom, std::vector<Element> witness, std::string detail) {
      ++out.count;
      if (axiom != 5) out.other_axiom = true;
      if (out.found.size() < kMaxViolations) out.found.push_back({axiom, std::move(witness), std::move(detail)});
    };
    for (std::size_t i = begin; i < end; ++i) {
      const Element& f = window[i];
      const Rational& vf = v[i];
      if (vf < 0) report(5, {f}, "negative value " + to_string(vf));
      if (f.is_identity()) {
        if (vf != 0) report(1, {f}, "value at identity is " + to_string(vf));
      } else if (vf <= 0) {
        report(5, {f}, "non-identity element has value " + to_string(vf));
      }
      const Rational vi = fn(invert(f));
      if (vi != vf) report(2, {f}, to_string(vf) + " vs " + to_string(vi));
      for (std::size_t j = 0; j < n; ++j) {
        ++out.pairs;
        const Element& g = window[j];
        const Rational vp = fn(compose(f, g));
        if (vp > vf + v[j]) report(3, {f, g}, to_string(vp) + " > " + to_string(vf) + " + " + to_string(v[j]));
        const Rational vc = fn(conjugate_of(f, g));
        if (vc != vf) report(4, {f, g}, to_string(vc) + " vs " + to_string(vf));
      }
    }
  });

  AxiomReport report;
  bool only_positivity = true;
  for (auto& r : results) {
    report.checked_pairs += r.pairs;
    report.violation_count += r.count;
    if (r.other_axiom) only_positivity = false;
    for (auto& viol : r.found) {
      if (report.violations.size() < kMaxViolations) report.violations.push_back(std::move(viol));
    }
  }
  report.passed = report.violation_count == 0;
  report.pseudo = !report.passed && only_positivity;
  return report;
}

AxiomReport verify_norm_axioms(const NormTable& table, unsigned threads) {
  const ElementIndex& dom = table.index();
  const auto& v = table.values();
  const std::size_t n = dom.size();

  std::vector<Element> conjugators;
  if (table.group().finite() && table.group().order() &&
      *table.group().order() > Integer(static_cast<unsigned long>(n))) {
    conjugators = enumerate_elements(table.group());
  } else {
    conjugators = dom.elements();
  }

  struct Shard {
    std::vector<AxiomViolation> found;
    std::size_t count = 0;
    std::size_t pairs = 0;
    bool other_axiom = false;
  };
  const std::size_t shards = shard_count(n, threads);
  std::vector<Shard> results(shards);

  parallel_shards(n, threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    Shard& out = results[k];
    auto report = [&](int axiom, std::vector<Element> witness, std::string detail) {
      ++out.count;
      if (axiom != 5) out.other_axiom = true;
      if (out.found.size() < kMaxViolations) out.found.push_back({axiom, std::move(witness), std::move(detail)});
    };
    for (std::size_t i = begin; i < end; ++i) {
      const Element& f = dom.at(i);
      const Rational& vf = v[i];
      if (vf < 0) report(5, {f}, "negative value " + to_string(vf));
      if (f.is_identity()) {
        if (vf != 0) report(1, {f}, "value at identity is " + to_string(vf));
      } else if (vf <= 0) {
        report(5, {f}, "non-identity element has value " + to_string(vf));
      }
      auto inv = dom.find(invert(f));
      if (!inv) {
        report(2, {f}, "inverse outside the domain");
      } else if (v[*inv] != vf) {
        report(2, {f}, to_string(vf) + " vs " + to_string(v[*inv]));
      }
      for (std::size_t j = 0; j < n; ++j) {
        ++out.pairs;
        const Element& g = dom.at(j);
        auto prod = dom.find(compose(f, g));
        if (!prod) {
          report(3, {f, g}, "product outside the domain");
        } else if (v[*prod] > vf + v[j]) {
          report(3, {f, g}, to_string(v[*prod]) + " > " + to_string(vf) + " + " + to_string(v[j]));
        }
      }
      for (const auto& phi : conjugators) {
        auto c = dom.find(conjugate_of(f, phi));
        if (!c || v[*c] != vf) report(4, {f, phi}, c ? to_string(v[*c]) + " vs " + to_string(vf) : "conjugate outside");
      }
    }
  });

  AxiomReport report;
  bool only_positivity = true;
  for (auto& r : results) {
    report.checked_pairs += r.pairs;
    report.violation_count += r.count;
    if (r.other_axiom) only_positivity = false;
    for (auto& viol : r.found) {
      if (report.violations.size() < kMaxViolations) report.violations.push_back(std::move(viol));
    }
  }
  report.passed = report.violation_count == 0;
  report.pseudo = !report.passed && only_positivity;
  return report;
}

NormTable qk_norm(const Group& g, const std::vector<Element>& K, std::size_t limit) {
  if (K.empty()) throw InvalidInput("K must be non-empty");
  auto index = std::make_shared<const ElementIndex>(enumerate_elements(g, limit));
  const auto closure = conjugacy_closure(K, g, limit);
  std::vector<std::size_t> dist(index->size(), kUnreached);
  std::deque<std::size_t> queue;
  const std::size_t start = index->index_of(identity(g));
  dist[start] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& c : closure) {
      const std::size_t y = index->index_of(compose(index->at(x), c));
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<Rational> values;
  std::size_t unreached = 0;
  std::optional<Element> first_unreached;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == kUnreached) {
      if (!first_unreached) first_unreached = index->at(i);
      ++unreached;
    }
    values.emplace_back(static_cast<unsigned long>(dist[i] == kUnreached ? 0 : dist[i]));
  }
  if (unreached) {
    throw InvalidInput("K does not conjugation-generate " + g.name() + ": " + std::to_string(unreached) +
                       " elements unreached, e.g. " + to_literal(*first_unreached));
  }
  NormMeta meta;
  meta.name = "qK";
  meta.diameter = max_value(values);
  meta.generator_set = literals(K);
  return NormTable(g, std::move(index), std::move(values), std::move(meta));
}

CommutatorLength::CommutatorLength(NormTable table, std::vector<ElementPair> pairs, std::vector<std::size_t> parent,
                                   std::vector<std::size_t> via)
    : table_(std::move(table)), pairs_(std::move(pairs)), parent_(std::move(parent)), via_(std::move(via)) {}

std::vector<ElementPair> CommutatorLength::witness(const Element& g) const {
  std::size_t i = table_.index().index_of(g);
  std::vector<ElementPair> out;
  while (parent_[i] != kUnreached) {
    out.push_back(pairs_[via_[i]]);
    i = parent_[i];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

CommutatorLength build_commutator_length(const Group& g, const std::vector<Element>& all,
                                         const std::vector<Element>& derived_elements) {
  if (all.size() > 0 && all.size() > 100'000'000 / all.size()) {
    throw GuardExceeded("commutator length over " + g.name() + " needs too many pairs");
  }
  // One generating pair per simple commutator, the first in element order.
  ElementIndex derived(derived_elements);
  std::vector<std::optional<ElementPair>> first(derived.size());
  std::vector<Element> inverses;
  inverses.reserve(all.size());
  for (const auto& a : all) inverses.push_back(invert(a));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const Element c = compose(compose(all[i], all[j]), compose(inverses[i], inverses[j]));
      auto& slot = first[derived.index_of(c)];
      if (!slot) slot = ElementPair{all[i], all[j]};
    }
  }
  std::vector<std::size_t> comm_index;
  std::vector<ElementPair> pairs;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i]) {
      comm_index.push_back(i);
      pairs.push_back(*first[i]);
    }
  }

  auto index = std::make_shared<const ElementIndex>(derived.elements());
  std::vector<std::size_t> dist(index->size(), kUnreached), parent(index->size(), kUnreached),
      via(index->size(), kUnreached);
  std::deque<std::size_t> queue;
  const std::size_t start = index->index_of(identity(g));
  dist[start] = 0;
  queue.push_back(start);
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t c = 0; c < comm_index.size(); ++c) {
      const std::size_t y = index->index_of(compose(index->at(x), index->at(comm_index[c])));
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        parent[y] = x;
        via[y] = c;
        queue.push_back(y);
      }
    }
  }
  std::vector<Rational> values;
  for (auto d : dist) values.emplace_back(static_cast<unsigned long>(d));
  NormMeta meta;
  meta.name = "cl";
  meta.diameter = max_value(values);
  return CommutatorLength(NormTable(g, std::move(index), std::move(values), std::move(meta)), std::move(pairs),
                          std::move(parent), std::move(via));
}

CommutatorLength commutator_length_full(const Group& g, std::size_t limit) {
  return build_commutator_length(g, enumerate_elements(g, limit), derived_subgroup(g, limit));
}

CommutatorLength commutator_length_full(const SubgroupSpec& h, std::size_t limit) {
  return build_commutator_length(h.group, subgroup_closure(h, limit), derived_subgroup(h, limit));
}

NormTable commutator_length(const Group& g, std::size_t limit) { return commutator_length_full(g, limit).table(); }

namespace {

std::int64_t affz_derived_exponent(const Element& e) {
  if (e.group().family() != Family::AffZ) throw DescriptorMismatch("expected aff-z, got " + e.group().name());
  const auto& p = e.as<AffZPayload>();
  if (p.t || p.a % 2 != 0) throw InvalidInput(to_literal(e) + " is not in the commutator subgroup <z^2>");
  return p.a / 2;
}

}  // namespace

Rational affz_commutator_length(const Element& e) { return affz_derived_exponent(e) == 0 ? 0 : 1; }

ElementPair affz_commutator_witness(const Element& e) {
  const std::int64_t n = affz_derived_exponent(e);
  return {affz(0, true), affz(-n, false)};
}

Element z2inf_unit(std::size_t i) {
  if (i == 0) throw InvalidInput("z2inf generators are numbered from 1");
  std::vector<std::uint8_t> bits(i, 0);
  bits[i - 1] = 1;
  return binary_word(std::move(bits));
}

namespace {

/// Integer coordinates of an element of an abelian model, plus the torsion
/// modulus applied to every coordinate (0 for Z).
std::pair<std::vector<Integer>, int> abelian_coordinates(const Element& e) {
  const Group& g = e.group();
  if (g.family() == Family::Z2Infinity) {
    std::vector<Integer> out;
    for (auto b : e.as<BinaryWord>().bits) out.emplace_back(b);
    return {out, 2};
  }
  auto free_exponent = [](const Element& x) {
    if (x.group().family() != Family::Free || x.group().degree() != 1) {
      throw InvalidInput("filtration norm needs z2inf or a product of free:1 factors");
    }
    long s = 0;
    for (int l : x.as<ReducedWord>().letters) s += l > 0 ? 1 : -1;
    return Integer(s);
  };
  if (g.family() == Family::Free) return {{free_exponent(e)}, 0};
  if (g.family() == Family::Product) {
    std::vector<Integer> out;
    for (const auto& part : e.as<ProductPayload>().parts) out.push_back(free_exponent(part));
    return {out, 0};
  }
  throw InvalidInput("filtration norm needs z2inf or a product of free:1 factors, got " + g.name());
}

/// Row echelon form of a lattice in Z^n, one row per pivot column.
class Lattice {
 public:
  explicit Lattice(std::size_t n) : rows_(n) {}

  void insert(std::vector<Integer> v) {
    for (std::size_t col = 0; col < v.size(); ++col) {
      if (v[col] == 0) continue;
      auto& r = rows_[col];
      if (r.empty()) {
        if (v[col] < 0) {
          for (auto& x : v) x = -x;
        }
        r = std::move(v);
        return;
      }
      Integer gcd, s, t;
      mpz_gcdext(gcd.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), r[col].get_mpz_t(), v[col].get_mpz_t());
      const Integer a = r[col] / gcd, b = v[col] / gcd;
      std::vector<Integer> nr(v.size()), nv(v.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        nr[k] = s * r[k] + t * v[k];
        nv[k] = a * v[k] - b * r[k];
      }
      r = std::move(nr);
      v = std::move(nv);
    }
  }

  bool contains(std::vector<Integer> v) const {
    for (std::size_t col = 0; col < v.size(); ++col) {
      if (v[col] == 0) continue;
      const auto& r = rows_[col];
      if (r.empty() || v[col] % r[col] != 0) return false;
      const Integer q = v[col] / r[col];
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= q * r[k];
    }
    return true;
  }

 private:
  std::vector<std::vector<Integer>> rows_;
};

}  // namespace

std::size_t generator_filtration_norm(const Element& g, const std::vector<Element>& generators) {
  auto [target, modulus] = abelian_coordinates(g);
  std::vector<std::vector<Integer>> gens;
  std::size_t dim = target.size();
  for (const auto& x : generators) {
    if (!(x.group() == g.group())) throw DescriptorMismatch("generator from " + x.group().name());
    gens.push_back(abelian_coordinates(x).first);
    dim = std::max(dim, gens.back().size());
  }
  auto pad = [dim](std::vector<Integer> v) {
    v.resize(dim, 0);
    return v;
  };
  target = pad(std::move(target));
  Lattice lattice(dim);
  if (modulus) {
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<Integer> e(dim, 0);
      e[i] = modulus;
      lattice.insert(std::move(e));
    }
  }
  if (lattice.contains(target)) return 0;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    lattice.insert(pad(gens[k]));
    if (lattice.contains(target)) return k + 1;
  }
  throw InvalidInput(to_literal(g) + " is outside the span of the given generators");
}

QuasiNormSpec quasinorm_from_table(const NormTable& table) {
  return QuasiNormSpec{table.meta().name, table.group(), table.as_function(), 0, 0};
}

QuasiNormReport verify_quasinorm(const QuasiNormSpec& q, const std::vector<ElementPair>& pairs) {
  QuasiNormReport r;
  for (const auto& [a, b] : pairs) {
    ++r.pairs;
    const Rational qa = q.q(a), qb = q.q(b);
    const Rational excess = q.q(compose(a, b)) - qa - qb;
    if (excess > r.max_add_excess) r.max_add_excess = excess;
    if (excess > q.c_add && !r.add_violation) r.add_violation = ElementPair{a, b};
    const Rational qc = q.q(conjugate_of(a, invert(b)));
    const Rational da = abs(qc - qa), db = abs(qc - qb);
    if (da > r.max_conj_a) r.max_conj_a = da;
    if (db > r.max_conj_b) r.max_conj_b = db;
    if (da > q.c_conj && !r.conj_violation) r.conj_violation = ElementPair{a, b};
    if (db > q.c_conj) r.b_reading_holds = false;
  }
  r.passed = !r.add_violation && !r.conj_violation;
  return r;
}

std::vector<ElementPair> all_pairs(const std::vector<Element>& elements) {
  std::vector<ElementPair> out;
  out.reserve(elements.size() * elements.size());
  for (const auto& a : elements) {
    for (const auto& b : elements) out.emplace_back(a, b);
  }
  return out;
}

std::vector<Element> affz_window(std::int64_t window) {
  std::vector<Element> out;
  for (std::int64_t a = -window; a <= window; ++a) {
    out.push_back(affz(a, false));
    out.push_back(affz(a, true));
  }
  return out;
}

NormTable quasinorm_to_norm(const QuasiNormSpec& q, std::size_t limit) {
  auto index = std::make_shared<const ElementIndex>(enumerate_elements(q.group, limit));
  const auto& all = index->elements();
  const auto report = verify_quasinorm(q, all_pairs(all));
  if (!report.passed) {
    const auto& w = report.add_violation ? *report.add_violation : *report.conj_violation;
    throw InvalidInput(q.name + " violates its declared constants at (" + to_literal(w.first) + ", " +
                       to_literal(w.second) + ")");
  }
  std::vector<Rational> sym;
  sym.reserve(all.size());
  for (const auto& x : all) sym.push_back(std::max(q.q(x), q.q(invert(x))));
  const Rational constant = q.c_add + q.c_conj + 1;
  std::vector<Rational> values(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].is_identity()) continue;
    Rational best = sym[i];
    for (const auto& phi : all) best = std::max(best, sym[index->index_of(conjugate_of(all[i], phi))]);
    values[i] = best + constant;
  }
  NormMeta meta;
  meta.name = "converted(" + q.name + ")";
  meta.diameter = max_value(values);
  meta.added_constant = constant;
  return NormTable(q.group, std::move(index), std::move(values), std::move(meta));
}

Homomorphism identity_homomorphism(const Group& g) {
  return {"identity", g, g, [](const Element& x) { return x; }};
}

Homomorphism affz_abelianization() {
  const Group s2 = Group::symmetric(2);
  const Group target = Group::product({s2, s2});
  return {"aff-z abelianization", Group::aff_z(), target, [s2, target](const Element& x) {
            const auto& p = x.as<AffZPayload>();
            const Element swap = permutation_from_cycles(s2, {{1, 2}});
            return product_element(target, {p.a % 2 != 0 ? swap : identity(s2), p.t ? swap : identity(s2)});
          }};
}

Homomorphism bar_parity(const Group& bar) {
  if (bar.family() != Family::Bar) throw DescriptorMismatch("expected bar:<G>, got " + bar.name());
  const Group s2 = Group::symmetric(2);
  return {"t-bit", bar, s2, [s2](const Element& x) {
            return x.as<BarPayload>().t ? permutation_from_cycles(s2, {{1, 2}}) : identity(s2);
          }};
}

std::optional<ElementPair> homomorphism_violation(const Homomorphism& h, const std::vector<ElementPair>& sample) {
  for (const auto& [a, b] : sample) {
    if (!(h.map(compose(a, b)) == compose(h.map(a), h.map(b)))) return ElementPair{a, b};
  }
  return std::nullopt;
}

QuasiNormSpec pullback_qnorm(const QuasiNormSpec& q, const Homomorphism& epi, const std::vector<ElementPair>& sample) {
  if (!(epi.target == q.group)) throw DescriptorMismatch(epi.name + " does not land in " + q.group.name());
  if (auto bad = homomorphism_violation(epi, sample)) {
    throw InvalidInput(epi.name + " is not a homomorphism at (" + to_literal(bad->first) + ", " +
                       to_literal(bad->second) + ")");
  }
  auto inner = q.q;
  auto map = epi.map;
  return QuasiNormSpec{q.name + " pulled back along " + epi.name, epi.source,
                       [inner, map](const Element& x) { return inner(map(x)); }, q.c_add, q.c_conj};
}

namespace {

CosetExtension affz_coset_extension(std::vector<Element> reps) {
  auto coset = [](const Element& x) {
    const auto& p = x.as<AffZPayload>();
    return static_cast<int>(((p.a % 2) + 2) % 2) + (p.t ? 2 : 0);
  };
  if (reps.empty()) reps = {affz(0, false), affz(1, false), affz(0, true), affz(1, true)};
  std::vector<std::optional<Element>> by_coset(4);
  for (const auto& s : reps) {
    if (s.group().family() != Family::AffZ) throw DescriptorMismatch("representative outside aff-z");
    auto& slot = by_coset[static_cast<std::size_t>(coset(s))];
    if (slot) throw InvalidInput("two representatives in the coset of " + to_literal(s));
    slot = s;
  }
  for (const auto& s : by_coset) {
    if (!s) throw InvalidInput("representatives miss a coset of <z^2>");
  }
  auto q = [by_coset, coset](const Element& g) {
    return affz_commutator_length(compose(g, invert(*by_coset[static_cast<std::size_t>(coset(g))])));
  };
  Rational C = 0;
  for (const auto& s1 : reps) {
    for (const auto& s2 : reps) C = std::max(C, q(compose(s1, s2)));
  }
  return CosetExtension{QuasiNormSpec{"coset-extension", Group::aff_z(), q, 1 + C, 1}, std::move(reps), C};
}

}  // namespace

CosetExtension coset_extension_qnorm(const Group& g, std::vector<Element> reps, std::size_t limit) {
  if (g.family() == Family::AffZ) return affz_coset_extension(std::move(reps));
  if (!g.finite()) throw InfiniteGroup("coset extension needs aff-z or a finite group, got " + g.name());

  auto cl = std::make_shared<const CommutatorLength>(commutator_length_full(g, limit));
  const auto all = enumerate_elements(g, limit);
  const ElementIndex index(all);
  const auto& derived = cl->table().index().elements();
  // coset_of[i] = position in `reps` of the coset containing all[i].
  std::vector<std::size_t> coset_of(all.size(), kUnreached);
  const bool given = !reps.empty();
  if (!given) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (coset_of[i] != kUnreached) continue;
      for (const auto& h : derived) coset_of[index.index_of(compose(h, all[i]))] = reps.size();
      reps.push_back(all[i]);
    }
  } else {
    for (std::size_t r = 0; r < reps.size(); ++r) {
      for (const auto& h : derived) {
        auto& slot = coset_of[index.index_of(compose(h, reps[r]))];
        if (slot != kUnreached) throw InvalidInput("two representatives share the coset of " + to_literal(reps[r]));
        slot = r;
      }
    }
    if (std::count(coset_of.begin(), coset_of.end(), kUnreached) != 0) {
      throw InvalidInput("representatives do not cover every coset of G'");
    }
  }
  auto cosets = std::make_shared<const std::vector<std::size_t>>(std::move(coset_of));
  auto shared_index = std::make_shared<const ElementIndex>(all);
  auto rep_inverses = std::make_shared<std::vector<Element>>();
  for (const auto& s : reps) rep_inverses->push_back(invert(s));
  auto q = [cl, cosets, shared_index, rep_inverses](const Element& x) {
    const std::size_t r = (*cosets)[shared_index->index_of(x)];
    return cl->value(compose(x, (*rep_inverses)[r]));
  };
  Rational C = 0;
  for (const auto& s1 : reps) {
    for (const auto& s2 : reps) C = std::max(C, q(compose(s1, s2)));
  }
  return CosetExtension{QuasiNormSpec{"coset-extension", g, q, 1 + C, 1}, std::move(reps), C};
}

StabilizationEstimate stabilization_upper(const NormFn& nu, const Element& f, std::size_t n_max) {
  if (n_max == 0) throw InvalidInput("n_max must be at least 1");
  StabilizationEstimate est{f, nu(f), false, n_max, 1};
  Element power = f;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) power = compose(power, f);
    if (power.is_identity()) {
      est.upper = 0;
      est.exact_zero = true;
      est.argmin = n;
      break;
    }
    Rational ratio = nu(power) / Rational(static_cast<unsigned long>(n));
    ratio.canonicalize();
    if (ratio < est.upper) {
      est.upper = ratio;
      est.argmin = n;
    }
  }
  return est;
}

DominationReport check_extremal_domination(const NormTable& q, const std::vector<Element>& K, std::size_t limit) {
  const NormTable qk = qk_norm(q.group(), K, limit);
  DominationReport r;
  r.norm_name = q.meta().name;
  r.lambda = 0;
  for (const auto& c : conjugacy_closure(K, q.group(), limit)) r.lambda = std::max(r.lambda, q.value(c));
  for (std::size_t i = 0; i < qk.size(); ++i) {
    const Element& g = qk.index().at(i);
    ++r.witness_checked;
    if (q.value(g) > r.lambda * qk.value_at(i)) {
      r.passed = false;
      if (!r.failure) r.failure = g;
    }
  }
  return r;
}

}  // namespace cinorm
