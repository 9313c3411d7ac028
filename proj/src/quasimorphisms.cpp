#include "cinorm/quasimorphisms.hpp"

#include <algorithm>

#include "cinorm/error.hpp"
#include "cinorm/parallel.hpp"
#include "cinorm/random.hpp"

namespace cinorm {

namespace {

constexpr std::size_t kMaxWitnesses = 8;
constexpr std::size_t kMaxPairSide = 100'000;

/// Max of value(i) over [0, n) with the first few indices reaching it.
/// Shards are contiguous and merged in order, so the result is the same
/// for every thread count.
struct MaxScan {
  Rational value = 0;
  bool any = false;
  std::vector<std::size_t> hits;
};

MaxScan scan_maximum(std::size_t n, unsigned threads, const std::function<Rational(std::size_t)>& value) {
  std::vector<MaxScan> shards(shard_count(n, threads));
  parallel_shards(n, threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    MaxScan& s = shards[k];
    for (std::size_t i = begin; i < end; ++i) {
      Rational v = value(i);
      if (!s.any || v > s.value) {
        s.value = std::move(v);
        s.any = true;
        s.hits.assign(1, i);
      } else if (v == s.value && s.hits.size() < kMaxWitnesses) {
        s.hits.push_back(i);
      }
    }
  });
  MaxScan out;
  for (auto& s : shards) {
    if (!s.any) continue;
    if (!out.any || s.value > out.value) {
      out = std::move(s);
    } else if (s.value == out.value) {
      for (auto i : s.hits) {
        if (out.hits.size() < kMaxWitnesses) out.hits.push_back(i);
      }
    }
  }
  return out;
}

std::size_t count_occurrences(const std::vector<int>& word, const std::vector<int>& pattern) {
  if (pattern.size() > word.size()) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + pattern.size() <= word.size(); ++i) {
    if (std::equal(pattern.begin(), pattern.end(), word.begin() + static_cast<std::ptrdiff_t>(i))) ++count;
  }
  return count;
}

std::vector<int> inverse_letters(const std::vector<int>& letters) {
  std::vector<int> out(letters.rbegin(), letters.rend());
  for (auto& l : out) l = -l;
  return out;
}

void require_domain(const QuasiMorphism& q, const Element& e) {
  if (!(e.group() == q.domain)) {
    throw DescriptorMismatch(q.name + " lives on " + q.domain.name() + ", got an element of " + e.group().name());
  }
}

Element random_in_subgroup(const SubgroupSpec& h, Rng& rng, int size) {
  if (h.generators.empty()) return identity(h.group);
  Element acc = identity(h.group);
  const auto len = rng.below(static_cast<std::uint64_t>(size) + 1);
  for (std::uint64_t k = 0; k < len; ++k) {
    const Element& s = h.generators[rng.below(h.generators.size())];
    acc = compose(acc, rng.coin() ? s : invert(s));
  }
  return acc;
}

}  // namespace

std::string to_string(QmKind kind) {
  switch (kind) {
    case QmKind::Homomorphism:
      return "homomorphism";
    case QmKind::Counting:
      return "counting";
    case QmKind::BarExtension:
      return "bar_extension";
    case QmKind::User:
      return "user";
  }
  return "user";
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::Exact:
      return "exact";
    case Certification::SampledLowerBound:
      return "sampled_lower_bound";
    case Certification::DeclaredUpperBound:
      return "declared_upper_bound";
  }
  return "exact";
}

QuasiMorphism zero_qm(const Group& g) {
  return QuasiMorphism{g, [](const Element&) { return Rational(0); }, QmKind::Homomorphism, true, "zero", ""};
}

QuasiMorphism homomorphism_qm(const Group& g, std::string name, std::function<Rational(const Element&)> eval) {
  return QuasiMorphism{g, std::move(eval), QmKind::Homomorphism, true, std::move(name), ""};
}

QuasiMorphism exponent_sum_qm(const Group& free, int letter) {
  if (free.family() != Family::Free || letter < 1 || letter > free.degree()) {
    throw InvalidInput("exponent_sum_qm needs a generator of a free group");
  }
  return homomorphism_qm(free, "exponent-sum-" + std::to_string(letter), [letter](const Element& e) {
    long s = 0;
    for (int l : e.as<ReducedWord>().letters) {
      if (l == letter) ++s;
      if (l == -letter) --s;
    }
    return Rational(s);
  });
}

QuasiMorphism counting_qm(const Group& free, const std::vector<int>& pattern) {
  if (free.family() != Family::Free) throw DescriptorMismatch("counting_qm needs a free group, got " + free.name());
  if (pattern.empty()) throw InvalidInput("counting_qm: empty pattern");
  const Element check = free_word(free, pattern);
  if (check.as<ReducedWord>().letters != pattern) throw InvalidInput("counting_qm: pattern is not reduced");
  const auto inv = inverse_letters(pattern);
  QuasiMorphism q{free,
                  [free, pattern, inv](const Element& e) {
                    if (!(e.group() == free)) throw DescriptorMismatch("counting_qm on " + free.name());
                    const auto& w = e.as<ReducedWord>().letters;
                    return Rational(static_cast<long>(count_occurrences(w, pattern)) -
                                    static_cast<long>(count_occurrences(w, inv)));
                  },
                  QmKind::Counting, false, "count[" + to_literal(check) + "]", "overlapping"};
  return q;
}

QuasiMorphism counting_qm(const Group& free, const std::string& pattern_literal) {
  const Element p = parse_element(free, pattern_literal);
  return counting_qm(free, p.as<ReducedWord>().letters);
}

Rational counting_defect_bound(const std::vector<int>& pattern) {
  if (pattern.empty()) throw InvalidInput("counting_defect_bound: empty pattern");
  return Rational(3 * (static_cast<long>(pattern.size()) - 1));
}

QuasiMorphism product_qm(const Group& product, const std::vector<QuasiMorphism>& factors) {
  if (product.family() != Family::Product || product.factors().size() != factors.size()) {
    throw DescriptorMismatch("product_qm: factor count does not match " + product.name());
  }
  bool homogeneous = true;
  std::string name = "sum(";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i].domain == product.factors()[i])) {
      throw DescriptorMismatch("product_qm: factor " + std::to_string(i) + " lives on " + factors[i].domain.name());
    }
    homogeneous = homogeneous && factors[i].homogeneous;
    name += (i ? "," : "") + factors[i].name;
  }
  name += ")";
  return QuasiMorphism{product,
                       [factors](const Element& e) {
                         const auto& parts = e.as<ProductPayload>().parts;
                         Rational s = 0;
                         for (std::size_t i = 0; i < factors.size(); ++i) s += factors[i].eval(parts[i]);
                         return s;
                       },
                       QmKind::User, homogeneous, name, factors.empty() ? "" : factors.front().convention};
}

std::optional<std::pair<Element, std::int64_t>> homogeneity_violation(const QuasiMorphism& q,
                                                                      const std::vector<Element>& samples,
                                                                      std::int64_t max_power) {
  for (const auto& g : samples) {
    require_domain(q, g);
    const Rational base = q.eval(g);
    for (std::int64_t n = 2; n <= max_power; ++n) {
      if (q.eval(power(g, n)) != Rational(n) * base) return std::make_pair(g, n);
    }
  }
  return std::nullopt;
}

DefectEstimate defect(const QuasiMorphism& q, EstimateMode mode, std::size_t budget, std::uint64_t seed,
                      unsigned threads, int word_size, std::size_t limit) {
  DefectEstimate out;
  auto excess = [&](const Element& a, const Element& b) -> Rational { return abs(q.eval(compose(a, b)) - q.eval(a) - q.eval(b)); };
  if (mode == EstimateMode::Exact) {
    if (!q.domain.finite()) throw InfiniteGroup("exact defect needs a finite domain, got " + q.domain.name());
    const auto all = enumerate_elements(q.domain, limit);
    const std::size_t n = all.size();
    if (n > kMaxPairSide) throw GuardExceeded("defect: too many pairs over " + q.domain.name());
    auto scan = scan_maximum(n * n, threads, [&](std::size_t i) { return excess(all[i / n], all[i % n]); });
    out.value = scan.value;
    out.certified = Certification::Exact;
    out.sample_meta.count = n * n;
    if (!scan.hits.empty()) out.witness = ElementPair{all[scan.hits[0] / n], all[scan.hits[0] % n]};
    return out;
  }
  auto draw = [&](std::size_t i) {
    Rng rng = Rng::for_sample(seed, i);
    Element a = random_element(q.domain, rng, word_size);
    Element b = random_element(q.domain, rng, word_size);
    return ElementPair{std::move(a), std::move(b)};
  };
  auto scan = scan_maximum(budget, threads, [&](std::size_t i) {
    auto [a, b] = draw(i);
    return excess(a, b);
  });
  out.value = scan.value;
  out.certified = Certification::SampledLowerBound;
  out.sample_meta = SampleMeta{budget, seed, word_size};
  if (!scan.hits.empty()) out.witness = draw(scan.hits[0]);
  return out;
}

DefectEstimate declared_defect(const Rational& upper) {
  if (upper < 0) throw InvalidInput("declared defect must be non-negative");
  DefectEstimate d;
  d.value = upper;
  d.certified = Certification::DeclaredUpperBound;
  return d;
}

HomogenizationInterval homogenize(const QuasiMorphism& q, const Element& g, std::int64_t n,
                                  std::optional<Rational> defect_upper) {
  if (n < 1) throw InvalidInput("homogenize: n must be at least 1");
  require_domain(q, g);
  HomogenizationInterval out{g, n, q.eval(power(g, n)) / Rational(n), 0, false};
  if (defect_upper) {
    if (*defect_upper < 0) throw InvalidInput("homogenize: negative defect bound");
    out.radius = *defect_upper / Rational(n);
    out.certified = true;
  }
  return out;
}

QuasiMorphism bar_extension(const QuasiMorphism& r) {
  const Group bar = Group::bar(r.domain);
  auto eval = r.eval;
  return QuasiMorphism{bar,
                       [bar, eval](const Element& h) {
                         if (!(h.group() == bar)) throw DescriptorMismatch("bar extension on " + bar.name());
                         const auto& c = h.as<BarPayload>().coords;
                         return Rational(eval(c[0]) + eval(c[1]));
                       },
                       QmKind::BarExtension, r.homogeneous, "bar(" + r.name + ")", r.convention};
}

BarDefectCheck bar_defect_check(const QuasiMorphism& r, const Element& h, const Element& f) {
  const Group bar = Group::bar(r.domain);
  if (!(h.group() == bar) || !(f.group() == bar)) throw DescriptorMismatch("bar_defect_check needs " + bar.name());
  const auto& hp = h.as<BarPayload>();
  const auto& fp = f.as<BarPayload>();
  // h f = (h1, h2) t^e (f1, f2) t^d = (h1 x1, h2 x2) t^{e+d}, where (x1, x2)
  // is (f1, f2), swapped when e = 1.
  const Element& x1 = hp.t ? fp.coords[1] : fp.coords[0];
  const Element& x2 = hp.t ? fp.coords[0] : fp.coords[1];
  const Element hf = compose(h, f);
  const auto& hfp = hf.as<BarPayload>();
  if (!(hfp.coords[0] == compose(hp.coords[0], x1)) || !(hfp.coords[1] == compose(hp.coords[1], x2))) {
    throw Error("bar multiplication does not match the twisted coordinate law");
  }
  const auto& q = r.eval;
  BarDefectCheck out;
  out.twisted = hp.t;
  const Rational rbar_hf = q(hfp.coords[0]) + q(hfp.coords[1]);
  const Rational rbar_h = q(hp.coords[0]) + q(hp.coords[1]);
  const Rational rbar_f = q(fp.coords[0]) + q(fp.coords[1]);
  out.lhs = abs(rbar_hf - rbar_h - rbar_f);
  out.rhs = abs(q(hfp.coords[0]) - q(hp.coords[0]) - q(x1)) + abs(q(hfp.coords[1]) - q(hp.coords[1]) - q(x2));
  out.ok = out.lhs <= out.rhs;
  return out;
}

BarDefectReport check_bar_defect(const QuasiMorphism& r, std::size_t samples, std::uint64_t seed, int word_size,
                                 unsigned threads) {
  const Group bar = Group::bar(r.domain);
  struct Shard {
    std::size_t twisted = 0;
    Rational max_lhs = 0;
    std::optional<std::size_t> violation;
  };
  std::vector<Shard> shards(shard_count(samples, threads));
  auto draw = [&](std::size_t i) {
    Rng rng = Rng::for_sample(seed, i);
    Element h = random_element(bar, rng, word_size);
    Element f = random_element(bar, rng, word_size);
    return ElementPair{std::move(h), std::move(f)};
  };
  parallel_shards(samples, threads, [&](std::size_t begin, std::size_t end, unsigned k) {
    for (std::size_t i = begin; i < end; ++i) {
      auto [h, f] = draw(i);
      auto c = bar_defect_check(r, h, f);
      if (c.twisted) ++shards[k].twisted;
      if (c.lhs > shards[k].max_lhs) shards[k].max_lhs = c.lhs;
      if (!c.ok && !shards[k].violation) shards[k].violation = i;
    }
  });
  BarDefectReport out;
  out.samples = samples;
  out.seed = seed;
  for (const auto& s : shards) {
    out.twisted += s.twisted;
    if (s.max_lhs > out.max_lhs) out.max_lhs = s.max_lhs;
    if (s.violation && !out.violation) out.violation = draw(*s.violation);
  }
  out.passed = !out.violation;
  return out;
}

SplittingReport verify_gbar_splitting(const Element& w, std::size_t k) {
  const Group& bar = w.group();
  if (bar.family() != Family::Bar) throw DescriptorMismatch("verify_gbar_splitting needs a Bar group");
  const auto& p = w.as<BarPayload>();
  const Element one = identity(bar.base());
  const auto& g1 = p.coords[0];
  const auto& g2 = p.coords[1];
  SplittingReport out{true,
                      p.t,
                      p.t ? bar_element(bar, compose(g1, g2), one, false) : bar_element(bar, g1, one, false),
                      p.t ? bar_element(bar, one, compose(g2, g1), false) : bar_element(bar, one, g2, false),
                      k,
                      std::nullopt};
  const Element step = p.t ? compose(w, w) : w;
  Element lhs = identity(bar);
  Element a = identity(bar);
  Element b = identity(bar);
  for (std::size_t j = 1; j <= k; ++j) {
    lhs = compose(lhs, step);
    a = compose(a, out.w1);
    b = compose(b, out.w2);
    if (!(lhs == compose(a, b))) {
      out.passed = false;
      out.failing_power = j;
      break;
    }
  }
  return out;
}

CommutatorSupEstimate commutator_sup(const QuasiMorphism& q, const SubgroupSpec& h, EstimateMode mode,
                                     std::size_t budget, std::uint64_t seed, unsigned threads, int word_size,
                                     std::size_t limit) {
  if (!(h.group == q.domain)) throw DescriptorMismatch("commutator_sup: subgroup of " + h.group.name());
  if (mode == EstimateMode::Exact) {
    if (!h.group.finite()) throw InfiniteGroup("exact commutator_sup needs a finite subgroup");
    return commutator_sup_over(q, subgroup_closure(h, limit), threads);
  }
  auto draw = [&](std::size_t i) {
    Rng rng = Rng::for_sample(seed, i);
    Element x = random_in_subgroup(h, rng, word_size);
    Element y = random_in_subgroup(h, rng, word_size);
    return ElementPair{std::move(x), std::move(y)};
  };
  auto scan = scan_maximum(budget, threads, [&](std::size_t i) {
    auto [x, y] = draw(i);
    return q.eval(commutator_of(x, y));
  });
  CommutatorSupEstimate out;
  // x = y gives q(1) = 0, so the sup is never negative.
  out.value = scan.any && scan.value > 0 ? scan.value : Rational(0);
  if (scan.any && scan.value >= 0) {
    for (auto i : scan.hits) out.witnesses.push_back(draw(i));
  }
  out.certified = Certification::SampledLowerBound;
  out.sample_meta = SampleMeta{budget, seed, word_size};
  return out;
}

CommutatorSupEstimate commutator_sup_over(const QuasiMorphism& q, const std::vector<Element>& elements,
                                          unsigned threads) {
  const std::size_t n = elements.size();
  if (n > kMaxPairSide) throw GuardExceeded("commutator_sup: too many pairs");
  auto scan = scan_maximum(n * n, threads, [&](std::size_t i) {
    return q.eval(commutator_of(elements[i / n], elements[i % n]));
  });
  CommutatorSupEstimate out;
  out.value = scan.any ? scan.value : Rational(0);
  for (auto i : scan.hits) out.witnesses.emplace_back(elements[i / n], elements[i % n]);
  out.certified = Certification::Exact;
  out.sample_meta.count = n * n;
  return out;
}

std::vector<Element> free_ball(const Group& free, int radius) {
  if (free.family() != Family::Free) throw DescriptorMismatch("free_ball needs a free group");
  std::vector<std::vector<int>> layer{{}};
  std::vector<Element> out{identity(free)};
  for (int len = 1; len <= radius; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : layer) {
      for (int gen = 1; gen <= free.degree(); ++gen) {
        for (int l : {gen, -gen}) {
          if (!w.empty() && w.back() == -l) continue;
          auto v = w;
          v.push_back(l);
          out.push_back(make_trusted(free, ReducedWord{v}));
          next.push_back(std::move(v));
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Element embed_factor(const Group& product, std::size_t i, const Element& x) {
  if (product.family() != Family::Product || i >= product.factors().size()) {
    throw DescriptorMismatch("embed_factor: no factor " + std::to_string(i) + " in " + product.name());
  }
  std::vector<Element> parts;
  for (const auto& f : product.factors()) parts.push_back(identity(f));
  if (!(x.group() == product.factors()[i])) throw DescriptorMismatch("embed_factor: element of " + x.group().name());
  parts[i] = x;
  return product_element(product, std::move(parts));
}

AdditivityReport verify_commutator_additivity(const QuasiMorphism& q, const std::vector<SubgroupSpec>& factors,
                                              const std::vector<ElementPair>& witnesses) {
  if (factors.size() != witnesses.size()) throw InvalidInput("one witness pair per factor is required");
  auto commute = [](const Element& a, const Element& b) { return compose(a, b) == compose(b, a); };
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i].group == q.domain)) throw DescriptorMismatch("factor subgroup outside " + q.domain.name());
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      for (const auto& a : factors[i].generators) {
        for (const auto& b : factors[j].generators) {
          if (!commute(a, b)) throw InvalidInput("factors " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " do not commute: " + to_literal(a) + ", " + to_literal(b));
        }
      }
      for (const auto& a : {witnesses[i].first, witnesses[i].second}) {
        for (const auto& b : {witnesses[j].first, witnesses[j].second}) {
          if (!commute(a, b)) throw InvalidInput("witnesses " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " do not commute: " + to_literal(a) + ", " + to_literal(b));
        }
      }
    }
  }
  AdditivityReport out;
  Element x = identity(q.domain);
  Element y = identity(q.domain);
  out.sum = 0;
  for (const auto& [xi, yi] : witnesses) {
    require_domain(q, xi);
    require_domain(q, yi);
    out.factor_values.push_back(q.eval(commutator_of(xi, yi)));
    out.sum += out.factor_values.back();
    x = compose(x, xi);
    y = compose(y, yi);
  }
  out.combined = q.eval(commutator_of(x, y));
  out.passed = out.combined == out.sum;
  return out;
}

SclBounds scl_bounds(const Element& w, const QuasiMorphism& q, std::optional<Rational> defect_upper, std::int64_t n,
                     const std::optional<ClOracle>& cl_oracle, const std::vector<std::int64_t>& upper_ns) {
  require_domain(q, w);
  SclBounds out{w, std::nullopt, "", std::nullopt, "", std::nullopt, q.domain.finite()};
  if (defect_upper) {
    const Rational& d = *defect_upper;
    if (d < 0) throw InvalidInput("scl_bounds: negative defect bound");
    if (q.homogeneous) {
      const Rational v = abs(q.eval(w));
      if (d == 0 && v != 0) throw InvalidInput("scl_bounds: defect 0 but q(w) != 0; q cannot be a homomorphism");
      out.lower = d == 0 ? Rational(0) : Rational(v / (2 * d));
      out.lower_provenance = "homogeneous " + q.name + ", |q(w)|/(2D), D=" + to_string(d);
    } else {
      const auto h = homogenize(q, w, n, d);
      if (d == 0 && h.center != 0) throw InvalidInput("scl_bounds: defect 0 but q(w^n) != 0");
      Rational v = abs(h.center) - h.radius;
      if (v < 0 || d == 0) v = 0;
      out.lower = d == 0 ? Rational(0) : Rational(v / (4 * d));
      out.lower_provenance = q.name + " homogenized at n=" + std::to_string(n) + ", (|q(w^n)/n| - D/n)/(4D), D=" +
                             to_string(d);
    }
  }
  if (cl_oracle) {
    std::vector<std::int64_t> ns = upper_ns;
    if (ns.empty()) ns = {1};
    for (auto k : ns) {
      if (k < 1) throw InvalidInput("scl_bounds: powers must be positive");
      const Element wk = power(w, k);
      std::optional<Rational> cl = wk.is_identity() ? std::optional<Rational>(0) : (*cl_oracle)(wk);
      if (!cl) continue;
      const Rational v = *cl / Rational(k);
      if (!out.upper || v < *out.upper) {
        out.upper = v;
        out.upper_witness = std::make_pair(k, *cl);
      }
    }
    if (out.upper) {
      out.upper_provenance = "cl(w^" + std::to_string(out.upper_witness->first) +
                             ")=" + to_string(out.upper_witness->second);
    }
  }
  if (out.lower && out.upper && *out.lower > *out.upper) {
    throw Error("scl_bounds: lower " + to_string(*out.lower) + " exceeds upper " + to_string(*out.upper));
  }
  return out;
}

}  // namespace cinorm
