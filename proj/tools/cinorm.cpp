#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "json.hpp"

#include "cinorm/displacement.hpp"
#include "cinorm/error.hpp"
#include "cinorm/fcommutator.hpp"
#include "cinorm/io.hpp"
#include "cinorm/norms.hpp"
#include "cinorm/quasimorphisms.hpp"
#include "cinorm/random.hpp"
#include "cinorm/suites.hpp"

using namespace cinorm;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kGuard = 3 };

struct Options {
  ExperimentConfig cfg;
  std::string config_file;
  std::string suite;
  std::string qm_action;
  std::string cache_action;
  bool no_cache = false;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&, const ExperimentConfig&)>>> bound;
};

#define CINORM_FIELD(field) [](ExperimentConfig& dst, const ExperimentConfig& src) { dst.field = src.field; }

void add_common(CLI::App* sub, Options& o) {
  auto& c = o.cfg;
  auto bind = [&](CLI::Option* opt, auto copy) { o.bound.emplace_back(opt, copy); };
  bind(sub->add_option("--group", c.group, "group descriptor, e.g. sn:5 or wreath:sn:3:zn:4"), CINORM_FIELD(group));
  bind(sub->add_option("--k", c.k, "comma-separated element literals"), CINORM_FIELD(k));
  bind(sub->add_option("--h", c.h, "generators of the subgroup H"), CINORM_FIELD(h));
  bind(sub->add_option("--norm", c.norm, "trivial, support, wreath-support, qk or cl"), CINORM_FIELD(norm));
  bind(sub->add_option("--element", c.element, "element literal"), CINORM_FIELD(element));
  bind(sub->add_option("--pattern", c.pattern, "counting pattern, e.g. \"a b\""), CINORM_FIELD(pattern));
  bind(sub->add_option("--defect-upper", c.defect_upper, "declared defect bound p/q"), CINORM_FIELD(defect_upper));
  bind(sub->add_option("--m", c.m, "displacement count or number of commutators"), CINORM_FIELD(m));
  bind(sub->add_option("--n", c.n, "power used for homogenization"), CINORM_FIELD(n));
  bind(sub->add_option("--n-max", c.n_max, "largest power for stabilization"), CINORM_FIELD(n_max));
  bind(sub->add_option("--seed", c.seed, "sampling seed"), CINORM_FIELD(seed));
  bind(sub->add_option("--budget", c.budget, "number of samples"), CINORM_FIELD(budget));
  bind(sub->add_option("--out", c.out, "output path (stdout when absent)"), CINORM_FIELD(out));
  bind(sub->add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"})), CINORM_FIELD(format));
  bind(sub->add_option("--threads", c.threads, "worker threads"), CINORM_FIELD(threads));
  bind(sub->add_option("--guard", c.guard, "enumeration budget"), CINORM_FIELD(guard));
  bind(sub->add_option("--window", c.window, "element window on infinite groups"), CINORM_FIELD(window));
  sub->add_option("--config", o.config_file, "JSON file with the same keys; flags override it");
}

/// Explicit flags win over the config file.
void merge_config_file(Options& o) {
  if (o.config_file.empty()) return;
  json j = json::parse(read_text_file(o.config_file), nullptr, false);
  if (j.is_discarded()) throw InvalidInput("config file " + o.config_file + " is not JSON");
  ExperimentConfig merged = config_from_json(j);
  for (auto& [opt, copy] : o.bound) {
    if (opt->count() > 0) copy(merged, o.cfg);
  }
  o.cfg = merged;
}

void emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(cfg.out, text);
  }
}

Group require_group(const ExperimentConfig& cfg) {
  if (cfg.group.empty()) throw InvalidInput("--group is required");
  return Group::parse(cfg.group);
}

std::vector<std::string> literals(const std::vector<Element>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(to_literal(e));
  return out;
}

SubgroupSpec require_subgroup(const Group& g, const ExperimentConfig& cfg) {
  if (cfg.h.empty()) throw InvalidInput("--h is required");
  return make_subgroup(parse_element_list(g, cfg.h), cfg.h);
}

struct NamedNorm {
  std::string name;
  NormFn fn;
  std::shared_ptr<NormTable> table;
};

NamedNorm make_norm(const Group& g, const ExperimentConfig& cfg) {
  if (cfg.norm == "trivial") return {"trivial", trivial_norm, nullptr};
  if (cfg.norm == "support") return {"support", support_norm, nullptr};
  if (cfg.norm == "wreath-support") return {"wreath-support", wreath_support_norm, nullptr};
  if (cfg.norm == "qk") {
    auto t = std::make_shared<NormTable>(qk_norm(g, parse_element_list(g, cfg.k), cfg.guard));
    return {t->meta().name, t->as_function(), t};
  }
  if (cfg.norm == "cl") {
    auto t = std::make_shared<NormTable>(commutator_length(g, cfg.guard));
    return {"cl", t->as_function(), t};
  }
  throw InvalidInput("unknown norm '" + cfg.norm + "'");
}

NormTable norm_table(const Group& g, const ExperimentConfig& cfg) {
  NamedNorm n = make_norm(g, cfg);
  if (n.table) return *n.table;
  return tabulate(g, n.name, n.fn, cfg.guard);
}

int run_table(const ExperimentConfig& cfg, const std::string& kind, bool use_cache) {
  const Group g = require_group(cfg);
  std::vector<Element> K;
  if (kind == "qk") {
    if (cfg.k.empty()) throw InvalidInput("--k is required");
    K = parse_element_list(g, cfg.k);
  }
  std::vector<std::string> key_gens = literals(K);
  std::sort(key_gens.begin(), key_gens.end());
  auto compute = [&] { return kind == "qk" ? qk_norm(g, K, cfg.guard) : commutator_length(g, cfg.guard); };
  std::unique_ptr<TableCache> cache;
  if (use_cache) cache = std::make_unique<TableCache>(TableCache::default_dir());
  std::string text = cached_table_json(cache.get(), CacheKey{g.name(), kind, key_gens}, compute);
  if (cache) {
    for (const auto& w : cache->warnings()) std::cerr << "cache: " << w << "\n";
  }
  if (parse_format(cfg.format) == TableFormat::Tsv) text = table_to_tsv(table_from_json(json::parse(text)));
  emit(cfg, text);
  return kPass;
}

int run_cld(const ExperimentConfig& cfg) {
  const Group g = require_group(cfg);
  const auto cl = commutator_length_full(g, cfg.guard);
  emit(cfg, dump_json({{"group", g.name()}, {"derived_order", cl.table().size()}, {"cld", to_string(cl.diameter())}}));
  return kPass;
}

/// Infinite groups: callable norms over a window. cl on AffZ is checked on
/// the derived part of the window, where it is defined.
int run_norm_verify_window(const Group& g, const ExperimentConfig& cfg) {
  NormFn fn;
  // Every pair is checked, so the window stays small.
  const std::size_t cap = std::min<std::size_t>(cfg.guard, 100'000);
  std::vector<Element> window = window_elements(g, static_cast<std::int64_t>(cfg.window), cap);
  if (cfg.norm == "trivial") {
    fn = trivial_norm;
  } else if (cfg.norm == "support" && g.family() == Family::Z2Infinity) {
    fn = support_norm;
  } else if (cfg.norm == "cl" && g.family() == Family::AffZ) {
    fn = affz_commutator_length;
    std::erase_if(window, [](const Element& e) {
      const auto& z = e.as<AffZPayload>();
      return z.t || z.a % 2 != 0;
    });
  } else {
    throw InvalidInput("norm '" + cfg.norm + "' has no windowed check on " + g.name());
  }
  const auto r = verify_norm_axioms_window(fn, window, cfg.threads);
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"axiom", v.axiom}, {"witness", literals(v.witness)}, {"detail", v.detail}});
  }
  emit(cfg, dump_json({{"group", g.name()},
                       {"norm", cfg.norm},
                       {"window", cfg.window},
                       {"window_size", window.size()},
                       {"passed", r.passed},
                       {"pseudo", r.pseudo},
                       {"checked_pairs", r.checked_pairs},
                       {"violation_count", r.violation_count},
                       {"violations", violations}}));
  return r.passed ? kPass : kCheckFailure;
}

int run_norm_verify(const ExperimentConfig& cfg) {
  const Group g = require_group(cfg);
  if (!g.finite()) return run_norm_verify_window(g, cfg);
  const NormTable t = norm_table(g, cfg);
  const auto r = verify_norm_axioms(t, cfg.threads);
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"axiom", v.axiom}, {"witness", literals(v.witness)}, {"detail", v.detail}});
  }
  emit(cfg, dump_json({{"group", g.name()},
                       {"norm", t.meta().name},
                       {"passed", r.passed},
                       {"pseudo", r.pseudo},
                       {"checked_pairs", r.checked_pairs},
                       {"violation_count", r.violation_count},
                       {"violations", violations}}));
  return r.passed ? kPass : kCheckFailure;
}

json displacement_skeleton(const Group& g, const SubgroupSpec& h) {
  return {{"group", g.name()},
          {"H", literals(h.generators)},
          {"p", nullptr},
          {"witnesses", json::array()},
          {"energies", json::array()},
          {"inequality_checks", json::array()}};
}

int run_packing(const ExperimentConfig& cfg) {
  const Group g = require_group(cfg);
  const auto h = require_subgroup(g, cfg);
  const auto r = packing_number(g, h, cfg.m, cfg.threads, cfg.guard);
  json j = displacement_skeleton(g, h);
  j["p"] = r.p ? json(*r.p) : json(nullptr);
  j["abelian_degenerate"] = r.abelian_degenerate;
  j["exhausted"] = r.exhausted;
  j["conjugates"] = r.conjugates;
  j["m_cap"] = cfg.m;
  j["witnesses"] = literals(r.certificate.witnesses);
  emit(cfg, dump_json(j));
  return kPass;
}

int run_energy(const ExperimentConfig& cfg) {
  const Group g = require_group(cfg);
  const auto h = require_subgroup(g, cfg);
  const NamedNorm nu = make_norm(g, cfg);
  json j = displacement_skeleton(g, h);
  j["norm"] = nu.name;
  for (std::size_t m = 1; m <= cfg.m; ++m) {
    auto e = displacement_energy(g, h, m, nu.fn, cfg.threads, cfg.guard);
    j["energies"].push_back({{"m", m},
                             {"value", e.e_m ? json(to_string(*e.e_m)) : json("infinite")},
                             {"minimizer", e.minimizer ? json(to_literal(*e.minimizer)) : json(nullptr)}});
  }
  const auto r = verify_master_inequalities(g, h, cfg.m, nu.fn, cfg.threads, cfg.guard);
  for (const auto& c : r.checks) {
    j["inequality_checks"].push_back({{"x", to_literal(c.x)},
                                      {"cl", c.cl},
                                      {"bound", c.bound},
                                      {"lhs", to_string(c.lhs)},
                                      {"rhs", to_string(c.rhs)},
                                      {"ok", c.ok}});
  }
  j["chain_checks"] = r.chain_checks;
  j["seven_factor_checks"] = r.seven_factor_checks;
  j["passed"] = r.passed;
  if (r.chain_failure) j["chain_failure"] = {to_literal(r.chain_failure->first), to_literal(r.chain_failure->second)};
  emit(cfg, dump_json(j));
  return r.passed ? kPass : kCheckFailure;
}

int run_fcomm(const ExperimentConfig& cfg) {
  const Group base = cfg.group.empty() ? Group::symmetric(3) : Group::parse(cfg.group);
  std::vector<ElementPair> pairs;
  if (!cfg.k.empty()) {
    auto es = parse_element_list(base, cfg.k);
    if (es.size() % 2) throw InvalidInput("--k needs f_1, g_1, f_2, g_2, ...");
    for (std::size_t i = 0; i < es.size(); i += 2) pairs.emplace_back(es[i], es[i + 1]);
  } else {
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.m; ++i) {
      Element f = random_element(base, rng);
      Element g = random_element(base, rng);
      pairs.emplace_back(std::move(f), std::move(g));
    }
  }
  const int cycle = static_cast<int>(std::max<std::size_t>(pairs.size() + 1, 3));
  const auto env = wreath_environment(base, cycle);
  const auto d = seven_fcommutators(env, pairs);
  json factors = json::array();
  for (const auto& c : d.factors) {
    factors.push_back({{"f", to_literal(c.f)}, {"h", to_literal(c.h)}, {"value", to_literal(value(env, c))}});
  }
  json audit = json::array();
  for (const auto& [name, e] : d.audit) audit.push_back({name, to_literal(e)});
  json jp = json::array();
  for (const auto& [f, g] : pairs) jp.push_back({to_literal(f), to_literal(g)});
  const auto [w1, w2] = two_commutator_witness(env, pairs);
  const auto bound = fcomm_norm_bound(env, d, wreath_support_norm);
  emit(cfg, dump_json({{"ambient", env.ambient.name()},
                       {"F", to_literal(env.F)},
                       {"pairs", jp},
                       {"target", to_literal(d.target)},
                       {"factors", factors},
                       {"verified", d.verified},
                       {"factor_count", d.factors.size()},
                       {"audit", audit},
                       {"two_commutator_witness",
                        {{to_literal(w1.first), to_literal(w1.second)}, {to_literal(w2.first), to_literal(w2.second)}}},
                       {"norm_bound",
                        {{"norm", "wreath-support"},
                         {"passed", bound.passed},
                         {"nu_F", to_string(bound.nu_F)},
                         {"nu_target", to_string(bound.nu_target)},
                         {"max_factor", to_string(bound.max_factor)}}}}));
  return d.verified && bound.passed ? kPass : kCheckFailure;
}

int run_qm(const ExperimentConfig& cfg, const std::string& action) {
  const Group g = cfg.group.empty() ? Group::free_group(2) : Group::parse(cfg.group);
  if (cfg.pattern.empty()) throw InvalidInput("--pattern is required");
  const auto q = counting_qm(g, cfg.pattern);
  const std::optional<Rational> declared =
      cfg.defect_upper ? std::optional<Rational>(parse_rational(*cfg.defect_upper)) : std::nullopt;
  json j = {{"group", g.name()}, {"quasimorphism", q.name}, {"kind", to_string(q.kind)}, {"convention", q.convention}};
  if (action == "defect") {
    const auto d = defect(q, EstimateMode::Sampled, cfg.budget, cfg.seed, cfg.threads);
    j["value"] = to_string(d.value);
    j["certified"] = to_string(d.certified);
    j["seed"] = cfg.seed;
    j["budget"] = cfg.budget;
    j["word_size"] = d.sample_meta.word_size;
    if (d.witness) j["witness"] = {to_literal(d.witness->first), to_literal(d.witness->second)};
    j["pattern_bound"] = to_string(counting_defect_bound(parse_element(g, cfg.pattern).as<ReducedWord>().letters));
  } else {
    if (cfg.element.empty()) throw InvalidInput("--element is required");
    const Element w = parse_element(g, cfg.element);
    j["element"] = to_literal(w);
    j["n"] = cfg.n;
    j["certified"] = declared ? "declared_upper_bound" : "heuristic";
    j["defect_upper"] = declared ? json(to_string(*declared)) : json(nullptr);
    if (action == "homogenize") {
      const auto h = homogenize(q, w, static_cast<std::int64_t>(cfg.n), declared);
      j["center"] = to_string(h.center);
      j["radius"] = declared ? json(to_string(h.radius)) : json(nullptr);
    } else {
      const auto b = scl_bounds(w, q, declared, static_cast<std::int64_t>(cfg.n));
      j["lower"] = b.lower ? json(to_string(*b.lower)) : json(nullptr);
      j["lower_provenance"] = b.lower_provenance;
      j["upper"] = nullptr;
    }
  }
  emit(cfg, dump_json(j));
  return kPass;
}

int run_verify(const ExperimentConfig& cfg, const std::string& suite) {
  const auto r = run_suite(suite, cfg);
  emit(cfg, dump_json(suite_report_json(r, cfg)));
  const json timing = suite_timing_json(r);
  if (!cfg.out.empty()) {
    write_text_file(cfg.out + ".timing.json", dump_json(timing));
  } else {
    std::cerr << timing.dump() << "\n";
  }
  return r.passed ? kPass : kCheckFailure;
}

int run_cache(const std::string& action) {
  TableCache cache(TableCache::default_dir());
  if (action == "path") {
    std::cout << cache.dir().string() << "\n";
  } else if (action == "list") {
    for (const auto& p : cache.entries()) std::cout << p.filename().string() << "\n";
  } else {
    std::cout << "removed " << cache.clear() << " entries\n";
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugation-invariant norms on groups: exact tables, checks and verification suites"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"qk", "word norm of the conjugacy closure of K"},
           {"cl", "commutator length on the derived subgroup"},
           {"cld", "commutator length diameter"},
           {"norm-verify", "exhaustive check of the norm axioms"},
           {"packing", "algebraic packing number of H"},
           {"energy", "displacement energies and their inequalities"},
           {"fcomm", "decompose a product of commutators into F-commutators"},
           {"qm", "counting quasi-morphisms: defect, homogenize, scl-bounds"},
           {"verify", "run a verification suite"}}) {
    subs[name] = app.add_subcommand(name, help);
    add_common(subs[name], o);
  }
  subs["qk"]->add_flag("--no-cache", o.no_cache, "skip the on-disk cache");
  subs["cl"]->add_flag("--no-cache", o.no_cache, "skip the on-disk cache");
  subs["qm"]->add_option("action", o.qm_action)->required()->check(CLI::IsMember({"defect", "homogenize", "scl-bounds"}));
  std::vector<std::string> names = suite_names();
  subs["verify"]->add_option("--suite", o.suite, "suite name")->required()->check(CLI::IsMember(names));
  auto* cache = app.add_subcommand("cache", "inspect or clear the table cache");
  cache->add_option("action", o.cache_action)->required()->check(CLI::IsMember({"path", "list", "clear"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    merge_config_file(o);
    const auto& cfg = o.cfg;
    parse_format(cfg.format);
    if (cache->parsed()) return run_cache(o.cache_action);
    if (subs["qk"]->parsed()) return run_table(cfg, "qk", !o.no_cache);
    if (subs["cl"]->parsed()) return run_table(cfg, "cl", !o.no_cache);
    if (subs["cld"]->parsed()) return run_cld(cfg);
    if (subs["norm-verify"]->parsed()) return run_norm_verify(cfg);
    if (subs["packing"]->parsed()) return run_packing(cfg);
    if (subs["energy"]->parsed()) return run_energy(cfg);
    if (subs["fcomm"]->parsed()) return run_fcomm(cfg);
    if (subs["qm"]->parsed()) return run_qm(cfg, o.qm_action);
    if (subs["verify"]->parsed()) return run_verify(cfg, o.suite);
  } catch (const GuardExceeded& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DescriptorMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InfiniteGroup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kUsage;
}
