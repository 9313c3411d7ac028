// Acceptance run: one PASS/FAIL line per criterion, time limits pinned here.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "cinorm/io.hpp"
#include "cinorm/suites.hpp"

using namespace cinorm;

namespace {

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  // suite name and the checks within it that must pass
  std::vector<std::pair<std::string, std::vector<std::string>>> parts;
  bool per_check_limit = false;
};

const std::vector<Criterion> kCriteria = {
    {1, "elementary commutator identity in SL(3,Z) and SL(4,Z), |p| <= 1000", 5.0,
     {{"elementary-sl", {"sl3-e13", "sl4-all-triples", "sl3-huge-exponent"}}}},
    {2, "100 targets split into <= 7 F-commutators, two-commutator witness", 10.0,
     {{"seven-fcomm", {"decompositions", "two-commutator-witness", "norm-bound"}}}},
    {3, "1000 rearrangement tuples, identity and partial products", 10.0,
     {{"rearrange", {"fcommutator-identity", "partial-products"}}}},
    {4, "S9, H = Sym{1,2,3}: 4*e1 bound and commutator chain", 60.0,
     {{"displacement", {"e1-exhaustive", "four-e1-bound", "chain"}}}},
    {5, "packing numbers p(S6) = 2 and p(S9) = 3, exhausted", 120.0, {{"packing", {"s6-sym3", "s9-sym3"}}}, true},
    {6, "q_K on A5: axioms, closure oracle, cl identically 1", 5.0,
     {{"norm-oracle", {"qk-a5-axioms", "qk-a5-closure-oracle", "cl-a5"}}}},
    {7, "Aff(Z) conjugacy, Bar multiplication law and splitting", 5.0,
     {{"aff-z", {"t-conjugacy", "t-z-commutators"}}, {"bar", {"multiplication-law", "splitting"}}}},
    {8, "Bar(F2) defect decomposition on 10^4 samples", 30.0, {{"bar", {"defect-decomposition"}}}},
    {9, "additivity of combined commutator witnesses in F2^3, 10^3 cases", 10.0,
     {{"additivity", {"combined-witness"}}}},
    {10, "stabilization antitone, torsion elements stably zero", 10.0,
     {{"stabilization", {"antitone", "torsion-zero"}}}},
};

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.seed = 42;
  return c;
}

bool line(int id, bool ok, const std::string& title, const std::string& note) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), note.c_str());
  std::fflush(stdout);
  return ok;
}

bool run_criterion(const Criterion& cr) {
  const ExperimentConfig cfg = base_config();
  bool ok = true;
  std::string note;
  double total = 0;
  for (const auto& [suite, wanted] : cr.parts) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteReport rep;
    try {
      rep = run_suite(suite, cfg);
    } catch (const std::exception& e) {
      return line(cr.id, false, cr.title, suite + " threw: " + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += dt;
    for (const auto& name : wanted) {
      const auto it = std::find_if(rep.checks.begin(), rep.checks.end(), [&](const auto& c) { return c.name == name; });
      if (it == rep.checks.end()) {
        ok = false;
        note += suite + "/" + name + " missing; ";
        continue;
      }
      if (!it->passed) {
        ok = false;
        note += suite + "/" + name + " failed, witness " + it->witness + "; ";
      }
      if (cr.per_check_limit && it->seconds >= cr.limit_seconds) {
        ok = false;
        note += suite + "/" + name + " over time; ";
      }
    }
  }
  if (!cr.per_check_limit && total >= cr.limit_seconds) {
    ok = false;
    note += "over time; ";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.2fs, limit %.0fs", total, cr.limit_seconds);
  return line(cr.id, ok, cr.title, note + buf);
}

bool run_determinism() {
  const unsigned many = std::max(4u, std::thread::hardware_concurrency());
  std::string bad;
  for (const auto& suite : suite_names()) {
    ExperimentConfig one = base_config();
    ExperimentConfig n = one;
    n.threads = many;
    const std::string a = dump_json(suite_report_json(run_suite(suite, one), one));
    const std::string b = dump_json(suite_report_json(run_suite(suite, n), n));
    if (a != b) bad += suite + " ";
  }
  return line(11, bad.empty(), "byte-identical reports across 1 and " + std::to_string(many) + " threads",
              bad.empty() ? std::to_string(suite_names().size()) + " suites" : "differs: " + bad);
}

}  // namespace

int main() {
  bool all = true;
  for (const auto& cr : kCriteria) all = run_criterion(cr) && all;
  all = run_determinism() && all;
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
