#include "cinorm/fcommutator.hpp"

#include "cinorm/enumerate.hpp"
#include "cinorm/error.hpp"

namespace cinorm {

FCommEnvironment make_environment(Group ambient, Group base, Element F, std::function<Element(const Element&)> embed,
                                  std::size_t capacity) {
  const auto gens = generators(base);
  return make_environment(std::move(ambient), std::move(base), gens, std::move(F), std::move(embed), capacity);
}

FCommEnvironment make_environment(Group ambient, Group base, const std::vector<Element>& base_generators, Element F,
                                  std::function<Element(const Element&)> embed, std::size_t capacity) {
  if (!(F.group() == ambient)) throw DescriptorMismatch("F is not in " + ambient.name());
  FCommEnvironment env{std::move(ambient), std::move(base), std::move(F), std::move(embed), capacity};
  std::vector<std::vector<Element>> copies;
  for (std::size_t i = 0; i <= capacity; ++i) {
    std::vector<Element> gens;
    for (const auto& s : base_generators) {
      Element e = env.embed(s);
      if (!(e.group() == env.ambient)) throw DescriptorMismatch("embedding lands outside " + env.ambient.name());
      gens.push_back(conj_by_power(env, e, static_cast<std::int64_t>(i)));
    }
    copies.push_back(std::move(gens));
  }
  for (std::size_t i = 0; i < copies.size(); ++i) {
    for (std::size_t j = i + 1; j < copies.size(); ++j) {
      for (const auto& a : copies[i]) {
        for (const auto& b : copies[j]) {
          if (!commutator_of(a, b).is_identity()) {
            throw InvalidInput("conjugates by F^" + std::to_string(i) + " and F^" + std::to_string(j) +
                               " do not commute: " + to_literal(a) + ", " + to_literal(b));
          }
        }
      }
    }
  }
  return env;
}

FCommEnvironment wreath_environment(const Group& base, int cycle) {
  const Group ambient = Group::wreath_zn(base, cycle);
  return make_environment(
      ambient, base, wreath_shift(ambient, 1), [ambient](const Element& x) { return wreath_single(ambient, 0, x); },
      static_cast<std::size_t>(cycle - 1));
}

FCommEnvironment wreath_z_environment(const Group& base, std::size_t capacity) {
  const Group ambient = Group::wreath_z(base);
  return make_environment(
      ambient, base, wreath_shift(ambient, 1), [ambient](const Element& x) { return wreath_single(ambient, 0, x); },
      capacity);
}

Element conj_by_power(const FCommEnvironment& env, const Element& x, std::int64_t i) {
  return conjugate_of(x, power(env.F, i));
}

Element value(const FCommEnvironment& env, const FCommutator& c) {
  return conjugate_of(commutator_of(env.F, c.h), c.f);
}

FCommutator inverse(const FCommutator& c) { return {compose(c.f, c.h), invert(c.h)}; }

FCommutator conjugated(const FCommutator& c, const Element& by) { return {compose(by, c.f), c.h}; }

bool verify(const FCommEnvironment& env, FCommutatorDecomposition& d) {
  Element prod = identity(env.ambient);
  for (const auto& c : d.factors) prod = compose(prod, value(env, c));
  d.verified = prod == d.target;
  return d.verified;
}

namespace {

void require_capacity(const FCommEnvironment& env, std::size_t needed) {
  if (needed > env.capacity) {
    throw InvalidInput("needs " + std::to_string(needed + 1) + " commuting conjugates, environment has " +
                       std::to_string(env.capacity + 1));
  }
}

/// prod_{i} Conj_{F^{offset+i}}(embed(gs[i])).
Element spread(const FCommEnvironment& env, const std::vector<Element>& gs, std::int64_t offset) {
  Element out = identity(env.ambient);
  for (std::size_t i = 0; i < gs.size(); ++i) {
    out = compose(out, conj_by_power(env, env.embed(gs[i]), offset + static_cast<std::int64_t>(i)));
  }
  return out;
}

}  // namespace

std::pair<RearrangeSolution, FCommutator> solve_rearrange_id(const FCommEnvironment& env,
                                                             const std::vector<Element>& gs) {
  if (gs.empty()) throw InvalidInput("need at least g_0");
  const std::size_t m = gs.size() - 1;
  require_capacity(env, m);
  RearrangeSolution sol{{}, identity(env.ambient)};
  Element running = identity(env.base);
  for (std::size_t k = 0; k <= m; ++k) {
    running = compose(running, gs[k]);
    if (k < m) sol.phis.push_back(running);
  }
  if (!running.is_identity()) throw InvalidInput("g_0 ... g_m is " + to_literal(running) + ", not the identity");
  sol.assembled = spread(env, sol.phis, 0);
  FCommutator c{identity(env.ambient), invert(sol.assembled)};
  if (!(value(env, c) == spread(env, gs, 0))) throw Error("rearrangement identity failed");
  return {std::move(sol), std::move(c)};
}

std::pair<FCommutator, Element> rearrange(const FCommEnvironment& env, const std::vector<Element>& gs) {
  require_capacity(env, gs.size());
  Element g = identity(env.base);
  for (const auto& x : gs) g = compose(x, g);
  std::vector<Element> primed{g};
  for (const auto& x : gs) primed.push_back(invert(x));
  FCommutator c = solve_rearrange_id(env, primed).second;
  Element residual = spread(env, gs, 1);
  if (!(env.embed(g) == compose(value(env, c), residual))) throw Error("rearrange identity failed");
  return {std::move(c), std::move(residual)};
}

FCommutatorDecomposition two_fcommutators(const FCommEnvironment& env, const Element& f, const Element& g) {
  require_capacity(env, 2);
  const Element fi = invert(f), gi = invert(g);
  // (fg) Conj_F(g^-1) Conj_{F^2}(f^-1) times (f^-1 g^-1) Conj_F(g) Conj_{F^2}(f).
  FCommutator first = solve_rearrange_id(env, {compose(f, g), gi, fi}).second;
  FCommutator second = solve_rearrange_id(env, {compose(fi, gi), g, f}).second;
  FCommutatorDecomposition d{env.embed(commutator_of(f, g)), {first, second}, false, {}};
  if (!verify(env, d)) throw Error("two-commutator decomposition failed");
  return d;
}

Element commutator_product_target(const FCommEnvironment& env, const std::vector<ElementPair>& pairs) {
  Element x = identity(env.base);
  for (const auto& [f, g] : pairs) x = compose(commutator_of(f, g), x);
  return env.embed(x);
}

namespace {

struct SevenParts {
  FCommutator c0;
  Element phi, psi, theta;
  Element f_hat, g_hat, x, y;
  FCommutator x_comm, y_comm;
};

SevenParts seven_parts(const FCommEnvironment& env, const std::vector<ElementPair>& pairs) {
  std::vector<Element> comms, fs, gs;
  for (const auto& [f, g] : pairs) {
    comms.push_back(commutator_of(f, g));
    fs.push_back(f);
    gs.push_back(g);
  }
  SevenParts p{rearrange(env, comms).first, spread(env, fs, 1), spread(env, gs, 1), identity(env.ambient),
               identity(env.ambient), identity(env.ambient), identity(env.ambient), identity(env.ambient),
               FCommutator{identity(env.ambient), identity(env.ambient)},
               FCommutator{identity(env.ambient), identity(env.ambient)}};
  p.theta = commutator_of(p.phi, p.psi);
  // embed(f) = value(c_f) phi, so phi = embed(f) x with x = Conj_{embed(f)^-1}(value(c_f)^-1).
  auto [c_f, phi_check] = rearrange(env, fs);
  auto [c_g, psi_check] = rearrange(env, gs);
  if (!(phi_check == p.phi) || !(psi_check == p.psi)) throw Error("component products disagree");
  Element f = identity(env.base), g = identity(env.base);
  for (const auto& x : fs) f = compose(x, f);
  for (const auto& x : gs) g = compose(x, g);
  p.f_hat = env.embed(f);
  p.g_hat = env.embed(g);
  p.x_comm = conjugated(inverse(c_f), invert(p.f_hat));
  p.y_comm = conjugated(inverse(c_g), invert(p.g_hat));
  p.x = value(env, p.x_comm);
  p.y = value(env, p.y_comm);
  if (!(compose(p.f_hat, p.x) == p.phi) || !(compose(p.g_hat, p.y) == p.psi)) throw Error("phi = f x failed");
  return p;
}

}  // namespace

FCommutatorDecomposition seven_fcommutators(const FCommEnvironment& env, const std::vector<ElementPair>& pairs) {
  FCommutatorDecomposition d{commutator_product_target(env, pairs), {}, false, {}};
  if (pairs.empty()) {
    d.verified = true;
    return d;
  }
  require_capacity(env, std::max<std::size_t>(pairs.size(), 2));
  SevenParts p = seven_parts(env, pairs);
  // theta = [f, g] Conj_{g f g^-1}(x) Conj_{g f}(y) Conj_{g f}(x^-1) Conj_g(y^-1)
  Element f = identity(env.base), g = identity(env.base);
  for (const auto& pr : pairs) {
    f = compose(pr.first, f);
    g = compose(pr.second, g);
  }
  const Element gf = compose(p.g_hat, p.f_hat);
  d.factors.push_back(p.c0);
  for (const auto& c : two_fcommutators(env, f, g).factors) d.factors.push_back(c);
  d.factors.push_back(conjugated(p.x_comm, compose(gf, invert(p.g_hat))));
  d.factors.push_back(conjugated(p.y_comm, gf));
  d.factors.push_back(conjugated(inverse(p.x_comm), gf));
  d.factors.push_back(conjugated(inverse(p.y_comm), p.g_hat));
  d.audit = {{"phi", p.phi}, {"psi", p.psi}, {"theta", p.theta}, {"f", p.f_hat},
             {"g", p.g_hat}, {"x", p.x},     {"y", p.y},         {"c0", value(env, p.c0)}};
  if (!(compose(value(env, p.c0), p.theta) == d.target)) throw Error("target != c0 theta");
  if (!verify(env, d)) throw Error("seven-factor decomposition failed");
  return d;
}

std::pair<ElementPair, ElementPair> two_commutator_witness(const FCommEnvironment& env,
                                                           const std::vector<ElementPair>& pairs) {
  const Element one = identity(env.ambient);
  if (pairs.empty()) return {{one, one}, {one, one}};
  require_capacity(env, pairs.size());
  std::vector<Element> comms, fs, gs;
  for (const auto& [f, g] : pairs) {
    comms.push_back(commutator_of(f, g));
    fs.push_back(f);
    gs.push_back(g);
  }
  FCommutator c0 = rearrange(env, comms).first;
  ElementPair first{env.F, c0.h};
  ElementPair second{spread(env, fs, 1), spread(env, gs, 1)};
  if (!(compose(commutator_of(first.first, first.second), commutator_of(second.first, second.second)) ==
        commutator_product_target(env, pairs))) {
    throw Error("two-commutator witness failed");
  }
  return {first, second};
}

FCommNormReport fcomm_norm_bound(const FCommEnvironment& env, const FCommutatorDecomposition& d, const NormFn& nu) {
  FCommNormReport r;
  r.nu_F = nu(env.F);
  r.nu_target = nu(d.target);
  r.max_factor = 0;
  r.factor_count = d.factors.size();
  for (const auto& c : d.factors) {
    const Rational v = nu(value(env, c));
    r.max_factor = std::max(r.max_factor, v);
    if (v > 2 * r.nu_F) r.passed = false;
  }
  if (r.nu_target > 14 * r.nu_F) r.passed = false;
  return r;
}

}  // namespace cinorm
