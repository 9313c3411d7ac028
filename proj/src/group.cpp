#include "cinorm/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "cinorm/error.hpp"

namespace cinorm {

namespace detail {

struct GroupNode {
  Family family;
  int degree = 0;
  int modulus = 0;
  std::vector<Group> children;
  std::string name;
  std::optional<Integer> order;
  bool abelian = false;
};

}  // namespace detail

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

Integer factorial(int n) {
  Integer r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::string child_name(const Group& g) {
  return g.family() == Family::Product ? "(" + g.name() + ")" : g.name();
}

}  // namespace

// ---------------------------------------------------------------- descriptors

Group Group::symmetric(int n) {
  if (n < 1 || n > 65535) throw InvalidInput("sn: degree must be in [1, 65535]");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Symmetric;
  node->degree = n;
  node->name = "sn:" + std::to_string(n);
  node->order = factorial(n);
  node->abelian = n <= 2;
  return Group(std::move(node));
}

Group Group::alternating(int n) {
  if (n < 1 || n > 65535) throw InvalidInput("an: degree must be in [1, 65535]");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Alternating;
  node->degree = n;
  node->name = "an:" + std::to_string(n);
  node->order = n == 1 ? Integer(1) : Integer(factorial(n) / 2);
  node->abelian = n <= 3;
  return Group(std::move(node));
}

Group Group::free_group(int rank) {
  if (rank < 1 || rank > 26) throw InvalidInput("free: rank must be in [1, 26]");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Free;
  node->degree = rank;
  node->name = "free:" + std::to_string(rank);
  node->abelian = rank == 1;
  return Group(std::move(node));
}

Group Group::wreath_z(const Group& base) {
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::WreathZ;
  node->children = {base};
  node->name = "wreath:" + child_name(base) + ":z";
  node->abelian = base.order() && *base.order() == 1;
  return Group(std::move(node));
}

Group Group::wreath_zn(const Group& base, int cycle) {
  if (cycle < 2) throw InvalidInput("wreath zn: N must be >= 2");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::WreathZn;
  node->degree = cycle;
  node->children = {base};
  node->name = "wreath:" + child_name(base) + ":zn:" + std::to_string(cycle);
  if (auto o = base.order()) {
    Integer total;
    mpz_pow_ui(total.get_mpz_t(), o->get_mpz_t(), static_cast<unsigned long>(cycle));
    node->order = total * cycle;
    node->abelian = *o == 1;
  }
  return Group(std::move(node));
}

Group Group::aff_z() {
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::AffZ;
  node->name = "aff-z";
  return Group(std::move(node));
}

Group Group::bar(const Group& inner) {
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Bar;
  node->children = {inner};
  node->name = "bar:" + child_name(inner);
  if (auto o = inner.order()) {
    node->order = 2 * *o * *o;
    node->abelian = *o == 1;
  }
  return Group(std::move(node));
}

Group Group::z2_infinity() {
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Z2Infinity;
  node->name = "z2inf";
  node->abelian = true;
  return Group(std::move(node));
}

Group Group::slz(int n) {
  if (n < 2) throw InvalidInput("slz: n must be >= 2");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::SLZ;
  node->degree = n;
  node->name = "slz:" + std::to_string(n);
  return Group(std::move(node));
}

Group Group::slmod(int n, int p) {
  if (n < 2) throw InvalidInput("slp: n must be >= 2");
  if (!is_prime(p) || p > 46337) throw InvalidInput("slp: p must be a prime below 46337");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::SLMod;
  node->degree = n;
  node->modulus = p;
  node->name = "slp:" + std::to_string(n) + ":" + std::to_string(p);
  Integer order = 1;
  Integer pk = p;
  for (int k = 2; k <= n; ++k) {
    pk *= p;
    order *= pk - 1;
  }
  Integer unipotent;
  mpz_ui_pow_ui(unipotent.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(n * (n - 1) / 2));
  node->order = order * unipotent;
  return Group(std::move(node));
}

Group Group::product(std::vector<Group> factors) {
  if (factors.empty()) throw InvalidInput("product: needs at least one factor");
  auto node = std::make_shared<detail::GroupNode>();
  node->family = Family::Product;
  node->name = "product:";
  Integer order = 1;
  bool finite = true;
  bool abelian = true;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) node->name += ",";
    node->name += child_name(factors[i]);
    if (auto o = factors[i].order()) {
      order *= *o;
    } else {
      finite = false;
    }
    abelian = abelian && factors[i].declared_abelian();
  }
  if (finite) node->order = order;
  node->abelian = abelian;
  node->children = std::move(factors);
  return Group(std::move(node));
}

Family Group::family() const { return node_->family; }
int Group::degree() const { return node_->degree; }
int Group::modulus() const { return node_->modulus; }
const Group& Group::base() const { return node_->children.at(0); }
const std::vector<Group>& Group::factors() const { return node_->children; }
const std::string& Group::name() const { return node_->name; }
bool Group::finite() const { return node_->order.has_value(); }
std::optional<Integer> Group::order() const { return node_->order; }
bool Group::declared_abelian() const { return node_->abelian; }

bool operator==(const Group& a, const Group& b) {
  return a.node_ == b.node_ || a.node_->name == b.node_->name;
}

namespace {

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : text_(text) { tokenize(); }

  Group parse() {
    Group g = parse_one();
    if (pos_ != tokens_.size()) fail("trailing input");
    return g;
  }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == ':' || c == ',' || c == '(' || c == ')') {
        tokens_.emplace_back(1, c);
        ++i;
      } else {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '-')) ++j;
        if (j == i) fail(std::string("unexpected character '") + c + "'");
        tokens_.emplace_back(text_.substr(i, j - i));
        i = j;
      }
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidInput("bad group descriptor '" + std::string(text_) + "': " + why);
  }

  const std::string& peek() const {
    static const std::string end;
    return pos_ < tokens_.size() ? tokens_[pos_] : end;
  }
  std::string next() {
    if (pos_ >= tokens_.size()) fail("unexpected end");
    return tokens_[pos_++];
  }
  void expect(const std::string& tok) {
    if (next() != tok) fail("expected '" + tok + "'");
  }
  int integer() {
    std::string tok = next();
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("expected integer, got '" + tok + "'");
    return value;
  }

  Group parse_one() {
    if (peek() == "(") {
      next();
      Group g = parse_one();
      expect(")");
      return g;
    }
    std::string head = next();
    if (head == "sn") {
      expect(":");
      return Group::symmetric(integer());
    }
    if (head == "an") {
      expect(":");
      return Group::alternating(integer());
    }
    if (head == "free") {
      expect(":");
      return Group::free_group(integer());
    }
    if (head == "wreath") {
      expect(":");
      Group base = parse_one();
      expect(":");
      std::string kind = next();
      if (kind == "z") return Group::wreath_z(base);
      if (kind == "zn") {
        expect(":");
        return Group::wreath_zn(base, integer());
      }
      fail("wreath needs 'z' or 'zn'");
    }
    if (head == "aff-z") return Group::aff_z();
    if (head == "bar") {
      expect(":");
      return Group::bar(parse_one());
    }
    if (head == "z2inf") return Group::z2_infinity();
    if (head == "slz") {
      expect(":");
      return Group::slz(integer());
    }
    if (head == "slp") {
      expect(":");
      int n = integer();
      expect(":");
      return Group::slmod(n, integer());
    }
    if (head == "product") {
      expect(":");
      std::vector<Group> factors{parse_one()};
      while (peek() == ",") {
        next();
        factors.push_back(parse_one());
      }
      return Group::product(std::move(factors));
    }
    fail("unknown family '" + head + "'");
  }

  std::string_view text_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Group Group::parse(std::string_view text) { return DescriptorParser(text).parse(); }

// ---------------------------------------------------------------- payload helpers

namespace {

std::size_t payload_index_for(Family f) {
  switch (f) {
    case Family::Symmetric:
    case Family::Alternating:
      return 0;
    case Family::Free:
      return 1;
    case Family::WreathZ:
    case Family::WreathZn:
      return 2;
    case Family::AffZ:
      return 3;
    case Family::Bar:
      return 4;
    case Family::Z2Infinity:
      return 5;
    case Family::SLZ:
      return 6;
    case Family::SLMod:
      return 7;
    case Family::Product:
      return 8;
  }
  return 0;
}

void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::int64_t mod_floor(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InvalidInput("integer overflow in group arithmetic");
  return r;
}

int permutation_parity(const std::vector<std::uint16_t>& image) {
  std::vector<bool> seen(image.size(), false);
  int transpositions = 0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = image[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += static_cast<int>(len) - 1;
  }
  return transpositions % 2;
}

void free_reduce(std::vector<int>& letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  letters = std::move(out);
}

void trim_bits(std::vector<std::uint8_t>& bits) {
  while (!bits.empty() && bits.back() == 0) bits.pop_back();
}

Integer int_det(std::vector<Integer> m, int n) {
  // Bareiss fraction-free elimination.
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k * n + k] == 0) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r) {
        if (m[r * n + k] != 0) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(m[k * n + c], m[swap * n + c]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
      }
    }
    prev = m[k * n + k];
  }
  return sign * m[n * n - 1];
}

std::uint32_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t mod_det(std::vector<std::uint32_t> m, int n, std::uint32_t p) {
  std::uint64_t det = 1;
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    for (int r = k; r < n; ++r) {
      if (m[r * n + k] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != k) {
      for (int c = 0; c < n; ++c) std::swap(m[k * n + c], m[pivot * n + c]);
      det = (p - det) % p;
    }
    det = det * m[k * n + k] % p;
    std::uint64_t inv = mod_pow(m[k * n + k], p - 2, p);
    for (int r = k + 1; r < n; ++r) {
      std::uint64_t factor = m[r * n + k] * inv % p;
      if (factor == 0) continue;
      for (int c = k; c < n; ++c) {
        m[r * n + c] = static_cast<std::uint32_t>((m[r * n + c] + p - factor * m[k * n + c] % p) % p);
      }
    }
  }
  return static_cast<std::uint32_t>(det);
}

void require(bool ok, const Group& g, const std::string& why) {
  if (!ok) throw InvalidInput("invalid element of " + g.name() + ": " + why);
}

void require_in(const Element& e, const Group& g) {
  if (!(e.group() == g)) {
    throw InvalidInput("component from " + e.group().name() + " where " + g.name() + " expected");
  }
}

Payload canonicalize(const Group& g, Payload p) {
  require(p.index() == payload_index_for(g.family()), g, "payload kind does not match family");
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      auto& img = std::get<Permutation>(p).image;
      require(static_cast<int>(img.size()) == g.degree(), g, "image has wrong length");
      std::vector<bool> hit(img.size(), false);
      for (auto v : img) {
        require(v < img.size() && !hit[v], g, "image is not a bijection");
        hit[v] = true;
      }
      if (g.family() == Family::Alternating) require(permutation_parity(img) == 0, g, "odd permutation");
      break;
    }
    case Family::Free: {
      auto& letters = std::get<ReducedWord>(p).letters;
      for (int l : letters) require(l != 0 && std::abs(l) <= g.degree(), g, "letter out of range");
      free_reduce(letters);
      break;
    }
    case Family::WreathZ:
    case Family::WreathZn: {
      auto& w = std::get<WreathPayload>(p);
      require(w.positions.size() == w.values.size(), g, "positions/values size mismatch");
      const bool cyclic = g.family() == Family::WreathZn;
      std::vector<std::pair<std::int64_t, std::size_t>> order;
      for (std::size_t i = 0; i < w.positions.size(); ++i) {
        require_in(w.values[i], g.base());
        std::int64_t pos = cyclic ? mod_floor(w.positions[i], g.degree()) : w.positions[i];
        order.emplace_back(pos, i);
      }
      std::sort(order.begin(), order.end());
      WreathPayload out;
      for (std::size_t i = 0; i < order.size(); ++i) {
        require(i == 0 || order[i].first != order[i - 1].first, g, "duplicate wreath position");
        const Element& v = w.values[order[i].second];
        if (v.is_identity()) continue;
        out.positions.push_back(order[i].first);
        out.values.push_back(v);
      }
      out.shift = cyclic ? mod_floor(w.shift, g.degree()) : w.shift;
      p = std::move(out);
      break;
    }
    case Family::AffZ:
      break;
    case Family::Bar: {
      auto& b = std::get<BarPayload>(p);
      require(b.coords.size() == 2, g, "Bar element needs two coordinates");
      require_in(b.coords[0], g.base());
      require_in(b.coords[1], g.base());
      break;
    }
    case Family::Z2Infinity: {
      auto& bits = std::get<BinaryWord>(p).bits;
      for (auto b : bits) require(b <= 1, g, "bits must be 0 or 1");
      trim_bits(bits);
      break;
    }
    case Family::SLZ: {
      auto& m = std::get<IntMatrix>(p).entries;
      const int n = g.degree();
      require(static_cast<int>(m.size()) == n * n, g, "matrix has wrong size");
      require(int_det(m, n) == 1, g, "determinant is not 1");
      break;
    }
    case Family::SLMod: {
      auto& m = std::get<ModMatrix>(p).entries;
      const int n = g.degree();
      require(static_cast<int>(m.size()) == n * n, g, "matrix has wrong size");
      for (auto& v : m) v %= static_cast<std::uint32_t>(g.modulus());
      require(mod_det(m, n, static_cast<std::uint32_t>(g.modulus())) == 1, g, "determinant is not 1");
      break;
    }
    case Family::Product: {
      auto& parts = std::get<ProductPayload>(p).parts;
      require(parts.size() == g.factors().size(), g, "wrong number of components");
      for (std::size_t i = 0; i < parts.size(); ++i) require_in(parts[i], g.factors()[i]);
      break;
    }
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------- Element

Element::Element(Group group, Payload payload)
    : group_(std::move(group)), payload_(canonicalize(group_, std::move(payload))) {}

Element::Element(Group group, Payload payload, Trusted) : group_(std::move(group)), payload_(std::move(payload)) {}

Element make_trusted(Group group, Payload payload) {
  return Element(std::move(group), std::move(payload), Element::Trusted{});
}

bool Element::is_identity() const {
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Permutation>) {
          for (std::size_t i = 0; i < p.image.size(); ++i) {
            if (p.image[i] != i) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          return p.letters.empty();
        } else if constexpr (std::is_same_v<T, WreathPayload>) {
          return p.positions.empty() && p.shift == 0;
        } else if constexpr (std::is_same_v<T, AffZPayload>) {
          return p.a == 0 && !p.t;
        } else if constexpr (std::is_same_v<T, BarPayload>) {
          return !p.t && p.coords[0].is_identity() && p.coords[1].is_identity();
        } else if constexpr (std::is_same_v<T, BinaryWord>) {
          return p.bits.empty();
        } else if constexpr (std::is_same_v<T, IntMatrix>) {
          const int n = group_.degree();
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              if (p.entries[i * n + j] != (i == j ? 1 : 0)) return false;
            }
          }
          return true;
        } else if constexpr (std::is_same_v<T, ModMatrix>) {
          const int n = group_.degree();
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              if (p.entries[i * n + j] != (i == j ? 1u : 0u)) return false;
            }
          }
          return true;
        } else {
          return std::all_of(p.parts.begin(), p.parts.end(), [](const Element& e) { return e.is_identity(); });
        }
      },
      payload_);
}

std::size_t Element::hash() const {
  std::size_t seed = payload_.index();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Permutation>) {
          for (auto v : p.image) hash_mix(seed, v);
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          for (auto v : p.letters) hash_mix(seed, static_cast<std::size_t>(v));
        } else if constexpr (std::is_same_v<T, WreathPayload>) {
          for (std::size_t i = 0; i < p.positions.size(); ++i) {
            hash_mix(seed, static_cast<std::size_t>(p.positions[i]));
            hash_mix(seed, p.values[i].hash());
          }
          hash_mix(seed, static_cast<std::size_t>(p.shift));
        } else if constexpr (std::is_same_v<T, AffZPayload>) {
          hash_mix(seed, static_cast<std::size_t>(p.a));
          hash_mix(seed, p.t);
        } else if constexpr (std::is_same_v<T, BarPayload>) {
          hash_mix(seed, p.coords[0].hash());
          hash_mix(seed, p.coords[1].hash());
          hash_mix(seed, p.t);
        } else if constexpr (std::is_same_v<T, BinaryWord>) {
          for (auto v : p.bits) hash_mix(seed, v);
        } else if constexpr (std::is_same_v<T, IntMatrix>) {
          for (const auto& v : p.entries) hash_mix(seed, std::hash<std::string>{}(v.get_str(16)));
        } else if constexpr (std::is_same_v<T, ModMatrix>) {
          for (auto v : p.entries) hash_mix(seed, v);
        } else {
          for (const auto& e : p.parts) hash_mix(seed, e.hash());
        }
      },
      payload_);
  return seed;
}

namespace {

std::strong_ordering cmp_int(const Integer& a, const Integer& b) {
  int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

template <class V>
std::strong_ordering cmp_vec(const V& a, const V& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::strong_ordering cmp_payload(const Payload& x, const Payload& y) {
  if (x.index() != y.index()) return x.index() <=> y.index();
  return std::visit(
      [&](const auto& a) -> std::strong_ordering {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(y);
        if constexpr (std::is_same_v<T, Permutation>) {
          return cmp_vec(a.image, b.image);
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          return cmp_vec(a.letters, b.letters);
        } else if constexpr (std::is_same_v<T, WreathPayload>) {
          if (auto c = a.shift <=> b.shift; c != 0) return c;
          if (auto c = cmp_vec(a.positions, b.positions); c != 0) return c;
          return cmp_vec(a.values, b.values);
        } else if constexpr (std::is_same_v<T, AffZPayload>) {
          if (auto c = a.t <=> b.t; c != 0) return c;
          return a.a <=> b.a;
        } else if constexpr (std::is_same_v<T, BarPayload>) {
          if (auto c = a.t <=> b.t; c != 0) return c;
          return cmp_vec(a.coords, b.coords);
        } else if constexpr (std::is_same_v<T, BinaryWord>) {
          if (auto c = a.bits.size() <=> b.bits.size(); c != 0) return c;
          return cmp_vec(a.bits, b.bits);
        } else if constexpr (std::is_same_v<T, IntMatrix>) {
          for (std::size_t i = 0; i < a.entries.size(); ++i) {
            if (auto c = cmp_int(a.entries[i], b.entries[i]); c != 0) return c;
          }
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, ModMatrix>) {
          return cmp_vec(a.entries, b.entries);
        } else {
          return cmp_vec(a.parts, b.parts);
        }
      },
      x);
}

}  // namespace

bool operator==(const Element& a, const Element& b) { return cmp_payload(a.payload_, b.payload_) == 0; }

std::strong_ordering operator<=>(const Element& a, const Element& b) { return cmp_payload(a.payload_, b.payload_); }

// ---------------------------------------------------------------- arithmetic

namespace {

void same_group(const Element& a, const Element& b) {
  if (!(a.group() == b.group())) {
    throw DescriptorMismatch("operands from " + a.group().name() + " and " + b.group().name());
  }
}

/// Base value at a given coordinate of a wreath payload, identity if absent.
const Element* wreath_lookup(const WreathPayload& w, std::int64_t pos) {
  auto it = std::lower_bound(w.positions.begin(), w.positions.end(), pos);
  if (it == w.positions.end() || *it != pos) return nullptr;
  return &w.values[static_cast<std::size_t>(it - w.positions.begin())];
}

Payload wreath_from_map(std::vector<std::pair<std::int64_t, Element>> entries, std::int64_t shift) {
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  WreathPayload w;
  for (auto& [pos, val] : entries) {
    if (val.is_identity()) continue;
    w.positions.push_back(pos);
    w.values.push_back(std::move(val));
  }
  w.shift = shift;
  return w;
}

Payload compose_payload(const Group& g, const Payload& x, const Payload& y) {
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      const auto& a = std::get<Permutation>(x).image;
      const auto& b = std::get<Permutation>(y).image;
      Permutation out;
      out.image.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out.image[i] = a[b[i]];
      return out;
    }
    case Family::Free: {
      const auto& a = std::get<ReducedWord>(x).letters;
      const auto& b = std::get<ReducedWord>(y).letters;
      std::size_t cancel = 0;
      while (cancel < a.size() && cancel < b.size() && a[a.size() - 1 - cancel] == -b[cancel]) ++cancel;
      ReducedWord out;
      out.letters.reserve(a.size() + b.size() - 2 * cancel);
      out.letters.insert(out.letters.end(), a.begin(), a.end() - static_cast<std::ptrdiff_t>(cancel));
      out.letters.insert(out.letters.end(), b.begin() + static_cast<std::ptrdiff_t>(cancel), b.end());
      return out;
    }
    case Family::WreathZ:
    case Family::WreathZn: {
      // (f, s)(h, u) = (f * (s . h), s + u), (s . h)(i) = h(i - s).
      const auto& a = std::get<WreathPayload>(x);
      const auto& b = std::get<WreathPayload>(y);
      const bool cyclic = g.family() == Family::WreathZn;
      const std::int64_t n = g.degree();
      std::vector<std::pair<std::int64_t, Element>> entries;
      for (std::size_t i = 0; i < a.positions.size(); ++i) {
        std::int64_t src = cyclic ? mod_floor(a.positions[i] - a.shift, n) : checked_add(a.positions[i], -a.shift);
        const Element* hv = wreath_lookup(b, src);
        entries.emplace_back(a.positions[i], hv ? compose(a.values[i], *hv) : a.values[i]);
      }
      for (std::size_t j = 0; j < b.positions.size(); ++j) {
        std::int64_t dst = cyclic ? mod_floor(b.positions[j] + a.shift, n) : checked_add(b.positions[j], a.shift);
        if (!wreath_lookup(a, dst)) entries.emplace_back(dst, b.values[j]);
      }
      std::int64_t shift = cyclic ? mod_floor(a.shift + b.shift, n) : checked_add(a.shift, b.shift);
      return wreath_from_map(std::move(entries), shift);
    }
    case Family::AffZ: {
      // z^a t^e z^b t^f = z^(a + (-1)^e b) t^(e+f).
      const auto& a = std::get<AffZPayload>(x);
      const auto& b = std::get<AffZPayload>(y);
      return AffZPayload{checked_add(a.a, a.t ? -b.a : b.a), a.t != b.t};
    }
    case Family::Bar: {
      // (h1,h2) t (f1,f2) = (h1 f2, h2 f1) t.
      const auto& a = std::get<BarPayload>(x);
      const auto& b = std::get<BarPayload>(y);
      BarPayload out;
      if (a.t) {
        out.coords = {compose(a.coords[0], b.coords[1]), compose(a.coords[1], b.coords[0])};
      } else {
        out.coords = {compose(a.coords[0], b.coords[0]), compose(a.coords[1], b.coords[1])};
      }
      out.t = a.t != b.t;
      return out;
    }
    case Family::Z2Infinity: {
      const auto& a = std::get<BinaryWord>(x).bits;
      const auto& b = std::get<BinaryWord>(y).bits;
      BinaryWord out;
      out.bits.resize(std::max(a.size(), b.size()), 0);
      for (std::size_t i = 0; i < a.size(); ++i) out.bits[i] ^= a[i];
      for (std::size_t i = 0; i < b.size(); ++i) out.bits[i] ^= b[i];
      trim_bits(out.bits);
      return out;
    }
    case Family::SLZ: {
      const auto& a = std::get<IntMatrix>(x).entries;
      const auto& b = std::get<IntMatrix>(y).entries;
      const int n = g.degree();
      IntMatrix out;
      out.entries.assign(static_cast<std::size_t>(n * n), Integer(0));
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          const Integer& aik = a[i * n + k];
          if (aik == 0) continue;
          for (int j = 0; j < n; ++j) out.entries[i * n + j] += aik * b[k * n + j];
        }
      }
      return out;
    }
    case Family::SLMod: {
      const auto& a = std::get<ModMatrix>(x).entries;
      const auto& b = std::get<ModMatrix>(y).entries;
      const int n = g.degree();
      const std::uint64_t p = static_cast<std::uint64_t>(g.modulus());
      ModMatrix out;
      out.entries.assign(static_cast<std::size_t>(n * n), 0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          std::uint64_t acc = 0;
          for (int k = 0; k < n; ++k) acc = (acc + std::uint64_t{a[i * n + k]} * b[k * n + j]) % p;
          out.entries[i * n + j] = static_cast<std::uint32_t>(acc);
        }
      }
      return out;
    }
    case Family::Product: {
      const auto& a = std::get<ProductPayload>(x).parts;
      const auto& b = std::get<ProductPayload>(y).parts;
      ProductPayload out;
      out.parts.reserve(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out.parts.push_back(compose(a[i], b[i]));
      return out;
    }
  }
  return x;
}

Payload invert_payload(const Group& g, const Payload& x) {
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      const auto& a = std::get<Permutation>(x).image;
      Permutation out;
      out.image.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out.image[a[i]] = static_cast<std::uint16_t>(i);
      return out;
    }
    case Family::Free: {
      ReducedWord out{std::get<ReducedWord>(x).letters};
      std::reverse(out.letters.begin(), out.letters.end());
      for (auto& l : out.letters) l = -l;
      return out;
    }
    case Family::WreathZ:
    case Family::WreathZn: {
      // (f, s)^-1 = ((-s) . f^-1, -s): value at i is f(i + s)^-1.
      const auto& a = std::get<WreathPayload>(x);
      const bool cyclic = g.family() == Family::WreathZn;
      const std::int64_t n = g.degree();
      std::vector<std::pair<std::int64_t, Element>> entries;
      for (std::size_t i = 0; i < a.positions.size(); ++i) {
        std::int64_t pos = cyclic ? mod_floor(a.positions[i] - a.shift, n) : checked_add(a.positions[i], -a.shift);
        entries.emplace_back(pos, invert(a.values[i]));
      }
      std::int64_t shift = cyclic ? mod_floor(-a.shift, n) : -a.shift;
      return wreath_from_map(std::move(entries), shift);
    }
    case Family::AffZ: {
      const auto& a = std::get<AffZPayload>(x);
      return a.t ? a : AffZPayload{-a.a, false};
    }
    case Family::Bar: {
      const auto& a = std::get<BarPayload>(x);
      BarPayload out;
      if (a.t) {
        out.coords = {invert(a.coords[1]), invert(a.coords[0])};
      } else {
        out.coords = {invert(a.coords[0]), invert(a.coords[1])};
      }
      out.t = a.t;
      return out;
    }
    case Family::Z2Infinity:
      return x;
    case Family::SLZ: {
      // Gauss-Jordan over Q; the result is integral because det = 1.
      const int n = g.degree();
      const auto& a = std::get<IntMatrix>(x).entries;
      std::vector<Rational> m(static_cast<std::size_t>(n * 2 * n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i * 2 * n + j] = a[i * n + j];
        m[i * 2 * n + n + i] = 1;
      }
      for (int c = 0; c < n; ++c) {
        int pivot = c;
        while (m[pivot * 2 * n + c] == 0) ++pivot;
        if (pivot != c) {
          for (int j = 0; j < 2 * n; ++j) std::swap(m[c * 2 * n + j], m[pivot * 2 * n + j]);
        }
        Rational inv = 1 / m[c * 2 * n + c];
        for (int j = 0; j < 2 * n; ++j) m[c * 2 * n + j] *= inv;
        for (int r = 0; r < n; ++r) {
          if (r == c || m[r * 2 * n + c] == 0) continue;
          Rational f = m[r * 2 * n + c];
          for (int j = 0; j < 2 * n; ++j) m[r * 2 * n + j] -= f * m[c * 2 * n + j];
        }
      }
      IntMatrix out;
      out.entries.resize(static_cast<std::size_t>(n * n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.entries[i * n + j] = m[i * 2 * n + n + j].get_num();
      }
      return out;
    }
    case Family::SLMod: {
      const int n = g.degree();
      const std::uint64_t p = static_cast<std::uint64_t>(g.modulus());
      const auto& a = std::get<ModMatrix>(x).entries;
      std::vector<std::uint64_t> m(static_cast<std::size_t>(n * 2 * n), 0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m[i * 2 * n + j] = a[i * n + j];
        m[i * 2 * n + n + i] = 1;
      }
      for (int c = 0; c < n; ++c) {
        int pivot = c;
        while (m[pivot * 2 * n + c] == 0) ++pivot;
        if (pivot != c) {
          for (int j = 0; j < 2 * n; ++j) std::swap(m[c * 2 * n + j], m[pivot * 2 * n + j]);
        }
        std::uint64_t inv = mod_pow(m[c * 2 * n + c], p - 2, p);
        for (int j = 0; j < 2 * n; ++j) m[c * 2 * n + j] = m[c * 2 * n + j] * inv % p;
        for (int r = 0; r < n; ++r) {
          std::uint64_t f = m[r * 2 * n + c];
          if (r == c || f == 0) continue;
          for (int j = 0; j < 2 * n; ++j) m[r * 2 * n + j] = (m[r * 2 * n + j] + p * p - f * m[c * 2 * n + j]) % p;
        }
      }
      ModMatrix out;
      out.entries.resize(static_cast<std::size_t>(n * n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.entries[i * n + j] = static_cast<std::uint32_t>(m[i * 2 * n + n + j]);
      }
      return out;
    }
    case Family::Product: {
      ProductPayload out;
      for (const auto& e : std::get<ProductPayload>(x).parts) out.parts.push_back(invert(e));
      return out;
    }
  }
  return x;
}

}  // namespace

Element identity(const Group& g) {
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      Permutation p;
      p.image.resize(static_cast<std::size_t>(g.degree()));
      std::iota(p.image.begin(), p.image.end(), std::uint16_t{0});
      return make_trusted(g, std::move(p));
    }
    case Family::Free:
      return make_trusted(g, ReducedWord{});
    case Family::WreathZ:
    case Family::WreathZn:
      return make_trusted(g, WreathPayload{});
    case Family::AffZ:
      return make_trusted(g, AffZPayload{});
    case Family::Bar: {
      BarPayload b;
      b.coords = {identity(g.base()), identity(g.base())};
      return make_trusted(g, std::move(b));
    }
    case Family::Z2Infinity:
      return make_trusted(g, BinaryWord{});
    case Family::SLZ: {
      const int n = g.degree();
      IntMatrix m;
      m.entries.assign(static_cast<std::size_t>(n * n), Integer(0));
      for (int i = 0; i < n; ++i) m.entries[i * n + i] = 1;
      return make_trusted(g, std::move(m));
    }
    case Family::SLMod: {
      const int n = g.degree();
      ModMatrix m;
      m.entries.assign(static_cast<std::size_t>(n * n), 0);
      for (int i = 0; i < n; ++i) m.entries[i * n + i] = 1;
      return make_trusted(g, std::move(m));
    }
    case Family::Product: {
      ProductPayload p;
      for (const auto& f : g.factors()) p.parts.push_back(identity(f));
      return make_trusted(g, std::move(p));
    }
  }
  throw InvalidInput("unknown family");
}

Element compose(const Element& a, const Element& b) {
  same_group(a, b);
  return make_trusted(a.group(), compose_payload(a.group(), a.payload(), b.payload()));
}

Element invert(const Element& a) { return make_trusted(a.group(), invert_payload(a.group(), a.payload())); }

Element conjugate_of(const Element& g, const Element& by) {
  same_group(g, by);
  return compose(compose(by, g), invert(by));
}

Element commutator_of(const Element& a, const Element& b) {
  same_group(a, b);
  return compose(compose(a, b), compose(invert(a), invert(b)));
}

Element power(const Element& a, std::int64_t n) {
  Element base = n < 0 ? invert(a) : a;
  std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  Element result = identity(a.group());
  while (e) {
    if (e & 1) result = compose(result, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return result;
}

Element product_of(const Group& g, const std::vector<Element>& factors) {
  Element acc = identity(g);
  for (const auto& f : factors) acc = compose(acc, f);
  return acc;
}

// ---------------------------------------------------------------- constructors

Element permutation_from_cycles(const Group& g, const std::vector<std::vector<int>>& cycles) {
  Permutation p;
  p.image.resize(static_cast<std::size_t>(g.degree()));
  std::iota(p.image.begin(), p.image.end(), std::uint16_t{0});
  for (const auto& cyc : cycles) {
    // Compose cycles right to left so "(1 2)(1 3)" means (1 2) after (1 3).
    Permutation c;
    c.image.resize(p.image.size());
    std::iota(c.image.begin(), c.image.end(), std::uint16_t{0});
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      int from = cyc[i];
      int to = cyc[(i + 1) % cyc.size()];
      if (from < 1 || from > g.degree() || to < 1 || to > g.degree()) {
        throw InvalidInput("cycle point out of range for " + g.name());
      }
      c.image[static_cast<std::size_t>(from - 1)] = static_cast<std::uint16_t>(to - 1);
    }
    Permutation next;
    next.image.resize(p.image.size());
    for (std::size_t i = 0; i < p.image.size(); ++i) next.image[i] = p.image[c.image[i]];
    p = std::move(next);
  }
  return Element(g, std::move(p));
}

Element free_word(const Group& g, std::vector<int> letters) { return Element(g, ReducedWord{std::move(letters)}); }

Element affz(std::int64_t a, bool t) { return make_trusted(Group::aff_z(), AffZPayload{a, t}); }

Element bar_element(const Group& g, Element g1, Element g2, bool t) {
  BarPayload b;
  b.coords = {std::move(g1), std::move(g2)};
  b.t = t;
  return Element(g, std::move(b));
}

Element binary_word(std::vector<std::uint8_t> bits) { return Element(Group::z2_infinity(), BinaryWord{std::move(bits)}); }

Element elementary_matrix(const Group& g, int row, int col, const Integer& value) {
  const int n = g.degree();
  if (row == col || row < 0 || col < 0 || row >= n || col >= n) throw InvalidInput("bad elementary matrix indices");
  if (g.family() == Family::SLZ) {
    Element e = identity(g);
    IntMatrix m = e.as<IntMatrix>();
    m.entries[row * n + col] = value;
    return make_trusted(g, std::move(m));
  }
  if (g.family() == Family::SLMod) {
    Element e = identity(g);
    ModMatrix m = e.as<ModMatrix>();
    Integer r = value % g.modulus();
    if (r < 0) r += g.modulus();
    m.entries[row * n + col] = static_cast<std::uint32_t>(r.get_ui());
    return make_trusted(g, std::move(m));
  }
  throw InvalidInput("elementary matrices need slz or slp");
}

Element wreath_single(const Group& g, std::int64_t position, const Element& value) {
  WreathPayload w;
  w.positions = {position};
  w.values = {value};
  return Element(g, std::move(w));
}

Element wreath_shift(const Group& g, std::int64_t shift) {
  WreathPayload w;
  w.shift = shift;
  return Element(g, std::move(w));
}

Element product_element(const Group& g, std::vector<Element> parts) {
  return Element(g, ProductPayload{std::move(parts)});
}

// ---------------------------------------------------------------- literals

std::string to_literal(const Element& e) {
  const Group& g = e.group();
  return std::visit(
      [&](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Permutation>) {
          std::string out;
          std::vector<bool> seen(p.image.size(), false);
          for (std::size_t i = 0; i < p.image.size(); ++i) {
            if (seen[i] || p.image[i] == i) continue;
            out += "(";
            std::size_t j = i;
            bool first = true;
            while (!seen[j]) {
              seen[j] = true;
              if (!first) out += " ";
              out += std::to_string(j + 1);
              first = false;
              j = p.image[j];
            }
            out += ")";
          }
          return out.empty() ? "()" : out;
        } else if constexpr (std::is_same_v<T, ReducedWord>) {
          if (p.letters.empty()) return "1";
          std::string out;
          for (std::size_t i = 0; i < p.letters.size(); ++i) {
            if (i) out += " ";
            int l = p.letters[i];
            out += static_cast<char>((l > 0 ? 'a' : 'A') + std::abs(l) - 1);
          }
          return out;
        } else if constexpr (std::is_same_v<T, WreathPayload>) {
          std::string out = "W{";
          for (std::size_t i = 0; i < p.positions.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(p.positions[i]) + ":" + to_literal(p.values[i]);
          }
          return out + ";" + std::to_string(p.shift) + "}";
        } else if constexpr (std::is_same_v<T, AffZPayload>) {
          if (p.a == 0 && !p.t) return "1";
          std::string out;
          if (p.a != 0) out = "z^" + std::to_string(p.a);
          if (p.t) out += out.empty() ? "t" : " t";
          return out;
        } else if constexpr (std::is_same_v<T, BarPayload>) {
          return "B{" + to_literal(p.coords[0]) + ";" + to_literal(p.coords[1]) + ";" + (p.t ? "1" : "0") + "}";
        } else if constexpr (std::is_same_v<T, BinaryWord>) {
          if (p.bits.empty()) return "0";
          std::string out;
          for (auto b : p.bits) out += b ? '1' : '0';
          return out;
        } else if constexpr (std::is_same_v<T, IntMatrix>) {
          std::string out = "[";
          for (std::size_t i = 0; i < p.entries.size(); ++i) {
            if (i) out += ",";
            out += p.entries[i].get_str();
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, ModMatrix>) {
          std::string out = "[";
          for (std::size_t i = 0; i < p.entries.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(p.entries[i]);
          }
          return out + "]";
        } else {
          std::string out = "P{";
          for (std::size_t i = 0; i < p.parts.size(); ++i) {
            if (i) out += ";";
            out += to_literal(p.parts[i]);
          }
          (void)g;
          return out + "}";
        }
      },
      e.payload());
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

/// Splits at separator characters that are not nested inside (), [] or {}.
std::vector<std::string> split_top(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (depth == 0 && seps.find(c) != std::string_view::npos) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::int64_t parse_int64(const std::string& s, const std::string& context) {
  std::int64_t v = 0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput("bad integer '" + s + "' in " + context);
  }
  return v;
}

std::string strip_braces(const std::string& s, char tag, const std::string& context) {
  if (s.size() < 3 || s[0] != tag || s[1] != '{' || s.back() != '}') {
    throw InvalidInput("expected " + std::string(1, tag) + "{...} in " + context);
  }
  return s.substr(2, s.size() - 3);
}

}  // namespace

Element parse_element(const Group& g, std::string_view raw) {
  const std::string text = trim(raw);
  const std::string context = "'" + text + "' for " + g.name();
  switch (g.family()) {
    case Family::Symmetric:
    case Family::Alternating: {
      if (text.empty() || text == "()" || text == "id" || text == "1") return identity(g);
      std::vector<std::vector<int>> cycles;
      std::size_t i = 0;
      while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
          continue;
        }
        if (text[i] != '(') throw InvalidInput("expected '(' in " + context);
        std::size_t close = text.find(')', i);
        if (close == std::string::npos) throw InvalidInput("unclosed cycle in " + context);
        std::vector<int> cyc;
        std::string inner = text.substr(i + 1, close - i - 1);
        for (char& c : inner) {
          if (c == ',') c = ' ';
        }
        std::istringstream in(inner);
        std::string tok;
        while (in >> tok) cyc.push_back(static_cast<int>(parse_int64(tok, context)));
        std::vector<int> sorted = cyc;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
          throw InvalidInput("repeated point in cycle " + context);
        }
        if (!cyc.empty()) cycles.push_back(std::move(cyc));
        i = close + 1;
      }
      return permutation_from_cycles(g, cycles);
    }
    case Family::Free: {
      std::vector<int> letters;
      if (text == "1" || text.empty()) return identity(g);
      for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c >= 'a' && c <= 'z') {
          letters.push_back(c - 'a' + 1);
        } else if (c >= 'A' && c <= 'Z') {
          letters.push_back(-(c - 'A' + 1));
        } else {
          throw InvalidInput("bad letter in " + context);
        }
      }
      return free_word(g, std::move(letters));
    }
    case Family::WreathZ:
    case Family::WreathZn: {
      auto parts = split_top(strip_braces(text, 'W', context), ";");
      if (parts.size() != 2) throw InvalidInput("wreath literal needs 'entries;shift' in " + context);
      WreathPayload w;
      if (!parts[0].empty()) {
        for (const auto& entry : split_top(parts[0], ",")) {
          auto colon = entry.find(':');
          if (colon == std::string::npos) throw InvalidInput("wreath entry needs 'pos:value' in " + context);
          w.positions.push_back(parse_int64(trim(entry.substr(0, colon)), context));
          w.values.push_back(parse_element(g.base(), entry.substr(colon + 1)));
        }
      }
      w.shift = parse_int64(parts[1], context);
      return Element(g, std::move(w));
    }
    case Family::AffZ: {
      // Any product of z, z^k and t tokens.
      Element acc = identity(g);
      std::istringstream in(text);
      std::string tok;
      while (in >> tok) {
        if (tok == "1") continue;
        if (tok == "t") {
          acc = compose(acc, affz(0, true));
        } else if (tok == "z") {
          acc = compose(acc, affz(1, false));
        } else if (tok.rfind("z^", 0) == 0) {
          acc = compose(acc, affz(parse_int64(tok.substr(2), context), false));
        } else {
          throw InvalidInput("bad AffZ token '" + tok + "' in " + context);
        }
      }
      return acc;
    }
    case Family::Bar: {
      auto parts = split_top(strip_braces(text, 'B', context), ";");
      if (parts.size() != 3 || (parts[2] != "0" && parts[2] != "1")) {
        throw InvalidInput("Bar literal needs 'g1;g2;e' in " + context);
      }
      return bar_element(g, parse_element(g.base(), parts[0]), parse_element(g.base(), parts[1]), parts[2] == "1");
    }
    case Family::Z2Infinity: {
      std::vector<std::uint8_t> bits;
      for (char c : text) {
        if (c != '0' && c != '1') throw InvalidInput("binary word must be 0/1 digits: " + context);
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      return binary_word(std::move(bits));
    }
    case Family::SLZ:
    case Family::SLMod: {
      if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw InvalidInput("matrix literal needs [..] in " + context);
      }
      std::string inner = text.substr(1, text.size() - 2);
      for (char& c : inner) {
        if (c == ',' || c == ';') c = ' ';
      }
      std::istringstream in(inner);
      std::string tok;
      if (g.family() == Family::SLZ) {
        IntMatrix m;
        while (in >> tok) {
          Integer v;
          if (v.set_str(tok[0] == '+' ? tok.substr(1) : tok, 10) != 0) throw InvalidInput("bad entry in " + context);
          m.entries.push_back(v);
        }
        return Element(g, std::move(m));
      }
      ModMatrix m;
      while (in >> tok) {
        std::int64_t v = parse_int64(tok, context);
        v = mod_floor(v, g.modulus());
        m.entries.push_back(static_cast<std::uint32_t>(v));
      }
      return Element(g, std::move(m));
    }
    case Family::Product: {
      auto parts = split_top(strip_braces(text, 'P', context), ";");
      if (parts.size() != g.factors().size()) throw InvalidInput("wrong component count in " + context);
      std::vector<Element> elems;
      for (std::size_t i = 0; i < parts.size(); ++i) elems.push_back(parse_element(g.factors()[i], parts[i]));
      return product_element(g, std::move(elems));
    }
  }
  throw InvalidInput("unknown family");
}

std::vector<Element> parse_element_list(const Group& g, std::string_view text) {
  std::vector<Element> out;
  if (trim(text).empty()) return out;
  for (const auto& piece : split_top(text, ",")) out.push_back(parse_element(g, piece));
  return out;
}

}  // namespace cinorm
