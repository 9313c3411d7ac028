#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cinorm/rational.hpp"

namespace cinorm {

enum class Family {
  Symmetric,
  Alternating,
  Free,
  WreathZ,
  WreathZn,
  AffZ,
  Bar,
  Z2Infinity,
  SLZ,
  SLMod,
  Product,
};

namespace detail {
struct GroupNode;
}

/// Immutable, shareable description of one of the supported group families.
///
/// Descriptors are compared by their canonical name, which follows the
/// grammar `sn:<n>`, `an:<n>`, `free:<rank>`, `wreath:<base>:z`,
/// `wreath:<base>:zn:<N>`, `aff-z`, `bar:<base>`, `z2inf`, `slz:<n>`,
/// `slp:<n>:<p>`, `product:<d1>,<d2>,...`.
class Group {
 public:
  static Group symmetric(int n);
  static Group alternating(int n);
  static Group free_group(int rank);
  static Group wreath_z(const Group& base);
  static Group wreath_zn(const Group& base, int cycle);
  static Group aff_z();
  static Group bar(const Group& inner);
  static Group z2_infinity();
  static Group slz(int n);
  static Group slmod(int n, int p);
  static Group product(std::vector<Group> factors);

  /// Parses the descriptor grammar. Throws InvalidInput.
  static Group parse(std::string_view text);

  Family family() const;
  /// Degree for permutation families, rank for free groups, matrix size for
  /// SL families, cycle length N for WreathZn.
  int degree() const;
  int modulus() const;
  /// Base group of a wreath product or the inner group of Bar.
  const Group& base() const;
  const std::vector<Group>& factors() const;
  const std::string& name() const;

  bool finite() const;
  /// Empty for infinite families.
  std::optional<Integer> order() const;
  /// True for families that are abelian by construction (z2inf, free:1,
  /// products of those, sn:1, sn:2, ...).
  bool declared_abelian() const;

  friend bool operator==(const Group& a, const Group& b);

 private:
  explicit Group(std::shared_ptr<const detail::GroupNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::GroupNode> node_;
};

class Element;

/// Image array, 0-based points.
struct Permutation {
  std::vector<std::uint16_t> image;
};

/// Letters are +(i+1) for generator i and -(i+1) for its inverse.
struct ReducedWord {
  std::vector<int> letters;
};

/// Finitely supported map coordinate -> base element, plus a shift.
/// Positions are sorted and never carry the identity.
struct WreathPayload {
  std::vector<std::int64_t> positions;
  std::vector<Element> values;
  std::int64_t shift = 0;
};

/// z^a t^e.
struct AffZPayload {
  std::int64_t a = 0;
  bool t = false;
};

/// (g1, g2) t^e.
struct BarPayload {
  std::vector<Element> coords;  // exactly two
  bool t = false;
};

/// Bits without trailing zeros; bit i is the i-th coordinate.
struct BinaryWord {
  std::vector<std::uint8_t> bits;
};

/// Row-major n x n matrix with determinant 1.
struct IntMatrix {
  std::vector<Integer> entries;
};

/// Row-major n x n matrix over Z/p with determinant 1.
struct ModMatrix {
  std::vector<std::uint32_t> entries;
};

struct ProductPayload {
  std::vector<Element> parts;
};

using Payload = std::variant<Permutation, ReducedWord, WreathPayload, AffZPayload, BarPayload,
                             BinaryWord, IntMatrix, ModMatrix, ProductPayload>;

/// A group element in canonical form. Equality and ordering are by payload.
class Element {
 public:
  /// Validates and canonicalizes. Throws InvalidInput if the payload does
  /// not fit the group (wrong kind, wrong size, determinant != 1, ...).
  Element(Group group, Payload payload);

  const Group& group() const { return group_; }
  const Payload& payload() const { return payload_; }
  template <class T>
  const T& as() const {
    return std::get<T>(payload_);
  }

  bool is_identity() const;
  std::size_t hash() const;

  friend bool operator==(const Element& a, const Element& b);
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

 private:
  struct Trusted {};
  Element(Group group, Payload payload, Trusted);
  friend Element make_trusted(Group group, Payload payload);

  Group group_;
  Payload payload_;
};

/// Bypasses validation; payload must already be canonical.
Element make_trusted(Group group, Payload payload);

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

Element identity(const Group& g);
Element compose(const Element& a, const Element& b);
Element invert(const Element& a);
/// by * g * by^-1.
Element conjugate_of(const Element& g, const Element& by);
/// a b a^-1 b^-1.
Element commutator_of(const Element& a, const Element& b);
/// a^n for any integer n (square-and-multiply).
Element power(const Element& a, std::int64_t n);
/// Product of a list, left to right. Empty list needs the group.
Element product_of(const Group& g, const std::vector<Element>& factors);

// Constructors for common payloads.

/// Permutation of degree n from 1-based cycles.
Element permutation_from_cycles(const Group& g, const std::vector<std::vector<int>>& cycles);
Element free_word(const Group& g, std::vector<int> letters);
Element affz(std::int64_t a, bool t);
Element bar_element(const Group& g, Element g1, Element g2, bool t);
Element binary_word(std::vector<std::uint8_t> bits);
/// Elementary matrix with `value` in (row, col), 0-based, for slz or slp.
Element elementary_matrix(const Group& g, int row, int col, const Integer& value);
/// Base element placed at `position`, shift 0.
Element wreath_single(const Group& g, std::int64_t position, const Element& value);
Element wreath_shift(const Group& g, std::int64_t shift);
Element product_element(const Group& g, std::vector<Element> parts);

/// Literal syntax: cycle notation "(1 2)(3 4 5)" / "()", words "a b A" / "1",
/// AffZ "z^3 t" / "1", binary "10110" / "0", matrices "[1,2,0,1]",
/// wreath "W{0:(1 2),2:(1 3);1}", Bar "B{g1;g2;1}", product "P{e1;e2}".
std::string to_literal(const Element& e);
Element parse_element(const Group& g, std::string_view text);
/// Elements separated by top-level commas (commas inside brackets are kept).
std::vector<Element> parse_element_list(const Group& g, std::string_view text);

}  // namespace cinorm

template <>
struct std::hash<cinorm::Element> {
  std::size_t operator()(const cinorm::Element& e) const { return e.hash(); }
};
