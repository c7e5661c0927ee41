#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "macpol/errors.hpp"

namespace macpol {

inline constexpr std::uint32_t kMaxGrade = 65535;
inline constexpr std::uint32_t kMinCompartment = 1;
inline constexpr std::uint32_t kMaxCompartment = 255;

// The vertical coordinate of a label: a numeric rank or one of the
// low/high/equal sentinels. Sentinels always carry value 0.
struct Grade {
  enum class Kind : std::uint8_t { Num, Low, High, Equal };

  Kind kind = Kind::Low;
  std::uint32_t value = 0;

  static constexpr Grade num(std::uint32_t v) { return {Kind::Num, v}; }
  static constexpr Grade low() { return {Kind::Low, 0}; }
  static constexpr Grade high() { return {Kind::High, 0}; }
  static constexpr Grade equal() { return {Kind::Equal, 0}; }

  constexpr bool is_num() const { return kind == Kind::Num; }
  constexpr bool is_sentinel() const { return kind != Kind::Num; }

  bool operator==(const Grade&) const = default;
};

// Ordered so that iteration yields the canonical ascending form.
using CompartmentSet = std::set<std::uint32_t>;

struct PolicyElement {
  Grade grade;
  CompartmentSet compartments;

  bool operator==(const PolicyElement&) const = default;
};

// A subject element: an effective point plus the envelope it may move in.
struct RangedElement {
  PolicyElement effective;
  PolicyElement lo;
  PolicyElement hi;

  bool operator==(const RangedElement&) const = default;
};

using Element = std::variant<PolicyElement, RangedElement>;

const PolicyElement& effective_of(const Element& e);
bool is_ranged(const Element& e);

struct PolicyEntry {
  std::string policy;
  Element element;

  bool operator==(const PolicyEntry&) const = default;
};

// Ordered composition of per-policy elements, e.g. "biba/5(2-10),mls/low".
struct MacLabel {
  std::vector<PolicyEntry> entries;

  // nullptr when the policy is absent.
  const PolicyEntry* find(std::string_view policy) const;
  std::vector<std::string> policies() const;
  bool has_ranged() const;
  // Same policies in the same order, each reduced to its effective element.
  MacLabel effective() const;

  bool operator==(const MacLabel&) const = default;
};

// Policy names the grammar accepts, in registration order.
const std::vector<std::string>& known_policies();
bool is_known_policy(std::string_view name);

// Throws SyntaxError for text outside the grammar and ValidationError for
// well-formed text whose value violates an invariant.
MacLabel parse_label(std::string_view text);

std::string format_grade(const Grade& g);
std::string format_element(const PolicyElement& e);
std::string format_element(const Element& e);
std::string format_label(const MacLabel& label);

// Empty iff every invariant holds.
std::vector<Violation> validate(const MacLabel& label);
std::vector<Violation> validate(const Element& element, std::string_view field);

}  // namespace macpol
