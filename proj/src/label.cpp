#include "macpol/label.hpp"

#include <algorithm>
#include <limits>

#include "macpol/lattice.hpp"

namespace macpol {

SyntaxError::SyntaxError(std::size_t position, std::string reason, std::size_t line)
    : Error(line == 0 ? "syntax error at " + std::to_string(position) + ": " + reason
                      : "line " + std::to_string(line) + ", column " +
                            std::to_string(position) + ": " + reason),
      position_(position),
      line_(line),
      reason_(std::move(reason)) {}

namespace {

std::string describe(const std::vector<Violation>& violations, std::size_t line) {
  std::string msg = line == 0 ? "invalid label:" : "line " + std::to_string(line) + ": invalid label:";
  for (const auto& v : violations) msg += " " + v.field + " " + v.rule + ";";
  msg.pop_back();
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations, std::size_t line)
    : Error(describe(violations, line)), violations_(std::move(violations)), line_(line) {}

const PolicyElement& effective_of(const Element& e) {
  if (const auto* r = std::get_if<RangedElement>(&e)) return r->effective;
  return std::get<PolicyElement>(e);
}

bool is_ranged(const Element& e) { return std::holds_alternative<RangedElement>(e); }

const PolicyEntry* MacLabel::find(std::string_view policy) const {
  for (const auto& entry : entries)
    if (entry.policy == policy) return &entry;
  return nullptr;
}

std::vector<std::string> MacLabel::policies() const {
  std::vector<std::string> names;
  names.reserve(entries.size());
  for (const auto& entry : entries) names.push_back(entry.policy);
  return names;
}

bool MacLabel::has_ranged() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const PolicyEntry& e) { return is_ranged(e.element); });
}

MacLabel MacLabel::effective() const {
  MacLabel out;
  out.entries.reserve(entries.size());
  for (const auto& entry : entries) out.entries.push_back({entry.policy, effective_of(entry.element)});
  return out;
}

const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"biba", "mls"};
  return names;
}

bool is_known_policy(std::string_view name) {
  const auto& names = known_policies();
  return std::find(names.begin(), names.end(), name) != names.end();
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

class LabelParser {
 public:
  explicit LabelParser(std::string_view text) : text_(text) {}

  MacLabel parse() {
    if (text_.empty()) fail("empty label");
    MacLabel label;
    label.entries.push_back(policy());
    while (accept(',')) label.entries.push_back(policy());
    if (!at_end()) fail(std::string("unexpected character '") + peek() + "'");

    if (!duplicates_.empty()) throw ValidationError(duplicates_);
    auto violations = validate(label);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return label;
  }

 private:
  PolicyEntry policy() {
    const std::size_t start = pos_;
    while (!at_end() && is_lower(peek())) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name.empty()) fail("expected policy name");
    if (!is_known_policy(name)) fail("unknown policy '" + name + "'", start);
    expect('/', "expected '/' after policy name");
    if (at_end() || peek() == ',') fail("missing qualifier");

    current_ = name;
    PolicyEntry entry{name, element("effective")};
    if (accept('(')) {
      RangedElement ranged;
      ranged.effective = std::get<PolicyElement>(entry.element);
      ranged.lo = element("lo");
      expect('-', "expected '-' between range bounds");
      ranged.hi = element("hi");
      expect(')', "expected ')' closing range");
      entry.element = std::move(ranged);
    }
    return entry;
  }

  PolicyElement element(std::string_view part) {
    PolicyElement e;
    e.grade = grade();
    if (accept(':')) {
      const std::string field = current_ + "." + std::string(part) + ".compartments";
      do {
        const auto id = decimal();
        if (!e.compartments.insert(id).second) duplicates_.push_back({field, "duplicate-compartment"});
      } while (accept('+'));
    }
    return e;
  }

  Grade grade() {
    if (!at_end() && is_digit(peek())) return Grade::num(decimal());
    for (const auto& [word, g] : {std::pair{std::string_view("low"), Grade::low()},
                                  std::pair{std::string_view("high"), Grade::high()},
                                  std::pair{std::string_view("equal"), Grade::equal()}}) {
      if (text_.substr(pos_, word.size()) == word) {
        pos_ += word.size();
        return g;
      }
    }
    fail("expected grade");
  }

  // Saturates instead of wrapping so oversized values surface as range violations.
  std::uint32_t decimal() {
    if (at_end() || !is_digit(peek())) fail("expected decimal number");
    std::uint64_t v = 0;
    while (!at_end() && is_digit(peek())) {
      v = std::min<std::uint64_t>(v * 10 + static_cast<std::uint64_t>(peek() - '0'),
                                  std::numeric_limits<std::uint32_t>::max());
      ++pos_;
    }
    return static_cast<std::uint32_t>(v);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  bool accept(char c) {
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* reason) {
    if (!accept(c)) fail(reason);
  }

  [[noreturn]] void fail(std::string reason) { fail(std::move(reason), pos_); }
  [[noreturn]] void fail(std::string reason, std::size_t at) { throw SyntaxError(at, std::move(reason)); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::string current_;
  std::vector<Violation> duplicates_;
};

void validate_point(const PolicyElement& e, const std::string& field, std::vector<Violation>& out) {
  if (e.grade.is_num() && e.grade.value > kMaxGrade) out.push_back({field + ".grade", "grade-out-of-range"});
  for (auto id : e.compartments) {
    if (id < kMinCompartment || id > kMaxCompartment) {
      out.push_back({field + ".compartments", "compartment-out-of-range"});
      break;
    }
  }
  // High may carry compartments: it names the top of a compiled lattice,
  // e.g. "mls/high:1+2+3+4".
  const bool allows_compartments = e.grade.is_num() || e.grade.kind == Grade::Kind::High;
  if (!allows_compartments && !e.compartments.empty())
    out.push_back({field + ".compartments", "compartments-on-sentinel"});
}

}  // namespace

MacLabel parse_label(std::string_view text) { return LabelParser(text).parse(); }

std::string format_grade(const Grade& g) {
  switch (g.kind) {
    case Grade::Kind::Num: return std::to_string(g.value);
    case Grade::Kind::Low: return "low";
    case Grade::Kind::High: return "high";
    case Grade::Kind::Equal: return "equal";
  }
  return {};
}

std::string format_element(const PolicyElement& e) {
  std::string out = format_grade(e.grade);
  char sep = ':';
  for (auto id : e.compartments) {
    out += sep;
    out += std::to_string(id);
    sep = '+';
  }
  return out;
}

std::string format_element(const Element& e) {
  if (const auto* r = std::get_if<RangedElement>(&e))
    return format_element(r->effective) + "(" + format_element(r->lo) + "-" + format_element(r->hi) + ")";
  return format_element(std::get<PolicyElement>(e));
}

std::string format_label(const MacLabel& label) {
  std::string out;
  for (const auto& entry : label.entries) {
    if (!out.empty()) out += ',';
    out += entry.policy + "/" + format_element(entry.element);
  }
  return out;
}

std::vector<Violation> validate(const Element& element, std::string_view field) {
  std::vector<Violation> out;
  const std::string base(field);
  if (const auto* r = std::get_if<RangedElement>(&element)) {
    validate_point(r->effective, base + ".effective", out);
    validate_point(r->lo, base + ".lo", out);
    validate_point(r->hi, base + ".hi", out);
    if (!dominates(r->hi, r->lo)) out.push_back({base, "lo-not-dominated-by-hi"});
    else if (!in_range(r->effective, *r)) out.push_back({base + ".effective", "effective-outside-range"});
  } else {
    validate_point(std::get<PolicyElement>(element), base, out);
  }
  return out;
}

std::vector<Violation> validate(const MacLabel& label) {
  std::vector<Violation> out;
  if (label.entries.empty()) out.push_back({"label", "empty-label"});
  std::vector<std::string_view> seen;
  for (const auto& entry : label.entries) {
    if (!is_known_policy(entry.policy)) out.push_back({entry.policy, "unknown-policy"});
    if (std::find(seen.begin(), seen.end(), entry.policy) != seen.end())
      out.push_back({entry.policy, "duplicate-policy"});
    seen.push_back(entry.policy);
    auto element_violations = validate(entry.element, entry.policy);
    out.insert(out.end(), element_violations.begin(), element_violations.end());
  }
  return out;
}

}  // namespace macpol
