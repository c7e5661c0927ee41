#include "macpol/chinese_wall.hpp"

#include <algorithm>
#include <stdexcept>

namespace macpol::cw {

namespace {

// Upper bound on materialised lattice nodes.
constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 20;

constexpr std::uint32_t kGradeStep = 10;

void require_valid(const Config& cfg) {
  if (cfg.industries == 0 || cfg.companies == 0)
    throw std::invalid_argument("industries and companies must both be at least 1");
}

void require_vector(const Label& l) {
  if (l.is_sys_high()) throw std::invalid_argument("SYSHIGH has no vector form");
}

void require_same_length(const Label& l1, const Label& l2) {
  if (l1.size() != l2.size())
    throw LengthMismatch("label lengths differ: " + to_string(l1) + " vs " + to_string(l2));
}

// Bottom orders after every company.
std::uint32_t sort_key(std::uint32_t v) { return v == Label::kBottom ? UINT32_MAX : v; }

bool lattice_less(const Label& a, const Label& b) {
  if (a.level() != b.level()) return a.level() < b.level();
  return std::lexicographical_compare(
      a.entries().begin(), a.entries().end(), b.entries().begin(), b.entries().end(),
      [](std::uint32_t x, std::uint32_t y) { return sort_key(x) < sort_key(y); });
}

std::uint64_t node_count(const Config& cfg) {
  std::uint64_t n = 1;
  for (std::uint32_t i = 0; i < cfg.industries; ++i) {
    n *= std::uint64_t{cfg.companies} + 1;
    if (n > kMaxNodes)
      throw std::length_error("lattice has more than " + std::to_string(kMaxNodes) + " nodes");
  }
  return n;
}

// Mixed-radix index of a vector, base C+1.
std::uint64_t node_index(const Label& l, const Config& cfg) {
  std::uint64_t idx = 0;
  for (std::size_t k = l.size(); k-- > 0;) idx = idx * (cfg.companies + 1) + l[k];
  return idx;
}

}  // namespace

std::size_t Label::level() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](std::uint32_t v) { return v != kBottom; }));
}

bool Label::fits(const Config& cfg) const {
  if (sys_high_) return true;
  return entries_.size() == cfg.industries &&
         std::all_of(entries_.begin(), entries_.end(), [&](std::uint32_t v) { return v <= cfg.companies; });
}

std::string to_string(const Label& l) {
  if (l.is_sys_high()) return "SYSHIGH";
  std::string out = "[";
  for (std::size_t k = 0; k < l.size(); ++k) {
    if (k) out += ',';
    out += l[k] == Label::kBottom ? std::string("bot") : std::to_string(l[k]);
  }
  return out + "]";
}

std::string class_name(const Label& l) {
  if (l.is_sys_high()) return "cw_syshigh";
  std::string out = "cw";
  for (auto v : l.entries()) out += "_" + (v == Label::kBottom ? std::string("bot") : std::to_string(v));
  return out;
}

bool dominates(const Label& l1, const Label& l2) {
  if (l1.is_sys_high()) return true;
  if (l2.is_sys_high()) return false;
  require_same_length(l1, l2);
  for (std::size_t k = 0; k < l1.size(); ++k) {
    if (l1[k] == l2[k]) continue;
    if (l1[k] != Label::kBottom && l2[k] == Label::kBottom) continue;
    return false;
  }
  return true;
}

bool compatible(const Label& l1, const Label& l2) {
  require_vector(l1);
  require_vector(l2);
  require_same_length(l1, l2);
  for (std::size_t k = 0; k < l1.size(); ++k)
    if (l1[k] != l2[k] && l1[k] != Label::kBottom && l2[k] != Label::kBottom) return false;
  return true;
}

Label join(const Label& l1, const Label& l2) {
  if (!compatible(l1, l2)) throw IncompatibleLabels(to_string(l1) + " and " + to_string(l2) + " are incompatible");
  std::vector<std::uint32_t> out(l1.size());
  for (std::size_t k = 0; k < l1.size(); ++k) out[k] = l1[k] != Label::kBottom ? l1[k] : l2[k];
  return Label(std::move(out));
}

std::vector<Label> generate_lattice(const Config& cfg) {
  require_valid(cfg);
  const auto count = node_count(cfg);
  std::vector<Label> nodes;
  nodes.reserve(count + 1);
  std::vector<std::uint32_t> digits(cfg.industries, Label::kBottom);
  for (std::uint64_t i = 0; i < count; ++i) {
    nodes.emplace_back(digits);
    for (auto& d : digits) {
      if (++d <= cfg.companies) break;
      d = Label::kBottom;
    }
  }
  std::sort(nodes.begin(), nodes.end(), lattice_less);
  nodes.push_back(Label::sys_high());
  return nodes;
}

Feasibility feasibility(const Config& cfg) {
  require_valid(cfg);
  Feasibility f;
  f.compartments_needed = std::uint64_t{cfg.companies} * cfg.industries;
  f.login_classes_needed = boost::multiprecision::pow(boost::multiprecision::cpp_int(cfg.companies) + 1,
                                                      cfg.industries);
  f.grades_needed = std::uint64_t{cfg.industries} + 1;
  f.feasible = f.compartments_needed <= kMaxCompartment;
  return f;
}

std::vector<Triplet> compile(const Config& cfg) {
  const auto report = feasibility(cfg);
  if (!report.feasible)
    throw InfeasibleConfig(std::to_string(report.compartments_needed) + " compartments needed, limit is " +
                           std::to_string(kMaxCompartment));

  const auto nodes = generate_lattice(cfg);
  std::vector<Triplet> out;
  out.reserve(nodes.size());
  // Lattice position -> index into `out`.
  std::vector<std::size_t> slot(nodes.size() - 1);
  std::uint32_t next_compartment = 1;

  for (const auto& node : nodes) {
    Triplet t{Grade::low(), {}, node};
    if (node.is_sys_high()) {
      t.grade = Grade::high();
      for (std::uint32_t c = 1; c <= report.compartments_needed; ++c) t.compartments.insert(c);
    } else if (const auto level = node.level(); level == 1) {
      t.grade = Grade::num(kGradeStep);
      t.compartments.insert(next_compartment++);
    } else if (level >= 2) {
      t.grade = Grade::num(static_cast<std::uint32_t>(level) * kGradeStep);
      // Lower-level triplets this node dominates: drop one non-bottom position.
      // Their sets already cover everything further below.
      auto entries = node.entries();
      for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k] == Label::kBottom) continue;
        const auto saved = entries[k];
        entries[k] = Label::kBottom;
        const auto& below = out[slot[node_index(Label(entries), cfg)]];
        t.compartments.insert(below.compartments.begin(), below.compartments.end());
        entries[k] = saved;
      }
    }
    if (!node.is_sys_high()) slot[node_index(node, cfg)] = out.size();
    out.push_back(std::move(t));
  }
  return out;
}

std::string triplet_to_label(const Triplet& t) {
  return format_label(MacLabel{{{"mls", t.element()}}});
}

std::string format_table(const std::vector<Triplet>& triplets) {
  std::string out;
  for (const auto& t : triplets) {
    std::string comps;
    for (auto c : t.compartments) comps += (comps.empty() ? "" : "+") + std::to_string(c);
    out += to_string(t.label) + "\t" + format_grade(t.grade) + "\t" + (comps.empty() ? "-" : comps) + "\n";
  }
  return out;
}

Label progress(const Label& current, std::uint32_t industry, std::uint32_t company) {
  require_vector(current);
  if (industry == 0 || industry > current.size())
    throw std::out_of_range("industry " + std::to_string(industry) + " outside 1.." + std::to_string(current.size()));
  if (company == Label::kBottom) throw std::out_of_range("company numbers start at 1");
  const auto held = current[industry - 1];
  if (held == company) return current;
  if (held != Label::kBottom)
    throw WallViolation("industry " + std::to_string(industry) + " already accessed through company " +
                        std::to_string(held) + "; company " + std::to_string(company) + " is walled off");
  auto entries = current.entries();
  entries[industry - 1] = company;
  return Label(std::move(entries));
}

std::string emit_login_classes(const Config& cfg) {
  std::string out;
  for (const auto& t : compile(cfg)) {
    if (t.label.is_sys_high()) continue;
    const auto e = t.element();
    out += class_name(t.label) + ":\\\n        :label=mls/" + format_element(Element{RangedElement{e, e, e}}) + ":\n";
  }
  return out;
}

}  // namespace macpol::cw
