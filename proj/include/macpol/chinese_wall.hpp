#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "macpol/label.hpp"

namespace macpol::cw {

// N industries (conflict-of-interest classes) with C companies each.
struct Config {
  std::uint32_t industries = 1;
  std::uint32_t companies = 1;
};

// An N-position vector over companies and bottom (public information), or
// the distinguished SYSHIGH top. Positions hold 1..C, or kBottom.
class Label {
 public:
  static constexpr std::uint32_t kBottom = 0;

  Label() = default;
  explicit Label(std::vector<std::uint32_t> entries) : entries_(std::move(entries)) {}

  static Label bottom(std::size_t n) { return Label(std::vector<std::uint32_t>(n, kBottom)); }
  static Label sys_high() {
    Label l;
    l.sys_high_ = true;
    return l;
  }

  bool is_sys_high() const { return sys_high_; }
  std::size_t size() const { return entries_.size(); }
  std::uint32_t operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  // Number of non-bottom positions.
  std::size_t level() const;
  bool fits(const Config& cfg) const;

  bool operator==(const Label&) const = default;

 private:
  std::vector<std::uint32_t> entries_;
  bool sys_high_ = false;
};

// "[1,bot,2]" or "SYSHIGH".
std::string to_string(const Label& l);
// Login class name, e.g. "cw_1_bot"; "cw_syshigh" for the top.
std::string class_name(const Label& l);

// Compiled form of one lattice node.
struct Triplet {
  Grade grade;
  CompartmentSet compartments;
  Label label;

  PolicyElement element() const { return {grade, compartments}; }
  bool operator==(const Triplet&) const = default;
};

struct Feasibility {
  std::uint64_t compartments_needed = 0;                    // C*N
  boost::multiprecision::cpp_int login_classes_needed = 0;  // (C+1)^N
  std::uint64_t grades_needed = 0;                          // N+1
  bool feasible = false;                                    // C*N < 256
};

// Throw LengthMismatch when the vectors differ in length.
bool dominates(const Label& l1, const Label& l2);
// Positions agree or one side is bottom. SYSHIGH has no vector form and is
// rejected with std::invalid_argument.
bool compatible(const Label& l1, const Label& l2);
// Position-wise: l1[k] unless bottom, else l2[k]. Throws IncompatibleLabels.
Label join(const Label& l1, const Label& l2);

// Every vector in {bottom, 1..C}^N followed by SYSHIGH. Vectors come in
// ascending level; within a level, lexicographic with bottom after every
// company, so level-1 nodes are industry-major, company-minor.
std::vector<Label> generate_lattice(const Config& cfg);

Feasibility feasibility(const Config& cfg);

// One triplet per lattice node, in generate_lattice order. Throws
// InfeasibleConfig when the compartment budget is exceeded and
// std::length_error when the lattice is too large to materialise.
std::vector<Triplet> compile(const Config& cfg);

// "mls/20:1+3", "mls/low", "mls/high:1+2+3+4".
std::string triplet_to_label(const Triplet& t);

// Tab-separated: CW label, grade, compartments ("-" when empty).
std::string format_table(const std::vector<Triplet>& triplets);

// Move a subject up the lattice after it touches `company` of `industry`
// (both 1-based). Throws WallViolation on a conflict of interest.
Label progress(const Label& current, std::uint32_t industry, std::uint32_t company);

// login.conf stanzas, one per node except SYSHIGH.
std::string emit_login_classes(const Config& cfg);

}  // namespace macpol::cw
