#include "macpol/lattice.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace macpol {

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Equal: return "equal";
    case Ordering::Dominates: return "dominates";
    case Ordering::DominatedBy: return "dominated-by";
    case Ordering::Incomparable: return "incomparable";
  }
  return "unknown";
}

namespace {

int rank(Grade::Kind k) {
  switch (k) {
    case Grade::Kind::Low: return 0;
    case Grade::Kind::Num: return 1;
    case Grade::Kind::High: return 2;
    case Grade::Kind::Equal: break;
  }
  return 1;
}

bool grade_at_least(const Grade& a, const Grade& b) {
  if (a.kind == b.kind) return !a.is_num() || a.value >= b.value;
  return rank(a.kind) >= rank(b.kind);
}

bool low_high_pair(const Grade& a, const Grade& b) {
  using K = Grade::Kind;
  return (a.kind == K::Low && b.kind == K::High) || (a.kind == K::High && b.kind == K::Low);
}

void require_numeric(const PolicyElement& a, const PolicyElement& b) {
  if (!a.grade.is_num() || !b.grade.is_num())
    throw std::invalid_argument("bounds are defined for numeric grades only");
}

}  // namespace

bool dominates(const PolicyElement& a, const PolicyElement& b) {
  if (a.grade.kind == Grade::Kind::Equal || b.grade.kind == Grade::Kind::Equal) return true;
  if (!grade_at_least(a.grade, b.grade)) return false;
  if (low_high_pair(a.grade, b.grade)) return true;
  return std::includes(a.compartments.begin(), a.compartments.end(), b.compartments.begin(),
                       b.compartments.end());
}

Ordering compare(const PolicyElement& a, const PolicyElement& b) {
  if (a.grade.kind == Grade::Kind::Equal || b.grade.kind == Grade::Kind::Equal) return Ordering::Equal;
  const bool ab = dominates(a, b);
  const bool ba = dominates(b, a);
  if (ab && ba) return Ordering::Equal;
  if (ab) return Ordering::Dominates;
  if (ba) return Ordering::DominatedBy;
  return Ordering::Incomparable;
}

bool in_range(const PolicyElement& e, const RangedElement& r) {
  return dominates(e, r.lo) && dominates(r.hi, e);
}

PolicyElement meet(const PolicyElement& a, const PolicyElement& b) {
  require_numeric(a, b);
  PolicyElement out{Grade::num(std::min(a.grade.value, b.grade.value)), {}};
  std::set_intersection(a.compartments.begin(), a.compartments.end(), b.compartments.begin(),
                        b.compartments.end(), std::inserter(out.compartments, out.compartments.end()));
  return out;
}

PolicyElement join(const PolicyElement& a, const PolicyElement& b) {
  require_numeric(a, b);
  PolicyElement out{Grade::num(std::max(a.grade.value, b.grade.value)), a.compartments};
  out.compartments.insert(b.compartments.begin(), b.compartments.end());
  return out;
}

}  // namespace macpol
