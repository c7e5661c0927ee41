#pragma once

#include <string_view>

#include "macpol/label.hpp"

namespace macpol {

enum class Ordering { Equal, Dominates, DominatedBy, Incomparable };

std::string_view to_string(Ordering o);

// Grade rule and compartment-inclusion rule. The Equal sentinel matches
// anything; Low and High bound every grade, and skip the compartment rule
// only when compared with each other.
bool dominates(const PolicyElement& a, const PolicyElement& b);

// Four-way classification. Anything involving Equal reports Equal.
Ordering compare(const PolicyElement& a, const PolicyElement& b);

bool in_range(const PolicyElement& e, const RangedElement& r);

// Greatest lower / least upper bound. Both operands must have numeric grades;
// throws std::invalid_argument otherwise.
PolicyElement meet(const PolicyElement& a, const PolicyElement& b);
PolicyElement join(const PolicyElement& a, const PolicyElement& b);

}  // namespace macpol
