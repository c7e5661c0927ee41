#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "macpol/label.hpp"

namespace macpol {

enum class AccessOp { Read, Write };
enum class Verdict { Allow, Deny };

std::string_view to_string(AccessOp op);
std::string_view to_string(Verdict v);

struct PolicyVerdict {
  std::string policy;
  Verdict verdict;
  std::string rule;  // e.g. "mls-no-write-down"

  bool operator==(const PolicyVerdict&) const = default;
};

// Composed outcome: Allow iff every breakdown entry is Allow.
struct Decision {
  Verdict verdict = Verdict::Allow;
  std::vector<PolicyVerdict> breakdown;

  bool allowed() const { return verdict == Verdict::Allow; }
  void add(PolicyVerdict entry);
  void merge(const Decision& other, std::string_view stage = {});

  bool operator==(const Decision&) const = default;
};

// Which way information may legally move along the dominance order.
//   Confidentiality (mls): from dominated to dominating.
//   Integrity (biba): from dominating to dominated.
enum class FlowDirection { Upward, Downward };

FlowDirection flow_direction(std::string_view policy);

// Biba with the liberal star-property: no read-down, no write-up.
Verdict biba_decide(const PolicyElement& subject, const PolicyElement& object, AccessOp op);
// Bell-LaPadula with the liberal star-property: no read-up, no write-down.
Verdict mls_decide(const PolicyElement& subject, const PolicyElement& object, AccessOp op);

PolicyVerdict decide_policy(std::string_view policy, const PolicyElement& subject,
                            const PolicyElement& object, AccessOp op);

// Multi-policy composition over the subject's effective elements.
// Throws PolicyMismatch when the policy sets differ and ValidationError when
// the object label is ranged.
Decision decide(const MacLabel& subject, const MacLabel& object, AccessOp op);

// setpmac: every requested element must lie in the subject's range. A
// non-ranged subject element acts as the single-point range [e, e].
Decision subject_relabel(const MacLabel& current, const MacLabel& requested);

// The session label after an allowed subject_relabel: old envelopes, new
// effective points.
MacLabel with_effective(const MacLabel& current, const MacLabel& requested);

// setfmac: both the old and the new object element must lie in the
// subject's range.
Decision object_relabel(const MacLabel& subject, const MacLabel& old_label, const MacLabel& new_label);

}  // namespace macpol
