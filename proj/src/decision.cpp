#include "macpol/decision.hpp"

#include <algorithm>

#include "macpol/lattice.hpp"

namespace macpol {

std::string_view to_string(AccessOp op) { return op == AccessOp::Read ? "read" : "write"; }
std::string_view to_string(Verdict v) { return v == Verdict::Allow ? "allow" : "deny"; }

void Decision::add(PolicyVerdict entry) {
  if (entry.verdict == Verdict::Deny) verdict = Verdict::Deny;
  breakdown.push_back(std::move(entry));
}

void Decision::merge(const Decision& other, std::string_view stage) {
  for (auto entry : other.breakdown) {
    if (!stage.empty()) entry.rule = std::string(stage) + "/" + entry.rule;
    add(std::move(entry));
  }
  if (other.verdict == Verdict::Deny) verdict = Verdict::Deny;
}

FlowDirection flow_direction(std::string_view policy) {
  return policy == "biba" ? FlowDirection::Downward : FlowDirection::Upward;
}

Verdict biba_decide(const PolicyElement& subject, const PolicyElement& object, AccessOp op) {
  const bool ok = op == AccessOp::Read ? dominates(object, subject) : dominates(subject, object);
  return ok ? Verdict::Allow : Verdict::Deny;
}

Verdict mls_decide(const PolicyElement& subject, const PolicyElement& object, AccessOp op) {
  const bool ok = op == AccessOp::Read ? dominates(subject, object) : dominates(object, subject);
  return ok ? Verdict::Allow : Verdict::Deny;
}

PolicyVerdict decide_policy(std::string_view policy, const PolicyElement& subject,
                            const PolicyElement& object, AccessOp op) {
  const bool read = op == AccessOp::Read;
  if (policy == "biba") {
    const auto v = biba_decide(subject, object, op);
    const char* rule = v == Verdict::Allow ? (read ? "biba-read" : "biba-write")
                                           : (read ? "biba-no-read-down" : "biba-no-write-up");
    return {"biba", v, rule};
  }
  if (policy == "mls") {
    const auto v = mls_decide(subject, object, op);
    const char* rule = v == Verdict::Allow ? (read ? "mls-read" : "mls-write")
                                           : (read ? "mls-no-read-up" : "mls-no-write-down");
    return {"mls", v, rule};
  }
  throw PolicyMismatch("no decision rules for policy '" + std::string(policy) + "'");
}

namespace {

void require_same_policies(const MacLabel& a, const MacLabel& b) {
  auto pa = a.policies();
  auto pb = b.policies();
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  if (pa != pb)
    throw PolicyMismatch("policy sets differ: '" + format_label(a) + "' vs '" + format_label(b) + "'");
}

void require_point(const MacLabel& label, std::string_view rule) {
  for (const auto& entry : label.entries)
    if (is_ranged(entry.element)) throw ValidationError({{entry.policy, std::string(rule)}});
}

RangedElement envelope_of(const Element& e) {
  if (const auto* r = std::get_if<RangedElement>(&e)) return *r;
  const auto& p = std::get<PolicyElement>(e);
  return {p, p, p};
}

PolicyVerdict range_verdict(const std::string& policy, bool ok) {
  return {policy, ok ? Verdict::Allow : Verdict::Deny,
          policy + (ok ? "-relabel-in-range" : "-relabel-out-of-range")};
}

}  // namespace

Decision decide(const MacLabel& subject, const MacLabel& object, AccessOp op) {
  require_same_policies(subject, object);
  require_point(object, "ranged-object-label");
  Decision d;
  for (const auto& entry : subject.entries) {
    const auto& obj = std::get<PolicyElement>(object.find(entry.policy)->element);
    d.add(decide_policy(entry.policy, effective_of(entry.element), obj, op));
  }
  return d;
}

Decision subject_relabel(const MacLabel& current, const MacLabel& requested) {
  require_same_policies(current, requested);
  require_point(requested, "ranged-request");
  Decision d;
  for (const auto& entry : current.entries) {
    const auto& want = std::get<PolicyElement>(requested.find(entry.policy)->element);
    d.add(range_verdict(entry.policy, in_range(want, envelope_of(entry.element))));
  }
  return d;
}

MacLabel with_effective(const MacLabel& current, const MacLabel& requested) {
  require_same_policies(current, requested);
  MacLabel out = current;
  for (auto& entry : out.entries) {
    const auto& want = effective_of(requested.find(entry.policy)->element);
    if (auto* r = std::get_if<RangedElement>(&entry.element)) r->effective = want;
    else entry.element = want;
  }
  return out;
}

Decision object_relabel(const MacLabel& subject, const MacLabel& old_label, const MacLabel& new_label) {
  require_same_policies(subject, old_label);
  require_same_policies(subject, new_label);
  require_point(old_label, "ranged-object-label");
  require_point(new_label, "ranged-object-label");
  Decision d;
  for (const auto& entry : subject.entries) {
    const auto range = envelope_of(entry.element);
    const auto& from = std::get<PolicyElement>(old_label.find(entry.policy)->element);
    const auto& to = std::get<PolicyElement>(new_label.find(entry.policy)->element);
    d.add(range_verdict(entry.policy, in_range(from, range) && in_range(to, range)));
  }
  return d;
}

}  // namespace macpol
