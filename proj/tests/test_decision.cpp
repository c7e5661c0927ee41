#include <doctest.h>

#include <vector>

#include "macpol/decision.hpp"
#include "macpol/lattice.hpp"

using namespace macpol;

namespace {

PolicyElement el(std::string_view text) {
  return std::get<PolicyElement>(parse_label("mls/" + std::string(text)).entries[0].element);
}

MacLabel L(std::string_view text) { return parse_label(text); }

// Grades {0..3} x every subset of {1,2}.
std::vector<PolicyElement> domain() {
  std::vector<PolicyElement> out;
  for (std::uint32_t g = 0; g <= 3; ++g)
    for (unsigned mask = 0; mask < 4; ++mask) {
      PolicyElement e{Grade::num(g), {}};
      if (mask & 1u) e.compartments.insert(1);
      if (mask & 2u) e.compartments.insert(2);
      out.push_back(e);
    }
  return out;
}

}  // namespace

TEST_CASE("biba_decide") {
  CHECK(biba_decide(el("10"), el("2"), AccessOp::Read) == Verdict::Deny);
  CHECK(biba_decide(el("10"), el("2"), AccessOp::Write) == Verdict::Allow);
  CHECK(biba_decide(el("2"), el("10"), AccessOp::Read) == Verdict::Allow);

  // Truth table against plain integer comparison.
  for (std::uint32_t s : {2u, 5u, 10u})
    for (std::uint32_t o : {2u, 5u, 10u}) {
      CHECK((biba_decide(el(std::to_string(s)), el(std::to_string(o)), AccessOp::Read) == Verdict::Allow) == (o >= s));
      CHECK((biba_decide(el(std::to_string(s)), el(std::to_string(o)), AccessOp::Write) == Verdict::Allow) == (s >= o));
    }
}

TEST_CASE("mls_decide") {
  CHECK(mls_decide(el("100"), el("low"), AccessOp::Write) == Verdict::Deny);
  CHECK(mls_decide(el("low"), el("50"), AccessOp::Read) == Verdict::Deny);
  CHECK(mls_decide(el("50:2"), el("50:2"), AccessOp::Read) == Verdict::Allow);
  CHECK(mls_decide(el("50:1"), el("50:2"), AccessOp::Read) == Verdict::Deny);
}

TEST_CASE("decide composes policies") {
  const auto john = L("biba/10(10-10),mls/100(100-100)");

  const auto read = decide(john, L("biba/10,mls/low"), AccessOp::Read);
  CHECK(read.allowed());
  REQUIRE(read.breakdown.size() == 2);

  const auto write = decide(john, L("biba/2,mls/low"), AccessOp::Write);
  CHECK(write.verdict == Verdict::Deny);
  REQUIRE(write.breakdown.size() == 2);
  CHECK(write.breakdown[0] == PolicyVerdict{"biba", Verdict::Allow, "biba-write"});
  CHECK(write.breakdown[1] == PolicyVerdict{"mls", Verdict::Deny, "mls-no-write-down"});

  const auto temp = L("biba/equal,mls/equal");
  for (auto op : {AccessOp::Read, AccessOp::Write}) {
    CHECK(decide(temp, temp, op).allowed());
    CHECK(decide(john, temp, op).allowed());
  }
}

TEST_CASE("decide errors") {
  CHECK_THROWS_AS(decide(L("biba/2"), L("biba/2,mls/low"), AccessOp::Read), PolicyMismatch);
  CHECK_THROWS_AS(decide(L("biba/2"), L("mls/2"), AccessOp::Read), PolicyMismatch);
  CHECK_THROWS_AS(decide(L("biba/2"), L("biba/2(2-2)"), AccessOp::Read), ValidationError);
  // Policy order may differ between subject and object.
  CHECK(decide(L("mls/low,biba/2"), L("biba/2,mls/low"), AccessOp::Read).allowed());
}

TEST_CASE("subject_relabel") {
  const auto jane = L("biba/5(2-10)");
  CHECK(subject_relabel(jane, L("biba/2")).allowed());
  CHECK(subject_relabel(jane, L("biba/10")).allowed());
  CHECK_FALSE(subject_relabel(L("biba/2(2-2)"), L("biba/5")).allowed());
  CHECK_FALSE(subject_relabel(L("biba/10"), L("biba/5")).allowed());
  CHECK(subject_relabel(L("biba/10"), L("biba/10")).allowed());
  CHECK_THROWS_AS(subject_relabel(jane, L("mls/2")), PolicyMismatch);
  CHECK_THROWS_AS(subject_relabel(jane, L("biba/5(2-10)")), ValidationError);

  CHECK(format_label(with_effective(jane, L("biba/2"))) == "biba/2(2-10)");
}

TEST_CASE("object_relabel") {
  const auto jane = L("biba/2(2-10)");
  CHECK(object_relabel(jane, L("biba/2"), L("biba/10")).allowed());
  CHECK_FALSE(object_relabel(L("biba/2(2-2)"), L("biba/2"), L("biba/5")).allowed());
  // Old label outside the range is denied even when the new one fits.
  CHECK_FALSE(object_relabel(L("biba/5(5-10)"), L("biba/2"), L("biba/10")).allowed());
  for (auto x : {"biba/2", "biba/5", "biba/10"}) CHECK(object_relabel(jane, L(x), L(x)).allowed());
  CHECK_THROWS_AS(object_relabel(jane, L("biba/2,mls/low"), L("biba/2")), PolicyMismatch);
}

TEST_CASE("property: biba and mls are duals") {
  for (const auto& s : domain())
    for (const auto& o : domain()) {
      CHECK(biba_decide(s, o, AccessOp::Read) == mls_decide(s, o, AccessOp::Write));
      CHECK(biba_decide(s, o, AccessOp::Write) == mls_decide(s, o, AccessOp::Read));
    }
}

TEST_CASE("property: read-then-write flows respect dominance") {
  const auto dom = domain();
  for (const auto& s : dom)
    for (const auto& src : dom)
      for (const auto& dst : dom) {
        if (mls_decide(s, src, AccessOp::Read) == Verdict::Allow && mls_decide(s, dst, AccessOp::Write) == Verdict::Allow)
          CHECK(dominates(dst, src));
        if (biba_decide(s, src, AccessOp::Read) == Verdict::Allow &&
            biba_decide(s, dst, AccessOp::Write) == Verdict::Allow)
          CHECK(dominates(src, dst));
      }
}

TEST_CASE("property: composed verdict is the conjunction of the breakdown") {
  const auto dom = domain();
  for (std::size_t i = 0; i < dom.size(); i += 3)
    for (std::size_t j = 0; j < dom.size(); ++j)
      for (auto op : {AccessOp::Read, AccessOp::Write}) {
        const MacLabel s{{{"biba", dom[i]}, {"mls", dom[j]}}};
        const MacLabel o{{{"biba", dom[j]}, {"mls", dom[i]}}};
        const auto d = decide(s, o, op);
        bool all = true;
        for (const auto& b : d.breakdown) all = all && b.verdict == Verdict::Allow;
        CHECK(d.allowed() == all);
      }
}

TEST_CASE("property: allowed subject relabels keep the envelope valid") {
  const auto dom = domain();
  for (const auto& lo : dom)
    for (const auto& hi : dom) {
      if (!dominates(hi, lo)) continue;
      const MacLabel current{{{"mls", RangedElement{lo, lo, hi}}}};
      for (const auto& want : dom) {
        const MacLabel requested{{{"mls", want}}};
        if (subject_relabel(current, requested).allowed()) CHECK(validate(with_effective(current, requested)).empty());
      }
    }
}
