#include <doctest.h>

#include <map>

#include "macpol/chinese_wall.hpp"
#include "macpol/lattice.hpp"

using namespace macpol;
using cw::Label;

namespace {

constexpr std::uint32_t B = Label::kBottom;

Label V(std::initializer_list<std::uint32_t> e) { return Label(std::vector<std::uint32_t>(e)); }

const cw::Triplet& find(const std::vector<cw::Triplet>& ts, const Label& l) {
  for (const auto& t : ts)
    if (t.label == l) return t;
  throw std::logic_error("node not compiled");
}

// Oracle: union of every compiled set whose node the label dominates,
// straight from the definition.
CompartmentSet union_of_dominated(const std::vector<cw::Triplet>& ts, const Label& l) {
  CompartmentSet out;
  for (const auto& t : ts)
    if (!(t.label == l) && cw::dominates(l, t.label)) out.insert(t.compartments.begin(), t.compartments.end());
  return out;
}

// Oracle: singleton compartments of the level-1 nodes below a label.
CompartmentSet level_one_union(const std::vector<cw::Triplet>& ts, const Label& l) {
  CompartmentSet out;
  for (const auto& t : ts)
    if (!t.label.is_sys_high() && t.label.level() == 1 && cw::dominates(l, t.label))
      out.insert(t.compartments.begin(), t.compartments.end());
  return out;
}

}  // namespace

TEST_CASE("dominates") {
  CHECK(cw::dominates(V({1, 1, 2}), V({1, B, 2})));
  CHECK_FALSE(cw::dominates(V({1, B, 2}), V({1, 1, 2})));
  CHECK(cw::dominates(V({1, 1, B}), V({1, B, B})));
  CHECK_FALSE(cw::dominates(V({1, 1, 2}), V({1, 2, 2})));
  CHECK_FALSE(cw::dominates(V({1, 2, 2}), V({1, 1, 2})));
  for (const auto& l : cw::generate_lattice({2, 2})) {
    CHECK(cw::dominates(l, V({B, B})));
    CHECK(cw::dominates(Label::sys_high(), l));
  }
  CHECK_FALSE(cw::dominates(V({1, 1}), Label::sys_high()));
  CHECK_THROWS_AS(cw::dominates(V({1, 1}), V({1, 1, 1})), LengthMismatch);
}

TEST_CASE("compatible") {
  CHECK(cw::compatible(V({1, B, 2}), V({B, 3, 2})));
  CHECK_FALSE(cw::compatible(V({1, 1, B}), V({2, B, 1})));
  // Compatible yet not comparable: collecting by compatibility would over-collect here.
  CHECK(cw::compatible(V({1, 1, B}), V({B, 1, 2})));
  CHECK_FALSE(cw::dominates(V({1, 1, B}), V({B, 1, 2})));
  for (const auto& a : cw::generate_lattice({3, 2}))
    for (const auto& b : cw::generate_lattice({3, 2})) {
      if (a.is_sys_high() || b.is_sys_high()) continue;
      if (cw::dominates(a, b) || cw::dominates(b, a)) CHECK(cw::compatible(a, b));
    }
  CHECK_THROWS_AS(cw::compatible(V({1}), V({1, 2})), LengthMismatch);
  CHECK_THROWS_AS(cw::compatible(Label::sys_high(), V({1})), std::invalid_argument);
}

TEST_CASE("join") {
  CHECK(cw::join(V({B, 3, 1}), V({2, B, 1})) == V({2, 3, 1}));
  CHECK(cw::join(V({1, B, 2}), V({1, B, 2})) == V({1, B, 2}));
  CHECK(cw::join(V({1, B, 2}), V({B, B, B})) == V({1, B, 2}));
  CHECK_THROWS_AS(cw::join(V({1, 1, B}), V({2, B, 1})), IncompatibleLabels);
}

TEST_CASE("generate_lattice") {
  CHECK(cw::generate_lattice({2, 2}).size() == 10);
  const auto tiny = cw::generate_lattice({1, 1});
  REQUIRE(tiny.size() == 3);
  CHECK(tiny[0] == V({B}));
  CHECK(tiny[1] == V({1}));
  CHECK(tiny[2].is_sys_high());
  CHECK(cw::generate_lattice({3, 2}).size() == 28);
  for (std::uint32_t n = 1; n <= 3; ++n)
    for (std::uint32_t c = 1; c <= 3; ++c) {
      const auto nodes = cw::generate_lattice({n, c});
      std::size_t want = 1;
      for (std::uint32_t i = 0; i < n; ++i) want *= c + 1;
      CHECK(nodes.size() == want + 1);
      for (std::size_t i = 1; i + 1 < nodes.size(); ++i) CHECK(nodes[i - 1].level() <= nodes[i].level());
    }
  CHECK_THROWS_AS(cw::generate_lattice({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(cw::generate_lattice({30, 30}), std::length_error);
}

TEST_CASE("compile N=2 C=2") {
  const auto ts = cw::compile({2, 2});
  REQUIRE(ts.size() == 10);
  CHECK(find(ts, V({B, B})) == cw::Triplet{Grade::low(), {}, V({B, B})});
  CHECK(find(ts, V({1, B})).compartments == CompartmentSet{1});
  CHECK(find(ts, V({2, B})).compartments == CompartmentSet{2});
  CHECK(find(ts, V({B, 1})).compartments == CompartmentSet{3});
  CHECK(find(ts, V({B, 2})).compartments == CompartmentSet{4});
  CHECK(find(ts, V({1, B})).grade == Grade::num(10));
  CHECK(find(ts, V({1, 1})) == cw::Triplet{Grade::num(20), {1, 3}, V({1, 1})});
  CHECK(find(ts, V({2, 2})).compartments == CompartmentSet{2, 4});
  CHECK(find(ts, Label::sys_high()) == cw::Triplet{Grade::high(), {1, 2, 3, 4}, Label::sys_high()});
  CHECK(cw::triplet_to_label(find(ts, Label::sys_high())) == "mls/high:1+2+3+4");
}

TEST_CASE("compile N=3 C=2: full labels union their level-1 parts") {
  const auto ts = cw::compile({3, 2});
  const auto& full = find(ts, V({1, 1, 2}));
  CompartmentSet parts;
  for (const auto& l : {V({1, B, B}), V({B, 1, B}), V({B, B, 2})}) {
    const auto& c = find(ts, l).compartments;
    parts.insert(c.begin(), c.end());
  }
  CHECK(full.compartments == parts);
  CHECK(full.compartments == union_of_dominated(ts, full.label));
  CHECK(full.grade == Grade::num(30));
}

TEST_CASE("property: compiled sets equal brute-force unions") {
  for (std::uint32_t n = 1; n <= 3; ++n)
    for (std::uint32_t c = 1; c <= 3; ++c) {
      const auto ts = cw::compile({n, c});
      for (const auto& t : ts) {
        if (t.label.is_sys_high()) {
          CHECK(t.compartments.size() == n * c);
          continue;
        }
        CHECK(t.compartments == level_one_union(ts, t.label));
        if (t.label.level() >= 2) CHECK(t.compartments == union_of_dominated(ts, t.label));
        for (auto id : t.compartments) CHECK((id >= 1 && id <= n * c));
      }
    }
}

TEST_CASE("property: compile is an order embedding into mls dominance") {
  for (std::uint32_t n = 1; n <= 3; ++n)
    for (std::uint32_t c = 1; c <= 3; ++c) {
      const auto ts = cw::compile({n, c});
      for (const auto& a : ts)
        for (const auto& b : ts) CHECK(cw::dominates(a.label, b.label) == dominates(a.element(), b.element()));
    }
}

TEST_CASE("property: join is the least upper bound") {
  for (std::uint32_t n = 1; n <= 3; ++n)
    for (std::uint32_t c = 1; c <= 3; ++c) {
      auto nodes = cw::generate_lattice({n, c});
      nodes.pop_back();
      for (const auto& a : nodes)
        for (const auto& b : nodes) {
          if (!cw::compatible(a, b)) continue;
          const auto j = cw::join(a, b);
          CHECK(j == cw::join(b, a));
          CHECK(cw::dominates(j, a));
          CHECK(cw::dominates(j, b));
          for (const auto& u : nodes)
            if (!(u == j) && cw::dominates(j, u)) CHECK_FALSE((cw::dominates(u, a) && cw::dominates(u, b)));
        }
    }
}

TEST_CASE("triplet_to_label") {
  CHECK(cw::triplet_to_label({Grade::num(20), {1, 3}, V({1, 1})}) == "mls/20:1+3");
  CHECK(cw::triplet_to_label({Grade::low(), {}, V({B, B})}) == "mls/low");
  CHECK(cw::triplet_to_label({Grade::high(), {1, 2, 3, 4}, Label::sys_high()}) == "mls/high:1+2+3+4");
  for (const auto& t : cw::compile({3, 3})) CHECK_NOTHROW(parse_label(cw::triplet_to_label(t)));
}

TEST_CASE("feasibility") {
  const auto f = cw::feasibility({2, 2});
  CHECK(f.compartments_needed == 4);
  CHECK(f.login_classes_needed == 9);
  CHECK(f.grades_needed == 3);
  CHECK(f.feasible);

  const auto big = cw::feasibility({16, 16});
  CHECK(big.compartments_needed == 256);
  CHECK_FALSE(big.feasible);
  CHECK(big.login_classes_needed.str() == "48661191875666868481");

  CHECK(cw::feasibility({1, 254}).feasible);
  CHECK(cw::feasibility({1, 255}).feasible);
  CHECK_FALSE(cw::feasibility({1, 256}).feasible);
  CHECK_THROWS_AS(cw::compile({16, 16}), InfeasibleConfig);
  CHECK(cw::compile({1, 254}).size() == 256);
}

TEST_CASE("progress") {
  const auto mary = V({B, B});
  const auto banks_a = cw::progress(mary, 1, 1);
  CHECK(banks_a == V({1, B}));
  const auto oil_b = cw::progress(banks_a, 2, 2);
  CHECK(oil_b == V({1, 2}));
  CHECK(cw::dominates(oil_b, banks_a));
  CHECK_FALSE(cw::dominates(banks_a, oil_b));
  CHECK_THROWS_AS(cw::progress(banks_a, 1, 2), WallViolation);
  CHECK(cw::progress(banks_a, 1, 1) == banks_a);
  CHECK_THROWS_AS(cw::progress(banks_a, 3, 1), std::out_of_range);
  CHECK_THROWS_AS(cw::progress(banks_a, 0, 1), std::out_of_range);
}

TEST_CASE("emit_login_classes") {
  const auto text = cw::emit_login_classes({2, 2});
  std::size_t stanzas = 0;
  for (std::size_t p = 0; (p = text.find(":\\\n", p)) != std::string::npos; ++p) ++stanzas;
  CHECK(stanzas == 9);
  CHECK(text.find("cw_bot_bot:\\\n        :label=mls/low(low-low):\n") != std::string::npos);
  CHECK(text.find("cw_1_1:\\\n        :label=mls/20:1+3(20:1+3-20:1+3):\n") != std::string::npos);
  CHECK(text.find("syshigh") == std::string::npos);
  CHECK(text.rfind("cw_bot_bot:", 0) == 0);

  const auto tiny = cw::emit_login_classes({1, 1});
  CHECK(tiny == "cw_bot:\\\n        :label=mls/low(low-low):\ncw_1:\\\n        :label=mls/10:1(10:1-10:1):\n");
  CHECK_THROWS_AS(cw::emit_login_classes({16, 16}), InfeasibleConfig);
}

TEST_CASE("format_table") {
  const auto table = cw::format_table(cw::compile({1, 1}));
  CHECK(table == "[bot]\tlow\t-\n[1]\t10\t1\nSYSHIGH\thigh\t1\n");
}
