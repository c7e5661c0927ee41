#include "macpol/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "macpol/chinese_wall.hpp"
#include "macpol/decision.hpp"
#include "macpol/label.hpp"
#include "macpol/lattice.hpp"
#include "macpol/scenario.hpp"

namespace macpol::cli {

namespace {

using nlohmann::json;
using Rows = std::vector<std::vector<std::string>>;

// Left-aligned columns separated by two spaces, no trailing blanks.
std::string table(const Rows& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string join_compartments(const CompartmentSet& c, const char* sep) {
  std::string out;
  for (auto id : c) out += (out.empty() ? "" : sep) + std::to_string(id);
  return out.empty() ? "-" : out;
}

json element_json(const PolicyElement& e) {
  return {{"grade", format_grade(e.grade)}, {"compartments", std::vector<std::uint32_t>(e.compartments.begin(), e.compartments.end())}};
}

json breakdown_json(const Decision& d) {
  json rows = json::array();
  for (const auto& b : d.breakdown)
    rows.push_back({{"policy", b.policy}, {"verdict", to_string(b.verdict)}, {"rule", b.rule}});
  return rows;
}

Rows breakdown_rows(const Decision& d) {
  Rows rows{{"policy", "verdict", "rule"}};
  for (const auto& b : d.breakdown) rows.push_back({b.policy, std::string(to_string(b.verdict)), b.rule});
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string format = "text";
  std::string label;
  std::string a, b, policy;
  std::string subject, object, op = "read";
  std::uint32_t industries = 1, companies = 1;
  std::string world_file, script_file;
};

int cmd_parse(const Options& o, std::ostream& out) {
  const auto label = parse_label(o.label);
  if (o.format == "json") {
    json policies = json::array();
    for (const auto& entry : label.entries) {
      json p{{"policy", entry.policy}, {"effective", element_json(effective_of(entry.element))}, {"range", nullptr}};
      if (const auto* r = std::get_if<RangedElement>(&entry.element))
        p["range"] = {{"lo", element_json(r->lo)}, {"hi", element_json(r->hi)}};
      policies.push_back(std::move(p));
    }
    out << json{{"label", format_label(label)}, {"policies", policies}}.dump() << "\n";
    return kSuccess;
  }
  Rows rows{{"policy", "grade", "compartments", "lo", "hi"}};
  for (const auto& entry : label.entries) {
    const auto& e = effective_of(entry.element);
    const auto* r = std::get_if<RangedElement>(&entry.element);
    rows.push_back({entry.policy, format_grade(e.grade), join_compartments(e.compartments, ","),
                    r ? format_element(r->lo) : "-", r ? format_element(r->hi) : "-"});
  }
  out << format_label(label) << "\n" << table(rows);
  return kSuccess;
}

int cmd_cmp(const Options& o, std::ostream& out) {
  const auto a = parse_label(o.a);
  const auto b = parse_label(o.b);
  std::vector<std::string> names;
  if (!o.policy.empty()) {
    if (!a.find(o.policy) || !b.find(o.policy))
      throw PolicyMismatch("policy '" + o.policy + "' is missing from one of the labels");
    names.push_back(o.policy);
  } else {
    auto pa = a.policies(), pb = b.policies();
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) throw PolicyMismatch("labels cover different policies; pick one with --policy");
    names = a.policies();
  }

  json results = json::array();
  Rows rows;
  for (const auto& name : names) {
    const auto ord = compare(effective_of(a.find(name)->element), effective_of(b.find(name)->element));
    results.push_back({{"policy", name}, {"ordering", to_string(ord)}});
    rows.push_back({name + ":", std::string(to_string(ord))});
  }
  if (o.format == "json") {
    out << json{{"a", format_label(a)}, {"b", format_label(b)}, {"results", results}}.dump() << "\n";
  } else if (rows.size() == 1) {
    out << rows[0][1] << "\n";
  } else {
    out << table(rows);
  }
  return kSuccess;
}

int cmd_decide(const Options& o, std::ostream& out) {
  const auto subject = parse_label(o.subject);
  const auto object = parse_label(o.object);
  const auto op = o.op == "write" ? AccessOp::Write : AccessOp::Read;
  const auto d = decide(subject, object, op);
  if (o.format == "json") {
    out << json{{"subject", format_label(subject)},
                {"object", format_label(object)},
                {"op", to_string(op)},
                {"verdict", to_string(d.verdict)},
                {"breakdown", breakdown_json(d)}}
               .dump()
        << "\n";
  } else {
    out << to_string(d.verdict) << "\n" << table(breakdown_rows(d));
  }
  return d.allowed() ? kSuccess : kDenied;
}

int cmd_cw(const std::string& action, const Options& o, std::ostream& out, std::ostream& err) {
  const cw::Config cfg{o.industries, o.companies};
  if (action == "check") {
    const auto f = cw::feasibility(cfg);
    const auto classes = f.login_classes_needed.str();
    if (o.format == "json") {
      out << json{{"industries", cfg.industries},
                  {"companies", cfg.companies},
                  {"compartments_needed", f.compartments_needed},
                  {"compartment_limit", kMaxCompartment},
                  {"login_classes_needed", classes},
                  {"grades_needed", f.grades_needed},
                  {"feasible", f.feasible}}
                 .dump()
          << "\n";
    } else {
      out << table({{"industries", std::to_string(cfg.industries)},
                    {"companies", std::to_string(cfg.companies)},
                    {"compartments_needed", std::to_string(f.compartments_needed) + " (must be < 256)"},
                    {"login_classes_needed", classes},
                    {"grades_needed", std::to_string(f.grades_needed)},
                    {"feasible", f.feasible ? "yes" : "no"}});
    }
    return f.feasible ? kSuccess : kDenied;
  }

  try {
    if (action == "gen") {
      const auto triplets = cw::compile(cfg);
      if (o.format == "tsv") {
        out << cw::format_table(triplets);
      } else if (o.format == "json") {
        json rows = json::array();
        for (const auto& t : triplets)
          rows.push_back({{"cw", cw::to_string(t.label)},
                          {"grade", format_grade(t.grade)},
                          {"compartments", std::vector<std::uint32_t>(t.compartments.begin(), t.compartments.end())},
                          {"label", cw::triplet_to_label(t)}});
        out << json{{"industries", cfg.industries}, {"companies", cfg.companies}, {"triplets", rows}}.dump() << "\n";
      } else {
        Rows rows{{"node", "grade", "compartments", "label"}};
        for (const auto& t : triplets)
          rows.push_back({cw::to_string(t.label), format_grade(t.grade), join_compartments(t.compartments, "+"),
                          cw::triplet_to_label(t)});
        out << table(rows);
      }
    } else {
      const auto stanzas = cw::emit_login_classes(cfg);
      if (o.format == "json") {
        json classes = json::array();
        for (const auto& t : cw::compile(cfg)) {
          if (t.label.is_sys_high()) continue;
          const auto e = t.element();
          classes.push_back({{"class", cw::class_name(t.label)},
                             {"label", "mls/" + format_element(Element{RangedElement{e, e, e}})}});
        }
        out << json{{"classes", classes}}.dump() << "\n";
      } else {
        out << stanzas;
      }
    }
  } catch (const InfeasibleConfig& e) {
    err << "infeasible: " << e.what() << "\n";
    return kDenied;
  }
  return kSuccess;
}

int cmd_scenario(const Options& o, std::ostream& out) {
  auto world = load_scenario(read_file(o.world_file));
  const auto script = parse_script(read_file(o.script_file));
  const auto report = run_script(world, script);
  const auto violations = flow_check(world);
  const bool passed = report.passed() && violations.empty();

  if (o.format == "json") {
    json steps = json::array();
    for (const auto& r : report.steps) {
      json s{{"line", r.step.line},
             {"command", r.step.text},
             {"expect", r.step.expect ? json(to_string(*r.step.expect)) : json(nullptr)},
             {"actual", r.decision ? json(to_string(r.decision->verdict)) : json(nullptr)},
             {"breakdown", r.decision ? breakdown_json(*r.decision) : json::array()},
             {"error", r.error.empty() ? json(nullptr) : json(r.error)},
             {"ok", r.ok}};
      steps.push_back(std::move(s));
    }
    json flows = json::array();
    for (const auto& v : violations)
      flows.push_back({{"step", v.step}, {"origin", v.origin}, {"target", v.target}, {"policy", v.policy}});
    out << json{{"steps", steps}, {"failures", report.failures()}, {"flow_violations", flows}, {"passed", passed}}.dump()
        << "\n";
  } else {
    Rows rows{{"line", "command", "expect", "actual", "result"}};
    for (const auto& r : report.steps) {
      std::string result = r.ok ? "ok" : "FAIL";
      if (!r.error.empty()) result += ": " + r.error;
      rows.push_back({std::to_string(r.step.line), r.step.text,
                      r.step.expect ? std::string(to_string(*r.step.expect)) : "-",
                      r.decision ? std::string(to_string(r.decision->verdict)) : "-", result});
    }
    out << table(rows);
    for (const auto& v : violations)
      out << "flow violation at audit step " << v.step << ": " << v.origin << " -> " << v.target << " (" << v.policy
          << ")\n";
    out << (passed ? "PASS" : "FAIL") << ": " << report.steps.size() << " steps, " << report.failures()
        << " unmet, " << violations.size() << " flow violations\n";
  }
  return passed ? kSuccess : kDenied;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mandatory access control label and policy tool", "macpol"};
  app.require_subcommand(1);
  Options o;
  std::string cw_action;

  auto add_format = [&](CLI::App* cmd, std::vector<std::string> allowed) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
  };

  auto* parse = app.add_subcommand("parse", "Parse a label and print its canonical form");
  parse->add_option("label", o.label)->required();
  add_format(parse, {"text", "json"});

  auto* cmp = app.add_subcommand("cmp", "Compare two labels under the dominance order");
  cmp->add_option("a", o.a)->required();
  cmp->add_option("b", o.b)->required();
  cmp->add_option("--policy", o.policy, "Compare only this policy's elements");
  add_format(cmp, {"text", "json"});

  auto* dec = app.add_subcommand("decide", "Decide a read or write access");
  dec->add_option("--subject", o.subject)->required();
  dec->add_option("--object", o.object)->required();
  dec->add_option("--op", o.op)->required()->check(CLI::IsMember({"read", "write"}));
  add_format(dec, {"text", "json"});

  auto* cwc = app.add_subcommand("cw", "Chinese Wall lattice compiler");
  cwc->require_subcommand(1);
  for (const auto* name : {"gen", "check", "classes"}) {
    auto* sub = cwc->add_subcommand(name);
    sub->add_option("--industries", o.industries)->required()->check(CLI::PositiveNumber);
    sub->add_option("--companies", o.companies)->required()->check(CLI::PositiveNumber);
    add_format(sub, std::string(name) == "gen" ? std::vector<std::string>{"text", "json", "tsv"}
                                               : std::vector<std::string>{"text", "json"});
    sub->callback([&cw_action, name] { cw_action = name; });
  }

  auto* scn = app.add_subcommand("scenario", "Labeled filesystem scenarios");
  scn->require_subcommand(1);
  auto* scn_run = scn->add_subcommand("run", "Run a script against a world file");
  scn_run->add_option("world", o.world_file)->required();
  scn_run->add_option("script", o.script_file)->required();
  add_format(scn_run, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(o, out);
    if (cmp->parsed()) return cmd_cmp(o, out);
    if (dec->parsed()) return cmd_decide(o, out);
    if (cwc->parsed()) return cmd_cw(cw_action, o, out, err);
    if (scn_run->parsed()) return cmd_scenario(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace macpol::cli
