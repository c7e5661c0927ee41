#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "macpol/decision.hpp"
#include "macpol/label.hpp"

namespace macpol {

// A folder or file. Files live at "<folder>/<name>".
struct ObjectNode {
  std::string path;
  MacLabel label;               // never ranged
  std::set<std::string> taint;  // paths of past read sources
  bool folder = false;
  std::string owner;            // DAC metadata only; not enforced
};

struct UserAccount {
  std::string name;
  MacLabel login_label;
};

struct Session {
  std::string id;
  std::string user;
  MacLabel effective;  // non-ranged, inside the user's login envelope
  std::set<std::string> taint;
};

enum class OpKind { Folder, User, Session, SetPmac, SetFmac, Create, Read, Write, Copy, Move };

std::string_view to_string(OpKind op);

// One information-carrying effect of an allowed operation. `label` is the
// object's label at that moment, or the new label for relabels.
struct Flow {
  enum class Kind { Read, Write, Create, Delete, SubjectRelabel, ObjectRelabel };

  Kind kind;
  std::string path;
  MacLabel label;
};

struct AuditRecord {
  std::size_t step = 0;
  std::string session;
  OpKind op = OpKind::Read;
  std::vector<std::string> paths;
  Decision decision;
  std::vector<Flow> effects;  // empty when denied
  std::string note;
};

struct World {
  std::map<std::string, ObjectNode> objects;
  std::map<std::string, UserAccount> users;
  std::map<std::string, Session> sessions;
  std::vector<AuditRecord> audit;

  std::size_t folder_count() const;
};

void add_folder(World& world, const std::string& path, const MacLabel& label);
void add_user(World& world, const std::string& name, const MacLabel& login_label);

// Returns the session id; generates "s<N>" when `id` is empty.
std::string session_start(World& world, const std::string& user, std::string id = {});

// Denials are returned and audited, never thrown. Unknown sessions and paths
// throw before anything is recorded.
Decision setpmac(World& world, const std::string& sid, const MacLabel& requested);
Decision setfmac(World& world, const std::string& sid, const std::string& path, const MacLabel& label);

Decision op_read(World& world, const std::string& sid, const std::string& path);
Decision op_write(World& world, const std::string& sid, const std::string& path);
Decision op_create(World& world, const std::string& sid, const std::string& path);
// read(src), create(dst) at the session label, write(dst).
Decision op_copy(World& world, const std::string& sid, const std::string& src, const std::string& dst);
// Like copy but dst keeps src's label, and src is deleted.
Decision op_move(World& world, const std::string& sid, const std::string& src, const std::string& dst);

// ---- scenario / script text ----------------------------------------------

struct Step {
  std::size_t line = 0;
  OpKind op = OpKind::Read;
  std::vector<std::string> args;  // sid/name/path arguments, in order
  std::optional<MacLabel> label;
  std::optional<Verdict> expect;
  std::string text;  // the source line, comment stripped
};

using Script = std::vector<Step>;

// Throws SyntaxError / ValidationError carrying the 1-based line number.
Script parse_script(std::string_view text);

// Accepts only folder and user declarations.
World load_scenario(std::string_view text);

struct StepResult {
  Step step;
  std::optional<Decision> decision;  // set for access and relabel steps
  std::string error;                 // set when the step raised
  bool ok = true;
};

struct RunReport {
  std::vector<StepResult> steps;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
  // Index into `steps` of the first unmet expectation.
  std::optional<std::size_t> first_failure() const;
};

RunReport run_script(World& world, const Script& script);
RunReport run_script(World& world, std::string_view script_text);

struct FlowViolation {
  std::size_t step = 0;
  std::string origin;  // path the information was read from
  std::string target;  // path it was written to
  std::string policy;

  bool operator==(const FlowViolation&) const = default;
};

// Replays the audit and checks every tainted write whose path from the
// origin crossed no relabel against the policies' flow directions.
std::vector<FlowViolation> flow_check(const World& world);

}  // namespace macpol
