#include "macpol/scenario.hpp"

#include <algorithm>
#include <ranges>
#include <sstream>

#include "macpol/lattice.hpp"

namespace macpol {

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::Folder: return "folder";
    case OpKind::User: return "user";
    case OpKind::Session: return "session";
    case OpKind::SetPmac: return "setpmac";
    case OpKind::SetFmac: return "setfmac";
    case OpKind::Create: return "create";
    case OpKind::Read: return "read";
    case OpKind::Write: return "write";
    case OpKind::Copy: return "copy";
    case OpKind::Move: return "move";
  }
  return "unknown";
}

std::size_t World::folder_count() const {
  return static_cast<std::size_t>(
      std::count_if(objects.begin(), objects.end(), [](const auto& kv) { return kv.second.folder; }));
}

namespace {

std::string parent_of(const std::string& path) {
  const auto slash = path.rfind('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

Session& session_of(World& w, const std::string& sid) {
  auto it = w.sessions.find(sid);
  if (it == w.sessions.end()) throw UnknownSession("unknown session '" + sid + "'");
  return it->second;
}

ObjectNode& object_of(World& w, const std::string& path) {
  auto it = w.objects.find(path);
  if (it == w.objects.end()) throw UnknownPath("no such path '" + path + "'");
  return it->second;
}

ObjectNode& file_of(World& w, const std::string& path) {
  auto& node = object_of(w, path);
  if (node.folder) throw UnknownPath("'" + path + "' is a folder, not a file");
  return node;
}

// Containing folder of a path that is about to be created.
ObjectNode& folder_for_new(World& w, const std::string& path) {
  if (w.objects.count(path)) throw AlreadyExists("'" + path + "' already exists");
  const auto parent = parent_of(path);
  if (parent.empty()) throw UnknownPath("'" + path + "' has no containing folder");
  auto& folder = object_of(w, parent);
  if (!folder.folder) throw UnknownPath("'" + parent + "' is not a folder");
  return folder;
}

// Subject label with the login envelope around the current effective point.
MacLabel ranged_subject(const World& w, const Session& s) {
  return with_effective(w.users.at(s.user).login_label, s.effective);
}

void require_point(const MacLabel& label, const std::string& field) {
  if (label.has_ranged()) throw ValidationError({{field, "ranged-object-label"}});
}

AuditRecord& record(World& w, const std::string& sid, OpKind op, std::vector<std::string> paths, Decision d) {
  AuditRecord r;
  r.step = w.audit.size();
  r.session = sid;
  r.op = op;
  r.paths = std::move(paths);
  r.decision = std::move(d);
  w.audit.push_back(std::move(r));
  return w.audit.back();
}

void absorb(std::set<std::string>& into, const std::set<std::string>& from) { into.insert(from.begin(), from.end()); }

}  // namespace

void add_folder(World& world, const std::string& path, const MacLabel& label) {
  require_point(label, path);
  if (world.objects.count(path)) throw AlreadyExists("'" + path + "' already exists");
  world.objects[path] = ObjectNode{path, label, {}, true, {}};
  record(world, {}, OpKind::Folder, {path}, {});
}

void add_user(World& world, const std::string& name, const MacLabel& login_label) {
  if (world.users.count(name)) throw AlreadyExists("user '" + name + "' already exists");
  world.users[name] = UserAccount{name, login_label};
  record(world, {}, OpKind::User, {name}, {});
}

std::string session_start(World& world, const std::string& user, std::string id) {
  auto it = world.users.find(user);
  if (it == world.users.end()) throw UnknownUser("unknown user '" + user + "'");
  if (id.empty()) {
    std::size_t n = world.sessions.size() + 1;
    while (world.sessions.count("s" + std::to_string(n))) ++n;
    id = "s" + std::to_string(n);
  }
  if (world.sessions.count(id)) throw AlreadyExists("session '" + id + "' already exists");
  world.sessions[id] = Session{id, user, it->second.login_label.effective(), {}};
  record(world, id, OpKind::Session, {user}, {});
  return id;
}

Decision setpmac(World& world, const std::string& sid, const MacLabel& requested) {
  auto& s = session_of(world, sid);
  auto d = subject_relabel(ranged_subject(world, s), requested);
  auto& r = record(world, sid, OpKind::SetPmac, {}, d);
  if (d.allowed()) {
    s.effective = requested.effective();
    r.effects.push_back({Flow::Kind::SubjectRelabel, {}, s.effective});
  }
  return d;
}

Decision setfmac(World& world, const std::string& sid, const std::string& path, const MacLabel& label) {
  auto& s = session_of(world, sid);
  auto& obj = object_of(world, path);
  auto d = object_relabel(ranged_subject(world, s), obj.label, label);
  auto& r = record(world, sid, OpKind::SetFmac, {path}, d);
  if (d.allowed()) {
    obj.label = label;
    r.effects.push_back({Flow::Kind::ObjectRelabel, path, label});
  }
  return d;
}

Decision op_read(World& world, const std::string& sid, const std::string& path) {
  auto& s = session_of(world, sid);
  auto& obj = object_of(world, path);
  auto d = decide(s.effective, obj.label, AccessOp::Read);
  auto& r = record(world, sid, OpKind::Read, {path}, d);
  if (d.allowed()) {
    s.taint.insert(path);
    absorb(s.taint, obj.taint);
    r.effects.push_back({Flow::Kind::Read, path, obj.label});
  }
  return d;
}

Decision op_write(World& world, const std::string& sid, const std::string& path) {
  auto& s = session_of(world, sid);
  auto& obj = object_of(world, path);
  auto d = decide(s.effective, obj.label, AccessOp::Write);
  auto& r = record(world, sid, OpKind::Write, {path}, d);
  if (d.allowed()) {
    absorb(obj.taint, s.taint);
    r.effects.push_back({Flow::Kind::Write, path, obj.label});
  }
  return d;
}

Decision op_create(World& world, const std::string& sid, const std::string& path) {
  auto& s = session_of(world, sid);
  auto& folder = folder_for_new(world, path);
  Decision d;
  d.merge(decide(s.effective, folder.label, AccessOp::Write), "folder");
  auto& r = record(world, sid, OpKind::Create, {path}, d);
  if (d.allowed()) {
    world.objects[path] = ObjectNode{path, s.effective, {}, false, s.user};
    r.effects.push_back({Flow::Kind::Create, path, s.effective});
    r.note = "owner=" + s.user;
  }
  return d;
}

Decision op_copy(World& world, const std::string& sid, const std::string& src, const std::string& dst) {
  auto& s = session_of(world, sid);
  auto& from = file_of(world, src);
  auto& folder = folder_for_new(world, dst);
  Decision d;
  d.merge(decide(s.effective, from.label, AccessOp::Read), "src");
  d.merge(decide(s.effective, folder.label, AccessOp::Write), "dst-folder");
  d.merge(decide(s.effective, s.effective, AccessOp::Write), "dst");
  auto& r = record(world, sid, OpKind::Copy, {src, dst}, d);
  if (d.allowed()) {
    s.taint.insert(src);
    absorb(s.taint, from.taint);
    world.objects[dst] = ObjectNode{dst, s.effective, s.taint, false, s.user};
    r.effects = {{Flow::Kind::Read, src, from.label},
                 {Flow::Kind::Create, dst, s.effective},
                 {Flow::Kind::Write, dst, s.effective}};
    r.note = "owner=" + s.user;
  }
  return d;
}

Decision op_move(World& world, const std::string& sid, const std::string& src, const std::string& dst) {
  auto& s = session_of(world, sid);
  auto& from = file_of(world, src);
  auto& dst_folder = folder_for_new(world, dst);
  auto& src_folder = object_of(world, parent_of(src));
  Decision d;
  d.merge(decide(s.effective, from.label, AccessOp::Read), "src");
  d.merge(decide(s.effective, src_folder.label, AccessOp::Write), "src-folder");
  d.merge(decide(s.effective, dst_folder.label, AccessOp::Write), "dst-folder");
  d.merge(decide(s.effective, from.label, AccessOp::Write), "dst");
  auto& r = record(world, sid, OpKind::Move, {src, dst}, d);
  if (d.allowed()) {
    const MacLabel label = from.label;
    s.taint.insert(src);
    absorb(s.taint, from.taint);
    auto owner = from.owner;
    world.objects.erase(src);
    world.objects[dst] = ObjectNode{dst, label, s.taint, false, owner};
    r.effects = {{Flow::Kind::Read, src, label},
                 {Flow::Kind::Create, dst, label},
                 {Flow::Kind::Write, dst, label},
                 {Flow::Kind::Delete, src, {}}};
    r.note = "owner=" + owner;
  }
  return d;
}

// ---- script text ------------------------------------------------------------

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start});
  }
  return out;
}

struct Shape {
  std::string_view keyword;
  OpKind op;
  std::vector<std::string_view> pattern;  // "$" = argument, "@" = label, other = literal
  bool expectable;
};

const std::vector<Shape>& shapes() {
  static const std::vector<Shape> table{
      {"folder", OpKind::Folder, {"$", "label", "@"}, false},
      {"user", OpKind::User, {"$", "label", "@"}, false},
      {"session", OpKind::Session, {"$", "user", "$"}, false},
      {"setpmac", OpKind::SetPmac, {"$", "@"}, true},
      {"setfmac", OpKind::SetFmac, {"$", "$", "@"}, true},
      {"create", OpKind::Create, {"$", "$"}, true},
      {"read", OpKind::Read, {"$", "$"}, true},
      {"write", OpKind::Write, {"$", "$"}, true},
      {"copy", OpKind::Copy, {"$", "$", "$"}, true},
      {"move", OpKind::Move, {"$", "$", "$"}, true},
  };
  return table;
}

Step parse_line(const std::vector<Token>& tokens, std::size_t line_no, std::string_view raw) {
  const auto& head = tokens.front();
  const auto shape = std::find_if(shapes().begin(), shapes().end(),
                                  [&](const Shape& s) { return s.keyword == head.text; });
  if (shape == shapes().end()) throw SyntaxError(head.column, "unknown directive '" + head.text + "'", line_no);

  Step step;
  step.line = line_no;
  step.op = shape->op;
  std::size_t i = 1;
  auto end_column = [&] { return tokens.back().column + tokens.back().text.size(); };
  for (auto part : shape->pattern) {
    if (i >= tokens.size()) throw SyntaxError(end_column(), "missing operand for '" + head.text + "'", line_no);
    const auto& tok = tokens[i++];
    if (part == "$") {
      step.args.push_back(tok.text);
    } else if (part == "@") {
      try {
        step.label = parse_label(tok.text);
      } catch (const SyntaxError& e) {
        throw SyntaxError(tok.column + e.position(), e.reason(), line_no);
      } catch (const ValidationError& e) {
        throw ValidationError(e.violations(), line_no);
      }
    } else if (tok.text != part) {
      throw SyntaxError(tok.column, "expected '" + std::string(part) + "'", line_no);
    }
  }
  if (i < tokens.size() && shape->expectable && tokens[i].text == "expect") {
    if (i + 1 >= tokens.size()) throw SyntaxError(end_column(), "expected 'allow' or 'deny'", line_no);
    const auto& v = tokens[i + 1];
    if (v.text == "allow") step.expect = Verdict::Allow;
    else if (v.text == "deny") step.expect = Verdict::Deny;
    else throw SyntaxError(v.column, "expected 'allow' or 'deny'", line_no);
    i += 2;
  }
  if (i < tokens.size()) throw SyntaxError(tokens[i].column, "unexpected '" + tokens[i].text + "'", line_no);

  auto text = raw.substr(0, end_column());
  step.text = std::string(text.substr(tokens.front().column));
  return step;
}

std::optional<Decision> execute(World& w, const Step& step) {
  const auto& a = step.args;
  switch (step.op) {
    case OpKind::Folder: add_folder(w, a[0], *step.label); return std::nullopt;
    case OpKind::User: add_user(w, a[0], *step.label); return std::nullopt;
    case OpKind::Session: session_start(w, a[1], a[0]); return std::nullopt;
    case OpKind::SetPmac: return setpmac(w, a[0], *step.label);
    case OpKind::SetFmac: return setfmac(w, a[0], a[1], *step.label);
    case OpKind::Create: return op_create(w, a[0], a[1]);
    case OpKind::Read: return op_read(w, a[0], a[1]);
    case OpKind::Write: return op_write(w, a[0], a[1]);
    case OpKind::Copy: return op_copy(w, a[0], a[1], a[2]);
    case OpKind::Move: return op_move(w, a[0], a[1], a[2]);
  }
  return std::nullopt;
}

}  // namespace

Script parse_script(std::string_view text) {
  Script script;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    const auto tokens = tokenize(line);
    if (!tokens.empty()) script.push_back(parse_line(tokens, line_no, line));
  }
  return script;
}

World load_scenario(std::string_view text) {
  World world;
  for (const auto& step : parse_script(text)) {
    if (step.op != OpKind::Folder && step.op != OpKind::User)
      throw SyntaxError(0, "only folder and user declarations belong in a world file", step.line);
    try {
      execute(world, step);
    } catch (const AlreadyExists& e) {
      throw ValidationError({{step.args[0], "duplicate-declaration"}}, step.line);
    } catch (const ValidationError& e) {
      throw ValidationError(e.violations(), step.line);
    }
  }
  return world;
}

std::size_t RunReport::failures() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const StepResult& r) { return !r.ok; }));
}

std::optional<std::size_t> RunReport::first_failure() const {
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (!steps[i].ok) return i;
  return std::nullopt;
}

RunReport run_script(World& world, const Script& script) {
  RunReport report;
  for (const auto& step : script) {
    StepResult result{step, std::nullopt, {}, true};
    try {
      result.decision = execute(world, step);
    } catch (const Error& e) {
      result.error = e.what();
    }
    if (!result.error.empty()) result.ok = false;
    else if (step.expect && result.decision) result.ok = *step.expect == result.decision->verdict;
    report.steps.push_back(std::move(result));
  }
  return report;
}

RunReport run_script(World& world, std::string_view script_text) {
  return run_script(world, parse_script(script_text));
}

// ---- flow verification --------------------------------------------------------

namespace {

struct Tag {
  std::string origin;
  MacLabel origin_label;
  bool relabeled = false;
};

// Keyed by origin path and the label the origin carried when read.
using TagSet = std::map<std::string, Tag>;

void add_tag(TagSet& into, const Tag& tag) {
  const auto key = tag.origin + "\n" + format_label(tag.origin_label);
  auto [it, inserted] = into.emplace(key, tag);
  if (!inserted) it->second.relabeled = it->second.relabeled && tag.relabeled;
}

void mark_relabeled(TagSet& tags) {
  for (auto& [key, tag] : tags) tag.relabeled = true;
}

// Objects carrying the equal wildcard are trusted exchange points; whatever
// passes through them is no longer tracked.
bool is_wildcard(const MacLabel& label) {
  for (const auto& entry : label.entries)
    if (effective_of(entry.element).grade.kind == Grade::Kind::Equal) return true;
  return false;
}

bool flow_allowed(std::string_view policy, const PolicyElement& origin, const PolicyElement& target) {
  return flow_direction(policy) == FlowDirection::Upward ? dominates(target, origin) : dominates(origin, target);
}

}  // namespace

std::vector<FlowViolation> flow_check(const World& world) {
  std::vector<FlowViolation> out;
  std::map<std::string, TagSet> subjects;
  std::map<std::string, TagSet> objects;

  for (const auto& rec : world.audit) {
    if (rec.op == OpKind::Session) subjects[rec.session].clear();
    for (const auto& flow : rec.effects) {
      switch (flow.kind) {
        case Flow::Kind::Read: {
          auto& s = subjects[rec.session];
          add_tag(s, {flow.path, flow.label, false});
          for (const auto& [key, tag] : objects[flow.path]) add_tag(s, tag);
          break;
        }
        case Flow::Kind::Write: {
          auto& o = objects[flow.path];
          const bool wildcard = is_wildcard(flow.label);
          for (auto tag : subjects[rec.session] | std::views::values) {
            if (!tag.relabeled) {
              for (const auto& entry : flow.label.entries) {
                const auto* origin = tag.origin_label.find(entry.policy);
                if (!origin) continue;
                if (!flow_allowed(entry.policy, effective_of(origin->element), effective_of(entry.element)))
                  out.push_back({rec.step, tag.origin, flow.path, entry.policy});
              }
            }
            tag.relabeled = tag.relabeled || wildcard;
            add_tag(o, tag);
          }
          break;
        }
        case Flow::Kind::Create: objects[flow.path].clear(); break;
        case Flow::Kind::Delete: objects.erase(flow.path); break;
        case Flow::Kind::SubjectRelabel: mark_relabeled(subjects[rec.session]); break;
        case Flow::Kind::ObjectRelabel: mark_relabeled(objects[flow.path]); break;
      }
    }
  }
  return out;
}

}  // namespace macpol
