// Copyright 2026 The Patternmine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "patternmine/json_io.h"

#include "patternmine/error.h"

namespace patternmine {
namespace {

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it != j.end() && !it->is_null()) it->get_to(out);
}

}  // namespace

void to_json(Json& j, const KnownUse& v) {
  j = Json{{"id", v.id}, {"name", v.name}, {"narrative", v.narrative}};
  if (!v.aliases.empty()) j["aliases"] = v.aliases;
}

void from_json(const Json& j, KnownUse& v) {
  j.at("id").get_to(v.id);
  j.at("name").get_to(v.name);
  j.at("narrative").get_to(v.narrative);
  read_opt(j, "aliases", v.aliases);
}

void to_json(Json& j, const Affordance& v) {
  j = Json{{"id", v.id},
           {"component", to_string(v.component)},
           {"name", v.name},
           {"description", v.description}};
}

void from_json(const Json& j, Affordance& v) {
  j.at("id").get_to(v.id);
  v.component = parse_component(j.at("component").get<std::string>());
  j.at("name").get_to(v.name);
  read_opt(j, "description", v.description);
}

void to_json(Json& j, const Provenance& v) {
  j = Json{{"origin", to_string(v.origin)}};
  j["model_id"] = v.model_id ? Json(*v.model_id) : Json(nullptr);
  j["edited_at"] = v.edited_at;
}

void from_json(const Json& j, Provenance& v) {
  v.origin = parse_origin(j.at("origin").get<std::string>());
  v.model_id.reset();
  if (auto it = j.find("model_id"); it != j.end() && !it->is_null()) {
    v.model_id = it->get<std::string>();
  }
  read_opt(j, "edited_at", v.edited_at);
}

void to_json(Json& j, const CandidateSolution& v) {
  j = Json{{"name", v.name},
           {"description", v.description},
           {"provenance", v.provenance}};
}

void from_json(const Json& j, CandidateSolution& v) {
  j.at("name").get_to(v.name);
  read_opt(j, "description", v.description);
  read_opt(j, "provenance", v.provenance);
}

void to_json(Json& j, const ProblemStatement& v) {
  j = Json{{"solution_name", v.solution_name},
           {"raw_name", v.raw_name},
           {"text", v.text}};
}

void from_json(const Json& j, ProblemStatement& v) {
  j.at("solution_name").get_to(v.solution_name);
  read_opt(j, "raw_name", v.raw_name);
  j.at("text").get_to(v.text);
}

void to_json(Json& j, const PatternDraft& v) {
  Json uses = Json::array();
  for (const auto& u : v.known_uses) {
    uses.push_back({{"known_use_id", u.known_use_id}, {"note", u.note}});
  }
  Json edges = Json::array();
  for (const auto& e : v.resulting_context) {
    edges.push_back(
        {{"target_pattern_name", e.target_pattern_name}, {"rationale", e.rationale}});
  }
  Json prov = Json::object();
  for (const auto& [field, p] : v.provenance) prov[field] = p;
  j = Json{{"name", v.name},
           {"context", v.context},
           {"problem", v.problem},
           {"forces", v.forces},
           {"solution_statement", v.solution_statement},
           {"solution_detail", v.solution_detail},
           {"known_uses", uses},
           {"resulting_context", edges},
           {"no_successor", v.no_successor},
           {"affordance_refs", v.affordance_refs},
           {"status", to_string(v.status)},
           {"provenance", prov}};
}

void from_json(const Json& j, PatternDraft& v) {
  j.at("name").get_to(v.name);
  read_opt(j, "context", v.context);
  read_opt(j, "problem", v.problem);
  read_opt(j, "forces", v.forces);
  read_opt(j, "solution_statement", v.solution_statement);
  read_opt(j, "solution_detail", v.solution_detail);
  v.known_uses.clear();
  if (auto it = j.find("known_uses"); it != j.end()) {
    for (const auto& u : *it) {
      v.known_uses.push_back({u.at("known_use_id").get<std::string>(),
                              u.value("note", std::string())});
    }
  }
  v.resulting_context.clear();
  if (auto it = j.find("resulting_context"); it != j.end()) {
    for (const auto& e : *it) {
      v.resulting_context.push_back(
          {e.at("target_pattern_name").get<std::string>(),
           e.value("rationale", std::string())});
    }
  }
  read_opt(j, "no_successor", v.no_successor);
  read_opt(j, "affordance_refs", v.affordance_refs);
  v.status = parse_pattern_status(j.value("status", std::string("draft")));
  v.provenance.clear();
  if (auto it = j.find("provenance"); it != j.end()) {
    for (const auto& [field, p] : it->items()) {
      v.provenance[field] = p.get<Provenance>();
    }
  }
}

void to_json(Json& j, const CrossReferenceMatrix& v) {
  j = Json{{"rows", v.rows},
           {"cols", v.cols},
           {"cells", v.cells},
           {"notes", v.notes}};
}

void from_json(const Json& j, CrossReferenceMatrix& v) {
  j.at("rows").get_to(v.rows);
  j.at("cols").get_to(v.cols);
  j.at("cells").get_to(v.cells);
  j.at("notes").get_to(v.notes);
}

void to_json(Json& j, const PatternStory& v) {
  Json entries = Json::array();
  for (const auto& e : v.entries) {
    entries.push_back({{"pattern_name", e.pattern_name}, {"narrative", e.narrative}});
  }
  j = Json{{"known_use_id", v.known_use_id}, {"entries", entries}};
}

void from_json(const Json& j, PatternStory& v) {
  j.at("known_use_id").get_to(v.known_use_id);
  v.entries.clear();
  for (const auto& e : j.at("entries")) {
    v.entries.push_back({e.at("pattern_name").get<std::string>(),
                         e.value("narrative", std::string())});
  }
}

void to_json(Json& j, const RenameMap& v) {
  Json entries = Json::array();
  for (const auto& e : v.entries) {
    entries.push_back(
        {{"old_name", e.old_name}, {"new_name", e.new_name}, {"reason", e.reason}});
  }
  j = Json{{"entries", entries}};
}

void from_json(const Json& j, RenameMap& v) {
  v.entries.clear();
  for (const auto& e : j.at("entries")) {
    v.entries.push_back({e.at("old_name").get<std::string>(),
                         e.at("new_name").get<std::string>(),
                         e.value("reason", std::string())});
  }
}

void to_json(Json& j, const Diagnostic& v) {
  j = Json{{"severity", to_string(v.severity)},
           {"line_begin", v.line_begin},
           {"line_end", v.line_end},
           {"message", v.message}};
}

void from_json(const Json& j, Diagnostic& v) {
  std::string sev = j.at("severity").get<std::string>();
  if (sev != "error" && sev != "warning") {
    throw Error(ErrorCode::kInvalidArgument, "unknown severity '" + sev + "'");
  }
  v.severity = sev == "error" ? Severity::kError : Severity::kWarning;
  read_opt(j, "line_begin", v.line_begin);
  read_opt(j, "line_end", v.line_end);
  j.at("message").get_to(v.message);
}

void to_json(Json& j, const ChatMessage& v) {
  j = Json{{"role", to_string(v.role)}, {"content", v.content}};
  j["step_tag"] = v.step_tag ? Json(std::string(to_string(*v.step_tag)))
                             : Json(nullptr);
  j["part"] = v.part;
  j["timestamp"] = v.timestamp;
}

void from_json(const Json& j, ChatMessage& v) {
  v.role = parse_role(j.at("role").get<std::string>());
  j.at("content").get_to(v.content);
  v.step_tag.reset();
  if (auto it = j.find("step_tag"); it != j.end() && !it->is_null()) {
    v.step_tag = parse_step_id(it->get<std::string>());
  }
  read_opt(j, "part", v.part);
  read_opt(j, "timestamp", v.timestamp);
}

void to_json(Json& j, const Transcript& v) {
  j = Json{{"messages", v.messages},
           {"model_id", v.model_id},
           {"params",
            {{"temperature", v.params.temperature},
             {"max_output_tokens", v.params.max_output_tokens}}}};
}

void from_json(const Json& j, Transcript& v) {
  v.messages.clear();
  read_opt(j, "messages", v.messages);
  read_opt(j, "model_id", v.model_id);
  if (auto it = j.find("params"); it != j.end()) {
    read_opt(*it, "temperature", v.params.temperature);
    read_opt(*it, "max_output_tokens", v.params.max_output_tokens);
  }
}

void to_json(Json& j, const StepRecord& v) {
  j = Json{{"status", to_string(v.status)},
           {"runs", v.runs},
           {"raw_response", v.raw_response},
           {"diagnostics", v.diagnostics},
           {"failure", v.failure}};
}

void from_json(const Json& j, StepRecord& v) {
  v.status = parse_step_status(j.at("status").get<std::string>());
  read_opt(j, "runs", v.runs);
  read_opt(j, "raw_response", v.raw_response);
  v.diagnostics.clear();
  read_opt(j, "diagnostics", v.diagnostics);
  read_opt(j, "failure", v.failure);
}

void to_json(Json& j, const Session& v) {
  Json steps = Json::object();
  for (StepId s : kAllSteps) steps[std::string(to_string(s))] = v.step(s);
  Json audit = Json::array();
  for (const auto& a : v.audit) {
    audit.push_back({{"action", a.action},
                     {"subject", a.subject},
                     {"detail", a.detail},
                     {"at", a.at}});
  }
  Json expansions = Json::object();
  for (const auto& [k, body] : v.expansions) expansions[k] = body;
  j = Json{{"id", v.id},
           {"title", v.title},
           {"known_uses", v.known_uses},
           {"solutions", v.solutions},
           {"problems", v.problems},
           {"patterns", v.patterns},
           {"registry", v.registry},
           {"matrix", v.matrix},
           {"stories", v.stories},
           {"rename_map", v.rename_map},
           {"transcript", v.transcript},
           {"cursor", to_string(v.cursor)},
           {"step_status", steps},
           {"complete", v.complete},
           {"missing_suggestions", v.missing_suggestions},
           {"process_summary", v.process_summary},
           {"expansions", expansions},
           {"audit", audit}};
}

void from_json(const Json& j, Session& v) {
  v = Session{};
  j.at("id").get_to(v.id);
  read_opt(j, "title", v.title);
  read_opt(j, "known_uses", v.known_uses);
  read_opt(j, "solutions", v.solutions);
  read_opt(j, "problems", v.problems);
  read_opt(j, "patterns", v.patterns);
  read_opt(j, "registry", v.registry);
  read_opt(j, "matrix", v.matrix);
  read_opt(j, "stories", v.stories);
  read_opt(j, "rename_map", v.rename_map);
  read_opt(j, "transcript", v.transcript);
  v.cursor = parse_step_id(j.at("cursor").get<std::string>());
  if (auto it = j.find("step_status"); it != j.end()) {
    for (StepId s : kAllSteps) {
      read_opt(*it, std::string(to_string(s)).c_str(), v.step(s));
    }
  }
  read_opt(j, "complete", v.complete);
  read_opt(j, "missing_suggestions", v.missing_suggestions);
  read_opt(j, "process_summary", v.process_summary);
  if (auto it = j.find("expansions"); it != j.end()) {
    for (const auto& [k, body] : it->items()) v.expansions[k] = body.get<std::string>();
  }
  if (auto it = j.find("audit"); it != j.end()) {
    for (const auto& a : *it) {
      v.audit.push_back({a.value("action", std::string()),
                         a.value("subject", std::string()),
                         a.value("detail", std::string()),
                         a.value("at", std::string())});
    }
  }
}

void to_json(Json& j, const ValidationReport& v) {
  Json issues = Json::array();
  for (const auto& i : v.issues) {
    issues.push_back(
        {{"kind", i.kind}, {"subject", i.subject}, {"message", i.message}});
  }
  j = Json{{"issues", issues}};
}

std::string dump_session_file(const Session& session) {
  Json j{{"schema_version", kSchemaVersion}, {"session", session}};
  return j.dump(2) + "\n";
}

Session parse_session_file(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kIoError, std::string("malformed session file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer()) {
    throw Error(ErrorCode::kSchemaMismatch, "session file has no schema_version");
  }
  int version = j["schema_version"].get<int>();
  if (version != kSchemaVersion) {
    throw Error(ErrorCode::kSchemaMismatch,
                "schema_version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kSchemaVersion) + ")");
  }
  Session s;
  try {
    j.at("session").get_to(s);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("bad session document: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaMismatch, "bad session document: " + e.detail());
  }
  check_invariants(s);
  return s;
}

Session apply_curation_script(Session session, const Json& ops, const Clock& clock,
                              std::vector<std::string>* log) {
  if (!ops.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "curation script must be a JSON array");
  }
  auto str = [](const Json& op, const char* key) -> std::string {
    auto it = op.find(key);
    if (it == op.end() || !it->is_string()) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("curation op needs a string '") + key + "'");
    }
    return it->get<std::string>();
  };
  for (const auto& op : ops) {
    std::string kind = str(op, "op");
    std::string line;
    if (kind == "rename") {
      session = rename_pattern(std::move(session), str(op, "old"), str(op, "new"), clock,
                               op.value("reason", std::string()));
      line = "rename " + str(op, "old") + " -> " + str(op, "new");
    } else if (kind == "drop") {
      std::vector<std::string> removed;
      session = drop_pattern(std::move(session), str(op, "name"),
                             op.value("reason", std::string()), clock, &removed);
      line = "drop " + str(op, "name");
      for (const auto& r : removed) line += "; " + r;
    } else if (kind == "edit") {
      Origin actor = parse_origin(op.value("actor", std::string("human")));
      session = edit_field(std::move(session), str(op, "pattern"), str(op, "field"),
                           str(op, "text"), actor, clock);
      line = "edit " + str(op, "pattern") + "." + str(op, "field");
    } else if (kind == "move") {
      session = move_pattern(std::move(session), str(op, "name"),
                             op.value("before", std::string()), clock);
      line = "move " + str(op, "name");
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown curation op '" + kind + "'");
    }
    if (log) log->push_back(std::move(line));
  }
  return session;
}

}  // namespace patternmine
