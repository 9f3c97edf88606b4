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

// Session JSON vocabulary shared by the session file, the CLI and the HTTP
// service. Field names follow the model types one to one.

#ifndef PATTERNMINE_JSON_IO_H_
#define PATTERNMINE_JSON_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "patternmine/curation.h"
#include "patternmine/model.h"

namespace patternmine {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

void to_json(Json& j, const KnownUse& v);
void from_json(const Json& j, KnownUse& v);
void to_json(Json& j, const Affordance& v);
void from_json(const Json& j, Affordance& v);
void to_json(Json& j, const Provenance& v);
void from_json(const Json& j, Provenance& v);
void to_json(Json& j, const CandidateSolution& v);
void from_json(const Json& j, CandidateSolution& v);
void to_json(Json& j, const ProblemStatement& v);
void from_json(const Json& j, ProblemStatement& v);
void to_json(Json& j, const PatternDraft& v);
void from_json(const Json& j, PatternDraft& v);
void to_json(Json& j, const CrossReferenceMatrix& v);
void from_json(const Json& j, CrossReferenceMatrix& v);
void to_json(Json& j, const PatternStory& v);
void from_json(const Json& j, PatternStory& v);
void to_json(Json& j, const RenameMap& v);
void from_json(const Json& j, RenameMap& v);
void to_json(Json& j, const Diagnostic& v);
void from_json(const Json& j, Diagnostic& v);
void to_json(Json& j, const ChatMessage& v);
void from_json(const Json& j, ChatMessage& v);
void to_json(Json& j, const Transcript& v);
void from_json(const Json& j, Transcript& v);
void to_json(Json& j, const StepRecord& v);
void from_json(const Json& j, StepRecord& v);
void to_json(Json& j, const Session& v);
void from_json(const Json& j, Session& v);
void to_json(Json& j, const ValidationReport& v);

/// {"schema_version": 1, "session": {...}}, pretty-printed.
std::string dump_session_file(const Session& session);

/// Parses a session file. Throws kIoError on malformed JSON,
/// kSchemaMismatch on a missing/unknown version or wrong field types, and
/// kInvariantViolation when the loaded session breaks a model invariant.
Session parse_session_file(std::string_view text);

/// Applies a curation script: a JSON array of operations such as
/// {"op":"rename","old":"A","new":"B"}, {"op":"drop","name":"A"},
/// {"op":"edit","pattern":"A","field":"context","text":"...","actor":"human"}
/// or {"op":"move","name":"A","before":"B"}. Each applied operation is
/// described in `log` when given.
Session apply_curation_script(Session session, const Json& ops,
                              const Clock& clock,
                              std::vector<std::string>* log = nullptr);

}  // namespace patternmine

#endif  // PATTERNMINE_JSON_IO_H_
