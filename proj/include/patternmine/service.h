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

// HTTP+JSON front end over Workbench for the review UI. Routes are listed in
// README.md. Errors come back as {"error": {"code": "OutOfOrder", "message":
// "..."}} with 404 for unknown sessions, patterns and examples, 409 for step
// order conflicts, 422 for input that fails validation and 502 when the
// model provider fails.

#ifndef PATTERNMINE_SERVICE_H_
#define PATTERNMINE_SERVICE_H_

#include <string>

#include "patternmine/error.h"
#include "patternmine/json_io.h"
#include "patternmine/workbench.h"

namespace httplib {
class Server;
}

namespace patternmine {

int http_status_for(ErrorCode code);

/// {"cursor", "complete", "steps": [...]}; each step carries its status,
/// raw response, diagnostics and the artifacts it produced.
Json steps_view(const Session& session);
Json step_view(const Session& session, StepId step);

/// Registers every route on `server`. `wb` must outlive the server.
void install_routes(httplib::Server& server, Workbench& wb);

/// Blocks until the server stops. Throws kConfigError when the port cannot
/// be bound.
void serve(Workbench& wb, const std::string& host, int port);

}  // namespace patternmine

#endif  // PATTERNMINE_SERVICE_H_
