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

#include "patternmine/service.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <functional>
#include <utility>

namespace patternmine {
namespace {

using Handler = std::function<Json(const httplib::Request&)>;

Json error_body(std::string_view code, std::string_view message) {
  return Json{{"error", {{"code", code}, {"message", message}}}};
}

void reply_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

// Runs `fn` and maps domain errors onto status codes.
void guarded(httplib::Response& res, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    reply_json(res, http_status_for(e.code()), error_body(to_string(e.code()), e.detail()));
  } catch (const Json::exception& e) {
    reply_json(res, 422, error_body("InvalidArgument", e.what()));
  } catch (const std::exception& e) {
    reply_json(res, 500, error_body("Internal", e.what()));
  }
}

Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

std::string str_field(const Json& j, const char* key, bool required = true) {
  if (!j.is_object() || !j.contains(key) || j[key].is_null()) {
    if (required) throw Error(ErrorCode::kInvalidArgument, std::string("missing field '") + key + "'");
    return {};
  }
  if (!j[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

std::string param(const httplib::Request& req, const char* name) {
  auto it = req.path_params.find(name);
  return it == req.path_params.end() ? std::string() : it->second;
}

Json artifacts_of(const Session& s, StepId step) {
  switch (step) {
    case StepId::kIdentifyExamples: return {{"known_uses", s.known_uses}};
    case StepId::kExtractSolutions: return {{"solutions", s.solutions}};
    case StepId::kDefineProblems: return {{"problems", s.problems}};
    case StepId::kDistillPatterns: return {{"patterns", s.patterns}};
    case StepId::kIdentifyAffordances: return {{"registry", s.registry}};
    case StepId::kRelateAffordances: return {{"matrix", s.matrix}};
    case StepId::kRefine:
      return {{"patterns", s.patterns}, {"missing_suggestions", s.missing_suggestions}};
    case StepId::kConsolidate: return {{"patterns", s.patterns}, {"stories", s.stories}};
  }
  return Json::object();
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownPattern:
    case ErrorCode::kUnknownKnownUse:
      return 404;
    case ErrorCode::kOutOfOrder:
    case ErrorCode::kNotAwaitingReview:
    case ErrorCode::kNeverRun:
    case ErrorCode::kDuplicateName:
      return 409;
    case ErrorCode::kProviderError:
    case ErrorCode::kReplayMiss:
      return 502;
    case ErrorCode::kIoError:
    case ErrorCode::kConfigError:
      return 500;
    default:
      return 422;
  }
}

Json step_view(const Session& s, StepId step) {
  const StepRecord& r = s.step(step);
  Json j = {{"step", to_string(step)},
            {"status", to_string(r.status)},
            {"runs", r.runs},
            {"raw_response", r.raw_response},
            {"diagnostics", r.diagnostics},
            {"failure", r.failure}};
  j["artifacts"] = artifacts_of(s, step);
  return j;
}

Json steps_view(const Session& s) {
  Json steps = Json::array();
  for (StepId step : kAllSteps) {
    const StepRecord& r = s.step(step);
    steps.push_back({{"step", to_string(step)},
                     {"status", to_string(r.status)},
                     {"runs", r.runs},
                     {"failure", r.failure}});
  }
  return {{"cursor", to_string(s.cursor)}, {"complete", s.complete}, {"steps", steps}};
}

void install_routes(httplib::Server& server, Workbench& wb) {
  auto json_route = [](int ok_status, Handler h) {
    return [ok_status, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply_json(res, ok_status, h(req)); });
    };
  };
  auto session_json = [](const Session& s) { return Json(s); };

  server.Get("/api/health", json_route(200, [](const httplib::Request&) {
               return Json{{"status", "ok"}};
             }));

  server.Get("/api/sessions", json_route(200, [&wb](const httplib::Request&) {
               return Json{{"sessions", wb.list_sessions()}};
             }));

  server.Post("/api/sessions", json_route(201, [&wb, session_json](const httplib::Request& req) {
                Json b = body_of(req);
                return session_json(wb.create(str_field(b, "id"), str_field(b, "title", false)));
              }));

  server.Get("/api/sessions/:id", json_route(200, [&wb](const httplib::Request& req) {
               return Json(wb.get(param(req, "id")));
             }));

  server.Post("/api/sessions/:id/examples", json_route(200, [&wb](const httplib::Request& req) {
                Json b = body_of(req);
                std::vector<KnownUse> uses;
                if (b.contains("examples")) {
                  uses = b["examples"].get<std::vector<KnownUse>>();
                } else {
                  uses.push_back(b.get<KnownUse>());
                }
                return Json(wb.add_examples(param(req, "id"), std::move(uses)));
              }));

  server.Get("/api/sessions/:id/steps", json_route(200, [&wb](const httplib::Request& req) {
               return steps_view(wb.get(param(req, "id")));
             }));

  server.Get("/api/sessions/:id/steps/:step", json_route(200, [&wb](const httplib::Request& req) {
               StepId step = parse_step_id(param(req, "step"));
               return step_view(wb.get(param(req, "id")), step);
             }));

  server.Post("/api/sessions/:id/steps/:step/:action",
              json_route(200, [&wb](const httplib::Request& req) {
                std::string id = param(req, "id");
                StepId step = parse_step_id(param(req, "step"));
                std::string action = param(req, "action");
                Session s;
                if (action == "run") {
                  s = wb.run(id, step);
                } else if (action == "approve") {
                  s = wb.approve(id, step);
                } else if (action == "rerun") {
                  s = wb.rerun(id, step);
                } else {
                  throw Error(ErrorCode::kInvalidArgument, "unknown step action '" + action + "'");
                }
                return Json{{"step", step_view(s, step)}, {"session", s}};
              }));

  server.Patch("/api/sessions/:id/patterns/:name",
               json_route(200, [&wb](const httplib::Request& req) {
                 std::string id = param(req, "id");
                 std::string name = param(req, "name");
                 Json b = body_of(req);
                 Origin actor = b.contains("actor") ? parse_origin(str_field(b, "actor"))
                                                    : Origin::kHuman;
                 if (b.contains("fields")) {
                   if (!b["fields"].is_object()) {
                     throw Error(ErrorCode::kInvalidArgument, "'fields' must be an object");
                   }
                   // Apply as one script so a bad field leaves nothing half-edited.
                   Json ops = Json::array();
                   std::string current = name;
                   for (auto& [field, text] : b["fields"].items()) {
                     ops.push_back({{"op", "edit"}, {"pattern", current}, {"field", field},
                                    {"text", text}, {"actor", to_string(actor)}});
                     if (field == "name" && text.is_string()) current = text.get<std::string>();
                   }
                   return Json(wb.curate(id, ops));
                 }
                 return Json(wb.edit(id, name, str_field(b, "field"), str_field(b, "text"), actor));
               }));

  server.Post("/api/sessions/:id/patterns/:name/expand",
              json_route(200, [&wb](const httplib::Request& req) {
                return Json(wb.expand(param(req, "id"), param(req, "name")));
              }));

  server.Post("/api/sessions/:id/rename", json_route(200, [&wb](const httplib::Request& req) {
                Json b = body_of(req);
                return Json(wb.rename(param(req, "id"), str_field(b, "old"), str_field(b, "new"),
                                      str_field(b, "reason", false)));
              }));

  server.Post("/api/sessions/:id/drop", json_route(200, [&wb](const httplib::Request& req) {
                Json b = body_of(req);
                return Json(
                    wb.drop(param(req, "id"), str_field(b, "name"), str_field(b, "reason", false)));
              }));

  server.Post("/api/sessions/:id/move", json_route(200, [&wb](const httplib::Request& req) {
                Json b = body_of(req);
                return Json(
                    wb.move(param(req, "id"), str_field(b, "name"), str_field(b, "before", false)));
              }));

  server.Post("/api/sessions/:id/curate", json_route(200, [&wb](const httplib::Request& req) {
                std::vector<std::string> log;
                Session s = wb.curate(param(req, "id"), body_of(req), &log);
                return Json{{"log", log}, {"session", s}};
              }));

  server.Get("/api/sessions/:id/matrix", json_route(200, [&wb](const httplib::Request& req) {
               Session s = wb.get(param(req, "id"));
               return Json{{"registry", s.registry}, {"matrix", s.matrix}};
             }));

  server.Get("/api/sessions/:id/stories", json_route(200, [&wb](const httplib::Request& req) {
               return Json{{"stories", wb.get(param(req, "id")).stories}};
             }));

  server.Post("/api/sessions/:id/stories/:known_use",
              json_route(200, [&wb](const httplib::Request& req) {
                return Json(wb.story(param(req, "id"), param(req, "known_use")));
              }));

  server.Get("/api/sessions/:id/transcript", json_route(200, [&wb](const httplib::Request& req) {
               return Json(wb.get(param(req, "id")).transcript);
             }));

  server.Get("/api/sessions/:id/validation", json_route(200, [&wb](const httplib::Request& req) {
               return Json(wb.validate(param(req, "id")));
             }));

  server.Post("/api/sessions/:id/missing-check",
              json_route(200, [&wb](const httplib::Request& req) {
                return Json(wb.missing_check(param(req, "id")));
              }));

  server.Post("/api/sessions/:id/summary", json_route(200, [&wb](const httplib::Request& req) {
                return Json(wb.summarize(param(req, "id")));
              }));

  server.Get("/api/sessions/:id/documents/:kind",
             [&wb](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 DocumentKind kind = parse_document_kind(param(req, "kind"));
                 std::string subject =
                     req.has_param("subject") ? req.get_param_value("subject") : std::string();
                 RenderedDocument doc = wb.render(param(req, "id"), kind, subject);
                 res.status = 200;
                 res.set_content(doc.body, "text/markdown; charset=utf-8");
               });
             });
}

void serve(Workbench& wb, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, wb);
  if (!server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kConfigError,
                "cannot listen on " + host + ":" + std::to_string(port));
  }
  server.listen_after_bind();
}

}  // namespace patternmine
