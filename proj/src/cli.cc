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

#include "patternmine/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>

#include "patternmine/error.h"
#include "patternmine/file_io.h"
#include "patternmine/service.h"
#include "patternmine/workbench.h"

namespace patternmine {
namespace fs = std::filesystem;

namespace {

// Artifacts of a step, one per line, as a reviewer would want to skim them.
void print_step(std::ostream& out, const Session& s, StepId step) {
  switch (step) {
    case StepId::kIdentifyExamples:
      for (const auto& k : s.known_uses) out << k.id << ": " << k.name << "\n";
      break;
    case StepId::kExtractSolutions:
      for (const auto& sol : s.solutions) out << sol.name << "\n";
      break;
    case StepId::kDefineProblems:
      for (const auto& p : s.problems) {
        out << (p.solution_name.empty() ? p.raw_name : p.solution_name) << ": " << p.text << "\n";
      }
      break;
    case StepId::kDistillPatterns:
      for (const auto& p : s.patterns) {
        if (p.live()) out << p.name << "\n";
      }
      break;
    case StepId::kIdentifyAffordances:
      for (const auto& a : s.registry) {
        out << display_name(a.component) << ": " << a.name << "\n";
      }
      break;
    case StepId::kRelateAffordances:
      out << s.matrix.rows.size() << " affordances x " << s.matrix.cols.size() << " patterns, "
          << s.matrix.true_count() << " marks\n";
      for (const auto& p : s.patterns) {
        if (!p.live()) continue;
        out << p.name << ":";
        for (std::size_t i = 0; i < p.affordance_refs.size(); ++i) {
          const Affordance* a = s.find_affordance(p.affordance_refs[i]);
          out << (i ? ", " : " ") << (a ? a->name : p.affordance_refs[i]);
        }
        out << "\n";
      }
      break;
    case StepId::kRefine:
      for (const auto& p : s.patterns) {
        if (!p.live()) continue;
        if (p.resulting_context.empty()) out << p.name << " -> (none)\n";
        for (const auto& e : p.resulting_context) {
          out << p.name << " -> " << e.target_pattern_name << "\n";
        }
      }
      for (const auto& m : s.missing_suggestions) out << "suggested: " << m << "\n";
      break;
    case StepId::kConsolidate:
      for (const auto& st : s.stories) {
        out << st.known_use_id << ":";
        for (std::size_t i = 0; i < st.entries.size(); ++i) {
          out << (i ? ", " : " ") << st.entries[i].pattern_name;
        }
        out << "\n";
      }
      break;
  }
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    err << to_string(d.severity) << ": " << d.message << "\n";
  }
}

void write_or_print(std::ostream& out, const std::string& body, const std::string& path) {
  if (path.empty() || path == "-") {
    out << body;
  } else {
    write_file_atomic(path, body);
    out << "wrote " << path << "\n";
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine a pattern language from known uses with an LLM, one reviewed step at a time.",
               "patternmine"};
  app.require_subcommand(1);

  Config config = [&] {
    try {
      return Config::from_env();
    } catch (const Error&) {
      return Config{};
    }
  }();
  std::string session_id = "default";
  std::string mode_text;
  std::string data_dir, fixture, endpoint, model, prompts;
  app.add_option("-s,--session", session_id, "Session id")->capture_default_str();
  app.add_option("--data-dir", data_dir, "Session directory (PATTERNMINE_DATA)");
  app.add_option("--mode", mode_text, "live, record or replay (PATTERNMINE_MODE)");
  app.add_option("--fixture", fixture, "Replay fixture path (PATTERNMINE_FIXTURE)");
  app.add_option("--endpoint", endpoint, "Chat-completions URL (PATTERNMINE_ENDPOINT)");
  app.add_option("--model", model, "Model id (PATTERNMINE_MODEL)");
  app.add_option("--prompts", prompts, "Prompt template directory (PATTERNMINE_PROMPTS)");

  std::string title;
  auto* init = app.add_subcommand("init", "Create a session");
  init->add_option("--title", title, "Pattern language title");

  std::vector<std::string> example_files;
  auto* add_example = app.add_subcommand("add-example", "Add known-use example files");
  add_example->add_option("files", example_files, "Plain text or front-matter markdown")
      ->required()
      ->check(CLI::ExistingFile);

  std::string step_text;
  auto* run = app.add_subcommand("run", "Run a step");
  run->add_option("step", step_text)->required();
  auto* approve = app.add_subcommand("approve", "Approve a step awaiting review");
  approve->add_option("step", step_text)->required();
  auto* rerun = app.add_subcommand("rerun", "Run a step again; later steps go stale");
  rerun->add_option("step", step_text)->required();
  auto* status = app.add_subcommand("status", "Show step statuses");

  std::string old_name, new_name, reason;
  auto* rename = app.add_subcommand("rename", "Rename a pattern");
  rename->add_option("old", old_name)->required();
  rename->add_option("new", new_name)->required();
  rename->add_option("--reason", reason);

  std::string name;
  auto* drop = app.add_subcommand("drop", "Drop a pattern");
  drop->add_option("name", name)->required();
  drop->add_option("--reason", reason);

  std::string field, text_value, text_file;
  auto* edit = app.add_subcommand("edit", "Replace one field of a pattern");
  edit->add_option("pattern", name)->required();
  edit->add_option("field", field)->required();
  auto* text_opt = edit->add_option("--text", text_value, "New text");
  edit->add_option("--file", text_file, "Read the new text from a file")
      ->excludes(text_opt)
      ->check(CLI::ExistingFile);

  std::string before;
  auto* move = app.add_subcommand("move", "Move a pattern before another one (or last)");
  move->add_option("name", name)->required();
  move->add_option("--before", before);

  std::string script;
  auto* curate = app.add_subcommand("curate", "Apply a JSON curation script");
  curate->add_option("script", script)->required()->check(CLI::ExistingFile);

  std::string known_use;
  auto* story = app.add_subcommand("story", "Generate the pattern story for one example");
  story->add_option("known-use", known_use)->required();

  auto* missing = app.add_subcommand("missing-check", "Ask which patterns are missing");
  auto* summarize = app.add_subcommand("summarize", "Ask the model to outline the process");
  auto* expand = app.add_subcommand("expand", "Expand the short form of a pattern");
  expand->add_option("pattern", name)->required();

  std::string kind_text, subject, output;
  auto* render = app.add_subcommand("render", "Render pattern, language, matrix, story, log or shortform");
  render->add_option("kind", kind_text)->required();
  render->add_option("subject", subject, "Pattern name or example id");
  render->add_option("-o,--output", output);

  auto* export_log_cmd = app.add_subcommand("export-log", "Export the conversation log");
  export_log_cmd->add_option("-o,--output", output);

  auto* export_fixture = app.add_subcommand("export-fixture", "Write the transcript as a replay fixture");
  export_fixture->add_option("path", output)->required();

  auto* validate = app.add_subcommand("validate", "Check the language for unresolved references");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!data_dir.empty()) config.data_dir = data_dir;
    if (!mode_text.empty()) config.mode = parse_provider_mode(mode_text);
    if (!fixture.empty()) config.fixture = fixture;
    if (!endpoint.empty()) config.endpoint = endpoint;
    if (!model.empty()) config.model_id = model;
    if (!prompts.empty()) config.prompt_dir = prompts;
    Workbench wb(config);
    const std::string& id = session_id;
    auto step = [&] { return parse_step_id(step_text); };

    if (*init) {
      Session s = wb.create(id, title);
      out << "created session " << s.id << " in " << wb.store().dir().string() << "\n";
    } else if (*add_example) {
      std::vector<KnownUse> uses;
      for (const auto& f : example_files) {
        uses.push_back(parse_example_file(read_text_file(f), fs::path(f).stem().string()));
      }
      Session s = wb.add_examples(id, std::move(uses));
      print_step(out, s, StepId::kIdentifyExamples);
      print_diagnostics(err, s.step(StepId::kIdentifyExamples).diagnostics);
    } else if (*run || *rerun) {
      StepId st = step();
      Session s = *run ? wb.run(id, st) : wb.rerun(id, st);
      print_step(out, s, st);
      print_diagnostics(err, s.step(st).diagnostics);
    } else if (*approve) {
      Session s = wb.approve(id, step());
      out << "approved " << to_string(step()) << "; next: "
          << (s.complete ? std::string("done") : std::string(to_string(s.cursor))) << "\n";
    } else if (*status) {
      Session s = wb.get(id);
      for (StepId st : kAllSteps) {
        out << to_string(st) << ": " << to_string(s.step(st).status);
        if (!s.step(st).failure.empty()) out << " (last run failed)";
        out << "\n";
      }
    } else if (*rename) {
      wb.rename(id, old_name, new_name, reason);
      out << "renamed " << old_name << " -> " << new_name << "\n";
    } else if (*drop) {
      wb.drop(id, name, reason);
      out << "dropped " << name << "\n";
    } else if (*edit) {
      std::string text = text_value;
      if (!text_file.empty()) {
        text = read_text_file(text_file);
      } else if (edit->count("--text") == 0) {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
      }
      wb.edit(id, name, field, text);
      out << "edited " << field << " of " << name << "\n";
    } else if (*move) {
      wb.move(id, name, before);
      out << "moved " << name << "\n";
    } else if (*curate) {
      Json ops;
      try {
        ops = Json::parse(read_text_file(script));
      } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::kInvalidArgument, "curation script is not JSON: " + std::string(e.what()));
      }
      std::vector<std::string> log;
      wb.curate(id, ops, &log);
      for (const auto& line : log) out << line << "\n";
    } else if (*story) {
      Session s = wb.story(id, known_use);
      for (const auto& st : s.stories) {
        if (st.known_use_id != known_use) continue;
        for (std::size_t i = 0; i < st.entries.size(); ++i) {
          out << (i + 1) << ". " << st.entries[i].pattern_name << "\n";
        }
      }
    } else if (*missing) {
      Session s = wb.missing_check(id);
      for (const auto& m : s.missing_suggestions) out << m << "\n";
    } else if (*summarize) {
      out << wb.summarize(id).process_summary << "\n";
    } else if (*expand) {
      Session s = wb.expand(id, name);
      for (const auto& [pattern, text] : s.expansions) {
        if (s.rename_map.resolve(name) == pattern || pattern == name) out << text << "\n";
      }
    } else if (*render) {
      write_or_print(out, wb.render(id, parse_document_kind(kind_text), subject).body, output);
    } else if (*export_log_cmd) {
      write_or_print(out, wb.render(id, DocumentKind::kLog).body, output);
    } else if (*export_fixture) {
      ReplayFixture f = record(wb.get(id).transcript, output);
      out << "wrote " << f.entries.size() << " entries to " << output << "\n";
    } else if (*validate) {
      ValidationReport report = wb.validate(id);
      for (const auto& issue : report.issues) {
        out << issue.kind << ": " << issue.subject << ": " << issue.message << "\n";
      }
      if (!report.empty()) {
        err << "Validation: " << report.issues.size() << " issue(s)\n";
        return 1;
      }
      out << "ok\n";
    } else if (*serve_cmd) {
      out << "serving on http://" << host << ":" << port << "\n" << std::flush;
      serve(wb, host, port);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace patternmine
