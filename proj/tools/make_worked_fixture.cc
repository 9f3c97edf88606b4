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

// Regenerates fixtures/worked/replay.fixture from the hand-written responses.
//
//   make_worked_fixture [--root DIR] [--out FILE]

#include <filesystem>
#include <iostream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "worked_flow.h"
#include "patternmine/error.h"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  using namespace patternmine;
  CLI::App app{"Rebuild the worked-example replay fixture"};
  std::string root = worked::WorkedFixture::default_root().string();
  std::string out;
  app.add_option("--root", root, "fixture directory");
  app.add_option("--out", out, "output file (default: <root>/replay.fixture)");
  CLI11_PARSE(app, argc, argv);

  try {
    worked::WorkedFixture fx(root);
    fs::path scratch = fs::temp_directory_path() / ("pm-fixture-" + std::to_string(::getpid()));
    fs::remove_all(scratch);
    ReplayFixture fixture = worked::build_replay_fixture(fx, scratch);
    fs::remove_all(scratch);
    fs::path target = out.empty() ? fx.replay_path() : fs::path(out);
    save_fixture(fixture, target);
    std::cout << "wrote " << fixture.entries.size() << " entries to " << target.string() << "\n";
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
