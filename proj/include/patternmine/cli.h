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

#ifndef PATTERNMINE_CLI_H_
#define PATTERNMINE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace patternmine {

/// Runs one `patternmine` command. `args` excludes the program name.
/// Returns 0 on success, 1 for domain errors (the message names the error
/// code), 2 for usage errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patternmine

#endif  // PATTERNMINE_CLI_H_
