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

// One JSON file per session in a single directory. Writes go through a temp
// file and rename so a crash mid-save leaves the previous file in place.
// Mutations are serialized per session by an in-process mutex plus an
// advisory flock on "<id>.lock", so a CLI and a running service can share a
// directory.

#ifndef PATTERNMINE_STORE_H_
#define PATTERNMINE_STORE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "patternmine/file_io.h"
#include "patternmine/model.h"

namespace patternmine {

/// Throws kIoError.
void save_session(const Session& session, const std::filesystem::path& path,
                  const WriteFaultHook& hook = nullptr);

/// Throws kIoError, kSchemaMismatch, kInvariantViolation.
Session load_session(const std::filesystem::path& path);

/// Session ids are file names: 1-64 of [A-Za-z0-9_-].
bool valid_session_id(std::string_view id);

class SessionStore {
 public:
  /// Creates `dir` when missing.
  explicit SessionStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(std::string_view id) const;
  std::vector<std::string> list() const;
  bool exists(std::string_view id) const;

  /// Throws kUnknownSession.
  Session load(std::string_view id) const;

  /// Throws kDuplicateName when the id is taken, kInvalidArgument for a bad id.
  Session create(Session initial);

  /// load -> fn -> invariant check -> atomic save, under the session's lock.
  /// When fn throws nothing is written.
  Session mutate(std::string_view id, const std::function<Session(Session)>& fn);

  /// Hook for the kill-during-save test.
  void set_fault_hook(WriteFaultHook hook) { hook_ = std::move(hook); }

 private:
  std::mutex& lock_for(const std::string& id);

  std::filesystem::path dir_;
  std::mutex table_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
  WriteFaultHook hook_;
};

}  // namespace patternmine

#endif  // PATTERNMINE_STORE_H_
