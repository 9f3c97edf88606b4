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

#include "patternmine/store.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>

#include "patternmine/curation.h"
#include "patternmine/error.h"
#include "patternmine/json_io.h"

namespace patternmine {
namespace fs = std::filesystem;

namespace {

// Advisory whole-file lock held for the lifetime of the object.
class FileLock {
 public:
  explicit FileLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) {
      throw Error(ErrorCode::kIoError,
                  "cannot open lock " + path.string() + ": " + std::strerror(errno));
    }
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw Error(ErrorCode::kIoError, "cannot lock " + path.string());
      }
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace

void save_session(const Session& session, const fs::path& path, const WriteFaultHook& hook) {
  write_file_atomic(path, dump_session_file(session), hook);
}

Session load_session(const fs::path& path) { return parse_session_file(read_text_file(path)); }

bool valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir_.string() + ": " + ec.message());
}

fs::path SessionStore::path_for(std::string_view id) const {
  if (!valid_session_id(id)) {
    throw Error(ErrorCode::kInvalidArgument, "bad session id '" + std::string(id) + "'");
  }
  return dir_ / (std::string(id) + ".json");
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::string stem = entry.path().stem().string();
    if (valid_session_id(stem)) ids.push_back(stem);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool SessionStore::exists(std::string_view id) const {
  return valid_session_id(id) && fs::exists(path_for(id));
}

Session SessionStore::load(std::string_view id) const {
  if (!exists(id)) {
    throw Error(ErrorCode::kUnknownSession, "no session '" + std::string(id) + "'");
  }
  return load_session(path_for(id));
}

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard<std::mutex> guard(table_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

Session SessionStore::create(Session initial) {
  fs::path path = path_for(initial.id);
  std::lock_guard<std::mutex> guard(lock_for(initial.id));
  FileLock file_lock(dir_ / (initial.id + ".lock"));
  if (fs::exists(path)) {
    throw Error(ErrorCode::kDuplicateName, "session '" + initial.id + "' already exists");
  }
  check_invariants(initial);
  save_session(initial, path, hook_);
  return initial;
}

Session SessionStore::mutate(std::string_view id, const std::function<Session(Session)>& fn) {
  std::string key(id);
  fs::path path = path_for(key);
  std::lock_guard<std::mutex> guard(lock_for(key));
  FileLock file_lock(dir_ / (key + ".lock"));
  if (!fs::exists(path)) throw Error(ErrorCode::kUnknownSession, "no session '" + key + "'");
  Session next = fn(load_session(path));
  check_invariants(next);
  save_session(next, path, hook_);
  return next;
}

}  // namespace patternmine
