// Copyright 2026 The PeepSeek Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEEPSEEK_TOOLCHAIN_PROCESS_H
#define PEEPSEEK_TOOLCHAIN_PROCESS_H

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace peepseek::toolchain {

struct ProcessResult {
  bool spawned = false;
  std::string spawn_error;
  bool timed_out = false;
  int exit_code = -1; // -1 when killed by a signal
  std::string out;
  std::string err;

  bool ok() const { return spawned && !timed_out && exit_code == 0; }
};

/// Runs argv[0] (PATH lookup applies) with stdin closed, capturing both
/// output streams. The child gets its own process group, which is killed
/// once `timeout` elapses. Concurrent calls are capped by a process-wide
/// slot limit.
ProcessResult run_process(const std::vector<std::string> &argv, std::chrono::milliseconds timeout);

/// Cap on simultaneously running children. Defaults to the CPU count.
void set_process_limit(unsigned n);
unsigned process_limit();

/// True when `program` names an executable file, directly or via PATH.
bool executable_available(const std::string &program);

/// A fresh directory under `root` (the system temp dir when empty),
/// removed on destruction unless kept.
class TempDir {
 public:
  explicit TempDir(const std::filesystem::path &root = {}, bool keep = false);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path write(const std::string &name, std::string_view contents) const;
  void keep() { keep_ = true; }

 private:
  std::filesystem::path path_;
  bool keep_;
};

std::string read_file(const std::filesystem::path &p);

} // namespace peepseek::toolchain

#endif // PEEPSEEK_TOOLCHAIN_PROCESS_H
