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

#ifndef PEEPSEEK_SUPPORT_TOML_H
#define PEEPSEEK_SUPPORT_TOML_H

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "peepseek/support/result.h"

namespace peepseek::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, int64_t, double, bool, Array> data;
  unsigned line = 0;
};

/// Keys per table; the root table is "".
using Document = std::map<std::string, std::map<std::string, Value>>;

struct Error {
  unsigned line = 0;
  std::string message;

  std::string render() const { return "line " + std::to_string(line) + ": " + message; }
};

/// The subset config files use: [table] headers, bare or quoted keys,
/// basic and literal strings, integers (with _ separators), floats,
/// booleans, and arrays of those (possibly spanning lines). Comments start
/// with #.
Result<Document, Error> parse(std::string_view text);

} // namespace peepseek::toml

#endif // PEEPSEEK_SUPPORT_TOML_H
