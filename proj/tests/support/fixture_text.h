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

#ifndef PEEPSEEK_TESTS_FIXTURE_TEXT_H
#define PEEPSEEK_TESTS_FIXTURE_TEXT_H

#include <string>

namespace peepseek::testing {

/// Fixture text without its leading `;` comment block and the blank line
/// after it.
inline std::string without_header(const std::string &text) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ';') {
    std::size_t nl = text.find('\n', pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
  }
  if (pos > 0 && pos < text.size() && text[pos] == '\n')
    ++pos;
  return text.substr(pos);
}

} // namespace peepseek::testing

#endif // PEEPSEEK_TESTS_FIXTURE_TEXT_H
