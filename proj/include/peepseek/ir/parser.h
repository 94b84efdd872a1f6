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

#ifndef PEEPSEEK_IR_PARSER_H
#define PEEPSEEK_IR_PARSER_H

#include <string>
#include <string_view>

#include "peepseek/ir/ir.h"
#include "peepseek/support/result.h"

namespace peepseek::ir {

struct ParseError {
  unsigned line = 0;
  unsigned column = 0;
  std::string message;
  std::string source_line;

  /// LLVM-style diagnostic: `<file>:L:C: error: msg`, the offending line and
  /// a caret under the column.
  std::string render(std::string_view file = "<input>") const;
};

struct ParseOptions {
  /// Strict mode mirrors what the LLVM reader rejects beyond the grammar:
  /// unknown opcodes, uses of undefined values, and use/definition type
  /// mismatches. Corpus ingestion runs non-strict so unfamiliar instructions
  /// become opaque instead of aborting the file.
  bool strict = false;
};

Result<Module, ParseError> parse_module(std::string_view text, ParseOptions options = {});

} // namespace peepseek::ir

#endif // PEEPSEEK_IR_PARSER_H
