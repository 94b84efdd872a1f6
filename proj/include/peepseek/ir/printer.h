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

#ifndef PEEPSEEK_IR_PRINTER_H
#define PEEPSEEK_IR_PRINTER_H

#include <string>

#include "peepseek/ir/ir.h"

namespace peepseek::ir {

std::string print_value(const ValueRef &value, const IrType &type);
std::string print_instruction(const Instruction &inst);

/// Canonical text: one instruction per line, two-space indent, flags in a
/// fixed order. Equal functions print byte-identically.
std::string print_function(const Function &f);

std::string print_module(const Module &m);

/// The function plus `declare` lines for every called global it does not
/// define, so external tools can read it on its own.
std::string print_standalone(const Function &f);

} // namespace peepseek::ir

#endif // PEEPSEEK_IR_PRINTER_H
