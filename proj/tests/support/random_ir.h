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

#ifndef PEEPSEEK_TESTS_RANDOM_IR_H
#define PEEPSEEK_TESTS_RANDOM_IR_H

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace peepseek::testing {

struct RandomIrOptions {
  unsigned max_instructions = 12;
  unsigned max_params = 3;
  std::vector<unsigned> widths = {8};
  bool allow_division = true;
  bool allow_intrinsics = true;
  bool allow_casts = true;
  /// Return a random value instead of the last one, so dead code and several
  /// sinks show up.
  bool random_return = true;
};

/// Seeded generator of single-block integer functions in textual IR. Every
/// function is well-typed: operands are picked among earlier values of the
/// right type or fresh constants.
class RandomIr {
 public:
  explicit RandomIr(uint64_t seed, RandomIrOptions options = {})
      : rng_(seed), options_(std::move(options)) {}

  std::string function(const std::string &name = "f") {
    values_.clear();
    std::string body;
    unsigned nparams = 1 + pick(options_.max_params);
    std::string sig;
    for (unsigned i = 0; i < nparams; ++i) {
      unsigned w = options_.widths[pick(options_.widths.size())];
      std::string v = "%p" + std::to_string(i);
      values_.push_back({v, w});
      sig += (i ? ", " : "") + ty(w) + " " + v;
    }
    unsigned n = 1 + pick(options_.max_instructions);
    for (unsigned i = 0; i < n; ++i)
      body += "  " + instruction("%v" + std::to_string(i)) + "\n";
    const Value &ret = options_.random_return ? values_[nparams + pick(n)] : values_.back();
    return "define " + ty(ret.width) + " @" + name + "(" + sig + ") {\nentry:\n" + body +
           "  ret " + ty(ret.width) + " " + ret.name + "\n}\n";
  }

  uint64_t next() { return rng_(); }
  unsigned pick(std::size_t n) { return static_cast<unsigned>(rng_() % n); }

 private:
  struct Value {
    std::string name;
    unsigned width;
  };

  static std::string ty(unsigned w) { return "i" + std::to_string(w); }

  std::string operand(unsigned w) {
    std::vector<const Value *> fits;
    for (const Value &v : values_)
      if (v.width == w)
        fits.push_back(&v);
    if (!fits.empty() && pick(4) != 0)
      return fits[pick(fits.size())]->name;
    static const int64_t kInteresting[] = {0, 1, 2, 3, 7, -1, -2, 16, 127, -128, 255};
    int64_t c = pick(3) ? kInteresting[pick(std::size(kInteresting))]
                        : static_cast<int64_t>(rng_() % 1000) - 500;
    if (w == 1)
      return (c & 1) ? "true" : "false";
    if (w < 64) {
      int64_t lo = -(int64_t(1) << (w - 1)), hi = (int64_t(1) << w) - 1;
      if (c < lo || c > hi)
        c = c & ((int64_t(1) << (w - 1)) - 1);
    }
    return std::to_string(c);
  }

  unsigned any_width() {
    if (values_.empty() || pick(3) == 0)
      return options_.widths[pick(options_.widths.size())];
    return values_[pick(values_.size())].width;
  }

  std::string instruction(const std::string &name) {
    static const char *kBin[] = {"add", "sub", "mul", "and", "or", "xor", "shl", "lshr", "ashr"};
    static const char *kDiv[] = {"udiv", "sdiv", "urem", "srem"};
    static const char *kPred[] = {"eq", "ne", "ugt", "uge", "ult", "ule", "sgt", "sge", "slt", "sle"};
    static const char *kMinMax[] = {"umin", "umax", "smin", "smax"};
    for (;;) {
      unsigned kind = pick(10);
      unsigned w = any_width();
      if (w == 1 && kind <= 5)
        kind = 4;
      std::string t = ty(w);
      switch (kind) {
      case 0: case 1: case 2: {
        std::string op = kBin[pick(std::size(kBin))];
        if (op == "shl" || op == "lshr" || op == "ashr") {
          std::string amt = pick(3) ? std::to_string(pick(w)) : operand(w);
          return def(name, w, op + " " + t + " " + operand(w) + ", " + amt);
        }
        std::string flags;
        if ((op == "add" || op == "sub" || op == "mul") && pick(4) == 0)
          flags = pick(2) ? "nsw " : "nuw ";
        return def(name, w, op + " " + flags + t + " " + operand(w) + ", " + operand(w));
      }
      case 3:
        if (!options_.allow_division)
          continue;
        return def(name, w, std::string(kDiv[pick(std::size(kDiv))]) + " " + t + " " +
                                operand(w) + ", " + operand(w));
      case 4: case 5:
        if (w == 1)
          return def(name, 1, std::string(pick(2) ? "xor" : "and") + " i1 " + operand(1) +
                                  ", " + operand(1));
        return def(name, 1, "icmp " + std::string(kPred[pick(std::size(kPred))]) + " " + t +
                                " " + operand(w) + ", " + operand(w));
      case 6:
        return def(name, w, "select i1 " + operand(1) + ", " + t + " " + operand(w) + ", " + t +
                                " " + operand(w));
      case 7: {
        if (!options_.allow_intrinsics || w == 1)
          continue;
        std::string mm = kMinMax[pick(std::size(kMinMax))];
        return def(name, w, "call " + t + " @llvm." + mm + "." + t + "(" + t + " " + operand(w) +
                                ", " + t + " " + operand(w) + ")");
      }
      case 8: case 9: {
        if (!options_.allow_casts || options_.widths.size() < 2)
          continue;
        unsigned from = options_.widths[pick(options_.widths.size())];
        unsigned to = options_.widths[pick(options_.widths.size())];
        if (from == to)
          continue;
        std::string op = from > to ? "trunc" : (pick(2) ? "zext" : "sext");
        return def(name, to, op + " " + ty(from) + " " + operand(from) + " to " + ty(to));
      }
      }
    }
  }

  std::string def(const std::string &name, unsigned w, const std::string &rhs) {
    values_.push_back({name, w});
    return name + " = " + rhs;
  }

  std::mt19937_64 rng_;
  RandomIrOptions options_;
  std::vector<Value> values_;
};

} // namespace peepseek::testing

#endif // PEEPSEEK_TESTS_RANDOM_IR_H
