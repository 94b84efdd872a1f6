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

#include "peepseek/support/wide_int.h"

#include <algorithm>

namespace peepseek {

std::string to_decimal(u128 v) {
  if (v == 0)
    return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_signed_decimal(u128 v, unsigned width) {
  v = truncate(v, width);
  if (width > 1 && sign_bit(v, width)) {
    return "-" + to_decimal(truncate(~v + 1, width));
  }
  return to_decimal(v);
}

std::string to_hex(u128 v, unsigned width) {
  static const char *digits = "0123456789abcdef";
  unsigned nibbles = std::max(1u, (width + 3) / 4);
  std::string out(nibbles, '0');
  for (unsigned i = 0; i < nibbles; ++i) {
    out[nibbles - 1 - i] = digits[static_cast<int>(v & 0xf)];
    v >>= 4;
  }
  return out;
}

std::optional<u128> parse_int_literal(std::string_view text, unsigned width) {
  if (width == 0 || width > kMaxIntWidth || text.empty())
    return std::nullopt;
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty())
    return std::nullopt;
  u128 magnitude = 0;
  const u128 limit = ~u128(0);
  for (char c : text) {
    if (c < '0' || c > '9')
      return std::nullopt;
    unsigned d = static_cast<unsigned>(c - '0');
    if (magnitude > (limit - d) / 10)
      return std::nullopt;
    magnitude = magnitude * 10 + d;
  }
  if (!negative) {
    if (width < 128 && magnitude > width_mask(width))
      return std::nullopt;
    return magnitude;
  }
  // i1 accepts -1 (LLVM spells true that way in some dumps).
  if (magnitude > signed_min(width))
    return std::nullopt;
  return truncate(~magnitude + 1, width);
}

} // namespace peepseek
