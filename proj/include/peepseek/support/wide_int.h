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

#ifndef PEEPSEEK_SUPPORT_WIDE_INT_H
#define PEEPSEEK_SUPPORT_WIDE_INT_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace peepseek {

// Integer payloads up to 128 bits live in a single unsigned __int128.
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr unsigned kMaxIntWidth = 128;

inline constexpr u128 width_mask(unsigned width) {
  return width >= 128 ? ~u128(0) : ((u128(1) << width) - 1);
}

inline constexpr u128 truncate(u128 v, unsigned width) {
  return v & width_mask(width);
}

inline constexpr bool sign_bit(u128 v, unsigned width) {
  return (v >> (width - 1)) & 1;
}

inline constexpr i128 to_signed(u128 v, unsigned width) {
  if (width < 128 && sign_bit(v, width))
    v |= ~width_mask(width);
  return static_cast<i128>(v);
}

inline constexpr u128 signed_min(unsigned width) { return u128(1) << (width - 1); }
inline constexpr u128 signed_max(unsigned width) { return signed_min(width) - 1; }

std::string to_decimal(u128 v);
std::string to_signed_decimal(u128 v, unsigned width);
std::string to_hex(u128 v, unsigned width);

/// Parses an optionally negative decimal literal into a `width`-bit pattern.
/// Returns nullopt when the literal does not fit (no silent truncation):
/// positive values must be < 2^width, negative ones >= -2^(width-1).
std::optional<u128> parse_int_literal(std::string_view text, unsigned width);

/// splitmix64 finalizer; the building block for all seeded sampling.
inline constexpr uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

} // namespace peepseek

#endif // PEEPSEEK_SUPPORT_WIDE_INT_H
