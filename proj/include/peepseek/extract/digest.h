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

#ifndef PEEPSEEK_EXTRACT_DIGEST_H
#define PEEPSEEK_EXTRACT_DIGEST_H

#include <array>
#include <compare>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "peepseek/ir/ir.h"

namespace peepseek::extract {

struct SeqDigest {
  std::array<uint8_t, 32> bytes{};

  std::string hex() const;
  static std::optional<SeqDigest> from_hex(std::string_view hex);

  auto operator<=>(const SeqDigest &) const = default;
};

/// Length-prefixed encoding of a function body: per instruction the opcode,
/// flags, predicate, callee, type arguments and operands. Locals are encoded
/// by definition position (parameters first), constants by type and exact
/// value; names, labels, attributes and metadata are left out, so
/// alpha-equivalent functions encode identically.
std::string canonical_encoding(const ir::Function &f);

/// SHA-256 of canonical_encoding(f).
SeqDigest digest(const ir::Function &f);

struct SeqDigestHash {
  std::size_t operator()(const SeqDigest &d) const {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i)
      h = (h << 8) | d.bytes[i];
    return h;
  }
};

/// Set of digests with a linearizable contains-or-insert.
class DigestSet {
 public:
  DigestSet() = default;
  DigestSet(const DigestSet &other);
  DigestSet &operator=(const DigestSet &other);

  /// Inserts `d`; returns false when it was already present.
  bool insert(const SeqDigest &d);
  bool contains(const SeqDigest &d) const;
  /// Forgets `d`, e.g. for a sequence that was never processed.
  bool erase(const SeqDigest &d);
  std::size_t size() const;

  /// Insertions since construction or the last call to take_dirty_count().
  std::size_t take_dirty_count();

  std::vector<SeqDigest> sorted() const;

  bool operator==(const DigestSet &other) const { return sorted() == other.sorted(); }

 private:
  mutable std::mutex mu_;
  std::unordered_set<SeqDigest, SeqDigestHash> set_;
  std::size_t dirty_ = 0;
};

} // namespace peepseek::extract

#endif // PEEPSEEK_EXTRACT_DIGEST_H
