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

#include "peepseek/extract/digest.h"

#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace peepseek::extract {

using ir::Constant;
using ir::Function;
using ir::Instruction;
using ir::IrType;
using ir::Operand;
using ir::ValueRef;

std::string SeqDigest::hex() const {
  static const char *kDigits = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

std::optional<SeqDigest> SeqDigest::from_hex(std::string_view hex) {
  if (hex.size() != 64)
    return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9')
      return c - '0';
    if (c >= 'a' && c <= 'f')
      return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
      return c - 'A' + 10;
    return -1;
  };
  SeqDigest d;
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      return std::nullopt;
    d.bytes[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return d;
}

namespace {

class Encoder {
 public:
  void field(std::string_view s) {
    uint32_t n = static_cast<uint32_t>(s.size());
    for (int i = 0; i < 4; ++i)
      out_.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
    out_.append(s);
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

std::string encode_constant(const Constant &c) {
  switch (c.kind) {
  case Constant::Kind::Int:
    return "i:" + to_decimal(c.bits);
  case Constant::Kind::Null:
    return "null";
  case Constant::Kind::Zero:
    return "zero";
  case Constant::Kind::Poison:
    return "poison";
  case Constant::Kind::Undef:
    return "undef";
  case Constant::Kind::Vector: {
    std::string s = "v:";
    for (const Constant &lane : c.lanes)
      s += encode_constant(lane) + ";";
    return s;
  }
  case Constant::Kind::Float:
    return "f:" + c.text;
  case Constant::Kind::Other:
    return "o:" + c.text;
  }
  return {};
}

} // namespace

std::string canonical_encoding(const Function &f) {
  std::map<std::string, std::size_t> position;
  Encoder enc;
  enc.field("ret:" + f.return_type.str());
  for (const ir::Param &p : f.params) {
    position.emplace(p.name, position.size());
    enc.field("param:" + p.type.str());
  }
  auto encode_value = [&](const ValueRef &v) -> std::string {
    switch (v.kind) {
    case ValueRef::Kind::Local: {
      auto it = position.find(v.name);
      return it == position.end() ? "free:" + v.name : "#" + std::to_string(it->second);
    }
    case ValueRef::Kind::Global:
      return "@" + v.name;
    case ValueRef::Kind::Constant:
      return encode_constant(v.constant);
    }
    return {};
  };
  for (const ir::BasicBlock &bb : f.blocks) {
    enc.field("block");
    // Labels are numbered too so branches between blocks stay comparable.
    position.emplace("\x01" + bb.label, position.size());
  }
  for (const ir::BasicBlock &bb : f.blocks) {
    for (const Instruction &inst : bb.instructions) {
      enc.field("op:" + inst.opcode);
      if (inst.opaque) {
        enc.field("opaque:" + inst.verbatim);
      } else {
        std::vector<std::string> flags = inst.flags;
        std::sort(flags.begin(), flags.end());
        std::string joined;
        for (const std::string &fl : flags)
          joined += fl + ",";
        enc.field("flags:" + joined);
        enc.field("pred:" + inst.predicate.value_or(""));
        enc.field("callee:" + inst.callee.value_or(""));
        for (const IrType &t : inst.type_args)
          enc.field("ty:" + t.str());
      }
      for (const Operand &op : inst.operands) {
        if (op.is_label()) {
          auto it = position.find("\x01" + op.value.name);
          enc.field("label:" + (it == position.end() ? op.value.name : std::to_string(it->second)));
          continue;
        }
        enc.field("arg:" + op.type.str());
        enc.field(encode_value(op.value));
      }
      enc.field("end");
      if (inst.result)
        position.emplace(*inst.result, position.size());
    }
  }
  return enc.take();
}

SeqDigest digest(const Function &f) {
  std::string data = canonical_encoding(f);
  SeqDigest d;
  unsigned len = 0;
  if (EVP_Digest(data.data(), data.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != d.bytes.size())
    throw std::runtime_error("SHA-256 computation failed");
  return d;
}

DigestSet::DigestSet(const DigestSet &other) {
  std::lock_guard<std::mutex> lock(other.mu_);
  set_ = other.set_;
  dirty_ = other.dirty_;
}

DigestSet &DigestSet::operator=(const DigestSet &other) {
  if (this == &other)
    return *this;
  std::scoped_lock lock(mu_, other.mu_);
  set_ = other.set_;
  dirty_ = other.dirty_;
  return *this;
}

bool DigestSet::insert(const SeqDigest &d) {
  std::lock_guard<std::mutex> lock(mu_);
  bool fresh = set_.insert(d).second;
  if (fresh)
    ++dirty_;
  return fresh;
}

bool DigestSet::erase(const SeqDigest &d) {
  std::lock_guard<std::mutex> lock(mu_);
  return set_.erase(d) != 0;
}

bool DigestSet::contains(const SeqDigest &d) const {
  std::lock_guard<std::mutex> lock(mu_);
  return set_.count(d) != 0;
}

std::size_t DigestSet::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return set_.size();
}

std::size_t DigestSet::take_dirty_count() {
  std::lock_guard<std::mutex> lock(mu_);
  return std::exchange(dirty_, 0);
}

std::vector<SeqDigest> DigestSet::sorted() const {
  std::vector<SeqDigest> out;
  {
    std::lock_guard<std::mutex> lock(mu_);
    out.assign(set_.begin(), set_.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace peepseek::extract
