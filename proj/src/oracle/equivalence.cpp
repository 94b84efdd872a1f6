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

#include "peepseek/oracle/equivalence.h"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>

namespace peepseek::oracle {

using ir::Function;

const char *to_string(EquivalenceReport::Verdict v) {
  switch (v) {
  case EquivalenceReport::Verdict::Equivalent: return "equivalent";
  case EquivalenceReport::Verdict::NotEquivalent: return "not-equivalent";
  case EquivalenceReport::Verdict::Unsupported: return "unsupported";
  case EquivalenceReport::Verdict::SignatureMismatch: return "signature-mismatch";
  }
  return "unknown";
}

namespace {

constexpr uint8_t kFills[] = {0x00, 0xFF, 0x01, 0x80, 0x7F};

/// Maps an enumeration index to concrete inputs and memory.
class InputSpace {
 public:
  InputSpace(const Program &src, const Program &tgt, const EquivalenceOptions &options)
      : params_(src.params()), seed_(options.seed) {
    reads_memory_ = src.reads_memory() || tgt.reads_memory();
    unsigned bits = 0;
    for (const Program::Slot &p : params_)
      bits += p.width * p.lanes;
    exhaustive_ = !reads_memory_ && bits <= options.exhaustive_bits;
    total_bits_ = bits;
    if (exhaustive_) {
      count_ = uint64_t(1) << bits;
      return;
    }
    count_ = options.budget;
    std::vector<u128> constants = src.constants_seen();
    constants.insert(constants.end(), tgt.constants_seen().begin(), tgt.constants_seen().end());
    special_count_ = 1;
    for (const Program::Slot &p : params_) {
      std::vector<u128> values = {0, 1, width_mask(p.width), signed_min(p.width),
                                  signed_max(p.width)};
      for (u128 c : constants)
        for (u128 v : {c - 1, c, c + 1})
          values.push_back(v);
      std::vector<u128> uniq;
      std::set<u128> seen;
      for (u128 v : values)
        if (seen.insert(truncate(v, p.width)).second)
          uniq.push_back(truncate(v, p.width));
      special_count_ = special_count_ > count_ / uniq.size() + 1 ? count_ + 1
                                                                 : special_count_ * uniq.size();
      specials_.push_back(std::move(uniq));
    }
    special_count_ = std::min(special_count_, count_);
  }

  bool exhaustive() const { return exhaustive_; }
  uint64_t count() const { return count_; }

  /// Writes input `k` into both register files and selects memory.
  void load(uint64_t k, const Program &src, std::vector<u128> &rs, const Program &tgt,
            std::vector<u128> &rt, MemoryModel &mem) const {
    if (exhaustive_) {
      unsigned shift = total_bits_;
      for (std::size_t p = 0; p < params_.size(); ++p) {
        for (uint32_t l = 0; l < params_[p].lanes; ++l) {
          shift -= params_[p].width;
          u128 v = truncate(u128(k) >> shift, params_[p].width);
          rs[src.params()[p].offset + l] = v;
          rt[tgt.params()[p].offset + l] = v;
        }
      }
      return;
    }
    if (k < special_count_) {
      uint64_t rest = k;
      for (std::size_t p = params_.size(); p-- > 0;) {
        const auto &vals = specials_[p];
        u128 v = vals[rest % vals.size()];
        rest /= vals.size();
        for (uint32_t l = 0; l < params_[p].lanes; ++l) {
          rs[src.params()[p].offset + l] = v;
          rt[tgt.params()[p].offset + l] = v;
        }
      }
    } else {
      uint64_t lane_index = 0;
      for (std::size_t p = 0; p < params_.size(); ++p) {
        for (uint32_t l = 0; l < params_[p].lanes; ++l, ++lane_index) {
          uint64_t h = mix64(seed_ ^ mix64(k * 0x100000001b3ull + lane_index));
          u128 v = (u128(mix64(h)) << 64) | h;
          v = truncate(v, params_[p].width);
          rs[src.params()[p].offset + l] = v;
          rt[tgt.params()[p].offset + l] = v;
        }
      }
    }
    if (reads_memory_) {
      unsigned pattern = static_cast<unsigned>(k % (std::size(kFills) + 1));
      if (pattern < std::size(kFills)) {
        mem.kind = MemoryModel::Kind::Fill;
        mem.fill = kFills[pattern];
      } else {
        mem.kind = MemoryModel::Kind::Hashed;
        mem.seed = mix64(seed_ + k);
      }
    }
  }

 private:
  std::vector<Program::Slot> params_;
  uint64_t seed_;
  bool reads_memory_ = false;
  bool exhaustive_ = false;
  unsigned total_bits_ = 0;
  uint64_t count_ = 0;
  uint64_t special_count_ = 0;
  std::vector<std::vector<u128>> specials_;
};

struct Setup {
  std::optional<Program> src, tgt;
  std::optional<EquivalenceReport> early;
};

Setup prepare(const Function &src, const Function &tgt) {
  Setup s;
  EquivalenceReport r;
  bool same = src.params.size() == tgt.params.size() && src.return_type == tgt.return_type;
  for (std::size_t i = 0; same && i < src.params.size(); ++i)
    same = src.params[i].type == tgt.params[i].type;
  if (!same) {
    auto sig = [](const Function &f) {
      std::string s = "(";
      for (std::size_t i = 0; i < f.params.size(); ++i)
        s += (i ? ", " : "") + f.params[i].type.str();
      return s + ") -> " + f.return_type.str();
    };
    r.verdict = EquivalenceReport::Verdict::SignatureMismatch;
    r.detail = "source signature " + sig(src) + " differs from target signature " + sig(tgt);
    s.early = r;
    return s;
  }
  auto ps = Program::compile(src);
  auto pt = Program::compile(tgt);
  if (!ps || !pt) {
    r.verdict = EquivalenceReport::Verdict::Unsupported;
    r.detail = !ps ? ps.error().instruction : pt.error().instruction;
    s.early = r;
    return s;
  }
  s.src = std::move(ps).value();
  s.tgt = std::move(pt).value();
  return s;
}

bool same_outcome(bool ok_s, bool ok_t, const Program &src, const std::vector<u128> &rs,
                  const Program &tgt, const std::vector<u128> &rt) {
  if (!ok_s || !ok_t)
    return ok_s == ok_t;
  const Program::Slot &a = src.result(), &b = tgt.result();
  for (uint32_t l = 0; l < a.lanes; ++l)
    if (rs[a.offset + l] != rt[b.offset + l])
      return false;
  return true;
}

/// True when both sides agree on input `k`.
struct Evaluator {
  const Program &src;
  const Program &tgt;
  const InputSpace &space;
  std::vector<u128> rs, rt;
  MemoryModel mem;

  Evaluator(const Program &s, const Program &t, const InputSpace &sp)
      : src(s), tgt(t), space(sp), rs(s.registers()), rt(t.registers()) {}

  bool agree(uint64_t k) {
    space.load(k, src, rs, tgt, rt, mem);
    const char *trap = nullptr;
    bool ok_s = src.run(rs, mem, &trap);
    bool ok_t = tgt.run(rt, mem, &trap);
    return same_outcome(ok_s, ok_t, src, rs, tgt, rt);
  }
};

EquivalenceReport finish(const Program &src, const Program &tgt, const InputSpace &space,
                         std::optional<uint64_t> bad) {
  EquivalenceReport r;
  r.mode = space.exhaustive() ? EquivalenceReport::Mode::Exhaustive
                              : EquivalenceReport::Mode::Sampled;
  if (!bad) {
    r.verdict = EquivalenceReport::Verdict::Equivalent;
    r.inputs_checked = space.count();
    return r;
  }
  r.verdict = EquivalenceReport::Verdict::NotEquivalent;
  r.inputs_checked = *bad + 1;
  r.counterexample_index = *bad;
  std::vector<u128> rs = src.registers(), rt = tgt.registers();
  MemoryModel mem;
  space.load(*bad, src, rs, tgt, rt, mem);
  for (const Program::Slot &p : src.params())
    r.inputs.push_back(src.read(rs, p));
  if (src.reads_memory() || tgt.reads_memory())
    r.memory = mem;
  const char *trap_s = nullptr, *trap_t = nullptr;
  bool ok_s = src.run(rs, mem, &trap_s);
  bool ok_t = tgt.run(rt, mem, &trap_t);
  r.src_out = ok_s ? EvalResult{src.read(rs, src.result())} : EvalResult{Trap{trap_s}};
  r.tgt_out = ok_t ? EvalResult{tgt.read(rt, tgt.result())} : EvalResult{Trap{trap_t}};
  return r;
}

} // namespace

EquivalenceReport check_equivalence_serial(const Function &src, const Function &tgt,
                                           const EquivalenceOptions &options) {
  Setup s = prepare(src, tgt);
  if (s.early)
    return *s.early;
  InputSpace space(*s.src, *s.tgt, options);
  Evaluator ev(*s.src, *s.tgt, space);
  for (uint64_t k = 0; k < space.count(); ++k)
    if (!ev.agree(k))
      return finish(*s.src, *s.tgt, space, k);
  return finish(*s.src, *s.tgt, space, std::nullopt);
}

EquivalenceReport check_equivalence(const Function &src, const Function &tgt,
                                    const EquivalenceOptions &options) {
  Setup s = prepare(src, tgt);
  if (s.early)
    return *s.early;
  const Program &ps = *s.src, &pt = *s.tgt;
  InputSpace space(ps, pt, options);
  const uint64_t count = space.count();
  constexpr uint64_t kChunk = 4096;
  const int64_t chunks = static_cast<int64_t>((count + kChunk - 1) / kChunk);
  std::atomic<uint64_t> best{std::numeric_limits<uint64_t>::max()};
  int threads = options.threads > 0 ? options.threads : 0;

#pragma omp parallel num_threads(threads) if (threads != 1 && chunks > 1)
  {
    Evaluator ev(ps, pt, space);
#pragma omp for schedule(dynamic, 1)
    for (int64_t c = 0; c < chunks; ++c) {
      const uint64_t begin = static_cast<uint64_t>(c) * kChunk;
      const uint64_t end = std::min(count, begin + kChunk);
      for (uint64_t k = begin; k < end && k < best.load(std::memory_order_relaxed); ++k) {
        if (!ev.agree(k)) {
          uint64_t cur = best.load();
          while (k < cur && !best.compare_exchange_weak(cur, k)) {
          }
          break;
        }
      }
    }
  }
  uint64_t b = best.load();
  return finish(ps, pt, space,
                b == std::numeric_limits<uint64_t>::max() ? std::nullopt
                                                          : std::optional<uint64_t>(b));
}

std::vector<std::pair<std::vector<RuntimeValue>, std::optional<MemoryModel>>> input_suite(
    const Function &src, const Function &tgt, const EquivalenceOptions &options, uint64_t limit) {
  std::vector<std::pair<std::vector<RuntimeValue>, std::optional<MemoryModel>>> out;
  Setup s = prepare(src, tgt);
  if (s.early)
    return out;
  const Program &ps = *s.src, &pt = *s.tgt;
  InputSpace space(ps, pt, options);
  std::vector<u128> rs = ps.registers(), rt = pt.registers();
  for (uint64_t k = 0; k < std::min(limit, space.count()); ++k) {
    MemoryModel mem;
    space.load(k, ps, rs, pt, rt, mem);
    std::vector<RuntimeValue> inputs;
    for (const Program::Slot &p : ps.params())
      inputs.push_back(ps.read(rs, p));
    out.emplace_back(std::move(inputs), ps.reads_memory() || pt.reads_memory()
                                            ? std::optional<MemoryModel>(mem)
                                            : std::nullopt);
  }
  return out;
}

std::string format_counterexample(const EquivalenceReport &r, const Function &src) {
  if (r.verdict != EquivalenceReport::Verdict::NotEquivalent)
    return {};
  auto trapped = [](const std::optional<EvalResult> &e) {
    return e && std::holds_alternative<Trap>(*e);
  };
  std::string out;
  if (trapped(r.tgt_out) && !trapped(r.src_out))
    out = "ERROR: Source is more defined than target\n";
  else if (trapped(r.src_out) && !trapped(r.tgt_out))
    out = "ERROR: Target is more defined than source\n";
  else
    out = "ERROR: Value mismatch\n";
  out += "\nExample:\n";
  for (std::size_t i = 0; i < r.inputs.size() && i < src.params.size(); ++i)
    out += src.params[i].type.str() + " %" + src.params[i].name + " = " +
           format_value(r.inputs[i]) + "\n";
  if (r.memory)
    out += "memory: " + r.memory->describe() + "\n";
  auto show = [](const std::optional<EvalResult> &e) -> std::string {
    if (!e)
      return "?";
    if (const Trap *t = std::get_if<Trap>(&*e))
      return "trap (" + t->reason + ")";
    return format_value(std::get<RuntimeValue>(*e));
  };
  out += "\nSource value: " + show(r.src_out) + "\n";
  out += "Target value: " + show(r.tgt_out) + "\n";
  return out;
}

} // namespace peepseek::oracle
