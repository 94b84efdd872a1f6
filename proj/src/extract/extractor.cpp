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

#include "peepseek/extract/extractor.h"


#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>

namespace peepseek::extract {

using ir::BasicBlock;
using ir::Function;
using ir::Instruction;
using ir::IrType;
using ir::Operand;

const char *to_string(WrapError::Reason r) {
  switch (r) {
  case WrapError::Reason::VoidResult: return "void_result";
  case WrapError::Reason::Opaque: return "opaque_instruction";
  case WrapError::Reason::Empty: return "empty_sequence";
  }
  return "unknown";
}

ExtractStats &ExtractStats::operator+=(const ExtractStats &o) {
  seen += o.seen;
  deduped += o.deduped;
  filtered_optimizable += o.filtered_optimizable;
  wrap_errors += o.wrap_errors;
  over_cap += o.over_cap;
  emitted += o.emitted;
  return *this;
}

namespace {

bool depends(const Instruction &user, const Instruction &def, MemoryDependence memdep) {
  if (def.result && user.uses_local(*def.result))
    return true;
  return memdep == MemoryDependence::Conservative && user.opcode == "load" &&
         def.opcode == "store";
}

/// Instructions that produce no value can only end a sequence that wrapping
/// rejects, and they would swallow the value slice feeding them. Without
/// memory dependence nothing can depend on them, so they are skipped.
bool skipped(const Instruction &inst, MemoryDependence memdep) {
  if (inst.is_terminator() || inst.is_phi())
    return true;
  if (memdep == MemoryDependence::Conservative || inst.result)
    return false;
  return !(inst.opcode == "call" && !inst.opaque && !inst.type_args.empty() &&
           !inst.type_args[0].is_void());
}

bool is_numeric(const std::string &name) {
  return !name.empty() && std::all_of(name.begin(), name.end(),
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

/// Metadata and attribute-group references point at module-level entities
/// the standalone function does not carry; only alignment survives.
std::string keep_alignment(const std::string &metadata) {
  static const std::regex kAlign(R"(,\s*align\s+[0-9]+)");
  std::string out;
  for (auto it = std::sregex_iterator(metadata.begin(), metadata.end(), kAlign);
       it != std::sregex_iterator(); ++it)
    out += ", " + std::regex_replace(it->str(), std::regex(R"(^,\s*)"), "");
  return out;
}

/// Builds the wrapped function. `strict` rejects what wrap_as_func rejects;
/// the lenient form exists so rejected sequences still get a digest.
Result<Function, WrapError> build(const InstrSeq &seq, bool strict) {
  if (seq.instructions.empty())
    return WrapError{WrapError::Reason::Empty, "empty sequence"};
  Function f;
  f.name = "src";
  std::set<std::string> known;
  std::vector<Instruction> body;
  for (const Instruction &src : seq.instructions) {
    if (strict && src.opaque)
      return WrapError{WrapError::Reason::Opaque, "cannot type operands of '" + src.opcode + "'"};
    for (const Operand &op : src.operands) {
      if (!op.value.is_local() || op.is_label() || known.count(op.value.name))
        continue;
      known.insert(op.value.name);
      f.params.push_back(ir::Param{op.value.name, op.type, ""});
    }
    Instruction inst = src;
    inst.metadata_text = keep_alignment(inst.metadata_text);
    if (inst.result)
      known.insert(*inst.result);
    body.push_back(std::move(inst));
  }

  Instruction &last = body.back();
  std::optional<IrType> rt = last.opaque ? std::nullopt
                                         : (last.result ? last.result_type()
                                                        : (last.opcode == "call" && !last.type_args.empty()
                                                               ? std::optional<IrType>(last.type_args[0])
                                                               : std::nullopt));
  bool returns_value = rt && !rt->is_void();
  if (!returns_value && strict)
    return WrapError{WrapError::Reason::VoidResult,
                     "final instruction '" + last.opcode + "' produces no value"};
  const std::string kUnnamed = "\x01result";
  if (returns_value && !last.result)
    last.result = kUnnamed;

  // LLVM requires numbered locals to be sequential, so numeric names are
  // reassigned in definition order: parameters first, then the body.
  std::map<std::string, std::string> rename;
  unsigned counter = 0;
  for (ir::Param &p : f.params)
    if (is_numeric(p.name))
      p.name = rename[p.name] = std::to_string(counter++);
  for (Instruction &inst : body)
    if (inst.result && (is_numeric(*inst.result) || *inst.result == kUnnamed))
      inst.result = rename[*inst.result] = std::to_string(counter++);
  for (Instruction &inst : body) {
    for (Operand &op : inst.operands) {
      if (!op.value.is_local() || op.is_label())
        continue;
      if (auto it = rename.find(op.value.name); it != rename.end())
        op.value.name = it->second;
    }
    if (inst.opaque && !rename.empty()) {
      static const std::regex kLocal(R"(%([0-9]+)\b)");
      std::string text;
      std::string::const_iterator from = inst.verbatim.begin();
      for (auto it = std::sregex_iterator(inst.verbatim.begin(), inst.verbatim.end(), kLocal);
           it != std::sregex_iterator(); ++it) {
        text.append(from, (*it)[0].first);
        auto r = rename.find((*it)[1].str());
        text += "%" + (r == rename.end() ? (*it)[1].str() : r->second);
        from = (*it)[0].second;
      }
      text.append(from, inst.verbatim.cend());
      inst.verbatim = text;
    }
  }

  Instruction ret;
  ret.opcode = "ret";
  if (returns_value) {
    f.return_type = *rt;
    ret.operands.push_back(Operand{*rt, ir::ValueRef::local(*body.back().result), ""});
  } else {
    f.return_type = IrType::void_type();
  }
  body.push_back(std::move(ret));
  f.blocks.push_back(BasicBlock{"entry", std::move(body)});
  return f;
}

SeqDigest lenient_digest(const InstrSeq &seq) {
  auto f = build(seq, false);
  return f ? digest(f.value()) : SeqDigest{};
}

struct BlockRef {
  const Function *func;
  const BasicBlock *block;
};

std::vector<BlockRef> all_blocks(const ir::Module &module) {
  std::vector<BlockRef> out;
  for (const Function &f : module.functions)
    for (const BasicBlock &bb : f.blocks)
      out.push_back({&f, &bb});
  return out;
}

SeqSource source_of(const ir::Module &module, const BlockRef &ref) {
  return SeqSource{module.id, ref.func->name, ref.block->label};
}

struct Item {
  InstrSeq seq;
  SeqDigest digest;
  std::optional<WrappedFunction> wrapped;
  bool wrap_failed = false;
  bool over_cap = false;
  bool pending = false;
  std::optional<bool> optimizable;
  std::optional<ExtractError> error;
};

void prepare(Item &item, const ExtractOptions &options) {
  auto w = wrap_as_func(item.seq);
  if (w) {
    item.wrapped = std::move(w).value();
    item.digest = item.wrapped->digest;
  } else {
    item.wrap_failed = true;
    item.digest = lenient_digest(item.seq);
  }
  item.over_cap = item.seq.instructions.size() > options.max_seq_len;
}

} // namespace

std::vector<std::vector<std::size_t>> extract_index_seqs(const BasicBlock &bb,
                                                         MemoryDependence memdep) {
  std::vector<std::vector<std::size_t>> seqs;
  const auto &insts = bb.instructions;
  for (std::size_t i = insts.size(); i-- > 0;) {
    const Instruction &inst = insts[i];
    if (skipped(inst, memdep))
      continue;
    bool used = false;
    for (auto &seq : seqs) {
      bool hit = std::any_of(seq.begin(), seq.end(), [&](std::size_t j) {
        return depends(insts[j], inst, memdep);
      });
      if (hit) {
        seq.insert(seq.begin(), i);
        used = true;
      }
    }
    if (!used)
      seqs.push_back({i});
  }
  return seqs;
}

std::vector<InstrSeq> extract_seqs_from_bb(const BasicBlock &bb, const SeqSource &source,
                                           MemoryDependence memdep) {
  std::vector<InstrSeq> out;
  for (auto &indices : extract_index_seqs(bb, memdep)) {
    InstrSeq seq;
    seq.source = source;
    for (std::size_t i : indices)
      seq.instructions.push_back(bb.instructions[i]);
    seq.indices = std::move(indices);
    out.push_back(std::move(seq));
  }
  return out;
}

Result<WrappedFunction, WrapError> wrap_as_func(const InstrSeq &seq) {
  auto f = build(seq, true);
  if (!f)
    return f.error();
  WrappedFunction w;
  w.func = std::move(f).value();
  w.origin = seq.source;
  w.indices = seq.indices;
  w.digest = digest(w.func);
  return w;
}

Result<std::vector<WrappedFunction>, ExtractError> extract(const ir::Module &module,
                                                           DigestSet &dedup,
                                                           const ExtractOptions &options,
                                                           const OptimizableCheck &optimizable,
                                                           ExtractStats *stats) {
  const int threads = std::max(1, options.threads);
  std::vector<BlockRef> blocks = all_blocks(module);

  std::vector<std::vector<Item>> per_block(blocks.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (InstrSeq &seq : extract_seqs_from_bb(*blocks[b].block, source_of(module, blocks[b]),
                                              options.memory_dependence)) {
      Item item;
      item.seq = std::move(seq);
      prepare(item, options);
      per_block[b].push_back(std::move(item));
    }
  }

  ExtractStats local;
  std::vector<Item *> pending;
  for (auto &items : per_block) {
    for (Item &item : items) {
      ++local.seen;
      if (!dedup.insert(item.digest))
        ++local.deduped;
      else if (item.wrap_failed)
        ++local.wrap_errors;
      else if (item.over_cap)
        ++local.over_cap;
      else
        pending.push_back(&item);
    }
  }

  if (optimizable) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::size_t k = 0; k < pending.size(); ++k) {
      Item &item = *pending[k];
      try {
        auto r = optimizable(*item.wrapped);
        if (r)
          item.optimizable = r.value();
        else
          item.error = r.error();
      } catch (const std::exception &e) {
        item.error = ExtractError{"preprocess", e.what()};
      }
    }
  }

  std::vector<WrappedFunction> out;
  for (Item *item : pending) {
    if (item->error)
      return *item->error;
    if (item->optimizable.value_or(false)) {
      ++local.filtered_optimizable;
      continue;
    }
    ++local.emitted;
    out.push_back(std::move(*item->wrapped));
  }
  if (stats)
    *stats += local;
  return out;
}

Result<std::vector<WrappedFunction>, ExtractError> extract_serial(
    const ir::Module &module, DigestSet &dedup, const ExtractOptions &options,
    const OptimizableCheck &optimizable, ExtractStats *stats) {
  ExtractStats local;
  std::vector<WrappedFunction> out;
  for (const Function &f : module.functions) {
    for (const BasicBlock &bb : f.blocks) {
      SeqSource source{module.id, f.name, bb.label};
      for (const InstrSeq &seq : extract_seqs_from_bb(bb, source, options.memory_dependence)) {
        ++local.seen;
        auto wrapped = wrap_as_func(seq);
        SeqDigest d = wrapped ? wrapped->digest : lenient_digest(seq);
        if (!dedup.insert(d)) {
          ++local.deduped;
          continue;
        }
        if (!wrapped) {
          ++local.wrap_errors;
          continue;
        }
        if (seq.instructions.size() > options.max_seq_len) {
          ++local.over_cap;
          continue;
        }
        if (optimizable) {
          auto r = optimizable(wrapped.value());
          if (!r)
            return r.error();
          if (r.value()) {
            ++local.filtered_optimizable;
            continue;
          }
        }
        ++local.emitted;
        out.push_back(std::move(wrapped).value());
      }
    }
  }
  if (stats)
    *stats += local;
  return out;
}

} // namespace peepseek::extract
