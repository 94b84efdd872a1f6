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

#include "peepseek/ir/parser.h"

#include <cctype>
#include <map>
#include <set>
#include <utility>

#include "peepseek/ir/printer.h"

namespace peepseek::ir {

std::string ParseError::render(std::string_view file) const {
  std::string out = std::string(file) + ":" + std::to_string(line) + ":" +
                    std::to_string(column) + ": error: " + message + "\n";
  out += source_line + "\n";
  out += std::string(column > 0 ? column - 1 : 0, ' ') + "^\n";
  return out;
}

namespace {

enum class Tok { Local, Global, Word, Int, Float, String, LabelDef, Meta, AttrGroup, Punct, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  unsigned line = 1;
  unsigned col = 1;
  bool line_start = false;

  bool is(char c) const { return kind == Tok::Punct && text.size() == 1 && text[0] == c; }
  bool is_word(std::string_view w) const { return kind == Tok::Word && text == w; }
};

struct Failure {
  ParseError error;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '$' || c == '.' ||
         c == '_';
}

std::string line_of(std::string_view src, unsigned line) {
  std::size_t pos = 0;
  for (unsigned l = 1; l < line && pos != std::string_view::npos; ++l) {
    pos = src.find('\n', pos);
    if (pos != std::string_view::npos)
      ++pos;
  }
  if (pos == std::string_view::npos || pos > src.size())
    return {};
  std::size_t end = src.find('\n', pos);
  return std::string(src.substr(pos, end == std::string_view::npos ? src.size() - pos : end - pos));
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.begin = pos_;
      t.line = line_;
      t.col = col_;
      t.line_start = at_line_start_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::Eof;
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      at_line_start_ = false;
      lex_one(t);
      t.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  char cur(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
      at_line_start_ = true;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = cur();
      if (c == ';') {
        while (pos_ < src_.size() && cur() != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string &msg) {
    throw Failure{ParseError{line_, col_, msg, line_of(src_, line_)}};
  }

  std::string read_ident() {
    std::string s;
    while (pos_ < src_.size() && is_ident_char(cur())) {
      s.push_back(cur());
      advance();
    }
    return s;
  }

  std::string read_quoted() {
    std::string s;
    advance(); // opening quote
    while (pos_ < src_.size() && cur() != '"') {
      if (cur() == '\n')
        fail("end of line in string constant");
      s.push_back(cur());
      advance();
    }
    if (pos_ >= src_.size())
      fail("end of file in string constant");
    advance();
    return s;
  }

  void lex_one(Token &t) {
    char c = cur();
    if (c == '%' || c == '@') {
      advance();
      t.kind = c == '%' ? Tok::Local : Tok::Global;
      t.text = cur() == '"' ? read_quoted() : read_ident();
      if (t.text.empty())
        fail(std::string("expected identifier after '") + c + "'");
      return;
    }
    if (c == '!') {
      advance();
      t.kind = Tok::Meta;
      t.text = "!" + read_ident();
      return;
    }
    if (c == '#' && std::isdigit(static_cast<unsigned char>(cur(1)))) {
      advance();
      t.kind = Tok::AttrGroup;
      t.text = "#" + read_ident();
      return;
    }
    if (c == '"') {
      std::string s = read_quoted();
      if (cur() == ':') {
        advance();
        t.kind = Tok::LabelDef;
        t.text = s;
      } else {
        t.kind = Tok::String;
        t.text = "\"" + s + "\"";
      }
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(cur(1))))) {
      lex_number(t);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$') {
      std::string w = read_ident();
      if (w == "c" && cur() == '"') {
        t.kind = Tok::String;
        t.text = "c\"" + read_quoted() + "\"";
        return;
      }
      if (cur() == ':') {
        advance();
        t.kind = Tok::LabelDef;
        t.text = w;
        return;
      }
      t.kind = Tok::Word;
      t.text = w;
      return;
    }
    static const std::string kPunct = "()[]{}<>,=*:|";
    if (kPunct.find(c) != std::string::npos) {
      advance();
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void lex_number(Token &t) {
    std::string s;
    if (cur() == '0' && (cur(1) == 'x' || cur(1) == 'X')) {
      s += "0x";
      advance();
      advance();
      while (std::isalnum(static_cast<unsigned char>(cur()))) {
        s.push_back(cur());
        advance();
      }
      t.kind = Tok::Float;
      t.text = s;
      return;
    }
    if (cur() == '-') {
      s.push_back('-');
      advance();
    }
    while (std::isdigit(static_cast<unsigned char>(cur()))) {
      s.push_back(cur());
      advance();
    }
    bool is_float = false;
    if (cur() == '.') {
      is_float = true;
      s.push_back('.');
      advance();
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        s.push_back(cur());
        advance();
      }
      if (cur() == 'e' || cur() == 'E') {
        s.push_back(cur());
        advance();
        if (cur() == '+' || cur() == '-') {
          s.push_back(cur());
          advance();
        }
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
          s.push_back(cur());
          advance();
        }
      }
    }
    if (!is_float && cur() == ':') {
      advance();
      t.kind = Tok::LabelDef;
      t.text = s;
      return;
    }
    t.kind = is_float ? Tok::Float : Tok::Int;
    t.text = s;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
  unsigned col_ = 1;
  bool at_line_start_ = true;
};

bool is_flag_word(std::string_view w) {
  static const std::set<std::string_view> kFlags = {
      "nuw",  "nsw",  "exact", "disjoint", "nneg",     "samesign", "inbounds", "nusw", "volatile",
      "fast", "nnan", "ninf",  "nsz",      "arcp",     "contract", "afn",      "reassoc"};
  return kFlags.count(w) != 0;
}

bool is_value_word(std::string_view w) {
  static const std::set<std::string_view> kWords = {
      "true",  "false", "null",  "none",  "zeroinitializer", "poison", "undef", "splat",
      "getelementptr", "bitcast", "ptrtoint", "inttoptr", "addrspacecast", "trunc", "zext",
      "sext",  "add",   "sub",   "mul",   "shl",   "xor",   "and",   "or",    "lshr",
      "ashr",  "icmp",  "fcmp",  "select", "extractelement", "insertelement",
      "shufflevector", "blockaddress", "dso_local_equivalent", "no_cfi", "ptrauth"};
  return kWords.count(w) != 0;
}

bool is_constexpr_word(std::string_view w) {
  return is_value_word(w) && w != "true" && w != "false" && w != "null" && w != "none" &&
         w != "zeroinitializer" && w != "poison" && w != "undef" && w != "splat";
}

struct Use {
  std::string name;
  IrType type;
  std::size_t token;
};

class Parser {
 public:
  Parser(std::string_view src, std::vector<Token> toks, ParseOptions options)
      : src_(src), toks_(std::move(toks)), options_(options) {}

  Module module() {
    Module m;
    std::vector<std::string> preamble;
    while (peek().kind != Tok::Eof) {
      const Token &t = peek();
      if (t.is_word("define")) {
        m.functions.push_back(function());
        continue;
      }
      if (t.kind == Tok::Local && peek(1).is('=') && !peek(2).is_word("type")) {
        if (peek(2).kind == Tok::Word && is_llvm_opcode(peek(2).text)) {
          // Parse it anyway so malformed snippets get a precise diagnostic.
          std::size_t at = idx_;
          instruction();
          throw fail_at(toks_[at], "instruction outside of a function body");
        }
        throw fail_at(t, "expected top-level entity");
      }
      bool entity = t.kind == Tok::Global || t.kind == Tok::Meta || t.kind == Tok::Local ||
                    (t.kind == Tok::Word &&
                     (t.text == "declare" || t.text == "target" || t.text == "source_filename" ||
                      t.text == "attributes" || t.text == "module" || t.text == "uselistorder" ||
                      t.text == "uselistorder_bb" || t.text.front() == '$'));
      if (!entity)
        throw fail_at(t, "expected top-level entity");
      preamble.push_back(top_level_entity());
    }
    for (std::size_t i = 0; i < preamble.size(); ++i)
      m.preamble_text += (i ? "\n" : "") + preamble[i];
    std::set<std::string> names;
    for (const Function &f : m.functions)
      if (!names.insert(f.name).second)
        throw Failure{ParseError{1, 1, "invalid redefinition of function '" + f.name + "'", ""}};
    return m;
  }

 private:
  const Token &peek(std::size_t k = 0) const {
    std::size_t i = std::min(idx_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token &next() {
    const Token &t = toks_[idx_];
    if (idx_ + 1 < toks_.size())
      ++idx_;
    return t;
  }
  bool accept(char c) {
    if (peek().is(c)) {
      next();
      return true;
    }
    return false;
  }
  bool accept_word(std::string_view w) {
    if (peek().is_word(w)) {
      next();
      return true;
    }
    return false;
  }
  void expect(char c, std::string_view what) {
    if (!accept(c))
      throw fail_at(peek(), "expected '" + std::string(1, c) + "' " + std::string(what));
  }

  Failure fail_at(const Token &t, std::string msg) const {
    return Failure{ParseError{t.line, t.col, std::move(msg), line_of(src_, t.line)}};
  }

  /// Source text of tokens [first, last], with every run of whitespace or
  /// comments between two tokens collapsed to one space.
  std::string join(std::size_t first, std::size_t last) const {
    std::string out;
    for (std::size_t k = first; k <= last && k < toks_.size(); ++k) {
      if (toks_[k].kind == Tok::Eof)
        break;
      if (k > first && toks_[k].begin > toks_[k - 1].end)
        out.push_back(' ');
      out.append(src_.substr(toks_[k].begin, toks_[k].end - toks_[k].begin));
    }
    return out;
  }

  static int depth_delta(const Token &t) {
    if (t.kind != Tok::Punct)
      return 0;
    switch (t.text[0]) {
    case '(': case '[': case '{': case '<': return 1;
    case ')': case ']': case '}': case '>': return -1;
    default: return 0;
    }
  }

  /// Consumes a bracketed group starting at the current opening token.
  void skip_balanced() {
    int depth = 0;
    do {
      const Token &t = next();
      if (t.kind == Tok::Eof)
        throw fail_at(t, "unterminated bracket group");
      depth += depth_delta(t);
    } while (depth > 0);
  }

  std::string top_level_entity() {
    std::size_t first = idx_;
    std::size_t begin = peek().begin;
    int depth = 0;
    std::size_t last = idx_;
    do {
      const Token &t = next();
      depth += depth_delta(t);
      last = idx_ - 1;
    } while (peek().kind != Tok::Eof && !(depth <= 0 && peek().line_start));
    (void)first;
    return std::string(src_.substr(begin, toks_[last].end - begin));
  }

  // ---- types ----

  std::optional<IrType> try_type() {
    std::size_t save = idx_;
    std::optional<IrType> t = base_type();
    if (!t) {
      idx_ = save;
      return std::nullopt;
    }
    while (peek().is('*')) {
      next();
      t = IrType::other(t->str() + "*");
    }
    return t;
  }

  IrType type() {
    if (auto t = try_type())
      return *t;
    throw fail_at(peek(), "expected type");
  }

  std::optional<IrType> base_type() {
    const Token &t = peek();
    if (t.kind == Tok::Word) {
      const std::string &w = t.text;
      if (w.size() > 1 && w[0] == 'i' &&
          w.find_first_not_of("0123456789", 1) == std::string::npos) {
        next();
        unsigned long width = std::stoul(w.substr(1));
        if (width == 0)
          throw fail_at(t, "bitwidth for integer type out of range");
        if (width > kMaxIntWidth)
          return IrType::other(w);
        return IrType::integer(static_cast<unsigned>(width));
      }
      if (w == "ptr") {
        next();
        if (peek().is_word("addrspace")) {
          next();
          expect('(', "after addrspace");
          if (peek().kind != Tok::Int)
            throw fail_at(peek(), "expected address space");
          unsigned as = static_cast<unsigned>(std::stoul(next().text));
          expect(')', "after address space");
          return IrType::pointer(as);
        }
        return IrType::pointer();
      }
      static const std::map<std::string, FloatKind> kFloats = {
          {"half", FloatKind::Half},   {"bfloat", FloatKind::BFloat},
          {"float", FloatKind::Float}, {"double", FloatKind::Double},
          {"fp128", FloatKind::FP128}, {"x86_fp80", FloatKind::X86FP80},
          {"ppc_fp128", FloatKind::PPCFP128}};
      if (auto it = kFloats.find(w); it != kFloats.end()) {
        next();
        return IrType::floating(it->second);
      }
      if (w == "void") {
        next();
        return IrType::void_type();
      }
      if (w == "label") {
        next();
        return IrType::label();
      }
      if (w == "metadata" || w == "token" || w == "x86_amx" || w == "..." || w == "opaque") {
        next();
        return IrType::other(w);
      }
      return std::nullopt;
    }
    if (t.is('<')) {
      std::size_t start = idx_;
      next();
      if (peek().is('{')) {
        idx_ = start;
        skip_balanced();
        return IrType::other(join(start, idx_ - 1));
      }
      bool scalable = false;
      if (peek().is_word("vscale")) {
        next();
        if (!accept_word("x"))
          throw fail_at(peek(), "expected 'x' after vscale");
        scalable = true;
      }
      if (peek().kind != Tok::Int)
        return std::nullopt;
      uint64_t lanes = std::stoull(next().text);
      if (!accept_word("x"))
        throw fail_at(peek(), "expected 'x' in vector type");
      IrType elem = type();
      expect('>', "to close vector type");
      if (lanes == 0)
        throw fail_at(t, "zero element vector is illegal");
      if (elem.is_vector() || elem.kind == IrType::Kind::Array || elem.is_void() ||
          elem.is_label())
        throw fail_at(t, "invalid vector element type");
      return IrType::vector(lanes, std::move(elem), scalable);
    }
    if (t.is('[')) {
      next();
      if (peek().kind != Tok::Int)
        throw fail_at(peek(), "expected array length");
      uint64_t n = std::stoull(next().text);
      if (!accept_word("x"))
        throw fail_at(peek(), "expected 'x' in array type");
      IrType elem = type();
      expect(']', "to close array type");
      return IrType::array(n, std::move(elem));
    }
    if (t.is('{')) {
      std::size_t start = idx_;
      skip_balanced();
      return IrType::other(join(start, idx_ - 1));
    }
    if (t.kind == Tok::Local) {
      next();
      return IrType::other("%" + t.text);
    }
    return std::nullopt;
  }

  // ---- values ----

  ValueRef value(const IrType &ty) {
    const Token &t = peek();
    std::size_t start = idx_;
    switch (t.kind) {
    case Tok::Local:
      next();
      uses_.push_back(Use{t.text, ty, start});
      return ValueRef::local(t.text);
    case Tok::Global:
      next();
      return ValueRef::global(t.text);
    case Tok::Int: {
      next();
      if (ty.is_integer()) {
        auto bits = parse_int_literal(t.text, ty.width);
        if (!bits)
          throw fail_at(t, "integer constant must fit in type '" + ty.str() + "'");
        return ValueRef::of(Constant::integer(*bits));
      }
      if (ty.is_float())
        return ValueRef::of(Constant::verbatim(Constant::Kind::Float, t.text));
      if (ty.kind == IrType::Kind::Other)
        return ValueRef::of(Constant::verbatim(Constant::Kind::Other, t.text));
      throw fail_at(t, "integer constant must have integer type");
    }
    case Tok::Float:
      next();
      if (ty.is_integer())
        throw fail_at(t, "floating point constant invalid for type");
      return ValueRef::of(Constant::verbatim(Constant::Kind::Float, t.text));
    case Tok::String:
      next();
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, t.text));
    case Tok::Meta: {
      next();
      if (peek().is('{') || peek().is('('))
        skip_balanced();
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
    }
    case Tok::Punct:
      if (t.is('<'))
        return vector_constant(ty);
      if (t.is('[') || t.is('{')) {
        skip_balanced();
        return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
      }
      break;
    case Tok::Word:
      return word_value(ty);
    default:
      break;
    }
    throw fail_at(t, "expected value token");
  }

  ValueRef word_value(const IrType &ty) {
    const Token &t = peek();
    std::size_t start = idx_;
    const std::string &w = t.text;
    if (w == "true" || w == "false") {
      next();
      if (!(ty.is_integer() && ty.width == 1))
        throw fail_at(t, "boolean constant must have type i1");
      return ValueRef::of(Constant::integer(w == "true" ? 1 : 0));
    }
    if (w == "null" || w == "none") {
      next();
      return ValueRef::of(Constant::of(Constant::Kind::Null));
    }
    if (w == "zeroinitializer") {
      next();
      return ValueRef::of(Constant::of(Constant::Kind::Zero));
    }
    if (w == "poison") {
      next();
      return ValueRef::of(Constant::of(Constant::Kind::Poison));
    }
    if (w == "undef") {
      next();
      return ValueRef::of(Constant::of(Constant::Kind::Undef));
    }
    if (w == "splat") {
      next();
      expect('(', "after splat");
      IrType elem = type();
      ValueRef lane = value(elem);
      expect(')', "to close splat");
      if (ty.is_vector() && !ty.scalable && lane.is_constant() &&
          lane.constant.kind == Constant::Kind::Int) {
        Constant c = Constant::of(Constant::Kind::Vector);
        c.lanes.assign(ty.count, lane.constant);
        return ValueRef::of(std::move(c));
      }
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
    }
    if (is_constexpr_word(w)) {
      while (peek().kind == Tok::Word)
        next();
      if (peek().is('('))
        skip_balanced();
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
    }
    throw fail_at(t, "expected value token");
  }

  ValueRef vector_constant(const IrType &ty) {
    std::size_t start = idx_;
    next(); // '<'
    if (peek().is('{')) {
      idx_ = start;
      skip_balanced();
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
    }
    Constant c = Constant::of(Constant::Kind::Vector);
    bool simple = true;
    if (!peek().is('>')) {
      do {
        IrType lane_ty = type();
        ValueRef lane = value(lane_ty);
        if (!lane.is_constant() || (lane.constant.kind != Constant::Kind::Int &&
                                    lane.constant.kind != Constant::Kind::Poison &&
                                    lane.constant.kind != Constant::Kind::Undef))
          simple = false;
        c.lanes.push_back(lane.constant);
      } while (accept(','));
    }
    expect('>', "to close vector constant");
    if (ty.is_vector() && !ty.scalable && c.lanes.size() != ty.count)
      throw fail_at(toks_[start], "vector constant length does not match type '" + ty.str() + "'");
    if (!simple)
      return ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
    return ValueRef::of(std::move(c));
  }

  Operand typed_value() {
    Operand op;
    op.type = type();
    op.value = value(op.type);
    return op;
  }

  /// Parameter/argument attributes up to the value (or `,`/`)` for params).
  std::string attributes(bool stop_at_value) {
    std::size_t first = idx_;
    bool any = false;
    for (;;) {
      const Token &t = peek();
      if (t.kind != Tok::Word || (stop_at_value && is_value_word(t.text)))
        break;
      next();
      any = true;
      if (t.text == "align" && peek().kind == Tok::Int)
        next();
      else if (peek().is('('))
        skip_balanced();
    }
    return any ? join(first, idx_ - 1) : std::string();
  }

  Operand argument() {
    Operand op;
    op.type = type();
    op.attrs = attributes(true);
    if (op.type.kind == IrType::Kind::Other && op.type.text == "metadata") {
      std::size_t start = idx_;
      if (peek().kind == Tok::Meta) {
        next();
        if (peek().is('{') || peek().is('('))
          skip_balanced();
      } else {
        IrType inner = type();
        value(inner);
        uses_.resize(uses_.size() - (uses_.empty() ? 0 : 0));
      }
      op.value = ValueRef::of(Constant::verbatim(Constant::Kind::Other, join(start, idx_ - 1)));
      return op;
    }
    op.value = value(op.type);
    return op;
  }

  void flags(Instruction &inst) {
    while (peek().kind == Tok::Word && is_flag_word(peek().text))
      inst.flags.push_back(next().text);
  }

  void trailing(Instruction &inst) {
    std::size_t first = idx_;
    bool any = false;
    for (;;) {
      const Token &t = peek();
      if (t.kind == Tok::AttrGroup) {
        next();
        any = true;
      } else if (t.is(',') && peek(1).is_word("align") && peek(2).kind == Tok::Int) {
        next();
        next();
        next();
        any = true;
      } else if (t.is(',') && peek(1).kind == Tok::Meta) {
        next();
        next();
        if (peek().kind == Tok::Meta) {
          next();
          if (peek().is('{'))
            skip_balanced();
        } else if (peek().is('{')) {
          skip_balanced();
        }
        any = true;
      } else {
        break;
      }
    }
    if (any)
      inst.metadata_text = join(first, idx_ - 1);
  }

  bool starts_instruction(std::size_t k) const {
    const Token &t = toks_[k];
    if (t.kind == Tok::Local && k + 1 < toks_.size() && toks_[k + 1].is('='))
      return true;
    if (t.line_start && t.kind == Tok::Word &&
        (is_llvm_opcode(t.text) || t.text == "tail" || t.text == "musttail" || t.text == "notail"))
      return true;
    return false;
  }

  void opaque_body(Instruction &inst, std::size_t start) {
    inst.opaque = true;
    inst.flags.clear();
    inst.type_args.clear();
    inst.operands.clear();
    inst.callee.reset();
    inst.predicate.reset();
    inst.call_attrs.clear();
    inst.metadata_text.clear();
    int depth = 0;
    bool first = true;
    while (peek().kind != Tok::Eof) {
      const Token &t = peek();
      if (!first && depth <= 0 &&
          (t.is('}') || t.kind == Tok::LabelDef || starts_instruction(idx_)))
        break;
      first = false;
      depth += depth_delta(t);
      if (t.kind == Tok::Local && !(idx_ == start && inst.result)) {
        bool is_label = idx_ > 0 && toks_[idx_ - 1].is_word("label");
        Operand op;
        op.type = is_label ? IrType::label() : IrType::other("?");
        op.value = ValueRef::local(t.text);
        inst.operands.push_back(std::move(op));
      }
      next();
    }
    inst.verbatim = join(start, idx_ - 1);
  }

  Instruction instruction() {
    Instruction inst;
    std::size_t start = idx_;
    if (peek().kind == Tok::Local && peek(1).is('=')) {
      inst.result = next().text;
      next();
    }
    const Token &op_tok = peek();
    if (op_tok.kind != Tok::Word)
      throw fail_at(op_tok, "expected instruction opcode");
    if (op_tok.text == "tail" || op_tok.text == "musttail" || op_tok.text == "notail") {
      inst.flags.push_back(next().text);
      if (!peek().is_word("call"))
        throw fail_at(peek(), "expected 'call' after tail marker");
    }
    const Token &opcode_tok = next();
    inst.opcode = opcode_tok.text;
    const std::string &op = inst.opcode;
    std::size_t uses_before = uses_.size();

    if (is_int_binary_opcode(op) || is_float_binary_opcode(op)) {
      flags(inst);
      Operand lhs = typed_value();
      expect(',', "in binary operator");
      Operand rhs;
      rhs.type = lhs.type;
      rhs.value = value(rhs.type);
      inst.operands = {std::move(lhs), std::move(rhs)};
    } else if (op == "fneg" || op == "freeze") {
      flags(inst);
      inst.operands.push_back(typed_value());
    } else if (op == "icmp" || op == "fcmp") {
      flags(inst);
      if (peek().kind != Tok::Word)
        throw fail_at(peek(), "expected " + op + " predicate");
      inst.predicate = next().text;
      Operand lhs = typed_value();
      expect(',', "in compare");
      Operand rhs;
      rhs.type = lhs.type;
      rhs.value = value(rhs.type);
      inst.operands = {std::move(lhs), std::move(rhs)};
    } else if (op == "select") {
      flags(inst);
      inst.operands.push_back(typed_value());
      expect(',', "after select condition");
      inst.operands.push_back(typed_value());
      expect(',', "after select true value");
      inst.operands.push_back(typed_value());
    } else if (is_cast_opcode(op)) {
      flags(inst);
      inst.operands.push_back(typed_value());
      if (!accept_word("to"))
        throw fail_at(peek(), "expected 'to' after cast value");
      inst.type_args.push_back(type());
    } else if (op == "call") {
      if (!call(inst)) {
        idx_ = start;
        uses_.resize(uses_before);
        if (inst.result)
          next(), next();
        opaque_body(inst, start);
        return inst;
      }
    } else if (op == "load" || op == "store") {
      if (peek().is_word("atomic")) {
        uses_.resize(uses_before);
        opaque_body(inst, start);
        return inst;
      }
      flags(inst);
      if (op == "load") {
        inst.type_args.push_back(type());
        expect(',', "after load type");
        inst.operands.push_back(typed_value());
      } else {
        inst.operands.push_back(typed_value());
        expect(',', "after stored value");
        inst.operands.push_back(typed_value());
      }
    } else if (op == "getelementptr") {
      flags(inst);
      inst.type_args.push_back(type());
      expect(',', "after getelementptr source type");
      inst.operands.push_back(typed_value());
      while (peek().is(',') && peek(1).kind != Tok::Meta) {
        next();
        inst.operands.push_back(typed_value());
      }
    } else if (op == "phi") {
      flags(inst);
      inst.type_args.push_back(type());
      do {
        expect('[', "in phi");
        Operand v;
        v.type = inst.type_args[0];
        v.value = value(v.type);
        expect(',', "in phi incoming pair");
        Operand l;
        l.type = IrType::label();
        l.value = label_ref();
        expect(']', "to close phi incoming pair");
        inst.operands.push_back(std::move(v));
        inst.operands.push_back(std::move(l));
      } while (peek().is(',') && peek(1).is('[') && next().is(','));
    } else if (op == "ret") {
      if (accept_word("void")) {
        if (options_.strict && !current_return_.is_void())
          throw fail_at(opcode_tok, "value doesn't match function result type '" +
                                        current_return_.str() + "'");
      } else {
        const Token &ty_tok = peek();
        Operand v = typed_value();
        if (options_.strict && v.type != current_return_)
          throw fail_at(ty_tok, "value doesn't match function result type '" +
                                    current_return_.str() + "'");
        inst.operands.push_back(std::move(v));
      }
    } else if (op == "br") {
      if (peek().is_word("label")) {
        next();
        Operand l;
        l.type = IrType::label();
        l.value = label_ref();
        inst.operands.push_back(std::move(l));
      } else {
        inst.operands.push_back(typed_value());
        for (int k = 0; k < 2; ++k) {
          expect(',', "in conditional branch");
          if (!accept_word("label"))
            throw fail_at(peek(), "expected 'label'");
          Operand l;
          l.type = IrType::label();
          l.value = label_ref();
          inst.operands.push_back(std::move(l));
        }
      }
    } else if (op == "extractelement" || op == "insertelement" || op == "shufflevector") {
      inst.operands.push_back(typed_value());
      while (peek().is(',') && peek(1).kind != Tok::Meta) {
        next();
        inst.operands.push_back(typed_value());
      }
    } else {
      if (options_.strict && !is_llvm_opcode(op))
        throw fail_at(opcode_tok, "expected instruction opcode");
      uses_.resize(uses_before);
      opaque_body(inst, start);
      return inst;
    }
    canonicalize_flags(inst.flags);
    trailing(inst);
    return inst;
  }

  ValueRef label_ref() {
    const Token &t = peek();
    if (t.kind != Tok::Local)
      throw fail_at(t, "expected basic block label");
    next();
    label_uses_.push_back(idx_ - 1);
    return ValueRef::local(t.text);
  }

  /// Returns false for call forms kept opaque (indirect calls, operand
  /// bundles).
  bool call(Instruction &inst) {
    flags(inst);
    std::size_t attrs_first = idx_;
    std::size_t attrs_last = idx_;
    bool have_attrs = false;
    for (;;) {
      std::size_t save = idx_;
      std::optional<IrType> ret = try_type();
      if (ret && (peek().kind == Tok::Global || peek().kind == Tok::Local || peek().is('('))) {
        inst.type_args.push_back(*ret);
        if (peek().is('(')) {
          std::size_t fn_first = idx_;
          skip_balanced();
          inst.type_args.push_back(IrType::other(join(fn_first, idx_ - 1)));
        }
        break;
      }
      idx_ = save;
      const Token &t = peek();
      if (t.kind == Tok::Eof || t.is('{') || t.line_start)
        throw fail_at(t, "expected type");
      next();
      if (peek().is('('))
        skip_balanced();
      attrs_last = idx_ - 1;
      have_attrs = true;
    }
    if (have_attrs)
      inst.call_attrs = join(attrs_first, attrs_last);
    if (peek().kind != Tok::Global)
      return false;
    inst.callee = next().text;
    expect('(', "in call argument list");
    if (!peek().is(')')) {
      do {
        inst.operands.push_back(argument());
      } while (accept(','));
    }
    expect(')', "to close call argument list");
    if (peek().is('['))
      return false;
    return true;
  }

  Function function() {
    next(); // define
    Function f;
    uses_.clear();
    label_uses_.clear();
    std::size_t prefix_first = idx_;
    for (;;) {
      std::size_t save = idx_;
      std::optional<IrType> ret = try_type();
      if (ret && peek().kind == Tok::Global) {
        f.return_type = *ret;
        if (save > prefix_first)
          f.prefix_text = join(prefix_first, save - 1);
        break;
      }
      idx_ = save;
      const Token &t = peek();
      if (t.kind == Tok::Eof || t.is('{') || t.is('('))
        throw fail_at(t, "expected function name");
      next();
      if (peek().is('('))
        skip_balanced();
    }
    f.name = next().text;
    current_return_ = f.return_type;
    expect('(', "in function signature");
    unsigned unnamed = 0;
    std::map<std::string, IrType> defined;
    if (!peek().is(')')) {
      do {
        Param p;
        p.type = type();
        if (p.type.kind == IrType::Kind::Other && p.type.text == "...") {
          f.params.push_back(std::move(p));
          break;
        }
        p.attrs = attributes(false);
        if (peek().kind == Tok::Local)
          p.name = next().text;
        else
          p.name = std::to_string(unnamed++);
        if (!defined.emplace(p.name, p.type).second)
          throw fail_at(toks_[idx_ - 1], "multiple definition of local value named '" + p.name + "'");
        f.params.push_back(std::move(p));
      } while (accept(','));
    }
    expect(')', "to close parameter list");
    std::size_t attrs_first = idx_;
    while (!peek().is('{')) {
      if (peek().kind == Tok::Eof)
        throw fail_at(peek(), "expected '{' in function body");
      if (peek().is('('))
        skip_balanced();
      else
        next();
    }
    if (idx_ > attrs_first)
      f.attrs_text = join(attrs_first, idx_ - 1);
    next(); // '{'

    std::vector<std::size_t> label_tokens;
    std::size_t block_start_tok = idx_;
    auto close_block = [&](std::size_t at) {
      if (f.blocks.empty())
        return;
      BasicBlock &bb = f.blocks.back();
      if (bb.instructions.empty() || !bb.instructions.back().is_terminator()) {
        std::string label = bb.label.empty() ? std::string("entry") : bb.label;
        throw fail_at(toks_[at], "basic block '" + label + "' does not end with a terminator");
      }
    };
    std::set<std::string> labels;
    while (!peek().is('}')) {
      const Token &t = peek();
      if (t.kind == Tok::Eof)
        throw fail_at(t, "expected '}' at end of function body");
      if (t.kind == Tok::LabelDef) {
        close_block(idx_);
        if (!labels.insert(t.text).second)
          throw fail_at(t, "redefinition of basic block '" + t.text + "'");
        f.blocks.push_back(BasicBlock{t.text, {}});
        next();
        block_start_tok = idx_;
        continue;
      }
      if (f.blocks.empty())
        f.blocks.push_back(BasicBlock{"", {}});
      BasicBlock &bb = f.blocks.back();
      if (!bb.instructions.empty() && bb.instructions.back().is_terminator())
        throw fail_at(t, "instruction after a terminator must start a new labeled block");
      std::size_t inst_tok = idx_;
      Instruction inst = instruction();
      if (inst.result) {
        std::optional<IrType> rt = inst.result_type();
        if (!defined.emplace(*inst.result, rt.value_or(IrType::other("?"))).second)
          throw fail_at(toks_[inst_tok],
                        "multiple definition of local value named '" + *inst.result + "'");
      } else if (!inst.opaque && options_.strict && inst.opcode == "call" &&
                 !inst.type_args.empty() && !inst.type_args[0].is_void()) {
        // a non-void call without a result is fine; nothing to record
      }
      bb.instructions.push_back(std::move(inst));
    }
    (void)block_start_tok;
    if (f.blocks.empty())
      throw fail_at(peek(), "function body requires at least one basic block");
    close_block(idx_);
    next(); // '}'

    if (options_.strict)
      check_uses(f, defined, labels);
    return f;
  }

  void check_uses(const Function &f, const std::map<std::string, IrType> &defined,
                  const std::set<std::string> &labels) {
    (void)f;
    for (const Use &u : uses_) {
      auto it = defined.find(u.name);
      if (it == defined.end())
        throw fail_at(toks_[u.token], "use of undefined value '%" + u.name + "'");
      const IrType &def = it->second;
      if (def.kind == IrType::Kind::Other || u.type.kind == IrType::Kind::Other)
        continue;
      if (def != u.type)
        throw fail_at(toks_[u.token], "'%" + u.name + "' defined with type '" + def.str() +
                                          "' but expected '" + u.type.str() + "'");
    }
    for (std::size_t k : label_uses_)
      if (!labels.count(toks_[k].text))
        throw fail_at(toks_[k], "use of undefined value '%" + toks_[k].text + "'");
  }

  std::string_view src_;
  std::vector<Token> toks_;
  ParseOptions options_;
  std::size_t idx_ = 0;
  std::vector<Use> uses_;
  std::vector<std::size_t> label_uses_;
  IrType current_return_;
};

} // namespace

Result<Module, ParseError> parse_module(std::string_view text, ParseOptions options) {
  try {
    std::vector<Token> toks = Lexer(text).run();
    Parser parser(text, std::move(toks), options);
    return parser.module();
  } catch (Failure &f) {
    return std::move(f.error);
  }
}

} // namespace peepseek::ir
