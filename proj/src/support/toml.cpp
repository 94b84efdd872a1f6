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

#include "peepseek/support/toml.h"

#include <cctype>
#include <charconv>

namespace peepseek::toml {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  Result<Document, Error> run() {
    Document doc;
    doc[""];
    std::string table;
    for (;;) {
      skip_blank_lines();
      if (eof())
        return doc;
      if (peek() == '[') {
        ++pos_;
        skip_ws();
        auto name = key();
        if (!name)
          return name.error();
        skip_ws();
        if (!eat(']'))
          return fail("expected ']' after table name");
        table = name.value();
        if (doc.count(table) && table != "")
          return fail("table [" + table + "] defined twice");
        doc[table];
      } else {
        auto k = key();
        if (!k)
          return k.error();
        skip_ws();
        if (!eat('='))
          return fail("expected '=' after key '" + k.value() + "'");
        skip_ws();
        unsigned at = line_;
        auto v = value();
        if (!v)
          return v.error();
        v.value().line = at;
        if (!doc[table].emplace(k.value(), std::move(v.value())).second)
          return Error{at, "duplicate key '" + k.value() + "'"};
      }
      skip_ws();
      skip_comment();
      if (!eof() && !eat('\n'))
        return fail("unexpected text after value");
    }
  }

 private:
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  bool eat(char c) {
    if (peek() != c)
      return false;
    if (c == '\n')
      ++line_;
    ++pos_;
    return true;
  }
  Error fail(std::string msg) const { return {line_, std::move(msg)}; }

  void skip_ws() {
    while (peek() == ' ' || peek() == '\t' || peek() == '\r')
      ++pos_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n')
        ++pos_;
  }
  void skip_blank_lines() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (!eat('\n'))
        return;
    }
  }
  /// Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    for (;;) {
      skip_ws();
      skip_comment();
      if (!eat('\n'))
        return;
    }
  }

  Result<std::string, Error> key() {
    if (peek() == '"' || peek() == '\'')
      return string();
    std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')
      ++pos_;
    if (start == pos_)
      return fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  Result<std::string, Error> string() {
    char quote = peek();
    ++pos_;
    std::string out;
    while (!eof() && peek() != quote) {
      char c = s_[pos_++];
      if (c == '\n')
        return fail("newline in string");
      if (c == '\\' && quote == '"') {
        if (eof())
          break;
        char e = s_[pos_++];
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: return fail(std::string("unknown escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    if (!eat(quote))
      return fail("unterminated string");
    return out;
  }

  Result<Value, Error> value() {
    char c = peek();
    if (c == '"' || c == '\'') {
      auto s = string();
      if (!s)
        return s.error();
      return Value{s.value()};
    }
    if (c == '[') {
      ++pos_;
      Array items;
      for (;;) {
        skip_array_space();
        if (eat(']'))
          return Value{std::move(items)};
        auto v = value();
        if (!v)
          return v.error();
        items.push_back(std::move(v.value()));
        skip_array_space();
        if (eat(','))
          continue;
        if (eat(']'))
          return Value{std::move(items)};
        return fail("expected ',' or ']' in array");
      }
    }
    std::size_t start = pos_;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                      peek() == '-' || peek() == '.' || peek() == '_'))
      ++pos_;
    std::string word(s_.substr(start, pos_ - start));
    if (word == "true")
      return Value{true};
    if (word == "false")
      return Value{false};
    std::string digits;
    for (char d : word)
      if (d != '_')
        digits += d;
    if (digits.empty())
      return fail("expected a value");
    const char *b = digits.data(), *e = digits.data() + digits.size();
    if (*b == '+')
      ++b;
    int64_t i = 0;
    auto [p, ec] = std::from_chars(b, e, i);
    if (ec == std::errc() && p == e)
      return Value{i};
    double d = 0;
    auto [pd, ecd] = std::from_chars(b, e, d);
    if (ecd == std::errc() && pd == e)
      return Value{d};
    return fail("cannot read value '" + word + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
};

} // namespace

Result<Document, Error> parse(std::string_view text) { return Reader(text).run(); }

} // namespace peepseek::toml
