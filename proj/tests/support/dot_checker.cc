// Copyright 2026 The provtrack Authors.
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

#include "dot_checker.h"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace provtrack::testing {

namespace {

struct Token {
  enum Kind { kId, kPunct, kEnd } kind;
  std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string text;
      ++i;
      while (true) {
        if (i >= s.size()) throw std::runtime_error("unterminated string");
        if (s[i] == '\\' && i + 1 < s.size()) {
          text.push_back(s[i + 1]);
          i += 2;
        } else if (s[i] == '"') {
          ++i;
          break;
        } else {
          text.push_back(s[i++]);
        }
      }
      out.push_back({Token::kId, text});
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Token::kPunct, "->"});
      i += 2;
    } else if (std::string("{}[]=,;").find(c) != std::string::npos) {
      out.push_back({Token::kPunct, std::string(1, c)});
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
        ++i;
      }
      out.push_back({Token::kId, s.substr(start, i - start)});
    } else {
      throw std::runtime_error(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::kEnd, ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : t_(std::move(tokens)) {}

  void graph(DotCheck& result) {
    expect_id("digraph");
    if (peek().kind == Token::kId) next();
    expect("{");
    while (!is("}")) statement(result);
    expect("}");
    if (peek().kind != Token::kEnd) throw std::runtime_error("text after graph");
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_++]; }
  bool is(const char* p) const {
    return peek().kind == Token::kPunct && peek().text == p;
  }
  void expect(const char* p) {
    if (!is(p)) throw std::runtime_error(std::string("expected '") + p + "'");
    next();
  }
  std::string id() {
    if (peek().kind != Token::kId) throw std::runtime_error("expected identifier");
    return next().text;
  }
  void expect_id(const char* word) {
    if (id() != word) throw std::runtime_error(std::string("expected ") + word);
  }
  void attributes() {
    if (!is("[")) return;
    next();
    while (!is("]")) {
      id();
      expect("=");
      id();
      if (is(",") || is(";")) next();
    }
    expect("]");
  }
  void statement(DotCheck& result) {
    std::string first = id();
    if (is("=")) {
      next();
      id();
    } else if (is("->")) {
      next();
      std::string second = id();
      attributes();
      ++result.edge_statements;
      edges_.push_back(first);
      edges_.push_back(second);
    } else {
      attributes();
      ++result.node_statements;
      result.nodes.insert(first);
    }
    expect(";");
    for (const auto& e : edges_) {
      if (!result.nodes.count(e)) pending_.insert(e);
    }
    edges_.clear();
  }

 public:
  std::set<std::string> pending_;

 private:
  std::vector<Token> t_;
  std::size_t pos_ = 0;
  std::vector<std::string> edges_;
};

}  // namespace

DotCheck check_dot(const std::string& text) {
  DotCheck result;
  try {
    Parser parser(tokenize(text));
    parser.graph(result);
    for (const auto& e : parser.pending_) {
      if (!result.nodes.count(e)) result.undeclared_endpoints.insert(e);
    }
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

}  // namespace provtrack::testing
