// Copyright 2026 The qgen Authors.
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

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgen/common.hpp"
#include "qgen/dsl.hpp"

namespace qgen {
namespace {

struct Token {
  enum Kind { kOpen, kClose, kAtom, kEnd } kind;
  std::string text;
  std::size_t position;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token Next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {Token::kEnd, "", pos_};
    const std::size_t start = pos_;
    if (text_[pos_] == '(') return {Token::kOpen, "(", pos_++};
    if (text_[pos_] == ')') return {Token::kClose, ")", pos_++};
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return {Token::kAtom, std::string(text_.substr(start, pos_ - start)), start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

struct HeadInfo {
  Op op;
  int min_arity;
  int max_arity;
};

const std::unordered_map<std::string, HeadInfo>& Heads() {
  static const std::unordered_map<std::string, HeadInfo> heads = {
      {"not", {Op::kNot, 1, 1}},
      {"and", {Op::kAnd, 2, 2}},
      {"or", {Op::kOr, 2, 2}},
      {"=", {Op::kEq, 1, 2}},
      {"==", {Op::kEq, 1, 2}},
      {"any", {Op::kAny, 1, 1}},
      {"all", {Op::kAll, 1, 1}},
      {">", {Op::kGreater, 2, 2}},
      {"<", {Op::kLess, 2, 2}},
      {"touch", {Op::kTouch, 2, 2}},
      {"isSubset", {Op::kIsSubset, 2, 2}},
      {"+", {Op::kPlus, 1, 2}},
      {"++", {Op::kPlus, 1, 2}},
      {"-", {Op::kMinus, 2, 2}},
      {"--", {Op::kMinus, 2, 2}},
      {"\xE2\x88\x92", {Op::kMinus, 2, 2}},  // U+2212 minus sign
      {"\xE2\x80\x93", {Op::kMinus, 2, 2}},  // U+2013 en dash
      {"size", {Op::kSize, 1, 1}},
      {"row", {Op::kRow, 1, 1}},
      {"rowL", {Op::kRow, 1, 1}},
      {"col", {Op::kCol, 1, 1}},
      {"colL", {Op::kCol, 1, 1}},
      {"setSize", {Op::kSetSize, 1, 1}},
      {"color", {Op::kColorOf, 1, 1}},
      {"orient", {Op::kOrientOf, 1, 1}},
      {"topleft", {Op::kTopLeft, 1, 1}},
      {"bottomright", {Op::kBottomRight, 1, 1}},
      {"map", {Op::kMap, 2, 2}},
      {"coloredTiles", {Op::kColoredTiles, 1, 1}},
      {"setDifference", {Op::kSetDifference, 2, 2}},
      {"union", {Op::kUnion, 2, 2}},
      {"intersection", {Op::kIntersection, 2, 2}},
      {"unique", {Op::kUnique, 1, 1}},
      {"draw", {Op::kDraw, 1, 1}},
  };
  return heads;
}

bool IsLambdaHead(const std::string& s) { return s == "\xCE\xBB" || s == "lambda"; }

std::string Lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::optional<Node> ParseLeaf(const Token& tok) {
  Node n;
  n.position = tok.position;
  const std::string lower = Lower(tok.text);
  if (lower == "true" || lower == "false") {
    n.op = Op::kBool;
    n.value = lower == "true" ? 1 : 0;
    return n;
  }
  if (std::all_of(tok.text.begin(), tok.text.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    if (tok.text.size() > 2 || std::stoi(tok.text) > 10) {
      throw SyntaxError("number literal '" + tok.text + "' outside 0..10", tok.position);
    }
    n.op = Op::kNumber;
    n.value = std::stoi(tok.text);
    return n;
  }
  if (auto c = ParseColorName(tok.text)) {
    n.op = Op::kColor;
    n.value = static_cast<int>(*c);
    return n;
  }
  if (tok.text == "H" || tok.text == "V") {
    n.op = Op::kOrient;
    n.value = static_cast<int>(tok.text == "H" ? Orientation::kHorizontal : Orientation::kVertical);
    return n;
  }
  if (auto loc = Location::Parse(tok.text)) {
    n.op = Op::kLocation;
    n.value = loc->index();
    return n;
  }
  if (tok.text == "x") {
    n.op = Op::kVarX;
    return n;
  }
  if (tok.text == "y") {
    n.op = Op::kVarY;
    return n;
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { Advance(); }

  Node ParseTop() {
    Node n = ParseExpr();
    if (tok_.kind != Token::kEnd) throw SyntaxError("unexpected trailing input", tok_.position);
    return n;
  }

 private:
  void Advance() { tok_ = lexer_.Next(); }

  Node ParseExpr() {
    switch (tok_.kind) {
      case Token::kEnd:
        throw SyntaxError("unexpected end of input", tok_.position);
      case Token::kClose:
        throw SyntaxError("unbalanced ')'", tok_.position);
      case Token::kAtom: {
        auto leaf = ParseLeaf(tok_);
        if (!leaf) {
          if (Heads().count(tok_.text) || IsLambdaHead(tok_.text) || tok_.text == "set") {
            throw SyntaxError("function '" + tok_.text + "' used without parentheses",
                              tok_.position);
          }
          throw SyntaxError("unknown symbol '" + tok_.text + "'", tok_.position);
        }
        Advance();
        return *leaf;
      }
      case Token::kOpen:
        break;
    }
    const std::size_t open_pos = tok_.position;
    Advance();
    if (tok_.kind != Token::kAtom) {
      throw SyntaxError("expected a function name after '('", tok_.position);
    }
    const Token head = tok_;
    Advance();
    Node n;
    n.position = open_pos;
    if (IsLambdaHead(head.text)) {
      n.op = Op::kLambda;
      if (tok_.kind != Token::kAtom || (tok_.text != "x" && tok_.text != "y")) {
        throw SyntaxError("lambda expects variable x or y", tok_.position);
      }
      n.value = tok_.text == "x" ? 0 : 1;
      Advance();
      n.args.push_back(ParseExpr());
    } else if (head.text == "set") {
      ParseSetLiteral(n, head);
      return n;
    } else {
      auto it = Heads().find(head.text);
      if (it == Heads().end()) {
        if (ParseLeaf(head)) {
          throw SyntaxError("'" + head.text + "' is not a function", head.position);
        }
        throw SyntaxError("unknown function '" + head.text + "'", head.position);
      }
      n.op = it->second.op;
      while (tok_.kind != Token::kClose) {
        if (tok_.kind == Token::kEnd) throw SyntaxError("unbalanced '('", open_pos);
        n.args.push_back(ParseExpr());
      }
      const int arity = static_cast<int>(n.args.size());
      if (arity < it->second.min_arity || arity > it->second.max_arity) {
        throw SyntaxError("'" + head.text + "' given " + std::to_string(arity) + " argument(s)",
                          head.position);
      }
    }
    if (tok_.kind != Token::kClose) {
      if (tok_.kind == Token::kEnd) throw SyntaxError("unbalanced '('", open_pos);
      throw SyntaxError("too many arguments to '" + head.text + "'", tok_.position);
    }
    Advance();
    return n;
  }

  // (set Blue Red Purple), (set 1A ... 6F), or all 36 tiles written out.
  void ParseSetLiteral(Node& n, const Token& head) {
    std::vector<Token> items;
    while (tok_.kind == Token::kAtom) {
      items.push_back(tok_);
      Advance();
    }
    if (tok_.kind != Token::kClose) {
      if (tok_.kind == Token::kEnd) throw SyntaxError("unbalanced '('", n.position);
      throw SyntaxError("set literal elements must be plain symbols", tok_.position);
    }
    Advance();
    auto is_ships = [&] {
      return items.size() == 3 && ParseColorName(items[0].text) == Color::kBlue &&
             ParseColorName(items[1].text) == Color::kRed &&
             ParseColorName(items[2].text) == Color::kPurple;
    };
    auto is_tiles = [&] {
      if (items.size() == 3) {
        return Location::Parse(items[0].text) == Location(0) && items[1].text == "..." &&
               Location::Parse(items[2].text) == Location(kNumTiles - 1);
      }
      if (items.size() != static_cast<std::size_t>(kNumTiles)) return false;
      for (int i = 0; i < kNumTiles; ++i) {
        if (Location::Parse(items[i].text) != Location(i)) return false;
      }
      return true;
    };
    if (is_ships()) {
      n.op = Op::kShipSet;
    } else if (is_tiles()) {
      n.op = Op::kTileSet;
    } else {
      throw SyntaxError("unsupported set literal (expected (set Blue Red Purple) or (set 1A ... 6F))",
                        head.position);
    }
  }

  Lexer lexer_;
  Token tok_{Token::kEnd, "", 0};
};

}  // namespace

std::string_view FunctionName(Op op) {
  switch (op) {
    case Op::kNot: return "not";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kEq: return "=";
    case Op::kAny: return "any";
    case Op::kAll: return "all";
    case Op::kGreater: return ">";
    case Op::kLess: return "<";
    case Op::kTouch: return "touch";
    case Op::kIsSubset: return "isSubset";
    case Op::kPlus: return "+";
    case Op::kMinus: return "-";
    case Op::kSize: return "size";
    case Op::kRow: return "row";
    case Op::kCol: return "col";
    case Op::kSetSize: return "setSize";
    case Op::kColorOf: return "color";
    case Op::kOrientOf: return "orient";
    case Op::kTopLeft: return "topleft";
    case Op::kBottomRight: return "bottomright";
    case Op::kMap: return "map";
    case Op::kLambda: return "\xCE\xBB";
    case Op::kColoredTiles: return "coloredTiles";
    case Op::kSetDifference: return "setDifference";
    case Op::kUnion: return "union";
    case Op::kIntersection: return "intersection";
    case Op::kUnique: return "unique";
    case Op::kDraw: return "draw";
    default: return "?";
  }
}

namespace {

void Print(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::kBool:
      out += n.value ? "True" : "False";
      return;
    case Op::kNumber:
      out += std::to_string(n.value);
      return;
    case Op::kColor:
      out += ColorName(static_cast<Color>(n.value));
      return;
    case Op::kOrient:
      out += OrientationName(static_cast<Orientation>(n.value));
      return;
    case Op::kLocation:
      out += Location(n.value).ToString();
      return;
    case Op::kVarX:
      out += 'x';
      return;
    case Op::kVarY:
      out += 'y';
      return;
    case Op::kShipSet:
      out += "(set Blue Red Purple)";
      return;
    case Op::kTileSet:
      out += "(set 1A ... 6F)";
      return;
    case Op::kLambda:
      out += "(\xCE\xBB ";
      out += n.value == 0 ? 'x' : 'y';
      out += ' ';
      Print(n.args.at(0), out);
      out += ')';
      return;
    default:
      break;
  }
  out += '(';
  out += FunctionName(n.op);
  for (const auto& a : n.args) {
    out += ' ';
    Print(a, out);
  }
  out += ')';
}

}  // namespace

bool IsLeaf(Op op) {
  switch (op) {
    case Op::kBool:
    case Op::kNumber:
    case Op::kColor:
    case Op::kOrient:
    case Op::kLocation:
    case Op::kVarX:
    case Op::kVarY:
      return true;
    default:
      return false;
  }
}

bool operator==(const Node& a, const Node& b) {
  return a.op == b.op && a.value == b.value && a.args == b.args;
}

Node ParseExpression(std::string_view text) { return Parser(text).ParseTop(); }

Program Parse(std::string_view text) {
  Node root = ParseExpression(text);
  const AnswerType t = Typecheck(root);
  return Program(std::move(root), t);
}

int FunctionCount(const Node& node) {
  if (IsLeaf(node.op)) return 0;
  int n = 1;
  for (const auto& a : node.args) n += FunctionCount(a);
  return n;
}

std::string CanonicalPrint(const Node& node) {
  std::string out;
  Print(node, out);
  return out;
}

bool ReferencesBoard(const Node& node) {
  switch (node.op) {
    case Op::kTouch:
    case Op::kSize:
    case Op::kColorOf:
    case Op::kOrientOf:
    case Op::kColoredTiles:
      return true;
    default:
      break;
  }
  for (const auto& a : node.args) {
    if (ReferencesBoard(a)) return true;
  }
  return false;
}

}  // namespace qgen
