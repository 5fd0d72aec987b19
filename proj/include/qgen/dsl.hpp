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

// The question language: prefix S-expressions such as
//
//   (> (size Red) (size Blue))
//   (= (map (λ x (size x)) (set Blue Red Purple)))
//
// parsed into a typed AST and evaluated against a Board. Evaluation is total:
// semantic failures (e.g. topleft of an empty set) yield AnswerValue::Invalid.

#ifndef QGEN_DSL_HPP_
#define QGEN_DSL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/domain.hpp"

namespace qgen {

enum class Op : std::uint8_t {
  // Leaves.
  kBool,      // value: 0/1
  kNumber,    // value: 0..10
  kColor,     // value: Color
  kOrient,    // value: Orientation
  kLocation,  // value: tile index
  kVarX,      // ship lambda variable
  kVarY,      // location lambda variable
  // Applications.
  kNot,
  kAnd,
  kOr,
  kEq,  // binary (= a b) or unary (= setN)
  kAny,
  kAll,
  kGreater,
  kLess,
  kTouch,
  kIsSubset,
  kPlus,  // binary (+ N N), (+ B B) or unary (+ setN), (+ setB)
  kMinus,
  kSize,
  kRow,
  kCol,
  kSetSize,
  kColorOf,  // (color L)
  kOrientOf,
  kTopLeft,
  kBottomRight,
  kMap,
  kLambda,    // value: 0 = binds x, 1 = binds y; single child is the body
  kShipSet,   // (set Blue Red Purple)
  kTileSet,   // (set 1A ... 6F)
  kColoredTiles,
  kSetDifference,
  kUnion,
  kIntersection,
  kUnique,
  kDraw,  // parsed for diagnostics only; rejected by the type checker
};

bool IsLeaf(Op op);

// Canonical head symbol of an application, e.g. "coloredTiles" or "=".
std::string_view FunctionName(Op op);

enum class Type : std::uint8_t {
  kUnknown,
  kBool,
  kNumber,
  kShip,  // a ship color; usable wherever a Color is expected
  kColor,
  kOrient,
  kLocation,
  kSetBool,
  kSetNumber,
  kSetShip,
  kSetLocation,
  kFnLocBool,   // fyB
  kFnShipBool,  // fxB
  kFnShipNum,   // fxN
  kFnShipLoc,   // fxL
};

std::string_view TypeName(Type t);

// The five answer types a complete question may have.
enum class AnswerType : std::uint8_t { kBoolean, kNumber, kColor, kOrientation, kLocation };

std::string_view AnswerTypeName(AnswerType t);

struct Node {
  Op op = Op::kBool;
  int value = 0;
  Type type = Type::kUnknown;
  std::size_t position = 0;  // byte offset in the source text
  std::vector<Node> args;

  // Structural equality: ignores source positions.
  friend bool operator==(const Node& a, const Node& b);
};

// A parsed and type-checked question.
class Program {
 public:
  Program() = default;
  Program(Node root, AnswerType answer_type)
      : root_(std::move(root)), answer_type_(answer_type) {}

  const Node& root() const { return root_; }
  AnswerType answer_type() const { return answer_type_; }

  friend bool operator==(const Program& a, const Program& b) { return a.root_ == b.root_; }

 private:
  Node root_;
  AnswerType answer_type_ = AnswerType::kBoolean;
};

// Syntax only: builds an untyped AST. Throws SyntaxError.
Node ParseExpression(std::string_view text);

// Annotates every node with its type and returns the answer type. Throws
// TypeError naming the offending subterm, including free lambda variables and
// the unsupported `draw` primitive.
AnswerType Typecheck(Node& root);

// ParseExpression + Typecheck. Accepts the aliases colL, rowL, ==, ++, lambda
// and TRUE/FALSE in any case.
Program Parse(std::string_view text);

// Number of parenthesized forms (applications, lambdas and set literals).
int FunctionCount(const Node& node);
inline int FunctionCount(const Program& p) { return FunctionCount(p.root()); }

// Canonical text: canonical names, single spaces, no trailing whitespace.
std::string CanonicalPrint(const Node& node);
inline std::string CanonicalPrint(const Program& p) { return CanonicalPrint(p.root()); }

// True if the tree contains a primitive that reads the board.
bool ReferencesBoard(const Node& node);

class AnswerValue {
 public:
  enum class Kind : std::uint8_t { kInvalid, kBoolean, kNumber, kColor, kOrientation, kLocation };

  AnswerValue() = default;
  static AnswerValue Invalid() { return {}; }
  static AnswerValue Boolean(bool b) { return AnswerValue(Kind::kBoolean, b ? 1 : 0); }
  static AnswerValue Number(std::int64_t n) { return AnswerValue(Kind::kNumber, n); }
  static AnswerValue OfColor(Color c) { return AnswerValue(Kind::kColor, static_cast<int>(c)); }
  static AnswerValue OfOrientation(Orientation o) {
    return AnswerValue(Kind::kOrientation, static_cast<int>(o));
  }
  static AnswerValue OfLocation(Location l) { return AnswerValue(Kind::kLocation, l.index()); }

  Kind kind() const { return kind_; }
  bool is_invalid() const { return kind_ == Kind::kInvalid; }
  bool boolean() const { return payload_ != 0; }
  std::int64_t number() const { return payload_; }
  Color color() const { return static_cast<Color>(payload_); }
  Orientation orientation() const { return static_cast<Orientation>(payload_); }
  Location location() const { return Location(static_cast<int>(payload_)); }

  // "true", "3", "Blue", "H", "4C", "Invalid".
  std::string ToString() const;

  friend bool operator==(const AnswerValue&, const AnswerValue&) = default;
  friend auto operator<=>(const AnswerValue&, const AnswerValue&) = default;

 private:
  AnswerValue(Kind k, std::int64_t p) : kind_(k), payload_(p) {}
  Kind kind_ = Kind::kInvalid;
  std::int64_t payload_ = 0;
};

struct AnswerValueHash {
  std::size_t operator()(const AnswerValue& v) const {
    return std::hash<std::int64_t>()(v.number() * 8 + static_cast<int>(v.kind()));
  }
};

// Deterministic and total.
AnswerValue Evaluate(const Program& program, const Board& board);
AnswerValue Evaluate(const Node& root, const Board& board);

// p(d; x) = sum of belief weights over boards on which x answers d.
std::map<AnswerValue, double> AnswerPartition(const Program& program, const Belief& belief);

}  // namespace qgen

#endif  // QGEN_DSL_HPP_
