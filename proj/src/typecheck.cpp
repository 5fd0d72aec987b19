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

#include <string>

#include "qgen/common.hpp"
#include "qgen/dsl.hpp"

namespace qgen {
namespace {

struct Scope {
  bool has_x = false;
  bool has_y = false;
};

bool IsColorLike(Type t) { return t == Type::kShip || t == Type::kColor; }

[[noreturn]] void Mismatch(const Node& n, const std::string& what) {
  throw TypeError("type mismatch in '" + CanonicalPrint(n) + "': " + what, n.position);
}

void Expect(const Node& parent, const Node& arg, Type want) {
  const bool ok = arg.type == want || (want == Type::kColor && arg.type == Type::kShip);
  if (!ok) {
    Mismatch(parent, "expected " + std::string(TypeName(want)) + ", got " +
                         std::string(TypeName(arg.type)) + " from '" + CanonicalPrint(arg) + "'");
  }
}

Type Check(Node& n, Scope scope) {
  if (n.op == Op::kLambda) {
    Scope inner = scope;
    (n.value == 0 ? inner.has_x : inner.has_y) = true;
    const Type body = Check(n.args[0], inner);
    if (n.value == 0) {
      if (body == Type::kBool) return n.type = Type::kFnShipBool;
      if (body == Type::kNumber) return n.type = Type::kFnShipNum;
      if (body == Type::kLocation) return n.type = Type::kFnShipLoc;
      Mismatch(n, "a ship lambda body must be Boolean, Number or Location");
    }
    if (body == Type::kBool) return n.type = Type::kFnLocBool;
    Mismatch(n, "a location lambda body must be Boolean");
  }

  for (auto& a : n.args) Check(a, scope);
  auto arg = [&](int i) -> const Node& { return n.args[i]; };
  auto type_of = [&](int i) { return n.args[i].type; };

  switch (n.op) {
    case Op::kBool:
      return n.type = Type::kBool;
    case Op::kNumber:
      return n.type = Type::kNumber;
    case Op::kColor:
      return n.type = n.value == static_cast<int>(Color::kWater) ? Type::kColor : Type::kShip;
    case Op::kOrient:
      return n.type = Type::kOrient;
    case Op::kLocation:
      return n.type = Type::kLocation;
    case Op::kVarX:
      if (!scope.has_x) throw TypeError("free lambda variable 'x'", n.position);
      return n.type = Type::kShip;
    case Op::kVarY:
      if (!scope.has_y) throw TypeError("free lambda variable 'y'", n.position);
      return n.type = Type::kLocation;
    case Op::kNot:
      Expect(n, arg(0), Type::kBool);
      return n.type = Type::kBool;
    case Op::kAnd:
    case Op::kOr:
      Expect(n, arg(0), Type::kBool);
      Expect(n, arg(1), Type::kBool);
      return n.type = Type::kBool;
    case Op::kEq:
      if (n.args.size() == 1) {
        Expect(n, arg(0), Type::kSetNumber);
        return n.type = Type::kBool;
      }
      if (IsColorLike(type_of(0)) && IsColorLike(type_of(1))) return n.type = Type::kBool;
      if (type_of(0) != type_of(1) ||
          (type_of(0) != Type::kBool && type_of(0) != Type::kNumber && type_of(0) != Type::kOrient)) {
        Mismatch(n, "= compares two Booleans, Numbers, Orientations or Colors");
      }
      return n.type = Type::kBool;
    case Op::kAny:
    case Op::kAll:
      Expect(n, arg(0), Type::kSetBool);
      return n.type = Type::kBool;
    case Op::kGreater:
    case Op::kLess:
    case Op::kMinus:
      Expect(n, arg(0), Type::kNumber);
      Expect(n, arg(1), Type::kNumber);
      return n.type = n.op == Op::kMinus ? Type::kNumber : Type::kBool;
    case Op::kTouch:
      Expect(n, arg(0), Type::kShip);
      Expect(n, arg(1), Type::kShip);
      return n.type = Type::kBool;
    case Op::kIsSubset:
      Expect(n, arg(0), Type::kSetLocation);
      Expect(n, arg(1), Type::kSetLocation);
      return n.type = Type::kBool;
    case Op::kPlus:
      if (n.args.size() == 1) {
        if (type_of(0) != Type::kSetNumber && type_of(0) != Type::kSetBool) {
          Mismatch(n, "unary + takes a set of Numbers or Booleans");
        }
        return n.type = Type::kNumber;
      }
      if (type_of(0) != type_of(1) || (type_of(0) != Type::kNumber && type_of(0) != Type::kBool)) {
        Mismatch(n, "+ adds two Numbers or two Booleans");
      }
      return n.type = Type::kNumber;
    case Op::kSize:
      Expect(n, arg(0), Type::kShip);
      return n.type = Type::kNumber;
    case Op::kRow:
    case Op::kCol:
      Expect(n, arg(0), Type::kLocation);
      return n.type = Type::kNumber;
    case Op::kSetSize:
      Expect(n, arg(0), Type::kSetLocation);
      return n.type = Type::kNumber;
    case Op::kColorOf:
      Expect(n, arg(0), Type::kLocation);
      return n.type = Type::kColor;
    case Op::kOrientOf:
      Expect(n, arg(0), Type::kShip);
      return n.type = Type::kOrient;
    case Op::kTopLeft:
    case Op::kBottomRight:
      Expect(n, arg(0), Type::kSetLocation);
      return n.type = Type::kLocation;
    case Op::kMap:
      switch (type_of(0)) {
        case Type::kFnLocBool:
          Expect(n, arg(1), Type::kSetLocation);
          return n.type = Type::kSetBool;
        case Type::kFnShipBool:
          Expect(n, arg(1), Type::kSetShip);
          return n.type = Type::kSetBool;
        case Type::kFnShipNum:
          Expect(n, arg(1), Type::kSetShip);
          return n.type = Type::kSetNumber;
        case Type::kFnShipLoc:
          Expect(n, arg(1), Type::kSetShip);
          return n.type = Type::kSetLocation;
        default:
          Mismatch(n, "map expects a lambda as its first argument");
      }
    case Op::kShipSet:
      return n.type = Type::kSetShip;
    case Op::kTileSet:
      return n.type = Type::kSetLocation;
    case Op::kColoredTiles:
      Expect(n, arg(0), Type::kColor);
      return n.type = Type::kSetLocation;
    case Op::kSetDifference:
    case Op::kUnion:
    case Op::kIntersection:
      Expect(n, arg(0), Type::kSetLocation);
      Expect(n, arg(1), Type::kSetLocation);
      return n.type = Type::kSetLocation;
    case Op::kUnique:
      Expect(n, arg(0), Type::kSetLocation);
      return n.type = Type::kSetLocation;
    case Op::kDraw:
      throw TypeError("unsupported stochastic primitive 'draw'", n.position);
    case Op::kLambda:
      break;
  }
  Mismatch(n, "unhandled form");
}

}  // namespace

std::string_view TypeName(Type t) {
  switch (t) {
    case Type::kUnknown: return "?";
    case Type::kBool: return "B";
    case Type::kNumber: return "N";
    case Type::kShip: return "S";
    case Type::kColor: return "C";
    case Type::kOrient: return "O";
    case Type::kLocation: return "L";
    case Type::kSetBool: return "setB";
    case Type::kSetNumber: return "setN";
    case Type::kSetShip: return "setS";
    case Type::kSetLocation: return "setL";
    case Type::kFnLocBool: return "fyB";
    case Type::kFnShipBool: return "fxB";
    case Type::kFnShipNum: return "fxN";
    case Type::kFnShipLoc: return "fxL";
  }
  return "?";
}

std::string_view AnswerTypeName(AnswerType t) {
  switch (t) {
    case AnswerType::kBoolean: return "B";
    case AnswerType::kNumber: return "N";
    case AnswerType::kColor: return "C";
    case AnswerType::kOrientation: return "O";
    case AnswerType::kLocation: return "L";
  }
  return "?";
}

AnswerType Typecheck(Node& root) {
  switch (Check(root, Scope{})) {
    case Type::kBool: return AnswerType::kBoolean;
    case Type::kNumber: return AnswerType::kNumber;
    case Type::kShip:
    case Type::kColor: return AnswerType::kColor;
    case Type::kOrient: return AnswerType::kOrientation;
    case Type::kLocation: return AnswerType::kLocation;
    default:
      throw TypeError("'" + CanonicalPrint(root) + "' of type " +
                          std::string(TypeName(root.type)) + " is not a question",
                      root.position);
  }
}

}  // namespace qgen
