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
#include <bit>
#include <cstdint>
#include <limits>

#include "qgen/dsl.hpp"

namespace qgen {
namespace {

// Sets of Booleans and Numbers are only ever consumed by order-insensitive
// reductions (all-equal, any, all, sum, count), so they are kept as running
// aggregates rather than materialized vectors.
struct Aggregate {
  int count = 0;
  std::int64_t sum = 0;
  std::int64_t min = std::numeric_limits<std::int64_t>::max();
  std::int64_t max = std::numeric_limits<std::int64_t>::min();

  void Add(std::int64_t v) {
    ++count;
    sum += v;
    min = std::min(min, v);
    max = std::max(max, v);
  }
};

struct Value {
  bool invalid = false;
  std::int64_t scalar = 0;  // Bool, Number, Color, Orientation, Location
  TileMask tiles = 0;       // setL
  Aggregate agg;            // setB, setN

  static Value Bad() {
    Value v;
    v.invalid = true;
    return v;
  }
  static Value Of(std::int64_t s) {
    Value v;
    v.scalar = s;
    return v;
  }
  static Value Tiles(TileMask m) {
    Value v;
    v.tiles = m;
    return v;
  }
};

struct Env {
  int ship = -1;      // bound Color of x
  int location = -1;  // bound tile of y
};

class Evaluator {
 public:
  explicit Evaluator(const Board& board) : board_(board) {}

  Value Eval(const Node& n, const Env& env) const {
    switch (n.op) {
      case Op::kBool:
      case Op::kNumber:
      case Op::kColor:
      case Op::kOrient:
      case Op::kLocation:
        return Value::Of(n.value);
      case Op::kVarX:
        return Value::Of(env.ship);
      case Op::kVarY:
        return Value::Of(env.location);
      case Op::kShipSet:
        return Value{};
      case Op::kTileSet:
        return Value::Tiles(kAllTiles);
      case Op::kMap:
        return Map(n, env);
      case Op::kLambda:
      case Op::kDraw:
        return Value::Bad();
      default:
        break;
    }

    Value a = Eval(n.args[0], env);
    if (a.invalid) return a;
    Value b;
    if (n.args.size() > 1) {
      b = Eval(n.args[1], env);
      if (b.invalid) return b;
    }

    switch (n.op) {
      case Op::kNot:
        return Value::Of(!a.scalar);
      case Op::kAnd:
        return Value::Of(a.scalar && b.scalar);
      case Op::kOr:
        return Value::Of(a.scalar || b.scalar);
      case Op::kEq:
        if (n.args.size() == 1) return Value::Of(a.agg.count == 0 || a.agg.min == a.agg.max);
        return Value::Of(a.scalar == b.scalar);
      case Op::kAny:
        return Value::Of(a.agg.count > 0 && a.agg.max != 0);
      case Op::kAll:
        return Value::Of(a.agg.count == 0 || a.agg.min != 0);
      case Op::kGreater:
        return Value::Of(a.scalar > b.scalar);
      case Op::kLess:
        return Value::Of(a.scalar < b.scalar);
      case Op::kTouch:
        return Value::Of(board_.Touching(static_cast<Color>(a.scalar), static_cast<Color>(b.scalar)));
      case Op::kIsSubset:
        return Value::Of((a.tiles & ~b.tiles) == 0);
      case Op::kPlus:
        if (n.args.size() == 1) return Value::Of(a.agg.sum);
        return Value::Of(a.scalar + b.scalar);
      case Op::kMinus:
        return Value::Of(a.scalar - b.scalar);
      case Op::kSize:
        return Value::Of(board_.ShipSize(static_cast<Color>(a.scalar)));
      case Op::kRow:
        return Value::Of(Location(static_cast<int>(a.scalar)).row() + 1);
      case Op::kCol:
        return Value::Of(Location(static_cast<int>(a.scalar)).col() + 1);
      case Op::kSetSize:
        return Value::Of(std::popcount(a.tiles));
      case Op::kColorOf:
        return Value::Of(static_cast<int>(board_.ColorAt(Location(static_cast<int>(a.scalar)))));
      case Op::kOrientOf:
        return Value::Of(static_cast<int>(board_.ShipOrientation(static_cast<Color>(a.scalar))));
      case Op::kTopLeft:
        // Lowest index = minimum row, then minimum column.
        if (a.tiles == 0) return Value::Bad();
        return Value::Of(std::countr_zero(a.tiles));
      case Op::kBottomRight:
        if (a.tiles == 0) return Value::Bad();
        return Value::Of(63 - std::countl_zero(a.tiles));
      case Op::kColoredTiles:
        return Value::Tiles(board_.ColorMask(static_cast<Color>(a.scalar)));
      case Op::kSetDifference:
        return Value::Tiles(a.tiles & ~b.tiles);
      case Op::kUnion:
        return Value::Tiles(a.tiles | b.tiles);
      case Op::kIntersection:
        return Value::Tiles(a.tiles & b.tiles);
      case Op::kUnique:
        return a;  // sets never hold duplicates
      default:
        return Value::Bad();
    }
  }

 private:
  // Applies the lambda to each element in canonical order: Blue, Red, Purple
  // for ships, row-major for tiles.
  Value Map(const Node& n, const Env& env) const {
    const Node& lambda = n.args[0];
    const Node& body = lambda.args[0];
    const bool collect_tiles = lambda.type == Type::kFnShipLoc;
    Value out;
    if (lambda.value == 1) {
      const Value set = Eval(n.args[1], env);
      if (set.invalid) return set;
      Env inner = env;
      for (TileMask m = set.tiles; m != 0; m &= m - 1) {
        inner.location = std::countr_zero(m);
        const Value v = Eval(body, inner);
        if (v.invalid) return v;
        out.agg.Add(v.scalar);
      }
      return out;
    }
    Env inner = env;
    for (Color c : kShipColors) {
      inner.ship = static_cast<int>(c);
      const Value v = Eval(body, inner);
      if (v.invalid) return v;
      if (collect_tiles) {
        out.tiles |= TileMask{1} << v.scalar;
      } else {
        out.agg.Add(v.scalar);
      }
    }
    return out;
  }

  const Board& board_;
};

AnswerValue ToAnswer(const Value& v, Type type) {
  if (v.invalid) return AnswerValue::Invalid();
  switch (type) {
    case Type::kBool:
      return AnswerValue::Boolean(v.scalar != 0);
    case Type::kNumber:
      return AnswerValue::Number(v.scalar);
    case Type::kShip:
    case Type::kColor:
      return AnswerValue::OfColor(static_cast<Color>(v.scalar));
    case Type::kOrient:
      return AnswerValue::OfOrientation(static_cast<Orientation>(v.scalar));
    case Type::kLocation:
      return AnswerValue::OfLocation(Location(static_cast<int>(v.scalar)));
    default:
      return AnswerValue::Invalid();
  }
}

}  // namespace

std::string AnswerValue::ToString() const {
  switch (kind_) {
    case Kind::kInvalid:
      return "Invalid";
    case Kind::kBoolean:
      return payload_ ? "true" : "false";
    case Kind::kNumber:
      return std::to_string(payload_);
    case Kind::kColor:
      return std::string(ColorName(color()));
    case Kind::kOrientation:
      return std::string(OrientationName(orientation()));
    case Kind::kLocation:
      return location().ToString();
  }
  return "Invalid";
}

AnswerValue Evaluate(const Node& root, const Board& board) {
  return ToAnswer(Evaluator(board).Eval(root, Env{}), root.type);
}

AnswerValue Evaluate(const Program& program, const Board& board) {
  return Evaluate(program.root(), board);
}

std::map<AnswerValue, double> AnswerPartition(const Program& program, const Belief& belief) {
  std::map<AnswerValue, double> cells;
  for (std::size_t i = 0; i < belief.support.size(); ++i) {
    cells[Evaluate(program, belief.support[i])] += belief.weights[i];
  }
  return cells;
}

}  // namespace qgen
