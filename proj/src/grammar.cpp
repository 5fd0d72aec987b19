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

#include "qgen/grammar.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "qgen/common.hpp"

namespace qgen {
namespace {

using NT = Nonterminal;
using Kind = Production::Kind;

Production Unit(NT child) { return {Kind::kUnit, Op::kBool, 0, {child}}; }
Production Lit(Op op, int value, int requires_variable = -1) {
  Production p{Kind::kLiteral, op, value, {}};
  p.requires_variable = requires_variable;
  return p;
}
Production App(Op op, std::vector<NT> children, bool board = false, int value = 0) {
  Production p{Kind::kApply, op, value, std::move(children)};
  p.board_referential = board;
  return p;
}

bool Compatible(NT nt, Type t) {
  switch (nt) {
    case NT::kA:
      return t == Type::kBool || t == Type::kNumber || t == Type::kShip || t == Type::kColor ||
             t == Type::kOrient || t == Type::kLocation;
    case NT::kB: return t == Type::kBool;
    case NT::kN: return t == Type::kNumber;
    case NT::kC: return t == Type::kShip || t == Type::kColor;
    case NT::kS: return t == Type::kShip;
    case NT::kO: return t == Type::kOrient;
    case NT::kL: return t == Type::kLocation;
    case NT::kSetB: return t == Type::kSetBool;
    case NT::kSetN: return t == Type::kSetNumber;
    case NT::kSetL: return t == Type::kSetLocation;
    case NT::kSetS: return t == Type::kSetShip;
    case NT::kFyB: return t == Type::kFnLocBool;
    case NT::kFxB: return t == Type::kFnShipBool;
    case NT::kFxN: return t == Type::kFnShipNum;
    case NT::kFxL: return t == Type::kFnShipLoc;
  }
  return false;
}

LambdaScope Bind(LambdaScope scope, const Production& p) {
  if (p.op == Op::kLambda) (p.value == 0 ? scope.x : scope.y) = true;
  return scope;
}

bool Matches(const Production& p, const Node& n) {
  switch (p.kind) {
    case Kind::kUnit:
      return Compatible(p.children[0], n.type);
    case Kind::kLiteral:
      return n.op == p.op && n.value == p.value;
    case Kind::kApply:
      if (n.op != p.op || n.args.size() != p.children.size()) return false;
      if (p.op == Op::kLambda && n.value != p.value) return false;
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (!Compatible(p.children[i], n.args[i].type)) return false;
      }
      return true;
  }
  return false;
}

void DeriveNode(const Node& n, NT nt, LambdaScope scope, std::vector<RuleChoice>& out) {
  const RuleTable& table = RuleTable::Default();
  const auto& prods = table.productions(nt);
  for (std::size_t i = 0; i < prods.size(); ++i) {
    const Production& p = prods[i];
    if (!table.Available(p, scope) || !Matches(p, n)) continue;
    out.push_back({nt, static_cast<int>(i), table.NumAvailable(nt, scope)});
    if (p.kind == Kind::kUnit) {
      DeriveNode(n, p.children[0], scope, out);
    } else if (p.kind == Kind::kApply) {
      const LambdaScope inner = Bind(scope, p);
      for (std::size_t k = 0; k < p.children.size(); ++k) {
        DeriveNode(n.args[k], p.children[k], inner, out);
      }
    }
    return;
  }
  throw DerivationError("'" + CanonicalPrint(n) + "' cannot be derived from " +
                        std::string(NonterminalName(nt)));
}

Node ReplayNode(NT nt, LambdaScope scope, const std::vector<RuleChoice>& choices, std::size_t& pos) {
  const RuleTable& table = RuleTable::Default();
  if (pos >= choices.size()) throw DerivationError("rule choice sequence ended early");
  const RuleChoice& c = choices[pos++];
  if (c.nonterminal != nt || c.production < 0 ||
      c.production >= static_cast<int>(table.productions(nt).size())) {
    throw DerivationError("rule choice does not match expected nonterminal " +
                          std::string(NonterminalName(nt)));
  }
  const Production& p = table.productions(nt)[c.production];
  if (p.kind == Kind::kUnit) return ReplayNode(p.children[0], scope, choices, pos);
  Node n;
  n.op = p.op;
  n.value = p.value;
  const LambdaScope inner = Bind(scope, p);
  for (NT child : p.children) n.args.push_back(ReplayNode(child, inner, choices, pos));
  return n;
}

// Early-aborting generator for SampleOnce.
class Grower {
 public:
  Grower(std::mt19937_64& rng, const SamplerConfig& config) : rng_(rng), config_(config) {}

  bool Grow(NT nt, LambdaScope scope, int depth, Node& out) {
    if (depth > config_.max_depth) return false;
    const RuleTable& table = RuleTable::Default();
    const auto& prods = table.productions(nt);
    const int n = table.NumAvailable(nt, scope);
    int pick = std::uniform_int_distribution<int>(0, n - 1)(rng_);
    std::size_t idx = 0;
    for (; idx < prods.size(); ++idx) {
      if (!table.Available(prods[idx], scope)) continue;
      if (pick-- == 0) break;
    }
    const Production& p = prods[idx];
    choices_.push_back({nt, static_cast<int>(idx), n});
    if (p.kind == Kind::kUnit) return Grow(p.children[0], scope, depth + 1, out);
    out.op = p.op;
    out.value = p.value;
    if (p.kind == Kind::kLiteral) return true;
    if (++functions_ > config_.max_functions) return false;
    const LambdaScope inner = Bind(scope, p);
    out.args.resize(p.children.size());
    for (std::size_t k = 0; k < p.children.size(); ++k) {
      if (!Grow(p.children[k], inner, depth + 1, out.args[k])) return false;
    }
    return true;
  }

  std::vector<RuleChoice> TakeChoices() { return std::move(choices_); }

 private:
  std::mt19937_64& rng_;
  const SamplerConfig& config_;
  std::vector<RuleChoice> choices_;
  int functions_ = 0;
};

struct Item {
  Node node;
  double log_q;
  int functions;
};

class Enumerator {
 public:
  explicit Enumerator(std::size_t max_results) : max_results_(max_results) {}

  const std::vector<Item>& Enumerate(NT nt, int budget, LambdaScope scope) {
    const auto key = std::make_tuple(static_cast<int>(nt), budget, scope.x, scope.y);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Item> items;
    const RuleTable& table = RuleTable::Default();
    const double log_choice = -std::log(static_cast<double>(table.NumAvailable(nt, scope)));
    for (const Production& p : table.productions(nt)) {
      if (!table.Available(p, scope)) continue;
      if (p.kind == Kind::kUnit) {
        for (const Item& child : Enumerate(p.children[0], budget, scope)) {
          items.push_back({child.node, child.log_q + log_choice, child.functions});
        }
      } else if (p.kind == Kind::kLiteral) {
        Node n;
        n.op = p.op;
        n.value = p.value;
        items.push_back({std::move(n), log_choice, 0});
      } else if (budget >= 1) {
        Node n;
        n.op = p.op;
        n.value = p.value;
        n.args.resize(p.children.size());
        Combine(p, Bind(scope, p), 0, budget - 1, n, log_choice, 1, items);
      }
      if (items.size() > max_results_) {
        throw std::invalid_argument("program enumeration exceeds the result limit");
      }
    }
    return memo_.emplace(key, std::move(items)).first->second;
  }

 private:
  void Combine(const Production& p, LambdaScope scope, std::size_t k, int remaining, Node& partial,
               double log_q, int functions, std::vector<Item>& out) {
    if (k == p.children.size()) {
      out.push_back({partial, log_q, functions});
      if (out.size() > max_results_) {
        throw std::invalid_argument("program enumeration exceeds the result limit");
      }
      return;
    }
    // std::map keeps references stable while children are memoized.
    const std::vector<Item>& options = Enumerate(p.children[k], remaining, scope);
    for (const Item& child : options) {
      partial.args[k] = child.node;
      Combine(p, scope, k + 1, remaining - child.functions, partial, log_q + child.log_q,
              functions + child.functions, out);
    }
  }

  std::size_t max_results_;
  std::map<std::tuple<int, int, bool, bool>, std::vector<Item>> memo_;
};

}  // namespace

std::string_view NonterminalName(Nonterminal nt) {
  static constexpr std::string_view kNames[] = {"A",    "B",    "N",    "C",   "S",
                                                "O",    "L",    "setB", "setN", "setL",
                                                "setS", "fyB",  "fxB",  "fxN", "fxL"};
  return kNames[static_cast<int>(nt)];
}

std::string Production::ToString(Nonterminal lhs) const {
  std::string s = std::string(NonterminalName(lhs)) + " -> ";
  switch (kind) {
    case Kind::kUnit:
      s += NonterminalName(children[0]);
      break;
    case Kind::kLiteral: {
      Node n;
      n.op = op;
      n.value = value;
      s += CanonicalPrint(n);
      break;
    }
    case Kind::kApply: {
      if (op == Op::kShipSet || op == Op::kTileSet) {
        Node n;
        n.op = op;
        s += CanonicalPrint(n);
        break;
      }
      if (op == Op::kLambda) {
        s += std::string("(\xCE\xBB ") + (value == 0 ? "x " : "y ") +
             std::string(NonterminalName(children[0])) + ")";
        break;
      }
      const std::string head(FunctionName(op));
      s += "(" + head;
      for (NT c : children) s += " " + std::string(NonterminalName(c));
      s += ")";
      break;
    }
  }
  if (board_referential) s += " [b]";
  return s;
}

RuleTable::RuleTable() : rules_(kNumNonterminals) {
  auto& A = rules_[static_cast<int>(NT::kA)];
  A = {Unit(NT::kB), Unit(NT::kN), Unit(NT::kC), Unit(NT::kO), Unit(NT::kL)};

  auto& B = rules_[static_cast<int>(NT::kB)];
  B = {Lit(Op::kBool, 1),
       Lit(Op::kBool, 0),
       App(Op::kNot, {NT::kB}),
       App(Op::kAnd, {NT::kB, NT::kB}),
       App(Op::kOr, {NT::kB, NT::kB}),
       App(Op::kEq, {NT::kB, NT::kB}),
       App(Op::kEq, {NT::kN, NT::kN}),
       App(Op::kEq, {NT::kO, NT::kO}),
       App(Op::kEq, {NT::kC, NT::kC}),
       App(Op::kEq, {NT::kSetN}),
       App(Op::kAny, {NT::kSetB}),
       App(Op::kAll, {NT::kSetB}),
       App(Op::kGreater, {NT::kN, NT::kN}),
       App(Op::kLess, {NT::kN, NT::kN}),
       App(Op::kTouch, {NT::kS, NT::kS}, /*board=*/true),
       App(Op::kIsSubset, {NT::kSetL, NT::kSetL})};

  auto& N = rules_[static_cast<int>(NT::kN)];
  for (int v = 0; v <= 10; ++v) N.push_back(Lit(Op::kNumber, v));
  N.push_back(App(Op::kPlus, {NT::kN, NT::kN}));
  N.push_back(App(Op::kPlus, {NT::kB, NT::kB}));
  N.push_back(App(Op::kPlus, {NT::kSetN}));
  N.push_back(App(Op::kPlus, {NT::kSetB}));
  N.push_back(App(Op::kMinus, {NT::kN, NT::kN}));
  N.push_back(App(Op::kSize, {NT::kS}, /*board=*/true));
  N.push_back(App(Op::kRow, {NT::kL}));
  N.push_back(App(Op::kCol, {NT::kL}));
  N.push_back(App(Op::kSetSize, {NT::kSetL}));

  auto& C = rules_[static_cast<int>(NT::kC)];
  C = {Unit(NT::kS), Lit(Op::kColor, static_cast<int>(Color::kWater)),
       App(Op::kColorOf, {NT::kL}, /*board=*/true)};

  auto& S = rules_[static_cast<int>(NT::kS)];
  S = {Lit(Op::kColor, static_cast<int>(Color::kBlue)), Lit(Op::kColor, static_cast<int>(Color::kRed)),
       Lit(Op::kColor, static_cast<int>(Color::kPurple)), Lit(Op::kVarX, 0, /*requires x*/ 0)};

  auto& O = rules_[static_cast<int>(NT::kO)];
  O = {Lit(Op::kOrient, static_cast<int>(Orientation::kHorizontal)),
       Lit(Op::kOrient, static_cast<int>(Orientation::kVertical)),
       App(Op::kOrientOf, {NT::kS}, /*board=*/true)};

  auto& L = rules_[static_cast<int>(NT::kL)];
  for (int i = 0; i < kNumTiles; ++i) L.push_back(Lit(Op::kLocation, i));
  L.push_back(Lit(Op::kVarY, 0, /*requires y*/ 1));
  L.push_back(App(Op::kTopLeft, {NT::kSetL}));
  L.push_back(App(Op::kBottomRight, {NT::kSetL}));

  rules_[static_cast<int>(NT::kSetB)] = {App(Op::kMap, {NT::kFyB, NT::kSetL}),
                                         App(Op::kMap, {NT::kFxB, NT::kSetS})};
  rules_[static_cast<int>(NT::kSetN)] = {App(Op::kMap, {NT::kFxN, NT::kSetS})};
  rules_[static_cast<int>(NT::kSetL)] = {App(Op::kMap, {NT::kFxL, NT::kSetS}),
                                         App(Op::kTileSet, {}),
                                         App(Op::kColoredTiles, {NT::kC}, /*board=*/true),
                                         App(Op::kSetDifference, {NT::kSetL, NT::kSetL}),
                                         App(Op::kUnion, {NT::kSetL, NT::kSetL}),
                                         App(Op::kIntersection, {NT::kSetL, NT::kSetL}),
                                         App(Op::kUnique, {NT::kSetL})};
  rules_[static_cast<int>(NT::kSetS)] = {App(Op::kShipSet, {})};
  rules_[static_cast<int>(NT::kFyB)] = {App(Op::kLambda, {NT::kB}, false, /*binds y*/ 1)};
  rules_[static_cast<int>(NT::kFxB)] = {App(Op::kLambda, {NT::kB}, false, /*binds x*/ 0)};
  rules_[static_cast<int>(NT::kFxN)] = {App(Op::kLambda, {NT::kN}, false, 0)};
  rules_[static_cast<int>(NT::kFxL)] = {App(Op::kLambda, {NT::kL}, false, 0)};
}

const RuleTable& RuleTable::Default() {
  static const RuleTable table;
  return table;
}

bool RuleTable::Available(const Production& p, LambdaScope scope) const {
  if (p.requires_variable == 0) return scope.x;
  if (p.requires_variable == 1) return scope.y;
  return true;
}

int RuleTable::NumAvailable(Nonterminal nt, LambdaScope scope) const {
  int n = 0;
  for (const auto& p : productions(nt)) n += Available(p, scope) ? 1 : 0;
  return n;
}

std::string RuleTable::ToString() const {
  std::ostringstream out;
  for (int i = 0; i < kNumNonterminals; ++i) {
    const auto nt = static_cast<NT>(i);
    for (const auto& p : productions(nt)) out << p.ToString(nt) << "\n";
  }
  return out.str();
}

double Derivation::LogProbability() const {
  double lp = 0.0;
  for (const auto& c : choices) lp -= std::log(static_cast<double>(c.num_choices));
  return lp;
}

bool Derivation::UsesBoardRule() const {
  const RuleTable& table = RuleTable::Default();
  for (const auto& c : choices) {
    if (table.productions(c.nonterminal)[c.production].board_referential) return true;
  }
  return false;
}

Program Replay(const std::vector<RuleChoice>& choices) {
  std::size_t pos = 0;
  Node root = ReplayNode(NT::kA, LambdaScope{}, choices, pos);
  if (pos != choices.size()) throw DerivationError("unused rule choices after replay");
  const AnswerType t = Typecheck(root);
  return Program(std::move(root), t);
}

Derivation Derive(const Program& program) {
  Derivation d{program, {}};
  DeriveNode(program.root(), NT::kA, LambdaScope{}, d.choices);
  return d;
}

double LogQ(const Program& program) { return Derive(program).LogProbability(); }

std::optional<Derivation> SampleOnce(std::mt19937_64& rng, const SamplerConfig& config) {
  Grower grower(rng, config);
  Node root;
  if (!grower.Grow(NT::kA, LambdaScope{}, 0, root)) return std::nullopt;
  const AnswerType t = Typecheck(root);
  return Derivation{Program(std::move(root), t), grower.TakeChoices()};
}

Derivation Sample(std::mt19937_64& rng, const SamplerConfig& config, std::int64_t* attempts) {
  if (config.max_functions < 1) throw std::invalid_argument("max_functions must be >= 1");
  for (std::int64_t i = 1; i <= config.max_attempts; ++i) {
    if (auto d = SampleOnce(rng, config)) {
      if (attempts) *attempts = i;
      return *std::move(d);
    }
  }
  throw SamplingError("no program within " + std::to_string(config.max_functions) +
                      " functions after " + std::to_string(config.max_attempts) + " attempts");
}

std::vector<EnumeratedProgram> EnumeratePrograms(int max_functions, std::size_t max_results) {
  if (max_functions < 0 || max_functions > 4) {
    throw std::invalid_argument("exhaustive enumeration is limited to max_functions <= 4");
  }
  Enumerator e(max_results);
  const auto& items = e.Enumerate(NT::kA, max_functions, LambdaScope{});
  std::vector<EnumeratedProgram> out;
  out.reserve(items.size());
  for (const Item& item : items) {
    Node root = item.node;
    const AnswerType t = Typecheck(root);
    out.push_back({Program(std::move(root), t), item.log_q});
  }
  return out;
}

}  // namespace qgen
