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

// The probabilistic context-free grammar over question programs. Every
// nonterminal picks uniformly among its productions; this is both the
// importance-sampling proposal q(x) and the complexity measure -log q(x).
//
// Two productions are context-sensitive: S -> x and L -> y are only available
// inside the body of a lambda binding that variable, and they count toward the
// number of choices only there.

#ifndef QGEN_GRAMMAR_HPP_
#define QGEN_GRAMMAR_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qgen/dsl.hpp"

namespace qgen {

enum class Nonterminal : std::uint8_t {
  kA,
  kB,
  kN,
  kC,
  kS,
  kO,
  kL,
  kSetB,
  kSetN,
  kSetL,
  kSetS,
  kFyB,
  kFxB,
  kFxN,
  kFxL,
};
inline constexpr int kNumNonterminals = 15;

std::string_view NonterminalName(Nonterminal nt);

struct Production {
  enum class Kind : std::uint8_t {
    kUnit,     // NT -> NT'
    kLiteral,  // NT -> terminal (op + value)
    kApply,    // NT -> (head children...)
  };
  Kind kind = Kind::kApply;
  Op op = Op::kBool;
  int value = 0;
  std::vector<Nonterminal> children;
  bool board_referential = false;  // the "b" marker
  // 0 = needs x in scope, 1 = needs y in scope, -1 = always available.
  int requires_variable = -1;

  std::string ToString(Nonterminal lhs) const;
};

// Tracks which lambda variables are bound at a point of the derivation.
struct LambdaScope {
  bool x = false;
  bool y = false;
};

class RuleTable {
 public:
  // The fixed question grammar.
  static const RuleTable& Default();

  const std::vector<Production>& productions(Nonterminal nt) const {
    return rules_[static_cast<int>(nt)];
  }
  bool Available(const Production& p, LambdaScope scope) const;
  int NumAvailable(Nonterminal nt, LambdaScope scope) const;

  // One production per line, "LHS -> RHS", with " [b]" on board rules.
  std::string ToString() const;

 private:
  RuleTable();
  std::vector<std::vector<Production>> rules_;
};

struct RuleChoice {
  Nonterminal nonterminal;
  int production;   // index into RuleTable::productions(nonterminal)
  int num_choices;  // productions available at that point

  friend bool operator==(const RuleChoice&, const RuleChoice&) = default;
};

struct Derivation {
  Program program;
  std::vector<RuleChoice> choices;

  double LogProbability() const;
  bool UsesBoardRule() const;
};

// Rebuilds a program by replaying rule choices from the start symbol A.
Program Replay(const std::vector<RuleChoice>& choices);

// Reconstructs the unique derivation of a program. Throws DerivationError.
Derivation Derive(const Program& program);

// Natural-log probability of the program under the uniform PCFG.
double LogQ(const Program& program);

struct SamplerConfig {
  int max_functions = 100;
  int max_depth = 500;
  std::int64_t max_attempts = 1'000'000;
};

// One draw from the raw PCFG; nullopt if the draw exceeded max_functions or
// max_depth (it would be rejected).
std::optional<Derivation> SampleOnce(std::mt19937_64& rng, const SamplerConfig& config);

// Rejection-samples until a draw satisfies the caps. Throws SamplingError when
// max_attempts is exhausted. `attempts`, if given, receives the draws used.
Derivation Sample(std::mt19937_64& rng, const SamplerConfig& config,
                  std::int64_t* attempts = nullptr);

struct EnumeratedProgram {
  Program program;
  double log_q;
};

// Every program with at most max_functions functions, each exactly once.
// Refuses (std::invalid_argument) max_functions > 4 or results larger than
// `max_results`.
std::vector<EnumeratedProgram> EnumeratePrograms(int max_functions,
                                                 std::size_t max_results = 5'000'000);

}  // namespace qgen

#endif  // QGEN_GRAMMAR_HPP_
