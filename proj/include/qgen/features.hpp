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

// Question features for the log-linear model. Information gain is measured in
// bits; the remaining features (complexity, answer type, relevance) do not
// depend on the context.

#ifndef QGEN_FEATURES_HPP_
#define QGEN_FEATURES_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qgen/domain.hpp"
#include "qgen/dsl.hpp"

namespace qgen {

inline constexpr int kNumFeatures = 8;
inline constexpr double kEigZeroTolerance = 1e-12;

// Column order used everywhere features are stored as arrays.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "eig",         "eig_zero",    "complexity", "type_boolean",
    "type_number", "type_color",  "type_location", "relevance"};

using FeatureArray = std::array<double, kNumFeatures>;

struct FeatureVector {
  double eig = 0.0;         // bits
  double eig_zero = 0.0;    // 1 iff eig < kEigZeroTolerance
  double complexity = 0.0;  // -log q(x), nats
  double type_boolean = 0.0;  // Orientation questions count as Boolean
  double type_number = 0.0;
  double type_color = 0.0;
  double type_location = 0.0;
  double relevance = 0.0;  // 1 iff the program reads the board

  FeatureArray ToArray() const;
  static FeatureVector FromArray(const FeatureArray& a);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Sum over answers d of p(d) [H(h) - H(h | d)], in bits. `answers[i]` is the
// answer on the hypothesis with weight `weights[i]`; weights must sum to 1.
double ExpectedInformationGain(std::span<const AnswerValue> answers,
                               std::span<const double> weights);

// EIG of a program under a (context-conditioned) belief.
double Eig(const Program& program, const Belief& belief);

// Cell index of each support board, numbered by first appearance. Two
// programs induce the same set-partition iff these vectors are equal.
std::vector<std::uint32_t> PartitionCells(const Program& program, const Belief& belief);

// Per-program summary of the answer partition under one belief.
struct PartitionSummary {
  std::vector<AnswerValue> answers;  // one per cell, first-appearance order
  std::vector<double> masses;
  double eig = 0.0;
  std::uint64_t signature = 0;  // hash of PartitionCells()
};

PartitionSummary SummarizePartition(const Program& program, const Belief& belief);

// Features of a program for a belief conditioned on its context. Throws
// DerivationError when the program is not derivable from the grammar.
FeatureVector ComputeFeatures(const Program& program, const Belief& belief);

// Batch feature computation for one context with a memo of partition
// summaries keyed by canonical program text.
class FeatureExtractor {
 public:
  FeatureExtractor(Context context, Belief posterior, bool use_cache = true);

  const Context& context() const { return context_; }
  const Belief& belief() const { return belief_; }

  std::shared_ptr<const PartitionSummary> Partition(const Program& program);
  FeatureVector Features(const Program& program);

  // Order-preserving. Work is split over `threads` workers (0 = use
  // QGEN_THREADS or the hardware concurrency); the result does not depend on
  // the thread count.
  std::vector<FeatureVector> Matrix(std::span<const Program> programs, int threads = 0);

  std::size_t cache_size() const;

 private:
  Context context_;
  Belief belief_;
  bool use_cache_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const PartitionSummary>> cache_;
};

// Worker count from QGEN_THREADS, falling back to hardware concurrency.
int DefaultThreadCount();

// Columnar text: a header line, then one row per program with the canonical
// text and the eight features, tab separated.
void WriteFeatureMatrix(std::ostream& out, std::span<const std::string> programs,
                        std::span<const FeatureVector> rows);

struct FeatureRow {
  std::string program;
  FeatureVector features;
};

// Throws SchemaError on a malformed header or row.
std::vector<FeatureRow> ReadFeatureMatrix(std::istream& in);

}  // namespace qgen

#endif  // QGEN_FEATURES_HPP_
