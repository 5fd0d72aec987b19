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

// End-to-end runs: load contexts and questions, draw the proposal pool,
// compute features, then train / cross-validate / generate and write reports.

#ifndef QGEN_EXPERIMENT_HPP_
#define QGEN_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgen/features.hpp"
#include "qgen/generator.hpp"
#include "qgen/io.hpp"
#include "qgen/model.hpp"

namespace qgen {

struct ExperimentConfig {
  std::filesystem::path contexts_dir = "data/contexts";
  std::filesystem::path dataset = "data/questions.jsonl";
  std::filesystem::path out_dir = "out";
  std::vector<std::string> contexts;                // empty: every context found
  std::vector<std::string> exclude = {"1", "2"};
  int smallest_contexts = 0;  // >0: keep only this many smallest posteriors
  std::size_t pool_size = 150'000;
  std::uint64_t seed = 0;
  int iterations = 100'000;
  double learning_rate = 0.1;
  std::vector<Variant> variants{kAllVariants.begin(), kAllVariants.end()};
  std::string entropy_base = "bits";
  int bootstrap_replicates = 1000;
  int max_functions = 100;
  int k = 5;
  std::optional<std::filesystem::path> weights;  // generate: skip training

  // "paper" is the default protocol; "desk" shrinks pool, iterations and
  // contexts for quick runs. Throws std::invalid_argument otherwise.
  void ApplyPreset(std::string_view name);

  // Stable JSON of every field, and its SHA-1.
  std::string ToJson() const;
  std::string Hash() const;
};

// Everything the model commands need, per included context.
struct Workspace {
  ExperimentConfig config;
  std::vector<Context> contexts;
  std::vector<Belief> posteriors;
  Dataset dataset;
  ProposalPool pool;
  std::vector<std::vector<FeatureVector>> pool_features;  // [context][pool row]
  std::vector<std::vector<Program>> questions;            // [context]
  std::vector<ContextProblem> problems;                   // [context]
  std::vector<std::string> input_digests;                 // "path sha1"
};

// Throws IoError listing every missing input before any computation.
void CheckInputs(const ExperimentConfig& config);

Workspace Prepare(const ExperimentConfig& config, std::ostream& log);

// Each writes its reports under config.out_dir plus run_metadata.json.
void RunTrain(const Workspace& ws, std::ostream& log);
LoocvReport RunLoocv(const Workspace& ws, std::ostream& log);
void RunGenerate(const Workspace& ws, std::ostream& log);

// Fraction of a context's distinct questions that no other context asks.
double UniqueQuestionFraction(const Workspace& ws, std::size_t context);

}  // namespace qgen

#endif  // QGEN_EXPERIMENT_HPP_
