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

// Log-linear density over question programs:
//
//   E(x) = sum_k theta_k f_k(x),   p(x; theta) = exp(-E(x)) / Z.
//
// Z and the model's feature expectations are estimated per context by
// importance sampling from the grammar, with self-normalized weights
// exp(-E(x_i)) / q(x_i). Everything is computed in log space.

#ifndef QGEN_MODEL_HPP_
#define QGEN_MODEL_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgen/features.hpp"
#include "qgen/grammar.hpp"

namespace qgen {

enum class Variant : std::uint8_t {
  kFull,
  kInformationAgnostic,  // no eig, eig_zero
  kComplexityAgnostic,   // no complexity
  kTypeAgnostic,         // no type_* one-hots
};

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::kFull, Variant::kInformationAgnostic, Variant::kComplexityAgnostic,
    Variant::kTypeAgnostic};

std::string_view VariantName(Variant v);
// Accepts the names printed by VariantName ("full", "information_agnostic", ...).
Variant ParseVariant(std::string_view name);

std::array<bool, kNumFeatures> ActiveFeatures(Variant v);

// theta; features masked by the variant are pinned to 0.
struct Weights {
  Variant variant = Variant::kFull;
  FeatureArray theta{};

  static Weights Zero(Variant v) { return Weights{v, {}}; }

  std::map<std::string, double> ToMap() const;
  // Throws SchemaError if an active feature is missing, a name is unknown, or
  // a masked feature is nonzero.
  static Weights FromMap(const std::map<std::string, double>& theta, Variant v);
};

double Energy(const FeatureArray& f, const Weights& w);
inline double Energy(const FeatureVector& f, const Weights& w) { return Energy(f.ToArray(), w); }

double LogSumExp(std::span<const double> xs);

// Proposal samples x_i ~ q, shared by every context. Duplicates are kept.
struct ProposalPool {
  std::vector<Program> programs;
  std::vector<double> log_q;
  std::uint64_t seed = 0;
  std::int64_t draws = 0;  // raw PCFG draws, including rejected ones
  int max_functions = 100;

  std::size_t size() const { return programs.size(); }

  // Throws std::invalid_argument for size 0.
  static ProposalPool Draw(std::size_t size, std::uint64_t seed, const SamplerConfig& config = {});
};

// Rows that define a normalizer:
//   log Z = logsumexp_i(-E(row_i) + log_mass_i) + log_offset.
// For an importance-sampling pool log_mass_i = -log q(x_i) and
// log_offset = -log M; for an exhaustively enumerated universe both are 0.
struct NormalizerRows {
  std::vector<FeatureArray> rows;
  std::vector<double> log_mass;
  double log_offset = 0.0;

  std::size_t size() const { return rows.size(); }

  static NormalizerRows FromPool(std::span<const FeatureVector> features,
                                 std::span<const double> log_q);
  static NormalizerRows Exact(std::span<const FeatureVector> features);

  // Merges rows with identical features (summing their masses). Z and the
  // model expectations are unchanged for every theta.
  NormalizerRows Compressed() const;
};

// Throws std::invalid_argument on an empty normalizer and NumericError if the
// result is not finite.
double EstimateLogZ(const NormalizerRows& normalizer, const Weights& w);

// E_model[f] under self-normalized weights. Throws NumericError when the
// weights are degenerate (non-finite).
FeatureArray ModelExpectation(const NormalizerRows& normalizer, const Weights& w);

// Training or evaluation data for one context.
struct ContextProblem {
  std::string context_id;
  NormalizerRows normalizer;           // uncompressed; used for bootstrap
  NormalizerRows compact;              // Compressed() of normalizer
  std::vector<FeatureArray> data;      // one row per human question
  std::vector<std::string> data_keys;  // canonical text per question

  ContextProblem() = default;
  ContextProblem(std::string id, NormalizerRows normalizer, std::vector<FeatureArray> data,
                 std::vector<std::string> data_keys = {});
};

// sum_i [-E(d_i) - log Z(context of d_i)].
double LogLikelihood(std::span<const ContextProblem> problems, const Weights& w);

// d LogLikelihood / d theta = sum_c n_c E_model,c[f] - sum_i f(d_i); masked
// components are 0. Zero exactly when model and data moments match.
FeatureArray Gradient(std::span<const ContextProblem> problems, const Weights& w);

struct TrainConfig {
  int iterations = 100'000;
  double learning_rate = 0.1;
  int trace_every = 1000;  // 0 disables the trace
};

struct TracePoint {
  int iteration;
  double log_likelihood;
};

struct TrainResult {
  Weights weights;
  std::vector<TracePoint> trace;
};

// Gradient ascent from theta = 0 with step learning_rate * Gradient / N.
// Throws NumericError (with the trace so far) if the likelihood diverges.
TrainResult Train(std::span<const ContextProblem> problems, Variant variant,
                  const TrainConfig& config);

// Spearman's rho with average ranks for ties. nullopt if either input is
// constant. Throws std::invalid_argument on length mismatch or fewer than 3
// points.
std::optional<double> SpearmanRho(std::span<const double> x, std::span<const double> y);

// rho between -energy and frequency (lower energy should mean asked more).
std::optional<double> EnergyFrequencyCorrelation(std::span<const double> energy,
                                                 std::span<const double> frequency);

// Distinct questions of a context with their frequency and energy under w.
struct ScatterPoint {
  std::string program;
  double energy;
  double frequency;
};
std::vector<ScatterPoint> EnergyFrequencyScatter(const ContextProblem& problem, const Weights& w);

struct LoocvConfig {
  TrainConfig train;
  int bootstrap_replicates = 1000;  // 0 disables
  std::uint64_t bootstrap_seed = 0;
};

struct LoocvRow {
  Variant variant;
  std::string held_out;
  double log_likelihood;
  std::optional<double> spearman;
  Weights weights;
};

struct LoocvSummary {
  Variant variant;
  double total_log_likelihood;
  double mean_log_likelihood;
  std::optional<double> mean_spearman;
  // Fraction of bootstrap replicates in which the full model's total held-out
  // likelihood beats this variant's (nullopt for the full model itself or
  // when bootstrapping is disabled).
  std::optional<double> full_better_fraction;
};

struct LoocvReport {
  std::vector<LoocvRow> rows;  // variant-major, contexts in input order
  std::vector<LoocvSummary> summary;
};

// Leave-one-context-out: for each variant and context, fit on the other
// contexts and score the held-out one. Requires at least 2 problems.
LoocvReport Loocv(std::span<const ContextProblem> problems, std::span<const Variant> variants,
                  const LoocvConfig& config);

// log Z re-estimated on `replicates` pool-sized resamples (with replacement).
std::vector<double> BootstrapLogZ(const NormalizerRows& normalizer, const Weights& w,
                                  int replicates, std::uint64_t seed);

}  // namespace qgen

#endif  // QGEN_MODEL_HPP_
