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

// Novel questions: energy-weighted draws from a proposal pool, filtered so
// that no output is equivalent to a known question or to an earlier output.

#ifndef QGEN_GENERATOR_HPP_
#define QGEN_GENERATOR_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/features.hpp"
#include "qgen/model.hpp"

namespace qgen {

struct EquivalenceVerdict {
  enum class Reason : std::uint8_t { kIdenticalPartition, kArgumentVariant, kDistinct };
  bool equivalent = false;
  Reason reason = Reason::kDistinct;
};

std::string_view ReasonName(EquivalenceVerdict::Reason r);

// Canonical text after pinning every ship color to Blue, location to 1A and
// number literal to 0, so "(size Red)" and "(size Purple)" share a skeleton.
std::string ArgumentSkeleton(const Node& node);
inline std::string ArgumentSkeleton(const Program& p) { return ArgumentSkeleton(p.root()); }

// Equivalent iff the programs split the belief support into the same cells
// (answer labels ignored) or differ only in terminal arguments.
EquivalenceVerdict Equivalent(const Program& a, const Program& b, const Belief& belief);

struct GenerateConfig {
  int k = 5;
  std::uint64_t seed = 0;
  bool require_relevance = true;  // skip programs that never read the board
};

struct GeneratedQuestion {
  Program program;
  std::string text;
  double energy;
  FeatureVector features;
};

struct GenerateResult {
  std::vector<GeneratedQuestion> questions;  // energy ascending
  int rejected_equivalent = 0;
  int skipped_irrelevant = 0;
  std::string warning;  // non-empty when fewer than k were found
};

// Draws without replacement from the distinct programs of `pool` with
// probability proportional to exp(-energy). A draw equivalent to any `known`
// program or to an accepted one is discarded and the next one taken.
// `pool_features` must be row-aligned with `pool` and computed by `extractor`.
GenerateResult SampleNovel(FeatureExtractor& extractor, const Weights& w,
                           std::span<const Program> pool,
                           std::span<const FeatureVector> pool_features,
                           std::span<const Program> known, const GenerateConfig& config);

}  // namespace qgen

#endif  // QGEN_GENERATOR_HPP_
