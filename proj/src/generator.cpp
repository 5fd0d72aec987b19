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

#include "qgen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace qgen {
namespace {

void PinArguments(Node& n) {
  switch (n.op) {
    case Op::kColor:
      if (n.value != static_cast<int>(Color::kWater)) n.value = static_cast<int>(Color::kBlue);
      break;
    case Op::kLocation:
    case Op::kNumber:
      n.value = 0;
      break;
    default:
      break;
  }
  for (Node& c : n.args) PinArguments(c);
}

// A program already in the filter set, with its partition evidence.
struct Reference {
  const Program* program;
  std::uint64_t signature;
  std::string skeleton;
  std::optional<std::vector<std::uint32_t>> cells;  // filled on first hash hit
};

class NoveltyFilter {
 public:
  NoveltyFilter(FeatureExtractor& extractor) : extractor_(extractor) {}

  void Add(const Program& p) {
    refs_.push_back({&p, extractor_.Partition(p)->signature, ArgumentSkeleton(p), std::nullopt});
  }

  bool Clashes(const Program& p) {
    const std::uint64_t sig = extractor_.Partition(p)->signature;
    const std::string skel = ArgumentSkeleton(p);
    std::optional<std::vector<std::uint32_t>> cells;
    for (Reference& r : refs_) {
      if (r.skeleton == skel) return true;
      if (r.signature != sig) continue;
      if (!cells) cells = PartitionCells(p, extractor_.belief());
      if (!r.cells) r.cells = PartitionCells(*r.program, extractor_.belief());
      if (*cells == *r.cells) return true;
    }
    return false;
  }

 private:
  FeatureExtractor& extractor_;
  std::vector<Reference> refs_;
};

}  // namespace

std::string_view ReasonName(EquivalenceVerdict::Reason r) {
  switch (r) {
    case EquivalenceVerdict::Reason::kIdenticalPartition: return "identical_partition";
    case EquivalenceVerdict::Reason::kArgumentVariant: return "argument_variant";
    case EquivalenceVerdict::Reason::kDistinct: return "distinct";
  }
  return "?";
}

std::string ArgumentSkeleton(const Node& node) {
  Node copy = node;
  PinArguments(copy);
  return CanonicalPrint(copy);
}

EquivalenceVerdict Equivalent(const Program& a, const Program& b, const Belief& belief) {
  if (PartitionCells(a, belief) == PartitionCells(b, belief)) {
    return {true, EquivalenceVerdict::Reason::kIdenticalPartition};
  }
  if (ArgumentSkeleton(a) == ArgumentSkeleton(b)) {
    return {true, EquivalenceVerdict::Reason::kArgumentVariant};
  }
  return {false, EquivalenceVerdict::Reason::kDistinct};
}

GenerateResult SampleNovel(FeatureExtractor& extractor, const Weights& w,
                           std::span<const Program> pool,
                           std::span<const FeatureVector> pool_features,
                           std::span<const Program> known, const GenerateConfig& config) {
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (pool.size() != pool_features.size()) {
    throw std::invalid_argument("pool and pool_features differ in length");
  }

  // Distinct pool programs, first occurrence kept.
  std::vector<std::size_t> distinct;
  std::vector<std::string> texts;
  {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::string t = CanonicalPrint(pool[i]);
      if (seen.insert(t).second) {
        distinct.push_back(i);
        texts.push_back(std::move(t));
      }
    }
  }

  // Gumbel-max keys: popping keys in descending order is a weighted draw
  // without replacement.
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, std::size_t>> heap;
  heap.reserve(distinct.size());
  std::vector<double> energy(distinct.size());
  for (std::size_t j = 0; j < distinct.size(); ++j) {
    energy[j] = Energy(pool_features[distinct[j]], w);
    double u = unif(rng);
    while (u <= 0.0) u = unif(rng);
    if (!std::isfinite(energy[j])) continue;
    heap.emplace_back(-energy[j] - std::log(-std::log(u)), j);
  }
  std::make_heap(heap.begin(), heap.end());

  GenerateResult result;
  NoveltyFilter filter(extractor);
  for (const Program& p : known) filter.Add(p);
  std::vector<std::size_t> accepted;
  while (static_cast<int>(accepted.size()) < config.k && !heap.empty()) {
    std::pop_heap(heap.begin(), heap.end());
    const std::size_t j = heap.back().second;
    heap.pop_back();
    const std::size_t i = distinct[j];
    if (config.require_relevance && pool_features[i].relevance != 1.0) {
      ++result.skipped_irrelevant;
      continue;
    }
    if (filter.Clashes(pool[i])) {
      ++result.rejected_equivalent;
      continue;
    }
    filter.Add(pool[i]);
    accepted.push_back(j);
  }

  for (std::size_t j : accepted) {
    const std::size_t i = distinct[j];
    result.questions.push_back({pool[i], texts[j], energy[j], pool_features[i]});
  }
  std::stable_sort(result.questions.begin(), result.questions.end(),
                   [](const auto& a, const auto& b) { return a.energy < b.energy; });
  if (static_cast<int>(accepted.size()) < config.k) {
    result.warning = "pool exhausted: " + std::to_string(accepted.size()) + " of " +
                     std::to_string(config.k) + " novel questions found for context " +
                     extractor.context().id();
  }
  return result;
}

}  // namespace qgen
