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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "test_util.hpp"

namespace qgen {
namespace {

using Reason = EquivalenceVerdict::Reason;

Weights SomeWeights() {
  Weights w = Weights::Zero(Variant::kFull);
  w.theta = {-1.0, 0.5, 0.8, 0.0, 0.3, 0.2, 0.6, -1.0};
  return w;
}

TEST(EquivalenceTest, Examples) {
  const Belief& prior = PriorBelief();
  const auto v1 = Equivalent(Parse("(size Blue)"), Parse("(size Red)"), prior);
  EXPECT_TRUE(v1.equivalent);
  EXPECT_EQ(v1.reason, Reason::kArgumentVariant);

  const auto v2 = Equivalent(Parse("(size Blue)"), Parse("(size Blue)"), prior);
  EXPECT_TRUE(v2.equivalent);
  EXPECT_EQ(v2.reason, Reason::kIdenticalPartition);

  // Different constant answers, one cell each.
  const auto v3 = Equivalent(Parse("(= 1 1)"), Parse("(> 3 4)"), prior);
  EXPECT_TRUE(v3.equivalent);
  EXPECT_EQ(v3.reason, Reason::kIdenticalPartition);

  // Same cells under relabeled answers.
  const auto v4 = Equivalent(Parse("(touch Blue Red)"), Parse("(not (touch Blue Red))"), prior);
  EXPECT_EQ(v4.reason, Reason::kIdenticalPartition);

  const auto v5 = Equivalent(Parse("(size Blue)"), Parse("(orient Blue)"), prior);
  EXPECT_FALSE(v5.equivalent);
  EXPECT_EQ(v5.reason, Reason::kDistinct);
  EXPECT_EQ(ReasonName(v5.reason), "distinct");

  EXPECT_EQ(ArgumentSkeleton(Parse("(= (color 3C) Red)")), ArgumentSkeleton(Parse("(= (color 1F) Blue)")));
  EXPECT_NE(ArgumentSkeleton(Parse("(= (color 3C) Red)")), ArgumentSkeleton(Parse("(= (color 3C) Water)")));
}

TEST(EquivalenceTest, ReflexiveSymmetricAndMatchesCells) {
  const Belief b = Condition(PriorBelief(), testing::SmallContext());
  std::mt19937_64 rng(5);
  std::vector<Program> ps;
  for (int i = 0; i < 40; ++i) ps.push_back(Sample(rng, {}).program);
  std::vector<std::vector<std::uint32_t>> cells;
  for (const auto& p : ps) cells.push_back(PartitionCells(p, b));
  for (const auto& p : ps) {
    const auto v = Equivalent(p, p, b);
    EXPECT_TRUE(v.equivalent);
    EXPECT_EQ(v.reason, Reason::kIdenticalPartition);
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      const auto a = Equivalent(ps[i], ps[j], b), c = Equivalent(ps[j], ps[i], b);
      EXPECT_EQ(a.equivalent, c.equivalent);
      EXPECT_EQ(a.reason, c.reason);
      EXPECT_EQ(a.reason == Reason::kIdenticalPartition, cells[i] == cells[j]);
    }
  }
}

struct Fixture {
  Context ctx = testing::SmallContext();
  Belief belief = Condition(PriorBelief(), ctx);
  ProposalPool pool = ProposalPool::Draw(3000, 1);
  std::vector<FeatureVector> features;
  Fixture() {
    FeatureExtractor ex(ctx, belief);
    features = ex.Matrix(pool.programs);
  }
};

const Fixture& GetFixture() {
  static const Fixture* f = new Fixture;
  return *f;
}

TEST(SampleNovelTest, FiveNovelRelevantSortedQuestions) {
  const Fixture& f = GetFixture();
  const std::vector<Program> known = {Parse("(size Blue)"), Parse("(color 1B)"),
                                      Parse("(touch Red Purple)"), Parse("(orient Purple)")};
  FeatureExtractor ex(f.ctx, f.belief);
  GenerateConfig gc;
  gc.seed = 3;
  const auto r = SampleNovel(ex, SomeWeights(), f.pool.programs, f.features, known, gc);
  ASSERT_EQ(r.questions.size(), 5u);
  EXPECT_TRUE(r.warning.empty());
  std::set<std::string> known_text;
  for (const auto& k : known) known_text.insert(CanonicalPrint(k));
  for (std::size_t i = 0; i < r.questions.size(); ++i) {
    const auto& q = r.questions[i];
    EXPECT_EQ(q.features.relevance, 1.0);
    EXPECT_TRUE(std::isfinite(q.energy));
    EXPECT_NEAR(q.energy, Energy(ComputeFeatures(q.program, f.belief), SomeWeights()), 1e-9);
    EXPECT_FALSE(known_text.count(q.text));
    if (i > 0) EXPECT_LE(r.questions[i - 1].energy, q.energy);
    for (const auto& k : known) EXPECT_FALSE(Equivalent(q.program, k, f.belief).equivalent) << q.text;
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_FALSE(Equivalent(q.program, r.questions[j].program, f.belief).equivalent);
    }
  }
  // Same seed, same answer.
  FeatureExtractor ex2(f.ctx, f.belief);
  const auto again = SampleNovel(ex2, SomeWeights(), f.pool.programs, f.features, known, gc);
  ASSERT_EQ(again.questions.size(), r.questions.size());
  for (std::size_t i = 0; i < r.questions.size(); ++i) EXPECT_EQ(again.questions[i].text, r.questions[i].text);
}

TEST(SampleNovelTest, PartialResultWarns) {
  const Fixture& f = GetFixture();
  std::vector<Program> pool = {Parse("(size Blue)"), Parse("(size Red)"), Parse("(orient Blue)")};
  std::vector<FeatureVector> feats;
  for (const auto& p : pool) feats.push_back(ComputeFeatures(p, f.belief));
  FeatureExtractor ex(f.ctx, f.belief);
  const auto r = SampleNovel(ex, SomeWeights(), pool, feats, {}, {});
  EXPECT_LT(r.questions.size(), 5u);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_THROW(SampleNovel(ex, SomeWeights(), pool, feats, {}, {.k = 0}), std::invalid_argument);
}

// First draws follow exp(-E): frequencies of the ten lowest-energy distinct
// pool programs are within 3 sigma of their softmax probabilities.
TEST(SampleNovelTest, SelectionFrequencyFollowsEnergy) {
  const Fixture& f = GetFixture();
  const Weights w = SomeWeights();
  std::map<std::string, double> energy;
  for (std::size_t i = 0; i < f.pool.size(); ++i) {
    energy.emplace(CanonicalPrint(f.pool.programs[i]), Energy(f.features[i], w));
  }
  double z = 0.0;
  for (const auto& [t, e] : energy) z += std::exp(-e);
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [t, e] : energy) ranked.emplace_back(e, t);
  std::sort(ranked.begin(), ranked.end());

  FeatureExtractor ex(f.ctx, f.belief);
  constexpr int kReps = 10000;
  std::map<std::string, int> counts;
  GenerateConfig gc;
  gc.k = 1;
  gc.require_relevance = false;
  for (int rep = 0; rep < kReps; ++rep) {
    gc.seed = 1000 + rep;
    ++counts[SampleNovel(ex, w, f.pool.programs, f.features, {}, gc).questions.at(0).text];
  }
  for (int i = 0; i < 10; ++i) {
    const double p = std::exp(-ranked[i].first) / z;
    const double sigma = std::sqrt(p * (1 - p) / kReps);
    EXPECT_NEAR(counts[ranked[i].second] / double(kReps), p, 3 * sigma) << ranked[i].second;
  }
}

}  // namespace
}  // namespace qgen
