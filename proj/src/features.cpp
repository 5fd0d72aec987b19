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

#include "qgen/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "qgen/common.hpp"
#include "qgen/grammar.hpp"

namespace qgen {
namespace {

// Maps answers to dense cell ids in first-appearance order. Partitions are
// small (at most a few dozen cells), so a linear scan beats hashing.
class CellIndex {
 public:
  std::uint32_t Of(const AnswerValue& v) {
    if (last_ < answers_.size() && answers_[last_] == v) return static_cast<std::uint32_t>(last_);
    for (std::size_t i = 0; i < answers_.size(); ++i) {
      if (answers_[i] == v) {
        last_ = i;
        return static_cast<std::uint32_t>(i);
      }
    }
    answers_.push_back(v);
    last_ = answers_.size() - 1;
    return static_cast<std::uint32_t>(last_);
  }
  const std::vector<AnswerValue>& answers() const { return answers_; }

 private:
  std::vector<AnswerValue> answers_;
  std::size_t last_ = 0;
};

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t HashCell(std::uint64_t h, std::uint32_t cell) {
  for (int i = 0; i < 4; ++i) {
    h ^= (cell >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

// Termwise EIG from per-cell sums: P_d = sum w, S_d = sum w log2 w.
double EigFromCells(std::span<const double> mass, std::span<const double> wlogw) {
  double prior_entropy = 0.0;
  for (double s : wlogw) prior_entropy -= s;
  double eig = 0.0;
  for (std::size_t d = 0; d < mass.size(); ++d) {
    if (mass[d] <= 0.0) continue;
    const double posterior_entropy = std::log2(mass[d]) - wlogw[d] / mass[d];
    eig += mass[d] * (prior_entropy - posterior_entropy);
  }
  return std::clamp(eig, 0.0, std::max(prior_entropy, 0.0));
}

double WLogW(double w) { return w > 0.0 ? w * std::log2(w) : 0.0; }

FeatureVector Assemble(const Program& program, double eig) {
  const Derivation d = Derive(program);
  FeatureVector f;
  f.eig = eig;
  f.eig_zero = eig < kEigZeroTolerance ? 1.0 : 0.0;
  f.complexity = -d.LogProbability();
  switch (program.answer_type()) {
    case AnswerType::kBoolean:
    case AnswerType::kOrientation:
      f.type_boolean = 1.0;
      break;
    case AnswerType::kNumber:
      f.type_number = 1.0;
      break;
    case AnswerType::kColor:
      f.type_color = 1.0;
      break;
    case AnswerType::kLocation:
      f.type_location = 1.0;
      break;
  }
  f.relevance = d.UsesBoardRule() ? 1.0 : 0.0;
  return f;
}

}  // namespace

FeatureArray FeatureVector::ToArray() const {
  return {eig, eig_zero, complexity, type_boolean, type_number, type_color, type_location, relevance};
}

FeatureVector FeatureVector::FromArray(const FeatureArray& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

double ExpectedInformationGain(std::span<const AnswerValue> answers,
                               std::span<const double> weights) {
  if (answers.size() != weights.size()) {
    throw std::invalid_argument("answers and weights differ in length");
  }
  CellIndex cells;
  std::vector<double> mass, wlogw;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const std::uint32_t c = cells.Of(answers[i]);
    if (c == mass.size()) {
      mass.push_back(0.0);
      wlogw.push_back(0.0);
    }
    mass[c] += weights[i];
    wlogw[c] += WLogW(weights[i]);
  }
  return EigFromCells(mass, wlogw);
}

PartitionSummary SummarizePartition(const Program& program, const Belief& belief) {
  PartitionSummary s;
  const std::size_t n = belief.size();
  if (n == 0) return s;
  std::uint64_t h = kFnvOffset;
  if (!ReferencesBoard(program.root())) {
    // Constant answer: one cell holding all the mass.
    s.answers.push_back(Evaluate(program, belief.support[0]));
    s.masses.push_back(1.0);
    for (std::size_t i = 0; i < n; ++i) h = HashCell(h, 0);
    s.signature = h;
    return s;
  }
  CellIndex cells;
  std::vector<double> wlogw;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t c = cells.Of(Evaluate(program, belief.support[i]));
    if (c == s.masses.size()) {
      s.masses.push_back(0.0);
      wlogw.push_back(0.0);
    }
    s.masses[c] += belief.weights[i];
    wlogw[c] += WLogW(belief.weights[i]);
    h = HashCell(h, c);
  }
  s.answers = cells.answers();
  s.eig = s.masses.size() > 1 ? EigFromCells(s.masses, wlogw) : 0.0;
  s.signature = h;
  return s;
}

double Eig(const Program& program, const Belief& belief) {
  return SummarizePartition(program, belief).eig;
}

std::vector<std::uint32_t> PartitionCells(const Program& program, const Belief& belief) {
  CellIndex cells;
  std::vector<std::uint32_t> out;
  out.reserve(belief.size());
  for (const Board& b : belief.support) out.push_back(cells.Of(Evaluate(program, b)));
  return out;
}

FeatureVector ComputeFeatures(const Program& program, const Belief& belief) {
  return Assemble(program, SummarizePartition(program, belief).eig);
}

int DefaultThreadCount() {
  if (const char* env = std::getenv("QGEN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

FeatureExtractor::FeatureExtractor(Context context, Belief posterior, bool use_cache)
    : context_(std::move(context)), belief_(std::move(posterior)), use_cache_(use_cache) {}

std::shared_ptr<const PartitionSummary> FeatureExtractor::Partition(const Program& program) {
  if (!use_cache_) {
    return std::make_shared<const PartitionSummary>(SummarizePartition(program, belief_));
  }
  const std::string key = CanonicalPrint(program);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto summary = std::make_shared<const PartitionSummary>(SummarizePartition(program, belief_));
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(summary)).first->second;
}

FeatureVector FeatureExtractor::Features(const Program& program) {
  return Assemble(program, Partition(program)->eig);
}

std::vector<FeatureVector> FeatureExtractor::Matrix(std::span<const Program> programs, int threads) {
  if (threads <= 0) threads = DefaultThreadCount();
  // Work list: every row without the cache, first occurrences with it.
  std::vector<std::size_t> work;
  std::vector<std::size_t> source(programs.size());
  std::vector<std::string> keys(programs.size());
  if (use_cache_) {
    std::unordered_map<std::string, std::size_t> first;
    for (std::size_t i = 0; i < programs.size(); ++i) {
      keys[i] = CanonicalPrint(programs[i]);
      auto [it, inserted] = first.emplace(keys[i], i);
      source[i] = it->second;
      if (inserted) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!cache_.count(keys[i])) work.push_back(i);
      }
    }
  } else {
    for (std::size_t i = 0; i < programs.size(); ++i) {
      source[i] = i;
      work.push_back(i);
    }
  }

  std::vector<std::shared_ptr<const PartitionSummary>> computed(programs.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      const std::size_t i = work[w];
      computed[i] = std::make_shared<const PartitionSummary>(SummarizePartition(programs[i], belief_));
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(threads, std::max<std::size_t>(work.size(), 1));
  if (nthreads <= 1) {
    run(0, work.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (work.size() + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
      const std::size_t b = std::min(work.size(), t * chunk);
      const std::size_t e = std::min(work.size(), b + chunk);
      pool.emplace_back(run, b, e);
    }
  }

  std::vector<FeatureVector> out(programs.size());
  for (std::size_t i = 0; i < programs.size(); ++i) {
    std::shared_ptr<const PartitionSummary> s;
    if (use_cache_) {
      std::lock_guard<std::mutex> lock(mu_);
      if (computed[source[i]]) cache_.emplace(keys[source[i]], computed[source[i]]);
      s = cache_.at(keys[source[i]]);
    } else {
      s = computed[i];
    }
    out[i] = Assemble(programs[i], s->eig);
  }
  return out;
}

std::size_t FeatureExtractor::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

void WriteFeatureMatrix(std::ostream& out, std::span<const std::string> programs,
                        std::span<const FeatureVector> rows) {
  if (programs.size() != rows.size()) throw std::invalid_argument("program/row count mismatch");
  out << "program";
  for (auto name : kFeatureNames) out << '\t' << name;
  out << '\n';
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    line.str("");
    line << programs[i];
    for (double v : rows[i].ToArray()) line << '\t' << v;
    out << line.str() << '\n';
  }
}

std::vector<FeatureRow> ReadFeatureMatrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("feature matrix is empty");
  {
    std::istringstream header(line);
    std::string col;
    std::getline(header, col, '\t');
    if (col != "program") throw SchemaError("feature matrix header must start with 'program'");
    for (auto name : kFeatureNames) {
      if (!std::getline(header, col, '\t') || col != name) {
        throw SchemaError("feature matrix header: expected column '" + std::string(name) + "'");
      }
    }
  }
  std::vector<FeatureRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    FeatureRow row;
    std::getline(fields, row.program, '\t');
    FeatureArray a{};
    for (int k = 0; k < kNumFeatures; ++k) {
      std::string v;
      if (!std::getline(fields, v, '\t')) {
        throw SchemaError("feature matrix line " + std::to_string(lineno) + ": missing column");
      }
      try {
        a[k] = std::stod(v);
      } catch (const std::exception&) {
        throw SchemaError("feature matrix line " + std::to_string(lineno) + ": bad number '" + v + "'");
      }
    }
    row.features = FeatureVector::FromArray(a);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qgen
