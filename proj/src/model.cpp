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

#include "qgen/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "qgen/common.hpp"

namespace qgen {
namespace {

// Sufficient statistics of one pass over a normalizer at fixed theta.
struct NormalizerPass {
  double log_z;
  FeatureArray expectation;
};

NormalizerPass Pass(const NormalizerRows& n, const Weights& w, bool want_expectation) {
  if (n.rows.empty()) throw std::invalid_argument("normalizer has no rows");
  std::vector<double> a(n.rows.size());
  double max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n.rows.size(); ++i) {
    a[i] = -Energy(n.rows[i], w) + n.log_mass[i];
    max = std::max(max, a[i]);
  }
  if (!std::isfinite(max)) {
    throw NumericError("importance weights are degenerate (max log weight " + std::to_string(max) +
                       ")");
  }
  double total = 0.0;
  FeatureArray acc{};
  for (std::size_t i = 0; i < n.rows.size(); ++i) {
    const double e = std::exp(a[i] - max);
    total += e;
    if (want_expectation) {
      for (int k = 0; k < kNumFeatures; ++k) acc[k] += e * n.rows[i][k];
    }
  }
  NormalizerPass out{max + std::log(total) + n.log_offset, {}};
  if (!std::isfinite(out.log_z)) throw NumericError("log Z is not finite");
  if (want_expectation) {
    for (int k = 0; k < kNumFeatures; ++k) out.expectation[k] = acc[k] / total;
  }
  return out;
}

double DataEnergySum(const ContextProblem& p, const Weights& w) {
  double s = 0.0;
  for (const auto& f : p.data) s += Energy(f, w);
  return s;
}

std::vector<double> AverageRanks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kInformationAgnostic: return "information_agnostic";
    case Variant::kComplexityAgnostic: return "complexity_agnostic";
    case Variant::kTypeAgnostic: return "type_agnostic";
  }
  return "?";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (VariantName(v) == name) return v;
  }
  throw std::invalid_argument("unknown model variant '" + std::string(name) + "'");
}

std::array<bool, kNumFeatures> ActiveFeatures(Variant v) {
  std::array<bool, kNumFeatures> on;
  on.fill(true);
  switch (v) {
    case Variant::kFull:
      break;
    case Variant::kInformationAgnostic:
      on[0] = on[1] = false;
      break;
    case Variant::kComplexityAgnostic:
      on[2] = false;
      break;
    case Variant::kTypeAgnostic:
      on[3] = on[4] = on[5] = on[6] = false;
      break;
  }
  return on;
}

std::map<std::string, double> Weights::ToMap() const {
  std::map<std::string, double> m;
  for (int k = 0; k < kNumFeatures; ++k) m[std::string(kFeatureNames[k])] = theta[k];
  return m;
}

Weights Weights::FromMap(const std::map<std::string, double>& values, Variant v) {
  Weights w = Zero(v);
  const auto active = ActiveFeatures(v);
  for (const auto& [name, value] : values) {
    auto it = std::find(kFeatureNames.begin(), kFeatureNames.end(), name);
    if (it == kFeatureNames.end()) throw SchemaError("unknown feature '" + name + "'");
    const auto k = static_cast<std::size_t>(it - kFeatureNames.begin());
    if (!active[k] && value != 0.0) {
      throw SchemaError("feature '" + name + "' is masked in variant " +
                        std::string(VariantName(v)) + " but has weight " + std::to_string(value));
    }
    w.theta[k] = value;
  }
  for (int k = 0; k < kNumFeatures; ++k) {
    if (active[k] && !values.count(std::string(kFeatureNames[k]))) {
      throw SchemaError("missing weight for feature '" + std::string(kFeatureNames[k]) + "'");
    }
  }
  return w;
}

double Energy(const FeatureArray& f, const Weights& w) {
  const auto active = ActiveFeatures(w.variant);
  double e = 0.0;
  for (int k = 0; k < kNumFeatures; ++k) {
    if (active[k]) e += w.theta[k] * f[k];
  }
  return e;
}

double LogSumExp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double max = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(max)) return max;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - max);
  return max + std::log(s);
}

ProposalPool ProposalPool::Draw(std::size_t size, std::uint64_t seed, const SamplerConfig& config) {
  if (size == 0) throw std::invalid_argument("proposal pool size must be positive");
  ProposalPool pool;
  pool.seed = seed;
  pool.max_functions = config.max_functions;
  pool.programs.reserve(size);
  pool.log_q.reserve(size);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    std::int64_t attempts = 0;
    Derivation d = Sample(rng, config, &attempts);
    pool.draws += attempts;
    pool.log_q.push_back(d.LogProbability());
    pool.programs.push_back(std::move(d.program));
  }
  return pool;
}

NormalizerRows NormalizerRows::FromPool(std::span<const FeatureVector> features,
                                        std::span<const double> log_q) {
  if (features.size() != log_q.size()) throw std::invalid_argument("features/log_q size mismatch");
  if (features.empty()) throw std::invalid_argument("empty proposal pool");
  NormalizerRows n;
  for (std::size_t i = 0; i < features.size(); ++i) {
    n.rows.push_back(features[i].ToArray());
    n.log_mass.push_back(-log_q[i]);
  }
  n.log_offset = -std::log(static_cast<double>(features.size()));
  return n;
}

NormalizerRows NormalizerRows::Exact(std::span<const FeatureVector> features) {
  if (features.empty()) throw std::invalid_argument("empty program universe");
  NormalizerRows n;
  for (const auto& f : features) {
    n.rows.push_back(f.ToArray());
    n.log_mass.push_back(0.0);
  }
  return n;
}

NormalizerRows NormalizerRows::Compressed() const {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return rows[a] < rows[b]; });
  NormalizerRows out;
  out.log_offset = log_offset;
  std::vector<double> group;
  auto flush = [&](const FeatureArray& row) {
    out.rows.push_back(row);
    out.log_mass.push_back(LogSumExp(group));
    group.clear();
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    group.push_back(log_mass[order[i]]);
    if (i + 1 == order.size() || rows[order[i + 1]] != rows[order[i]]) flush(rows[order[i]]);
  }
  return out;
}

double EstimateLogZ(const NormalizerRows& normalizer, const Weights& w) {
  return Pass(normalizer, w, false).log_z;
}

FeatureArray ModelExpectation(const NormalizerRows& normalizer, const Weights& w) {
  return Pass(normalizer, w, true).expectation;
}

ContextProblem::ContextProblem(std::string id, NormalizerRows rows, std::vector<FeatureArray> d,
                               std::vector<std::string> keys)
    : context_id(std::move(id)),
      normalizer(std::move(rows)),
      data(std::move(d)),
      data_keys(std::move(keys)) {
  compact = normalizer.Compressed();
  if (!data_keys.empty() && data_keys.size() != data.size()) {
    throw std::invalid_argument("data_keys must match data rows");
  }
}

double LogLikelihood(std::span<const ContextProblem> problems, const Weights& w) {
  double ll = 0.0;
  for (const auto& p : problems) {
    if (p.data.empty()) continue;
    ll -= DataEnergySum(p, w);
    ll -= static_cast<double>(p.data.size()) * EstimateLogZ(p.compact, w);
  }
  return ll;
}

FeatureArray Gradient(std::span<const ContextProblem> problems, const Weights& w) {
  FeatureArray g{};
  for (const auto& p : problems) {
    if (p.data.empty()) continue;
    const FeatureArray model = ModelExpectation(p.compact, w);
    const double n = static_cast<double>(p.data.size());
    for (int k = 0; k < kNumFeatures; ++k) g[k] += n * model[k];
    for (const auto& f : p.data) {
      for (int k = 0; k < kNumFeatures; ++k) g[k] -= f[k];
    }
  }
  const auto active = ActiveFeatures(w.variant);
  for (int k = 0; k < kNumFeatures; ++k) {
    if (!active[k]) g[k] = 0.0;
  }
  return g;
}

TrainResult Train(std::span<const ContextProblem> problems, Variant variant,
                  const TrainConfig& config) {
  TrainResult result{Weights::Zero(variant), {}};
  const auto active = ActiveFeatures(variant);
  FeatureArray data_sum{};
  double n_total = 0.0;
  for (const auto& p : problems) {
    n_total += static_cast<double>(p.data.size());
    for (const auto& f : p.data) {
      for (int k = 0; k < kNumFeatures; ++k) data_sum[k] += f[k];
    }
  }
  if (n_total == 0.0 || config.iterations <= 0) return result;

  Weights& w = result.weights;
  auto diverged = [&](int it, const std::string& why) {
    std::ostringstream msg;
    msg << "training diverged at iteration " << it << " (" << why << "); trace:";
    for (const auto& t : result.trace) msg << " [" << t.iteration << ": " << t.log_likelihood << "]";
    return NumericError(msg.str());
  };
  for (int it = 0; it <= config.iterations; ++it) {
    FeatureArray g{};
    double ll = 0.0;
    for (int k = 0; k < kNumFeatures; ++k) g[k] = -data_sum[k];
    for (const auto& p : problems) {
      if (p.data.empty()) continue;
      NormalizerPass pass;
      try {
        pass = Pass(p.compact, w, true);
      } catch (const NumericError& e) {
        throw diverged(it, e.what());
      }
      const double n = static_cast<double>(p.data.size());
      for (int k = 0; k < kNumFeatures; ++k) g[k] += n * pass.expectation[k];
      ll -= n * pass.log_z;
    }
    for (int k = 0; k < kNumFeatures; ++k) {
      if (active[k]) ll -= w.theta[k] * data_sum[k];
    }
    const bool trace_now =
        config.trace_every > 0 && (it % config.trace_every == 0 || it == config.iterations);
    if (trace_now) result.trace.push_back({it, ll});
    if (!std::isfinite(ll)) throw diverged(it, "log-likelihood " + std::to_string(ll));
    if (it == config.iterations) break;
    for (int k = 0; k < kNumFeatures; ++k) {
      if (active[k]) w.theta[k] += config.learning_rate * g[k] / n_total;
    }
  }
  return result;
}

std::optional<double> SpearmanRho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("SpearmanRho: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("SpearmanRho: need at least 3 points");
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::optional<double> EnergyFrequencyCorrelation(std::span<const double> energy,
                                                 std::span<const double> frequency) {
  std::vector<double> neg(energy.size());
  std::transform(energy.begin(), energy.end(), neg.begin(), [](double e) { return -e; });
  return SpearmanRho(neg, frequency);
}

std::vector<ScatterPoint> EnergyFrequencyScatter(const ContextProblem& problem, const Weights& w) {
  std::vector<ScatterPoint> points;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < problem.data.size(); ++i) {
    const std::string key =
        problem.data_keys.empty() ? std::to_string(i) : problem.data_keys[i];
    auto [it, inserted] = index.emplace(key, points.size());
    if (inserted) {
      points.push_back({key, Energy(problem.data[i], w), 0.0});
    }
    points[it->second].frequency += 1.0;
  }
  return points;
}

std::vector<double> BootstrapLogZ(const NormalizerRows& normalizer, const Weights& w,
                                  int replicates, std::uint64_t seed) {
  const std::size_t m = normalizer.size();
  if (m == 0) throw std::invalid_argument("normalizer has no rows");
  std::vector<double> a(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = -Energy(normalizer.rows[i], w) + normalizer.log_mass[i];
  const double max = *std::max_element(a.begin(), a.end());
  for (double& v : a) v = std::exp(v - max);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<double> out;
  out.reserve(replicates);
  for (int b = 0; b < replicates; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[pick(rng)];
    out.push_back(max + std::log(s) + normalizer.log_offset);
  }
  return out;
}

LoocvReport Loocv(std::span<const ContextProblem> problems, std::span<const Variant> variants,
                  const LoocvConfig& config) {
  if (problems.size() < 2) throw std::invalid_argument("LOOCV needs at least 2 contexts");
  LoocvReport report;
  std::vector<ContextProblem> train;
  for (Variant v : variants) {
    for (std::size_t held = 0; held < problems.size(); ++held) {
      train.clear();
      for (std::size_t c = 0; c < problems.size(); ++c) {
        if (c != held) train.push_back(problems[c]);
      }
      const Weights w = Train(train, v, config.train).weights;
      const ContextProblem& test = problems[held];
      const double ll = LogLikelihood(std::span(&test, 1), w);
      std::optional<double> rho;
      const auto scatter = EnergyFrequencyScatter(test, w);
      if (scatter.size() >= 3) {
        std::vector<double> e, f;
        for (const auto& s : scatter) {
          e.push_back(s.energy);
          f.push_back(s.frequency);
        }
        rho = EnergyFrequencyCorrelation(e, f);
      }
      report.rows.push_back({v, test.context_id, ll, rho, w});
    }
  }

  const std::size_t nc = problems.size();
  auto row = [&](std::size_t vi, std::size_t c) -> const LoocvRow& {
    return report.rows[vi * nc + c];
  };

  // Paired bootstrap of every held-out Z: the same resample indices score all
  // variants.
  std::vector<std::vector<double>> replicate_ll(variants.size(),
                                                std::vector<double>(config.bootstrap_replicates, 0.0));
  if (config.bootstrap_replicates > 0) {
    std::mt19937_64 rng(config.bootstrap_seed);
    for (std::size_t c = 0; c < nc; ++c) {
      const ContextProblem& p = problems[c];
      if (p.data.empty()) continue;
      const std::size_t m = p.normalizer.size();
      const double n = static_cast<double>(p.data.size());
      std::vector<std::vector<double>> scaled(variants.size(), std::vector<double>(m));
      std::vector<double> shift(variants.size()), data_energy(variants.size());
      for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const Weights& w = row(vi, c).weights;
        double max = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
          scaled[vi][i] = -Energy(p.normalizer.rows[i], w) + p.normalizer.log_mass[i];
          max = std::max(max, scaled[vi][i]);
        }
        for (double& s : scaled[vi]) s = std::exp(s - max);
        shift[vi] = max + p.normalizer.log_offset;
        data_energy[vi] = DataEnergySum(p, w);
      }
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      std::vector<std::size_t> idx(m);
      for (int b = 0; b < config.bootstrap_replicates; ++b) {
        for (auto& i : idx) i = pick(rng);
        for (std::size_t vi = 0; vi < variants.size(); ++vi) {
          double s = 0.0;
          for (auto i : idx) s += scaled[vi][i];
          replicate_ll[vi][b] += -data_energy[vi] - n * (shift[vi] + std::log(s));
        }
      }
    }
  }

  const auto full_it = std::find(variants.begin(), variants.end(), Variant::kFull);
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    LoocvSummary s{variants[vi], 0.0, 0.0, std::nullopt, std::nullopt};
    double rho_sum = 0.0;
    int rho_n = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      s.total_log_likelihood += row(vi, c).log_likelihood;
      if (row(vi, c).spearman) {
        rho_sum += *row(vi, c).spearman;
        ++rho_n;
      }
    }
    s.mean_log_likelihood = s.total_log_likelihood / static_cast<double>(nc);
    if (rho_n > 0) s.mean_spearman = rho_sum / rho_n;
    if (config.bootstrap_replicates > 0 && full_it != variants.end() && variants[vi] != Variant::kFull) {
      const auto fi = static_cast<std::size_t>(full_it - variants.begin());
      int wins = 0;
      for (int b = 0; b < config.bootstrap_replicates; ++b) {
        if (replicate_ll[fi][b] > replicate_ll[vi][b]) ++wins;
      }
      s.full_better_fraction = static_cast<double>(wins) / config.bootstrap_replicates;
    }
    report.summary.push_back(s);
  }
  return report;
}

}  // namespace qgen
