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

// Acceptance runner: one PASS / FAIL / SKIP line per criterion. Exits 1 if
// anything fails. Run from the repository root (the demo data lives there).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qgen/cli.hpp"
#include "qgen/common.hpp"
#include "qgen/experiment.hpp"
#include "qgen/features.hpp"
#include "qgen/generator.hpp"
#include "qgen/grammar.hpp"
#include "qgen/io.hpp"
#include "qgen/model.hpp"

namespace qgen {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) { return {ok ? Status::kPass : Status::kFail, std::move(detail)}; }

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Golden triples evaluate exactly, quickly.
Outcome DslConformance() {
  const auto start = Clock::now();
  const Board a = testing::BoardA(), b = testing::BoardB();
  int wrong = 0, n = 0;
  std::string first_wrong;
  for (const auto& g : testing::kGoldens) {
    ++n;
    const std::string got = Evaluate(Parse(g.program), g.board == 'A' ? a : b).ToString();
    if (got != g.answer) {
      if (!wrong++) first_wrong = std::string(g.program) + " gave " + got;
    }
  }
  const double t = Seconds(start);
  std::string detail = std::to_string(n) + " goldens, " + std::to_string(wrong) + " wrong, " + Fmt("%.3f s", t);
  if (wrong) detail += "; first: " + first_wrong;
  return Check(n >= 60 && wrong == 0 && t < 1.0, detail);
}

// 2. Hypothesis enumeration against an independent enumerator.
Outcome HypothesisOracle() {
  const auto start = Clock::now();
  const auto brute = testing::BruteHypotheses();
  std::vector<testing::MaskTriple> got;
  const auto& all = AllHypotheses();
  got.reserve(all.size());
  for (const Board& h : all) {
    got.emplace_back(h.ShipMask(Color::kBlue), h.ShipMask(Color::kRed), h.ShipMask(Color::kPurple));
  }
  std::sort(got.begin(), got.end());
  const bool same = got == brute;

  const Belief& prior = PriorBelief();
  double total = 0.0;
  std::map<std::array<int, 3>, double> per_triple;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    total += prior.weights[i];
    per_triple[prior.support[i].SizeTriple()] += prior.weights[i];
  }
  double worst_triple = 0.0;
  for (const auto& [t, m] : per_triple) worst_triple = std::max(worst_triple, std::abs(m - 1.0 / 27));
  const double secs = Seconds(start);
  return Check(same && per_triple.size() == 27 && std::abs(total - 1.0) <= 1e-9 && worst_triple <= 1e-9 &&
                   secs < 120,
               std::to_string(all.size()) + " hypotheses, set equal " + (same ? "yes" : "no") +
                   Fmt(", |sum-1| %.2e, max |triple-1/27| %.2e, %.1f s", std::abs(total - 1.0), worst_triple, secs));
}

// 3. EIG on a 3x3 window holding the only unknown ship, against a termwise
// sum. Random draws are kept once their answer varies over the window; most
// programs ask about revealed ships and would compare 0 with 0.
Outcome EigOracle() {
  const Belief b = Condition(PriorBelief(), testing::MiniContext());
  std::mt19937_64 rng(3);
  double worst = 0.0;
  int kept = 0, drawn = 0;
  while (kept < 20 && drawn < 100'000) {
    ++drawn;
    const Program x = Sample(rng, {}).program;
    std::set<std::string> answers;
    for (const Board& h : b.support) answers.insert(Evaluate(x, h).ToString());
    if (answers.size() < 2) continue;
    ++kept;
    worst = std::max(worst, std::abs(Eig(x, b) - testing::BruteEig(x, b)));
  }
  return Check(kept == 20 && worst <= 1e-9,
               std::to_string(b.size()) + " hypotheses, " + std::to_string(kept) + " programs with varying answers (" +
                   std::to_string(drawn) + " drawn), " + Fmt("max |diff| %.2e bits", worst));
}

// Cap-2 universe under a small-support context, shared by 4 to 6.
struct Universe {
  Context ctx = testing::SmallContext();
  Belief belief = Condition(PriorBelief(), ctx);
  std::vector<Program> programs;
  std::vector<FeatureVector> features;
  double log_mass = 0.0;
};

const Universe& GetUniverse() {
  static const Universe* u = [] {
    auto* out = new Universe;
    std::vector<double> lq;
    for (auto& e : EnumeratePrograms(2)) {
      out->programs.push_back(std::move(e.program));
      lq.push_back(e.log_q);
    }
    FeatureExtractor ex(out->ctx, out->belief);
    out->features = ex.Matrix(out->programs);
    out->log_mass = LogSumExp(lq);
    return out;
  }();
  return *u;
}

Weights Theta(FeatureArray t) {
  Weights w = Weights::Zero(Variant::kFull);
  w.theta = t;
  return w;
}

const Weights kTruth = Theta({-1.0, 0.5, 0.8, 0.0, 0.3, 0.2, 0.6, -1.0});

std::vector<std::size_t> SampleData(const Weights& w, int n, std::uint64_t seed) {
  const Universe& u = GetUniverse();
  std::vector<double> p(u.features.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-Energy(u.features[i], w));
  std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = dist(rng);
  return out;
}

std::vector<FeatureArray> Rows(const std::vector<std::size_t>& idx) {
  std::vector<FeatureArray> out;
  for (auto i : idx) out.push_back(GetUniverse().features[i].ToArray());
  return out;
}

NormalizerRows PoolRows(std::size_t size, std::uint64_t seed) {
  SamplerConfig sc;
  sc.max_functions = 2;
  const ProposalPool pool = ProposalPool::Draw(size, seed, sc);
  FeatureExtractor ex(GetUniverse().ctx, GetUniverse().belief);
  return NormalizerRows::FromPool(ex.Matrix(pool.programs), pool.log_q);
}

double Cosine(const FeatureArray& a, const FeatureArray& b) {
  double dot = 0, na = 0, nb = 0;
  for (int k = 0; k < kNumFeatures; ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  return dot / std::sqrt(na * nb);
}

// 4. Analytic gradient vs central differences; sampled vs exact gradient.
Outcome GradientCheck() {
  const Universe& u = GetUniverse();
  const auto data = Rows(SampleData(kTruth, 50, 3));
  const std::vector<ContextProblem> exact = {ContextProblem("small", NormalizerRows::Exact(u.features), data)};
  const Weights at = Theta({-0.4, 0.2, 0.5, 0.1, -0.1, 0.3, 0.2, -0.5});
  const FeatureArray g = Gradient(exact, at);
  double worst_fd = 0.0;
  constexpr double h = 1e-5;
  for (int k = 0; k < kNumFeatures; ++k) {
    Weights up = at, down = at;
    up.theta[k] += h;
    down.theta[k] -= h;
    const double fd = (LogLikelihood(exact, up) - LogLikelihood(exact, down)) / (2 * h);
    worst_fd = std::max(worst_fd, std::abs(g[k] - fd) / std::max(std::abs(g[k]), 1e-8));
  }

  const std::vector<ContextProblem> sampled = {ContextProblem("small", PoolRows(100'000, 9), data)};
  double worst_cos = 1.0;
  for (const Weights& w : {Weights::Zero(Variant::kFull), at}) {
    worst_cos = std::min(worst_cos, Cosine(Gradient(exact, w), Gradient(sampled, w)));
  }
  return Check(worst_fd < 1e-4 && worst_cos > 0.99,
               Fmt("universe %.0f programs, max FD rel err %.2e, min IS cosine %.5f (pool 1e5)",
                   static_cast<double>(u.programs.size()), worst_fd, worst_cos));
}

// 5. log Z from the pool against exact log Z, ten seeds. The capped sampler
// draws from q / mass, so the pool estimate is shifted by log mass.
Outcome LogZCheck() {
  const Universe& u = GetUniverse();
  const NormalizerRows exact = NormalizerRows::Exact(u.features);
  const std::vector<Weights> thetas = {Weights::Zero(Variant::kFull), kTruth};
  std::vector<double> exact_log_z;
  for (const auto& w : thetas) exact_log_z.push_back(EstimateLogZ(exact, w));
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const NormalizerRows pool = PoolRows(100'000, 100 + seed);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      const double est = EstimateLogZ(pool, thetas[t]) + u.log_mass;
      worst = std::max(worst, std::abs(est - exact_log_z[t]) / std::abs(exact_log_z[t]));
    }
  }
  return Check(worst < 0.02, Fmt("exact log Z %.4f / %.4f, max rel err %.2e over 10 seeds x 2 thetas",
                                 exact_log_z[0], exact_log_z[1], worst));
}

// 6. Training on data from a known theta matches feature moments.
Outcome MomentMatching() {
  const Universe& u = GetUniverse();
  const std::vector<ContextProblem> problems = {
      ContextProblem("small", NormalizerRows::Exact(u.features), Rows(SampleData(kTruth, 3000, 6)))};
  TrainConfig tc;
  tc.iterations = 20000;
  tc.trace_every = 0;
  const Weights w = Train(problems, Variant::kFull, tc).weights;
  FeatureArray emp{};
  for (const auto& f : problems[0].data) {
    for (int k = 0; k < kNumFeatures; ++k) emp[k] += f[k] / problems[0].data.size();
  }
  const FeatureArray model = ModelExpectation(problems[0].normalizer, w);
  double worst = 0.0;
  for (int k = 0; k < kNumFeatures; ++k) {
    worst = std::max(worst, std::abs(emp[k] - model[k]) / std::max(1.0, std::abs(emp[k])));
  }
  return Check(worst < 0.02, Fmt("3000 synthetic questions, 20000 steps, max scaled moment gap %.2e", worst));
}

// 7. Published-corpus numbers, only when the corpus is present.
Outcome CorpusNumbers() {
  const char* dir = std::getenv("QGEN_CORPUS_DIR");
  if (!dir || !*dir) return {Status::kSkip, "QGEN_CORPUS_DIR not set; published corpus unavailable"};
  ExperimentConfig config;
  config.ApplyPreset("desk");
  config.smallest_contexts = 0;
  config.contexts_dir = fs::path(dir) / "contexts";
  config.dataset = fs::path(dir) / "questions.jsonl";
  config.out_dir = fs::temp_directory_path() / "qgen_acceptance_corpus";
  std::ostringstream log;
  const auto start = Clock::now();
  const Workspace ws = Prepare(config, log);
  const LoocvReport r = RunLoocv(ws, log);
  std::map<Variant, LoocvSummary> s;
  for (const auto& row : r.summary) s[row.variant] = row;
  const double full = s.at(Variant::kFull).total_log_likelihood;
  const double type = s.at(Variant::kTypeAgnostic).total_log_likelihood;
  const double info = s.at(Variant::kInformationAgnostic).total_log_likelihood;
  const double cplx = s.at(Variant::kComplexityAgnostic).total_log_likelihood;
  const bool order = full > type && type > info && info > cplx && std::abs(cplx) >= 5 * std::abs(full);
  const auto rho_full = s.at(Variant::kFull).mean_spearman;
  const auto rho_cplx = s.at(Variant::kComplexityAgnostic).mean_spearman;
  const bool rho = rho_full && std::abs(*rho_full - 0.64) <= 0.10 && rho_cplx && *rho_cplx < 0;
  bool unique = true;
  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    const double f = UniqueQuestionFraction(ws, c);
    unique = unique && f >= 0.10 && f <= 0.20;
  }
  const auto& rep = ws.dataset.report;
  bool loader = rep.total == 605 && rep.per_context.size() == 18;
  for (const auto& [id, n] : rep.per_context) loader = loader && n >= 26 && n <= 39;
  const double secs = Seconds(start);
  return Check(order && rho && unique && loader && secs < 7200,
               Fmt("LL full %.1f, complexity-agnostic %.1f, %.0f s", full, cplx, secs) +
                   std::string("; ordering ") + (order ? "ok" : "off") + ", rho " + (rho ? "ok" : "off") +
                   ", unique fraction " + (unique ? "ok" : "off") + ", loader " + (loader ? "ok" : "off"));
}

// 8. The generate command on the demo data at desk scale.
Outcome GeneratorBehavior() {
  const fs::path out = fs::temp_directory_path() / "qgen_acceptance_generate";
  fs::remove_all(out);
  std::ostringstream cli_out, cli_err;
  const int code = RunCli({"generate", "--preset", "desk", "-k", "5", "--out", out.string()}, cli_out, cli_err);
  if (code != kExitOk) return {Status::kFail, "generate exited " + std::to_string(code) + ": " + cli_err.str()};

  ExperimentConfig config;
  config.ApplyPreset("desk");
  std::ostringstream log;
  const Workspace ws = Prepare(config, log);
  const Weights w = WeightsFromJson(ReadFile(out / "weights_generate.json")).weights;

  std::map<std::string, std::vector<Program>> generated;
  std::istringstream csv(ReadFile(out / "generated.csv"));
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    const auto a = line.find(','), b = line.rfind(',');
    std::string text = line.substr(a + 1, b - a - 1);
    if (text.size() >= 2 && text.front() == '"') {
      text = text.substr(1, text.size() - 2);
      for (std::size_t p = text.find("\"\""); p != std::string::npos; p = text.find("\"\"", p + 1)) text.erase(p, 1);
    }
    generated[line.substr(0, a)].push_back(Parse(text));
  }

  std::vector<Program> known;
  for (const auto& e : ws.dataset.entries) known.push_back(e.program);
  int problems = 0;
  std::string first_problem;
  auto flag = [&](const std::string& what) {
    if (!problems++) first_problem = what;
  };
  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    const std::string& id = ws.contexts[c].id();
    const Belief& b = ws.posteriors[c];
    const auto& qs = generated[id];
    if (qs.size() != 5) flag("context " + id + " has " + std::to_string(qs.size()) + " questions");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (ComputeFeatures(qs[i], b).relevance != 1.0) flag(CanonicalPrint(qs[i]) + " not relevant");
      for (std::size_t j = 0; j < i; ++j) {
        if (Equivalent(qs[i], qs[j], b).equivalent) flag(CanonicalPrint(qs[i]) + " repeats a sibling");
      }
      for (const auto& k : known) {
        if (Equivalent(qs[i], k, b).equivalent) {
          flag(CanonicalPrint(qs[i]) + " matches " + CanonicalPrint(k));
          break;
        }
      }
    }
  }

  // First pick frequencies against exp(-E) over relevant distinct programs,
  // on a 3000-program slice of the first context's pool.
  const std::size_t c0 = 0;
  std::vector<Program> slice;
  std::vector<FeatureVector> slice_features;
  for (std::size_t i = 0; i < ws.pool.size() && slice.size() < 3000; ++i) {
    slice.push_back(ws.pool.programs[i]);
    slice_features.push_back(ws.pool_features[c0][i]);
  }
  std::map<std::string, double> energy;
  for (std::size_t i = 0; i < slice.size(); ++i) {
    if (slice_features[i].relevance == 1.0) energy.emplace(CanonicalPrint(slice[i]), Energy(slice_features[i], w));
  }
  std::vector<std::pair<double, std::string>> ranked;
  double z = 0.0;
  for (const auto& [t, e] : energy) {
    ranked.emplace_back(e, t);
    z += std::exp(-e);
  }
  std::sort(ranked.begin(), ranked.end());
  FeatureExtractor ex(ws.contexts[c0], ws.posteriors[c0]);
  constexpr int kReps = 10000;
  std::map<std::string, int> counts;
  GenerateConfig gc;
  gc.k = 1;
  for (int rep = 0; rep < kReps; ++rep) {
    gc.seed = 50'000 + rep;
    ++counts[SampleNovel(ex, w, slice, slice_features, {}, gc).questions.at(0).text];
  }
  double worst_z = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ranked.size()); ++i) {
    const double p = std::exp(-ranked[i].first) / z;
    const double sigma = std::sqrt(p * (1 - p) / kReps);
    worst_z = std::max(worst_z, std::abs(counts[ranked[i].second] / double(kReps) - p) / sigma);
  }
  if (worst_z > 3.0) flag(Fmt("energy ordering off by %.2f sigma", worst_z));

  std::string detail = std::to_string(ws.contexts.size()) + " contexts x 5, checked against " +
                       std::to_string(known.size()) + " dataset questions" +
                       Fmt(", top-10 first-pick frequencies within %.2f sigma", worst_z);
  if (problems) detail += "; " + std::to_string(problems) + " problems, first: " + first_problem;
  return Check(problems == 0, detail);
}

}  // namespace
}  // namespace qgen

int main() {
  using namespace qgen;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dsl conformance", DslConformance},
      {"hypothesis oracle", HypothesisOracle},
      {"eig oracle", EigOracle},
      {"gradient", GradientCheck},
      {"log Z estimation", LogZCheck},
      {"moment matching", MomentMatching},
      {"corpus numbers", CorpusNumbers},
      {"generator", GeneratorBehavior},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("threw: ") + e.what()};
    }
    const char* tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    failed += o.status == Status::kFail;
    std::cout << "criterion " << i + 1 << " " << tag << "  " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
