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

#include "qgen/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qgen/common.hpp"

namespace qgen {
namespace {

using nlohmann::json;

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

json DatasetReportJson(const DatasetReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"line", f.line}, {"message", f.message}});
  return {{"total", r.total},
          {"per_context", r.per_context},
          {"draw_rejected", r.draw_rejected},
          {"failures", failures}};
}

void WriteMetadata(const Workspace& ws, std::string_view command,
                   const std::vector<std::string>& outputs) {
  json inputs = json::object();
  for (const auto& d : ws.input_digests) {
    const auto sp = d.rfind(' ');
    inputs[d.substr(0, sp)] = d.substr(sp + 1);
  }
  std::vector<std::string> ids;
  for (const auto& c : ws.contexts) ids.push_back(c.id());
  json j = {{"command", std::string(command)},
            {"config", json::parse(ws.config.ToJson())},
            {"config_hash", ws.config.Hash()},
            {"inputs", inputs},
            {"contexts", ids},
            {"pool", {{"size", ws.pool.size()}, {"seed", ws.pool.seed}, {"draws", ws.pool.draws}}},
            {"dataset", DatasetReportJson(ws.dataset.report)},
            {"outputs", outputs}};
  WriteFile(ws.config.out_dir / ("run_metadata_" + std::string(command) + ".json"), j.dump(2) + "\n");
}

std::string ScatterCsv(const std::vector<ScatterPoint>& points) {
  std::string out = "energy,frequency,program\n";
  for (const auto& p : points) {
    out += FormatDouble(p.energy) + "," + FormatDouble(p.frequency) + "," + CsvField(p.program) + "\n";
  }
  return out;
}

std::vector<std::string> ContextIds(const Workspace& ws) {
  std::vector<std::string> ids;
  for (const auto& c : ws.contexts) ids.push_back(c.id());
  return ids;
}

WeightsFile MakeWeightsFile(const Workspace& ws, const Weights& w) {
  WeightsFile f;
  f.weights = w;
  f.seed = ws.config.seed;
  f.pool_size = ws.config.pool_size;
  f.iterations = ws.config.iterations;
  f.learning_rate = ws.config.learning_rate;
  f.entropy_base = ws.config.entropy_base;
  f.contexts = ContextIds(ws);
  return f;
}

TrainConfig MakeTrainConfig(const ExperimentConfig& c) {
  TrainConfig t;
  t.iterations = c.iterations;
  t.learning_rate = c.learning_rate;
  t.trace_every = std::max(1, c.iterations / 100);
  return t;
}

}  // namespace

void ExperimentConfig::ApplyPreset(std::string_view name) {
  if (name == "paper") {
    pool_size = 150'000;
    iterations = 100'000;
    learning_rate = 0.1;
    smallest_contexts = 0;
  } else if (name == "desk") {
    pool_size = 20'000;
    iterations = 10'000;
    smallest_contexts = 4;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (desk or paper)");
  }
}

std::string ExperimentConfig::ToJson() const {
  std::vector<std::string> vs;
  for (Variant v : variants) vs.emplace_back(VariantName(v));
  json j = {{"contexts_dir", contexts_dir.generic_string()},
            {"dataset", dataset.generic_string()},
            {"out_dir", out_dir.generic_string()},
            {"contexts", contexts},
            {"exclude", exclude},
            {"smallest_contexts", smallest_contexts},
            {"pool_size", pool_size},
            {"seed", seed},
            {"iterations", iterations},
            {"learning_rate", learning_rate},
            {"variants", vs},
            {"entropy_base", entropy_base},
            {"bootstrap_replicates", bootstrap_replicates},
            {"max_functions", max_functions},
            {"k", k},
            {"weights", weights ? weights->generic_string() : std::string()}};
  return j.dump();
}

std::string ExperimentConfig::Hash() const { return Sha1Hex(ToJson()); }

void CheckInputs(const ExperimentConfig& config) {
  std::vector<std::string> missing;
  if (!std::filesystem::is_directory(config.contexts_dir)) {
    missing.push_back("contexts directory " + config.contexts_dir.string());
  }
  if (!std::filesystem::is_regular_file(config.dataset)) {
    missing.push_back("dataset " + config.dataset.string());
  }
  if (config.weights && !std::filesystem::is_regular_file(*config.weights)) {
    missing.push_back("weights " + config.weights->string());
  }
  if (!missing.empty()) {
    std::string msg = "missing inputs:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw IoError(msg);
  }
  if (config.entropy_base != "bits") {
    throw std::invalid_argument("only entropy base 'bits' is supported");
  }
  if (config.pool_size == 0) throw std::invalid_argument("pool size must be positive");
  if (config.variants.empty()) throw std::invalid_argument("no model variants selected");
}

Workspace Prepare(const ExperimentConfig& config, std::ostream& log) {
  CheckInputs(config);
  Workspace ws;
  ws.config = config;

  std::vector<Context> all = LoadContextDir(config.contexts_dir);
  for (const auto& want : config.contexts) {
    if (std::none_of(all.begin(), all.end(), [&](const Context& c) { return c.id() == want; })) {
      throw IoError("context " + want + " not found in " + config.contexts_dir.string());
    }
  }
  for (auto& c : all) {
    const bool listed = config.contexts.empty() ||
                        std::count(config.contexts.begin(), config.contexts.end(), c.id());
    const bool excluded = std::count(config.exclude.begin(), config.exclude.end(), c.id());
    if (listed && !excluded) {
      ws.posteriors.push_back(Condition(PriorBelief(), c));
      ws.contexts.push_back(std::move(c));
    }
  }
  if (config.smallest_contexts > 0 &&
      ws.contexts.size() > static_cast<std::size_t>(config.smallest_contexts)) {
    std::vector<std::size_t> order(ws.contexts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return ws.posteriors[a].size() < ws.posteriors[b].size();
    });
    order.resize(config.smallest_contexts);
    std::sort(order.begin(), order.end());
    std::vector<Context> cs;
    std::vector<Belief> bs;
    for (auto i : order) {
      cs.push_back(ws.contexts[i]);
      bs.push_back(ws.posteriors[i]);
    }
    ws.contexts = std::move(cs);
    ws.posteriors = std::move(bs);
  }
  if (ws.contexts.empty()) throw IoError("no contexts selected");
  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    log << "context " << ws.contexts[c].id() << ": " << ws.posteriors[c].size()
        << " consistent boards\n";
  }

  for (const auto& entry : std::filesystem::directory_iterator(config.contexts_dir)) {
    if (entry.path().extension() == ".json") {
      ws.input_digests.push_back(entry.path().generic_string() + " " +
                                 GitBlobDigest(ReadFile(entry.path())));
    }
  }
  std::sort(ws.input_digests.begin(), ws.input_digests.end());
  ws.input_digests.push_back(config.dataset.generic_string() + " " +
                             GitBlobDigest(ReadFile(config.dataset)));

  ws.dataset = LoadDataset(config.dataset);
  log << ws.dataset.report.ToString();

  ws.questions.resize(ws.contexts.size());
  int dropped = 0;
  for (const auto& e : ws.dataset.entries) {
    for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
      if (ws.contexts[c].id() != e.context) continue;
      try {
        Derive(e.program);
        ws.questions[c].push_back(e.program);
      } catch (const DerivationError& err) {
        ++dropped;
        log << "warning: not derivable, skipped: " << e.text << " (" << err.what() << ")\n";
      }
    }
  }
  if (dropped > 0) log << "warning: " << dropped << " underivable questions skipped\n";

  SamplerConfig sc;
  sc.max_functions = config.max_functions;
  log << "drawing " << config.pool_size << " proposal programs (seed " << config.seed << ")\n";
  ws.pool = ProposalPool::Draw(config.pool_size, config.seed, sc);

  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    FeatureExtractor ex(ws.contexts[c], ws.posteriors[c]);
    ws.pool_features.push_back(ex.Matrix(ws.pool.programs));
    std::vector<FeatureArray> data;
    std::vector<std::string> keys;
    for (const auto& q : ws.questions[c]) {
      data.push_back(ex.Features(q).ToArray());
      keys.push_back(CanonicalPrint(q));
    }
    ws.problems.emplace_back(ws.contexts[c].id(),
                             NormalizerRows::FromPool(ws.pool_features[c], ws.pool.log_q),
                             std::move(data), std::move(keys));
    log << "context " << ws.contexts[c].id() << ": features for " << ws.pool.size()
        << " pool programs and " << ws.questions[c].size() << " questions\n";
  }
  return ws;
}

void RunTrain(const Workspace& ws, std::ostream& log) {
  std::vector<std::string> outputs;
  const TrainConfig tc = MakeTrainConfig(ws.config);
  for (Variant v : ws.config.variants) {
    log << "training " << VariantName(v) << "\n";
    const TrainResult r = Train(ws.problems, v, tc);
    const std::string name = "weights_" + std::string(VariantName(v)) + ".json";
    WriteFile(ws.config.out_dir / name, WeightsToJson(MakeWeightsFile(ws, r.weights)));
    outputs.push_back(name);

    std::string trace = "iteration,loglik\n";
    for (const auto& t : r.trace) trace += std::to_string(t.iteration) + "," + FormatDouble(t.log_likelihood) + "\n";
    const std::string trace_name = "trace_" + std::string(VariantName(v)) + ".csv";
    WriteFile(ws.config.out_dir / trace_name, trace);
    outputs.push_back(trace_name);

    for (const auto& p : ws.problems) {
      const std::string s = "scatter/train_" + std::string(VariantName(v)) + "_" + p.context_id + ".csv";
      WriteFile(ws.config.out_dir / s, ScatterCsv(EnergyFrequencyScatter(p, r.weights)));
      outputs.push_back(s);
    }
  }
  WriteMetadata(ws, "train", outputs);
}

LoocvReport RunLoocv(const Workspace& ws, std::ostream& log) {
  LoocvConfig lc;
  lc.train = MakeTrainConfig(ws.config);
  lc.train.trace_every = 0;
  lc.bootstrap_replicates = ws.config.bootstrap_replicates;
  lc.bootstrap_seed = ws.config.seed;
  log << "cross-validating " << ws.config.variants.size() << " variants over "
      << ws.problems.size() << " contexts\n";
  LoocvReport report = Loocv(ws.problems, ws.config.variants, lc);

  std::vector<std::string> outputs = {"loocv.csv", "loocv_summary.csv"};
  auto mean_rho = [&](Variant v) -> std::string {
    for (const auto& s : report.summary) {
      if (s.variant == v && s.mean_spearman) return FormatDouble(*s.mean_spearman);
    }
    return "";
  };
  std::string rows = "variant,held_out_context,loglik,mean_spearman,spearman\n";
  for (const auto& r : report.rows) {
    rows += std::string(VariantName(r.variant)) + "," + CsvField(r.held_out) + "," +
            FormatDouble(r.log_likelihood) + "," + mean_rho(r.variant) + "," +
            (r.spearman ? FormatDouble(*r.spearman) : std::string()) + "\n";
    const auto& p = *std::find_if(ws.problems.begin(), ws.problems.end(),
                                  [&](const ContextProblem& q) { return q.context_id == r.held_out; });
    const std::string s = "scatter/loocv_" + std::string(VariantName(r.variant)) + "_" + r.held_out + ".csv";
    WriteFile(ws.config.out_dir / s, ScatterCsv(EnergyFrequencyScatter(p, r.weights)));
    outputs.push_back(s);
  }
  WriteFile(ws.config.out_dir / "loocv.csv", rows);

  std::string summary = "variant,total_loglik,mean_loglik,mean_spearman,full_better_fraction\n";
  for (const auto& s : report.summary) {
    summary += std::string(VariantName(s.variant)) + "," + FormatDouble(s.total_log_likelihood) +
               "," + FormatDouble(s.mean_log_likelihood) + "," +
               (s.mean_spearman ? FormatDouble(*s.mean_spearman) : std::string()) + "," +
               (s.full_better_fraction ? FormatDouble(*s.full_better_fraction) : std::string()) + "\n";
    log << VariantName(s.variant) << ": held-out LL " << s.total_log_likelihood;
    if (s.mean_spearman) log << ", mean rho " << *s.mean_spearman;
    log << "\n";
  }
  WriteFile(ws.config.out_dir / "loocv_summary.csv", summary);
  WriteMetadata(ws, "loocv", outputs);
  return report;
}

void RunGenerate(const Workspace& ws, std::ostream& log) {
  Weights w;
  if (ws.config.weights) {
    w = WeightsFromJson(ReadFile(*ws.config.weights)).weights;
    log << "using weights from " << ws.config.weights->string() << "\n";
  } else {
    log << "training full model on all selected contexts\n";
    w = Train(ws.problems, Variant::kFull, MakeTrainConfig(ws.config)).weights;
    WriteFile(ws.config.out_dir / "weights_generate.json", WeightsToJson(MakeWeightsFile(ws, w)));
  }

  std::vector<Program> known;
  for (const auto& e : ws.dataset.entries) known.push_back(e.program);

  std::string csv = "context,program,energy\n";
  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    FeatureExtractor ex(ws.contexts[c], ws.posteriors[c]);
    GenerateConfig gc;
    gc.k = ws.config.k;
    gc.seed = ws.config.seed + c;
    const GenerateResult r = SampleNovel(ex, w, ws.pool.programs, ws.pool_features[c], known, gc);
    if (!r.warning.empty()) log << "warning: " << r.warning << "\n";
    for (const auto& q : r.questions) {
      csv += CsvField(ws.contexts[c].id()) + "," + CsvField(q.text) + "," + FormatDouble(q.energy) + "\n";
    }
  }
  WriteFile(ws.config.out_dir / "generated.csv", csv);
  std::vector<std::string> outputs = {"generated.csv"};
  if (!ws.config.weights) outputs.push_back("weights_generate.json");
  WriteMetadata(ws, "generate", outputs);
}

double UniqueQuestionFraction(const Workspace& ws, std::size_t context) {
  std::vector<std::set<std::string>> texts(ws.contexts.size());
  for (std::size_t c = 0; c < ws.contexts.size(); ++c) {
    for (const auto& q : ws.questions[c]) texts[c].insert(CanonicalPrint(q));
  }
  if (texts[context].empty()) return 0.0;
  int unique = 0;
  for (const auto& t : texts[context]) {
    bool elsewhere = false;
    for (std::size_t c = 0; c < texts.size() && !elsewhere; ++c) {
      elsewhere = c != context && texts[c].count(t);
    }
    unique += !elsewhere;
  }
  return static_cast<double>(unique) / static_cast<double>(texts[context].size());
}

}  // namespace qgen
