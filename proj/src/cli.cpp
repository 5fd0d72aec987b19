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

#include "qgen/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "qgen/common.hpp"
#include "qgen/experiment.hpp"

namespace qgen {
namespace {

struct ExperimentFlags {
  std::string preset;
  std::string contexts_dir, dataset, out;
  std::vector<std::string> contexts, exclude, variants;
  std::size_t pool_size = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double learning_rate = 0.0;
  int bootstrap = 0;
  int max_functions = 0;
  int k = 0;
  std::string weights;
  std::map<std::string, CLI::Option*> opts;

  void Register(CLI::App* app) {
    opts["preset"] = app->add_option("--preset", preset, "desk or paper")
                         ->check(CLI::IsMember({"desk", "paper"}));
    opts["contexts-dir"] = app->add_option("--contexts-dir", contexts_dir, "directory of context JSON files");
    opts["dataset"] = app->add_option("--dataset", dataset, "question dataset (JSON lines)");
    opts["out"] = app->add_option("--out", out, "output directory");
    opts["contexts"] = app->add_option("--contexts", contexts, "context ids to include")->delimiter(',');
    opts["exclude"] = app->add_option("--exclude", exclude, "context ids to drop")->delimiter(',');
    opts["variant"] = app->add_option("--variant", variants, "model variants")->delimiter(',');
    opts["pool-size"] = app->add_option("--pool-size", pool_size, "proposal pool size");
    opts["seed"] = app->add_option("--seed", seed, "random seed");
    opts["iters"] = app->add_option("--iters", iterations, "gradient ascent iterations");
    opts["lr"] = app->add_option("--lr", learning_rate, "learning rate");
    opts["bootstrap"] = app->add_option("--bootstrap", bootstrap, "bootstrap replicates for Z");
    opts["max-functions"] = app->add_option("--max-functions", max_functions, "sampler program size cap");
    opts["k"] = app->add_option("-k", k, "questions to generate per context");
    opts["weights"] = app->add_option("--weights", weights, "weights JSON (generate only)");
  }

  bool Set(const std::string& name) const { return opts.at(name)->count() > 0; }

  ExperimentConfig Build() const {
    ExperimentConfig c;
    if (Set("preset")) c.ApplyPreset(preset);
    if (Set("contexts-dir")) c.contexts_dir = contexts_dir;
    if (Set("dataset")) c.dataset = dataset;
    if (Set("out")) c.out_dir = out;
    if (Set("contexts")) c.contexts = contexts;
    if (Set("exclude")) c.exclude = exclude;
    if (Set("variant")) {
      c.variants.clear();
      for (const auto& v : variants) c.variants.push_back(ParseVariant(v));
    }
    if (Set("pool-size")) c.pool_size = pool_size;
    if (Set("seed")) c.seed = seed;
    if (Set("iters")) c.iterations = iterations;
    if (Set("lr")) c.learning_rate = learning_rate;
    if (Set("bootstrap")) c.bootstrap_replicates = bootstrap;
    if (Set("max-functions")) c.max_functions = max_functions;
    if (Set("k")) c.k = k;
    if (Set("weights")) c.weights = weights;
    return c;
  }
};

int Eval(const std::string& text, const std::string& board_file, std::ostream& out) {
  const Program p = Parse(text);
  const Board b = LoadBoard(board_file);
  out << Evaluate(p, b).ToString() << "\n";
  return kExitOk;
}

int EigCommand(const std::string& text, const std::string& context_file, std::ostream& out,
               std::ostream& err) {
  const Program p = Parse(text);
  Belief belief = context_file.empty() ? PriorBelief() : Condition(PriorBelief(), LoadContext(context_file));
  const double eig = Eig(p, belief);
  if (!Derive(p).UsesBoardRule()) {
    err << "warning: program never reads the board (relevance 0); its EIG is 0\n";
  }
  out << std::setprecision(10) << eig << " bits\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qgen: question programs over Battleship boards"};
  app.require_subcommand(1);

  std::string program, board_file, context_file;
  auto* eval = app.add_subcommand("eval", "evaluate a program on a board");
  eval->add_option("program", program)->required();
  eval->add_option("board", board_file, "board JSON")->required();

  auto* eig = app.add_subcommand("eig", "expected information gain of a program, in bits");
  eig->add_option("program", program)->required();
  eig->add_option("--context", context_file, "context JSON (default: nothing revealed)");

  ExperimentFlags train_flags, loocv_flags, generate_flags;
  auto* train = app.add_subcommand("train", "fit every variant on the selected contexts");
  train_flags.Register(train);
  auto* loocv = app.add_subcommand("loocv", "leave-one-context-out evaluation");
  loocv_flags.Register(loocv);
  auto* generate = app.add_subcommand("generate", "sample novel questions per context");
  generate_flags.Register(generate);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (eval->parsed()) return Eval(program, board_file, out);
    if (eig->parsed()) return EigCommand(program, context_file, out, err);
    const ExperimentFlags& flags =
        train->parsed() ? train_flags : loocv->parsed() ? loocv_flags : generate_flags;
    const ExperimentConfig config = flags.Build();
    const Workspace ws = Prepare(config, err);
    if (train->parsed()) RunTrain(ws, err);
    if (loocv->parsed()) RunLoocv(ws, err);
    if (generate->parsed()) RunGenerate(ws, err);
    out << "wrote reports to " << config.out_dir.string() << "\n";
    return kExitOk;
  } catch (const SyntaxError& e) {
    err << "syntax error: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const TypeError& e) {
    err << "type error: " << e.what() << "\n";
    return kExitType;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SchemaError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InconsistentContextError& e) {
    err << "inconsistent context: " << e.what() << "\n";
    return kExitInconsistentContext;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DerivationError& e) {
    err << "derivation error: " << e.what() << "\n";
    return kExitDerivation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qgen
