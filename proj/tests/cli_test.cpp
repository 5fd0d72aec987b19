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

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "qgen/common.hpp"
#include "qgen/io.hpp"

namespace qgen {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string GridJson(const std::string& id, const std::vector<std::string>& rows) {
  std::string s = "{\"id\": \"" + id + "\", \"grid\": [";
  for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? ", \"" : "\"") + rows[i] + "\"";
  return s + "]}\n";
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qgen_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Put(const std::string& name, const std::string& body) {
    WriteFile(dir_ / name, body);
    return (dir_ / name).string();
  }

  // Three small contexts and a dataset with one draw line and one typo.
  void WriteExperiment() {
    Put("ctx/10.json", GridJson("10", {"B???WW", "B?WWWW", "??WRRR", "?WWWWW", "?W?P??", "WW????"}));
    Put("ctx/11.json", GridJson("11", {"???WWW", "???WWW", "???WWW", "WWWWWW", "RRRWWW", "WWWPPW"}));
    Put("ctx/12.json", GridJson("12", {"??????", "WWWWRW", "WWWWRW", "PPWWRW", "WWWWRW", "??????"}));
    std::string ds;
    const char* questions[] = {"(size Blue)", "(color 1B)", "(orient Blue)", "(touch Blue Red)",
                               "(size Purple)", "(color 6F)", "(orient Purple)", "(size Blue)"};
    for (const char* id : {"10", "11", "12"}) {
      for (const char* q : questions) {
        ds += std::string("{\"context\": \"") + id + "\", \"program\": \"" + q + "\"}\n";
      }
    }
    ds += "{\"context\": \"10\", \"program\": \"(size (draw (set Blue Red Purple)))\"}\n";
    ds += "{\"context\": \"11\", \"program\": \"(size Bleu)\"}\n";
    Put("questions.jsonl", ds);
  }

  std::vector<std::string> ModelArgs(const std::string& command, const std::string& out) {
    return {command, "--contexts-dir", (dir_ / "ctx").string(), "--dataset", (dir_ / "questions.jsonl").string(),
            "--out", out, "--pool-size", "1500", "--iters", "200", "--bootstrap", "40", "--seed", "4", "-k", "2"};
  }

  fs::path dir_;
};

using CliTest = TempDir;

TEST_F(CliTest, EvalPrintsAnswers) {
  const std::string board = Put("a.json", GridJson("a", {"BBBWWW", "WWWWRW", "WWWWRW", "PPWWRW", "WWWWRW", "WWWWWW"}));
  CliRun r = Cli({"eval", "(size Blue)", board});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "3\n");
  r = Cli({"eval", "(size Red)", board});
  EXPECT_EQ(r.out, "4\n");
  r = Cli({"eval", "(touch Blue Red)", board});
  EXPECT_EQ(r.out, "false\n");
  r = Cli({"eval", "(orient Red)", board});
  EXPECT_EQ(r.out, "V\n");
}

TEST_F(CliTest, ErrorsMapToExitCodes) {
  const std::string board = Put("a.json", GridJson("a", {"BBBWWW", "WWWWRW", "WWWWRW", "PPWWRW", "WWWWRW", "WWWWWW"}));
  CliRun r = Cli({"eval", "(size Blue", board});
  EXPECT_EQ(r.code, kExitSyntax);
  EXPECT_NE(r.err.find("position"), std::string::npos) << r.err;
  EXPECT_EQ(Cli({"eval", "(size 3)", board}).code, kExitType);
  EXPECT_EQ(Cli({"eval", "(size Blue)", (dir_ / "nope.json").string()}).code, kExitIo);
  const std::string hidden = Put("h.json", GridJson("h", {"BB?WWW", "WWWWRW", "WWWWRW", "PPWWRW", "WWWWRW", "WWWWWW"}));
  EXPECT_EQ(Cli({"eval", "(size Blue)", hidden}).code, kExitIo);
  // Two Blue tiles split by Water cannot be one ship.
  const std::string bad = Put("c.json", GridJson("c", {"BWB???", "??????", "??????", "??????", "??????", "??????"}));
  EXPECT_EQ(Cli({"eig", "(size Blue)", "--context", bad}).code, kExitInconsistentContext);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"train", "--preset", "huge"}).code, kExitUsage);
}

TEST_F(CliTest, EigInBits) {
  CliRun r = Cli({"eig", "(size Blue)"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NEAR(std::stod(r.out), std::log2(3.0), 1e-6);
  EXPECT_NE(r.out.find("bits"), std::string::npos);
  const std::string all_hidden = Put("h.json", GridJson("h", std::vector<std::string>(6, "??????")));
  r = Cli({"eig", "(size Blue)", "--context", all_hidden});
  EXPECT_NEAR(std::stod(r.out), std::log2(3.0), 1e-6);
  r = Cli({"eig", "(= 1 1)"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(std::stod(r.out), 0.0);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MissingInputsAreListedTogether) {
  const CliRun r = Cli({"train", "--contexts-dir", (dir_ / "none").string(), "--dataset",
                     (dir_ / "none.jsonl").string(), "--out", (dir_ / "out").string()});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_NE(r.err.find("none.jsonl"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find((dir_ / "none").string()), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, TrainLoocvGenerateWriteReports) {
  WriteExperiment();
  const std::string out = (dir_ / "out").string();
  CliRun r = Cli(ModelArgs("train", out));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* v : {"full", "information_agnostic", "complexity_agnostic", "type_agnostic"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / ("weights_" + std::string(v) + ".json"))) << v;
    EXPECT_TRUE(fs::exists(dir_ / "out" / ("trace_" + std::string(v) + ".csv"))) << v;
  }
  EXPECT_TRUE(fs::exists(dir_ / "out" / "run_metadata_train.json"));
  const std::string meta = ReadFile(dir_ / "out" / "run_metadata_train.json");
  EXPECT_NE(meta.find("\"draw_rejected\": 1"), std::string::npos) << meta;
  EXPECT_NE(meta.find(GitBlobDigest(ReadFile(dir_ / "questions.jsonl"))), std::string::npos);

  r = Cli(ModelArgs("loocv", out));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(ReadFile(dir_ / "out" / "loocv.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4 * 3);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "loocv_summary.csv"));

  r = Cli(ModelArgs("generate", out));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream gen(ReadFile(dir_ / "out" / "generated.csv"));
  std::getline(gen, line);
  EXPECT_EQ(line, "context,program,energy");
  int generated = 0;
  while (std::getline(gen, line)) {
    ++generated;
    const std::string program = line.substr(line.find(',') + 1, line.rfind(',') - line.find(',') - 1);
    EXPECT_EQ(program.find("(size Blue)"), std::string::npos);
  }
  EXPECT_EQ(generated, 3 * 2);

  // Reusing trained weights skips training.
  std::vector<std::string> args = ModelArgs("generate", (dir_ / "out2").string());
  args.push_back("--weights");
  args.push_back((dir_ / "out" / "weights_generate.json").string());
  r = Cli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadFile(dir_ / "out2" / "generated.csv"), ReadFile(dir_ / "out" / "generated.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out2" / "weights_generate.json"));
}

TEST_F(CliTest, RerunIsByteIdentical) {
  WriteExperiment();
  ASSERT_EQ(Cli(ModelArgs("loocv", (dir_ / "a").string())).code, kExitOk);
  ASSERT_EQ(Cli(ModelArgs("loocv", (dir_ / "b").string())).code, kExitOk);
  for (const char* f : {"loocv.csv", "loocv_summary.csv"}) {
    EXPECT_EQ(ReadFile(dir_ / "a" / f), ReadFile(dir_ / "b" / f)) << f;
  }
  std::vector<std::string> other = ModelArgs("loocv", (dir_ / "c").string());
  other[other.size() - 3] = "5";  // seed
  ASSERT_EQ(Cli(other).code, kExitOk);
  EXPECT_NE(ReadFile(dir_ / "a" / "loocv.csv"), ReadFile(dir_ / "c" / "loocv.csv"));
}

TEST(IoTest, DatasetTallies) {
  std::istringstream in(
      "{\"context\": \"3\", \"program\": \"(size Blue)\"}\n"
      "\n"
      "{\"context\": \"3\", \"program\": \"(size (draw (set Blue Red Purple)))\"}\n"
      "{\"context\": \"4\", \"program\": \"(size 3)\"}\n"
      "{\"context\": \"4\", \"program\": \"(color 1A)\"}\n");
  const Dataset ds = ParseDataset(in);
  ASSERT_EQ(ds.entries.size(), 2u);
  EXPECT_EQ(ds.report.draw_rejected, 1);
  ASSERT_EQ(ds.report.failures.size(), 1u);
  EXPECT_EQ(ds.report.failures[0].line, 4);
  EXPECT_EQ(ds.report.per_context.at("3"), 1);
  EXPECT_EQ(ds.report.per_context.at("4"), 1);
  EXPECT_FALSE(ds.report.ToString().empty());

  std::istringstream bad("{\"ctx\": \"3\"}\n");
  EXPECT_THROW(ParseDataset(bad), SchemaError);
}

TEST(IoTest, ContextFormats) {
  const Context a = ParseContext(GridJson("7", {"??????", "??????", "??????", "??????", "??????", "?????W"}));
  EXPECT_EQ(a.id(), "7");
  std::string arr = "{\"id\": \"8\", \"grid\": [";
  for (int r = 0; r < 6; ++r) {
    arr += r ? ", [" : "[";
    for (int c = 0; c < 6; ++c) arr += c ? ", \"?\"" : "\"?\"";
    arr += "]";
  }
  arr += "]}";
  EXPECT_EQ(ParseContext(arr).id(), "8");
  EXPECT_THROW(ParseContext("{\"id\": \"1\", \"grid\": [\"??\"]}"), SchemaError);
  EXPECT_THROW(ParseContext("not json"), SchemaError);
  EXPECT_THROW(ParseContext(GridJson("9", {"BWB???", "??????", "??????", "??????", "??????", "??????"})),
               InconsistentContextError);
}

TEST(IoTest, WeightsRoundTrip) {
  WeightsFile f;
  f.weights = Weights::Zero(Variant::kTypeAgnostic);
  f.weights.theta = {0.25, -1.5, 2.0, 0.0, 0.0, 0.0, 0.0, 3.125};
  f.seed = 11;
  f.pool_size = 999;
  f.iterations = 7;
  f.learning_rate = 0.05;
  f.contexts = {"3", "4"};
  const WeightsFile g = WeightsFromJson(WeightsToJson(f));
  EXPECT_EQ(g.weights.variant, f.weights.variant);
  EXPECT_EQ(g.weights.theta, f.weights.theta);
  EXPECT_EQ(g.seed, 11u);
  EXPECT_EQ(g.pool_size, 999u);
  EXPECT_EQ(g.contexts, f.contexts);
  EXPECT_THROW(WeightsFromJson("{}"), SchemaError);
}

TEST(IoTest, Digests) {
  EXPECT_EQ(GitBlobDigest("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(GitBlobDigest(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(Sha1Hex("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace qgen
