// Copyright 2026 The mathgcl Authors. All rights reserved.
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mathgcl/error.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/log.hpp"
#include "mathgcl/pipeline.hpp"
#include "mathgcl/query_pipeline.hpp"
#include "mathgcl/search_service.hpp"
#include "mathgcl/synthetic.hpp"
#include "support/test_support.hpp"

// Included last: <resolv.h> defines a _res macro that collides with Eigen.
#include <httplib.h>

namespace mathgcl {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class PipelineFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    set_log_sink(nullptr);
    dir_ = new fs::path(testing::scratch_dir("pipeline"));
    const SyntheticCorpus corpus = generate_synthetic_corpus(6, 1, 3);
    write_corpus(*dir_ / "corpus.jsonl", corpus.formulas);
    write_qrels(*dir_ / "qrels.txt", corpus.qrels);
    first_ = new CorpusRecord(corpus.formulas.front());

    PipelineConfig c;
    c.corpus = *dir_ / "corpus.jsonl";
    c.qrels = *dir_ / "qrels.txt";
    c.output_dir = *dir_ / "out";
    c.models = {Objective::kGraphCl};
    c.walks = WalkConfig{4, 6};
    c.skipgram.epochs = 1;
    c.gcl.epochs = 2;
    c.gcl.batch_size = 8;
    c.gcl.learning_rate = 0.02;
    c.serve.layout = Layout::kSlt;
    result_ = new PipelineResult(run_pipeline(c));
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete result_;
    delete first_;
    delete dir_;
  }
  static fs::path out(const std::string& rel) { return *dir_ / "out" / rel; }

  static fs::path* dir_;
  static CorpusRecord* first_;
  static PipelineResult* result_;
};
fs::path* PipelineFixture::dir_ = nullptr;
CorpusRecord* PipelineFixture::first_ = nullptr;
PipelineResult* PipelineFixture::result_ = nullptr;

TEST_F(PipelineFixture, ProducesArtifactsAndSmokeReport) {
  EXPECT_TRUE(result_->smoke_passed);
  EXPECT_EQ(result_->corpus_size, 30u);
  for (const char* f : {"manifest.json", "smoke_report.json", "eval_report.json", "slt/tokens.mgte",
                        "slt/graphcl.mgcp", "slt/graphcl.mgri", "opt/baseline.mgri"}) {
    EXPECT_TRUE(fs::exists(out(f))) << f;
  }
  const json manifest = json::parse(read_file(out("manifest.json")));
  EXPECT_EQ(manifest.at("config_hash").get<std::string>().size(), 16u);
}

TEST_F(PipelineFixture, QueryPipelineLabelsStages) {
  const QueryArtifacts a =
      load_query_artifacts(out("slt/tokens.mgte"), out("slt/graphcl.mgcp"), out("slt/graphcl.mgri"));
  const RankedList self = query_pipeline(a, first_->latex, Layout::kSlt, 3);
  ASSERT_FALSE(self.items.empty());
  EXPECT_EQ(self.items[0].id, first_->id);
  EXPECT_NEAR(self.items[0].score, 1.0, 1e-6);
  try {
    query_pipeline(a, "\\unknowncmd{x}", Layout::kSlt, 3);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedCommand);
    EXPECT_EQ(e.stage(), "parse");
  }
  try {
    query_pipeline(a, "x", Layout::kOpt, 3);
    FAIL() << "expected ArtifactMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArtifactMismatch);
  }
}

TEST_F(PipelineFixture, MixedArtifactsRejected) {
  try {
    load_query_artifacts(out("slt/tokens.mgte"), out("opt/graphcl.mgcp"), out("slt/graphcl.mgri"));
    FAIL() << "expected ArtifactMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kArtifactMismatch);
  }
}

TEST_F(PipelineFixture, ServiceHandlers) {
  const SearchService svc = SearchService::from_manifest(out("manifest.json"));
  const HttpResponse ok = svc.search(first_->latex, std::nullopt, std::nullopt, std::nullopt);
  ASSERT_EQ(ok.status, 200) << ok.body;
  const json body = json::parse(ok.body);
  EXPECT_EQ(body.at("results").at(0).at("id"), first_->id);
  EXPECT_EQ(body.at("results").at(0).at("latex"), first_->latex);
  EXPECT_EQ(body.at("results").size(), 10u);

  EXPECT_EQ(svc.search("x", "3", "opt", "baseline").status, 200);
  EXPECT_EQ(svc.search("x", "0", std::nullopt, std::nullopt).status, 400);
  EXPECT_EQ(svc.search("", std::nullopt, std::nullopt, std::nullopt).status, 400);
  EXPECT_EQ(svc.search("x", std::nullopt, "tree", std::nullopt).status, 404);
  EXPECT_EQ(svc.search("x", std::nullopt, std::nullopt, "bgrl").status, 404);

  const HttpResponse parsed = svc.parse("a^3+b^2=0", std::nullopt);
  ASSERT_EQ(parsed.status, 200);
  EXPECT_TRUE(json::parse(parsed.body).contains("opt"));
}

TEST_F(PipelineFixture, HttpEndpoints) {
  const SearchService svc = SearchService::from_manifest(out("manifest.json"));
  HttpServer server(svc);
  const int port = server.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body).at("status"), "ok");

  auto hit = client.Get("/search", httplib::Params{{"q", first_->latex}, {"k", "5"}}, httplib::Headers{});
  ASSERT_TRUE(hit);
  ASSERT_EQ(hit->status, 200) << hit->body;
  const json results = json::parse(hit->body).at("results");
  EXPECT_EQ(results.size(), 5u);
  EXPECT_EQ(results.at(0).at("id"), first_->id);
  EXPECT_NEAR(results.at(0).at("score").get<double>(), 1.0, 1e-6);

  auto bad = client.Get("/search", httplib::Params{{"q", "a^{3"}}, httplib::Headers{});
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const json err = json::parse(bad->body).at("error");
  EXPECT_EQ(err.at("code"), "UnbalancedDelimiter");
  EXPECT_EQ(err.at("stage"), "parse");
  EXPECT_EQ(err.at("offset"), 3);

  auto parsed = client.Get("/parse", httplib::Params{{"q", "x^2"}, {"layout", "opt"}}, httplib::Headers{});
  ASSERT_TRUE(parsed);
  EXPECT_EQ(parsed->status, 200);
  EXPECT_EQ(json::parse(parsed->body).at("opt").at("nodes").at(0), "O!pow");

  auto missing = client.Get("/search", httplib::Params{{"q", "x"}, {"model", "nope"}}, httplib::Headers{});
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  server.stop();
  server.wait();
}

TEST(PipelineConfigTest, ParsesShippedDemo) {
  const PipelineConfig c = PipelineConfig::load(testing::source_dir() / "data/synthetic/demo.json");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.layouts.size(), 2u);
  EXPECT_EQ(c.models.size(), 3u);
  EXPECT_EQ(c.walks.walk_length, 8u);
  EXPECT_EQ(c.skipgram.dim, 100u);
  EXPECT_EQ(c.gcl.epochs, 20u);
  EXPECT_TRUE(c.baseline);
}

TEST(PipelineConfigTest, UnknownKeysRejected) {
  try {
    PipelineConfig::parse(R"({"paths":{"corpus":"c.jsonl","output_dir":"o"},"sed":7})");
    FAIL() << "expected ConfigError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST(PipelineConfigTest, HashIgnoresOutputLocation) {
  const auto dir = testing::scratch_dir("cfg");
  { std::ofstream(dir / "c.jsonl") << R"({"id":"f1","latex":"x"})" << "\n"; }
  const std::string a = R"({"paths":{"corpus":"c.jsonl","output_dir":"one"}})";
  const std::string b = R"({"paths":{"corpus":"c.jsonl","output_dir":"two"}})";
  const std::string c = R"({"paths":{"corpus":"c.jsonl","output_dir":"one"},"seed":8})";
  EXPECT_EQ(PipelineConfig::parse(a, dir).hash(), PipelineConfig::parse(b, dir).hash());
  EXPECT_NE(PipelineConfig::parse(a, dir).hash(), PipelineConfig::parse(c, dir).hash());
  fs::remove_all(dir);
}

#ifdef MATHGCL_CLI
class CliFixture : public PipelineFixture {
 protected:
  static int run_cli(const std::string& args, std::string* err = nullptr) {
    const fs::path err_file = *dir_ / "stderr.txt";
    const std::string cmd = std::string(MATHGCL_CLI) + " " + args + " >/dev/null 2>" + err_file.string();
    const int status = std::system(cmd.c_str());
    if (err) *err = read_file(err_file);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

TEST_F(CliFixture, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST_F(CliFixture, MismatchedLayoutIsArtifactError) {
  std::string err;
  const std::string args = "--quiet query --index " + out("slt/graphcl.mgri").string() + " --tokens " +
                           out("slt/tokens.mgte").string() + " --ckpt " + out("slt/graphcl.mgcp").string() +
                           " --layout opt --latex x";
  EXPECT_EQ(run_cli(args, &err), 1);
  const json payload = json::parse(err).at("error");
  EXPECT_EQ(payload.at("code"), "ArtifactMismatch");
}

TEST_F(CliFixture, ParseErrorCarriesOffset) {
  std::string err;
  EXPECT_EQ(run_cli("parse --latex 'a^{3'", &err), 1);
  const json payload = json::parse(err).at("error");
  EXPECT_EQ(payload.at("code"), "UnbalancedDelimiter");
  EXPECT_EQ(payload.at("stage"), "parse");
  EXPECT_EQ(payload.at("offset"), 3);
}

TEST_F(CliFixture, QueryPrintsSelfFirst) {
  const fs::path run = *dir_ / "q.run";
  const fs::path queries = *dir_ / "q.jsonl";
  write_corpus(queries, {*first_});
  const std::string args = "--quiet query --index " + out("opt/graphcl.mgri").string() + " --tokens " +
                           out("opt/tokens.mgte").string() + " --ckpt " + out("opt/graphcl.mgcp").string() +
                           " --queries " + queries.string() + " --run-out " + run.string();
  ASSERT_EQ(run_cli(args), 0);
  std::istringstream first_line(read_file(run));
  std::string qid, fid;
  first_line >> qid >> fid;
  EXPECT_EQ(qid, first_->id);
  EXPECT_EQ(fid, first_->id);
}
#endif

}  // namespace
}  // namespace mathgcl
