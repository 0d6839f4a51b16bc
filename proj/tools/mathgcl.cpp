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

// Command-line front end: offline stages, querying, evaluation and serving.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mathgcl/binary_io.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/evaluation.hpp"
#include "mathgcl/formula_embedding.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/log.hpp"
#include "mathgcl/pipeline.hpp"
#include "mathgcl/query_pipeline.hpp"
#include "mathgcl/search_service.hpp"
#include "mathgcl/trainer.hpp"
#include "mathgcl/trec_io.hpp"

namespace fs = std::filesystem;
using namespace mathgcl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void print_error(const Error& e) {
  nlohmann::ordered_json j;
  j["error"]["code"] = error_code_name(e.code());
  j["error"]["stage"] = e.stage();
  j["error"]["offset"] = e.offset() ? nlohmann::ordered_json(*e.offset()) : nlohmann::ordered_json();
  j["error"]["message"] = e.what();
  std::cerr << j.dump() << "\n";
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

void write_json_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << text << "\n";
}

struct ParseArgs {
  std::string latex;
  fs::path corpus, out;
  std::string layout = "slt";
};

int run_parse(const ParseArgs& a) {
  const bool both = a.layout == "both";
  const Layout layout = both ? Layout::kSlt : parse_layout(a.layout);
  if (!a.latex.empty()) {
    std::vector<Layout> layouts{layout};
    if (both) layouts.push_back(Layout::kOpt);
    for (Layout l : layouts) {
      FormulaGraph graph;
      try {
        graph = graph_from_latex(a.latex, l);
      } catch (const Error& e) {
        throw e.with_stage("parse");
      }
      std::cout << serialize_graph(graph, "query") << "\n";
    }
    return kExitOk;
  }
  if (a.corpus.empty() || a.out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "parse needs --latex, or --corpus with --out");
  }
  const auto corpus = read_corpus(a.corpus);
  auto graphs = parse_corpus(corpus, layout);
  if (both) {
    auto opt = parse_corpus(corpus, Layout::kOpt);
    graphs.insert(graphs.end(), std::make_move_iterator(opt.begin()), std::make_move_iterator(opt.end()));
  }
  write_graphs(a.out, graphs);
  log_event("info", "parse.done", {{"graphs", graphs.size()}, {"out", a.out.string()}});
  return kExitOk;
}

struct TokenArgs {
  fs::path graphs, out, config;
  std::string layout;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> dim, epochs, walks_per_node, walk_length;
};

int run_train_tokens(const TokenArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : PipelineConfig::load(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.dim) cfg.skipgram.dim = *a.dim;
  if (a.epochs) cfg.skipgram.epochs = *a.epochs;
  if (a.walks_per_node) cfg.walks.walks_per_node = *a.walks_per_node;
  if (a.walk_length) cfg.walks.walk_length = *a.walk_length;
  const auto graphs = read_graphs(a.graphs, a.layout.empty() ? std::nullopt : std::optional(parse_layout(a.layout)));
  if (graphs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no graphs in '" + a.graphs.string() + "'");
  PipelineConfig hashed = cfg;
  hashed.corpus = a.graphs;
  const EmbeddingTable table = train_token_table(graphs, cfg.walks, cfg.skipgram_for_run());
  table.save(a.out, hashed.hash());
  log_event("info", "train-tokens.done", {{"vocab", table.vocab_size()}, {"out", a.out.string()}});
  return kExitOk;
}

struct GclArgs {
  std::string model, layout = "slt";
  fs::path graphs, tokens, out, config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs, batch_size;
  std::optional<double> lr;
};

int run_train_gcl(const GclArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : PipelineConfig::load(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.gcl.epochs = *a.epochs;
  if (a.lr) cfg.gcl.learning_rate = *a.lr;
  if (a.batch_size) cfg.gcl.batch_size = *a.batch_size;
  const Objective objective = parse_objective(a.model);
  const Layout layout = parse_layout(a.layout);
  std::uint64_t table_hash = 0;
  const EmbeddingTable table = EmbeddingTable::load(a.tokens, &table_hash);
  std::vector<FormulaGraph> plain;
  for (auto& g : read_graphs(a.graphs, layout)) plain.push_back(std::move(g.graph));
  TrainConfig tc = cfg.gcl_for(objective);
  tc.dim = table.dim();
  const TrainResult r = train(attach_features(plain, table), tc, [&](const EpochReport& e) {
    log_event("info", "train-gcl.epoch", {{"model", a.model}, {"epoch", e.epoch}, {"loss", e.mean_loss}});
  });
  save_checkpoint(a.out, r.params, CheckpointInfo{objective, layout, table_hash});
  log_event("info", "train-gcl.done",
            {{"model", a.model}, {"steps", r.counters.optimizer_steps}, {"out", a.out.string()}});
  return kExitOk;
}

struct IndexArgs {
  fs::path embeddings, graphs, tokens, ckpt, out, embeddings_out;
};

int run_index(const IndexArgs& a) {
  std::vector<FormulaEmbedding> items;
  std::uint64_t hash = 0;
  if (!a.embeddings.empty()) {
    items = read_embeddings(a.embeddings);
  } else {
    if (a.graphs.empty() || a.tokens.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "index needs --embeddings, or --graphs with --tokens");
    }
    const EmbeddingTable table = EmbeddingTable::load(a.tokens, &hash);
    std::optional<EncoderParams> enc;
    const auto graphs = read_graphs(a.graphs);
    if (!a.ckpt.empty()) {
      CheckpointInfo info;
      enc = load_checkpoint(a.ckpt, &info);
      if (!graphs.empty() && graphs.front().graph.layout != info.layout) {
        throw Error(ErrorCode::kArtifactMismatch, "checkpoint layout differs from graph layout");
      }
      if (hash != 0 && info.config_hash != 0 && hash != info.config_hash) {
        throw Error(ErrorCode::kArtifactMismatch, "checkpoint and token table come from different configurations");
      }
    }
    items = embed_corpus(graphs, table, enc ? &*enc : nullptr);
    if (!a.embeddings_out.empty()) write_embeddings(a.embeddings_out, items);
  }
  const EmbeddingIndex index = EmbeddingIndex::build(items, hash);
  index.save(a.out);
  log_event("info", "index.done", {{"rows", index.size()}, {"out", a.out.string()}});
  return kExitOk;
}

struct QueryArgs {
  fs::path index, tokens, ckpt, queries, run_out;
  std::string latex, layout;
  std::size_t k = 0;
};

int run_query(const QueryArgs& a) {
  const QueryArtifacts art = load_query_artifacts(a.tokens, a.ckpt, a.index);
  const Layout layout = a.layout.empty() ? art.layout : parse_layout(a.layout);
  if (!a.latex.empty()) {
    const RankedList list = query_pipeline(art, a.latex, layout, a.k ? a.k : kServeDepth, "query");
    nlohmann::ordered_json j;
    j["query"] = a.latex;
    j["results"] = nlohmann::ordered_json::array();
    for (const ScoredId& s : list.items) j["results"].push_back({{"id", s.id}, {"score", s.score}});
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  if (a.queries.empty() || a.run_out.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "query needs --latex, or --queries with --run-out");
  }
  std::vector<RankedList> lists;
  for (const CorpusRecord& q : read_corpus(a.queries)) {
    lists.push_back(query_pipeline(art, q.latex, layout, a.k ? a.k : kEvalDepth, q.id));
  }
  write_run(a.run_out, lists);
  log_event("info", "query.done", {{"queries", lists.size()}, {"out", a.run_out.string()}});
  return kExitOk;
}

struct EvalArgs {
  std::string run, opt_run;
  fs::path qrels, out;
  std::size_t k = kEvalDepth;
};

int run_eval(const EvalArgs& a) {
  const QrelSet qrels = read_qrels(a.qrels);
  auto load_runs = [](const std::string& list) {
    std::vector<RunFile> runs;
    for (const std::string& p : split_commas(list)) runs.push_back(read_run(p));
    if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, "no run files given");
    return runs;
  };
  const auto runs = load_runs(a.run);
  MetricReport report = evaluate_run(runs, qrels, a.k);
  std::string text;
  if (!a.opt_run.empty()) {
    const auto opt_runs = load_runs(a.opt_run);
    text = report_json(combine_layouts(std::move(report), evaluate_run(opt_runs, qrels, a.k)));
  } else {
    text = report_json(report);
  }
  if (a.out.empty()) {
    std::cout << text << "\n";
  } else {
    write_json_file(a.out, text);
  }
  return kExitOk;
}

struct ServeArgs {
  fs::path manifest, config;
  std::string host;
  int port = -1;
};

HttpServer* g_server = nullptr;

int run_serve(const ServeArgs& a) {
  fs::path manifest = a.manifest;
  std::string host = "127.0.0.1";
  int port = 8080;
  if (!a.config.empty()) {
    const PipelineConfig cfg = PipelineConfig::load(a.config);
    if (manifest.empty()) manifest = cfg.output_dir / "manifest.json";
    host = cfg.serve.host;
    port = cfg.serve.port;
  }
  if (manifest.empty()) throw Error(ErrorCode::kInvalidArgument, "serve needs --manifest or --config");
  if (!a.host.empty()) host = a.host;
  if (a.port >= 0) port = a.port;
  const SearchService service = SearchService::from_manifest(manifest);
  HttpServer server(service);
  const int bound = server.start(host, port);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  log_event("info", "serve.listening", {{"host", host}, {"port", bound}});
  server.wait();
  g_server = nullptr;
  return kExitOk;
}

struct PipelineArgs {
  fs::path config, out;
  std::optional<std::uint64_t> seed;
};

int run_pipeline_cmd(const PipelineArgs& a) {
  PipelineConfig cfg = PipelineConfig::load(a.config);
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.seed) cfg.seed = *a.seed;
  const PipelineResult r = run_pipeline(cfg);
  nlohmann::ordered_json j;
  j["config_hash"] = hex64(r.config_hash);
  j["manifest"] = r.manifest.string();
  j["smoke_report"] = r.smoke_report.string();
  j["smoke_passed"] = r.smoke_passed;
  if (!r.eval_report.empty()) j["eval_report"] = r.eval_report.string();
  std::cout << j.dump(2) << "\n";
  return r.smoke_passed ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mathgcl: formula retrieval with graph contrastive embeddings"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress JSON log lines on stderr");

  ParseArgs parse_args;
  auto* parse = app.add_subcommand("parse", "Parse LaTeX into SLT/OPT graphs");
  parse->add_option("--latex", parse_args.latex, "Single formula; prints its graph");
  parse->add_option("--corpus", parse_args.corpus, "Corpus JSONL (id, latex)");
  parse->add_option("--layout", parse_args.layout, "slt, opt or both")
      ->check(CLI::IsMember({"slt", "opt", "both"}));
  parse->add_option("--out", parse_args.out, "Graph JSONL output");

  TokenArgs token_args;
  auto* tokens = app.add_subcommand("train-tokens", "Train subword skip-gram token embeddings");
  tokens->add_option("--graphs", token_args.graphs, "Graph JSONL")->required();
  tokens->add_option("--out", token_args.out, "Token table output")->required();
  tokens->add_option("--config", token_args.config, "Pipeline config JSON");
  tokens->add_option("--seed", token_args.seed, "Global seed");
  tokens->add_option("--layout", token_args.layout, "Use only graphs of this layout")
      ->check(CLI::IsMember({"slt", "opt"}));
  tokens->add_option("--dim", token_args.dim, "Embedding dimension");
  tokens->add_option("--epochs", token_args.epochs, "Skip-gram epochs");
  tokens->add_option("--walks-per-node", token_args.walks_per_node, "Random walks per node");
  tokens->add_option("--walk-length", token_args.walk_length, "Nodes per walk");

  GclArgs gcl_args;
  auto* gcl = app.add_subcommand("train-gcl", "Train a GCL encoder");
  gcl->add_option("--model", gcl_args.model, "infograph, graphcl or bgrl")
      ->required()
      ->check(CLI::IsMember({"infograph", "graphcl", "bgrl"}));
  gcl->add_option("--graphs", gcl_args.graphs, "Graph JSONL")->required();
  gcl->add_option("--tokens", gcl_args.tokens, "Token table")->required();
  gcl->add_option("--layout", gcl_args.layout, "slt or opt")->check(CLI::IsMember({"slt", "opt"}));
  gcl->add_option("--out", gcl_args.out, "Checkpoint output")->required();
  gcl->add_option("--config", gcl_args.config, "Pipeline config JSON");
  gcl->add_option("--seed", gcl_args.seed, "Global seed");
  gcl->add_option("--epochs", gcl_args.epochs, "Training epochs");
  gcl->add_option("--lr", gcl_args.lr, "Learning rate");
  gcl->add_option("--batch-size", gcl_args.batch_size, "Graphs per batch");

  IndexArgs index_args;
  auto* index = app.add_subcommand("index", "Build a retrieval index");
  index->add_option("--embeddings", index_args.embeddings, "Embedding JSONL");
  index->add_option("--graphs", index_args.graphs, "Graph JSONL (embed on the fly)");
  index->add_option("--tokens", index_args.tokens, "Token table");
  index->add_option("--ckpt", index_args.ckpt, "Encoder checkpoint; omit for the averaging baseline");
  index->add_option("--embeddings-out", index_args.embeddings_out, "Also write the embeddings as JSONL");
  index->add_option("--out", index_args.out, "Index output")->required();

  QueryArgs query_args;
  auto* query = app.add_subcommand("query", "Rank the index against a formula");
  query->add_option("--index", query_args.index, "Index file")->required();
  query->add_option("--tokens", query_args.tokens, "Token table")->required();
  query->add_option("--ckpt", query_args.ckpt, "Encoder checkpoint; omit for the baseline");
  query->add_option("--latex", query_args.latex, "Query formula");
  query->add_option("--queries", query_args.queries, "Query JSONL (id, latex) for batch mode");
  query->add_option("--run-out", query_args.run_out, "Run file output for batch mode");
  query->add_option("--layout", query_args.layout, "slt or opt (defaults to the index layout)")
      ->check(CLI::IsMember({"slt", "opt"}));
  query->add_option("--k", query_args.k, "Result depth (10 single, 1000 batch)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Compute bpref and nDCG for run files");
  eval->add_option("--run", eval_args.run, "Run file(s), comma separated trials")->required();
  eval->add_option("--opt-run", eval_args.opt_run, "OPT run file(s); adds F1 of the two layouts");
  eval->add_option("--qrels", eval_args.qrels, "Qrels file")->required();
  eval->add_option("--k", eval_args.k, "Evaluation depth");
  eval->add_option("--out", eval_args.out, "Report JSON output (stdout if omitted)");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Serve /search, /parse and /health over HTTP");
  serve->add_option("--manifest", serve_args.manifest, "Pipeline manifest.json");
  serve->add_option("--config", serve_args.config, "Pipeline config JSON");
  serve->add_option("--host", serve_args.host, "Bind address");
  serve->add_option("--port", serve_args.port, "Port (0 picks a free one)");

  PipelineArgs pipeline_args;
  auto* pipeline = app.add_subcommand("pipeline", "Run every offline stage from one config");
  pipeline->add_option("--config", pipeline_args.config, "Pipeline config JSON")->required();
  pipeline->add_option("--out", pipeline_args.out, "Override the output directory");
  pipeline->add_option("--seed", pipeline_args.seed, "Override the global seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }
  if (quiet) set_log_sink(nullptr);

  try {
    if (*parse) return run_parse(parse_args);
    if (*tokens) return run_train_tokens(token_args);
    if (*gcl) return run_train_gcl(gcl_args);
    if (*index) return run_index(index_args);
    if (*query) return run_query(query_args);
    if (*eval) return run_eval(eval_args);
    if (*serve) return run_serve(serve_args);
    if (*pipeline) return run_pipeline_cmd(pipeline_args);
  } catch (const Error& e) {
    print_error(e);
    return kExitFailure;
  } catch (const std::exception& e) {
    print_error(Error(ErrorCode::kIoError, e.what()));
    return kExitFailure;
  }
  std::cerr << app.help();
  return kExitUsage;
}
