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

#include "mathgcl/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mathgcl/binary_io.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/log.hpp"
#include "mathgcl/trec_io.hpp"
#include "mathgcl/walks.hpp"

namespace mathgcl {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); }

// Reads fields of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const Json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) config_error("'" + name_ + "' must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) config_error("unknown key '" + key + "' in '" + name_ + "'");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      config_error("'" + name_ + "." + key + "' has the wrong type");
    }
  }

  const Json* child(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

 private:
  const Json& j_;
  std::string name_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

template <typename F>
auto in_stage(const std::string& stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw e.with_stage(stage);
  }
}

}  // namespace

PipelineConfig PipelineConfig::parse(const std::string& json_text, const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  PipelineConfig c;
  Section top(root, "config");
  top.read("seed", c.seed);
  top.read("baseline", c.baseline);

  if (const Json* p = top.child("paths")) {
    Section s(*p, "paths");
    std::string corpus, qrels, out;
    s.read("corpus", corpus);
    s.read("qrels", qrels);
    s.read("output_dir", out);
    c.corpus = resolve(base_dir, corpus);
    c.qrels = resolve(base_dir, qrels);
    c.output_dir = resolve(base_dir, out);
  }
  if (const Json* p = top.child("layouts")) {
    std::vector<std::string> names;
    try {
      names = p->get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
      config_error("'layouts' must be a list of strings");
    }
    c.layouts.clear();
    for (const auto& n : names) {
      try {
        c.layouts.push_back(parse_layout(n));
      } catch (const Error& e) {
        config_error(e.detail());
      }
    }
  }
  if (const Json* p = top.child("models")) {
    std::vector<std::string> names;
    try {
      names = p->get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
      config_error("'models' must be a list of strings");
    }
    c.models.clear();
    for (const auto& n : names) {
      try {
        c.models.push_back(parse_objective(n));
      } catch (const Error& e) {
        config_error(e.detail());
      }
    }
  }
  if (const Json* p = top.child("walks")) {
    Section s(*p, "walks");
    s.read("walks_per_node", c.walks.walks_per_node);
    s.read("walk_length", c.walks.walk_length);
  }
  if (const Json* p = top.child("tokens")) {
    Section s(*p, "tokens");
    s.read("dim", c.skipgram.dim);
    s.read("window", c.skipgram.window);
    s.read("negatives", c.skipgram.negatives);
    s.read("epochs", c.skipgram.epochs);
    s.read("learning_rate", c.skipgram.learning_rate);
    s.read("min_count", c.skipgram.min_count);
    s.read("min_n", c.skipgram.subwords.min_n);
    s.read("max_n", c.skipgram.subwords.max_n);
    s.read("buckets", c.skipgram.subwords.bucket_count);
  }
  if (const Json* p = top.child("gcl")) {
    Section s(*p, "gcl");
    s.read("epochs", c.gcl.epochs);
    s.read("batch_size", c.gcl.batch_size);
    s.read("learning_rate", c.gcl.learning_rate);
    s.read("temperature", c.gcl.temperature);
    s.read("ema_decay", c.gcl.ema_decay);
    s.read("node_drop_ratio", c.gcl.augment.node_drop_ratio);
    s.read("edge_perturb_ratio", c.gcl.augment.edge_perturb_ratio);
  }
  if (const Json* p = top.child("eval")) {
    Section s(*p, "eval");
    s.read("k", c.eval_k);
  }
  if (const Json* p = top.child("serve")) {
    Section s(*p, "serve");
    s.read("host", c.serve.host);
    s.read("port", c.serve.port);
    s.read("k", c.serve.k);
    std::string layout = std::string(layout_name(c.serve.layout));
    s.read("layout", layout);
    try {
      c.serve.layout = parse_layout(layout);
    } catch (const Error& e) {
      config_error(e.detail());
    }
    s.read("model", c.serve.model);
  }

  c.gcl.dim = c.skipgram.dim;
  if (c.layouts.empty()) config_error("'layouts' must not be empty");
  if (c.walks.walks_per_node == 0 || c.walks.walk_length == 0) config_error("walk counts must be >= 1");
  if (c.skipgram.dim == 0 || c.skipgram.window == 0 || c.skipgram.epochs == 0) {
    config_error("token dim, window and epochs must be >= 1");
  }
  if (!(c.skipgram.learning_rate > 0.0)) config_error("token learning_rate must be > 0");
  if (c.skipgram.subwords.min_n == 0 || c.skipgram.subwords.min_n > c.skipgram.subwords.max_n) {
    config_error("need 1 <= min_n <= max_n");
  }
  if (c.skipgram.subwords.bucket_count == 0) config_error("buckets must be >= 1");
  if (c.eval_k == 0 || c.serve.k == 0) config_error("k must be >= 1");
  c.gcl.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    config_error(e.detail());
  }
  return parse(text, path.parent_path());
}

SkipGramConfig PipelineConfig::skipgram_for_run() const {
  SkipGramConfig s = skipgram;
  s.seed = derive_seed(seed, 0x746f6b);
  return s;
}

TrainConfig PipelineConfig::gcl_for(Objective objective) const {
  TrainConfig t = gcl;
  t.objective = objective;
  t.seed = seed;
  t.augment.seed = derive_seed(seed, 0x617567);
  t.dim = skipgram.dim;
  return t;
}

std::string PipelineConfig::canonical_json() const {
  OrderedJson j;
  j["seed"] = seed;
  j["corpus_fnv1a64"] = corpus.empty() ? std::string() : hex64(fnv1a64(read_file(corpus)));
  std::vector<std::string> l, m;
  for (Layout x : layouts) l.emplace_back(layout_name(x));
  for (Objective x : models) m.emplace_back(objective_name(x));
  j["layouts"] = l;
  j["models"] = m;
  j["baseline"] = baseline;
  j["walks"] = {{"walks_per_node", walks.walks_per_node}, {"walk_length", walks.walk_length}};
  j["tokens"] = {{"dim", skipgram.dim},
                 {"window", skipgram.window},
                 {"negatives", skipgram.negatives},
                 {"epochs", skipgram.epochs},
                 {"learning_rate", skipgram.learning_rate},
                 {"min_count", skipgram.min_count},
                 {"min_n", skipgram.subwords.min_n},
                 {"max_n", skipgram.subwords.max_n},
                 {"buckets", skipgram.subwords.bucket_count}};
  j["gcl"] = {{"epochs", gcl.epochs},
              {"batch_size", gcl.batch_size},
              {"learning_rate", gcl.learning_rate},
              {"temperature", gcl.temperature},
              {"ema_decay", gcl.ema_decay},
              {"node_drop_ratio", gcl.augment.node_drop_ratio},
              {"edge_perturb_ratio", gcl.augment.edge_perturb_ratio}};
  return j.dump();
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(canonical_json()); }

std::vector<GraphRecord> parse_corpus(const std::vector<CorpusRecord>& corpus, Layout layout) {
  std::vector<GraphRecord> out;
  out.reserve(corpus.size());
  for (const CorpusRecord& r : corpus) {
    try {
      out.push_back(GraphRecord{r.id, graph_from_latex(r.latex, layout)});
    } catch (const Error& e) {
      throw Error(e.code(), "formula '" + r.id + "': " + e.detail(), e.offset()).with_stage("parse");
    }
  }
  return out;
}

EmbeddingTable train_token_table(const std::vector<GraphRecord>& graphs, const WalkConfig& walks,
                                 const SkipGramConfig& skipgram) {
  std::vector<FormulaGraph> plain;
  plain.reserve(graphs.size());
  for (const GraphRecord& g : graphs) plain.push_back(g.graph);
  const WalkCorpus corpus = sample_corpus_walks(plain, walks.walks_per_node, walks.walk_length,
                                                derive_seed(skipgram.seed, 0x77616c6b));
  return train_subword_skipgram(corpus, skipgram);
}

std::vector<FormulaEmbedding> embed_corpus(const std::vector<GraphRecord>& graphs,
                                           const EmbeddingTable& table, const EncoderParams* encoder) {
  std::vector<FormulaEmbedding> out;
  out.reserve(graphs.size());
  for (const GraphRecord& g : graphs) {
    out.push_back(encoder ? embed_formula(*encoder, g.graph, table, g.id)
                          : embed_formula_baseline(g.graph, table, g.id));
  }
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  if (config.corpus.empty()) config_error("paths.corpus is required");
  if (config.output_dir.empty()) config_error("paths.output_dir is required");
  if (!fs::exists(config.corpus)) config_error("corpus '" + config.corpus.string() + "' does not exist");
  if (!config.qrels.empty() && !fs::exists(config.qrels)) {
    config_error("qrels '" + config.qrels.string() + "' does not exist");
  }
  fs::create_directories(config.output_dir);

  PipelineResult result;
  result.config_hash = config.hash();
  const std::vector<CorpusRecord> corpus = read_corpus(config.corpus);
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "corpus has no formulas");
  result.corpus_size = corpus.size();
  write_corpus(config.output_dir / "corpus.jsonl", corpus);
  log_event("info", "pipeline.start", {{"formulas", corpus.size()}, {"config_hash", hex64(result.config_hash)}});

  std::optional<QrelSet> qrels;
  std::vector<std::size_t> query_rows;
  if (!config.qrels.empty()) {
    qrels = read_qrels(config.qrels);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (qrels->find(corpus[i].id)) query_rows.push_back(i);
    }
  }

  OrderedJson manifest;
  manifest["config_hash"] = hex64(result.config_hash);
  manifest["corpus"] = "corpus.jsonl";
  manifest["serve"] = {{"host", config.serve.host},
                       {"port", config.serve.port},
                       {"k", config.serve.k},
                       {"layout", layout_name(config.serve.layout)},
                       {"model", config.serve.model}};
  OrderedJson smoke = OrderedJson::object();
  OrderedJson eval_json = OrderedJson::object();
  result.smoke_passed = true;

  for (Layout layout : config.layouts) {
    const std::string lname(layout_name(layout));
    const fs::path dir = config.output_dir / lname;
    fs::create_directories(dir);
    LayoutRun lr;
    lr.layout = layout;
    lr.graphs = dir / "graphs.jsonl";
    lr.tokens = dir / "tokens.mgte";

    const auto graphs = parse_corpus(corpus, layout);
    write_graphs(lr.graphs, graphs);
    log_event("info", "parse.done", {{"layout", lname}, {"graphs", graphs.size()}});

    const EmbeddingTable trained = in_stage("train-tokens", [&] {
      return train_token_table(graphs, config.walks, config.skipgram_for_run());
    });
    trained.save(lr.tokens, result.config_hash);
    const EmbeddingTable table = EmbeddingTable::load(lr.tokens);
    log_event("info", "train-tokens.done", {{"layout", lname}, {"vocab", table.vocab_size()}});

    std::vector<FormulaGraph> plain;
    for (const auto& g : graphs) plain.push_back(g.graph);
    const std::vector<TrainingGraph> training = attach_features(plain, table);

    std::vector<std::string> model_names;
    for (Objective o : config.models) model_names.emplace_back(objective_name(o));
    if (config.baseline) model_names.emplace_back(kBaselineModel);

    OrderedJson layout_manifest;
    layout_manifest["graphs"] = lname + "/graphs.jsonl";
    layout_manifest["tokens"] = lname + "/tokens.mgte";
    OrderedJson models_manifest = OrderedJson::object();

    for (const std::string& model : model_names) {
      ModelRun mr;
      mr.model = model;
      mr.index = dir / (model + ".mgri");
      std::optional<EncoderParams> encoder;
      if (model != kBaselineModel) {
        const Objective objective = parse_objective(model);
        mr.checkpoint = dir / (model + ".mgcp");
        TrainResult tr = in_stage("train-gcl", [&] {
          return train(training, config.gcl_for(objective), [&](const EpochReport& e) {
            log_event("info", "train-gcl.epoch",
                      {{"layout", lname}, {"model", model}, {"epoch", e.epoch}, {"loss", e.mean_loss}});
          });
        });
        save_checkpoint(mr.checkpoint, tr.params, CheckpointInfo{objective, layout, result.config_hash});
        encoder = load_checkpoint(mr.checkpoint);
        mr.loss_curve = std::move(tr.epoch_losses);
        mr.counters = tr.counters;
      }
      const auto embeddings = in_stage("embed", [&] {
        return embed_corpus(graphs, table, encoder ? &*encoder : nullptr);
      });
      in_stage("index", [&] { EmbeddingIndex::build(embeddings, result.config_hash).save(mr.index); });
      const QueryArtifacts artifacts = make_query_artifacts(
          table, encoder, EmbeddingIndex::load(mr.index), encoder ? std::optional(layout) : std::nullopt,
          result.config_hash, encoder ? result.config_hash : 0);

      // Self-retrieval smoke test over the whole corpus.
      for (std::size_t i = 0; i < embeddings.size(); ++i) {
        const RankedList top = query_topk(artifacts.index, embeddings[i].vector, 1);
        if (top.items.front().id == embeddings[i].id) ++mr.self_rank1;
        const RankedList all = query_topk(artifacts.index, embeddings[i].vector, artifacts.index.size());
        for (const ScoredId& s : all.items) {
          if (s.id == embeddings[i].id) mr.min_self_score = std::min(mr.min_self_score, s.score);
        }
      }
      // The averaging baseline cannot separate formulas with equal token
      // multisets, so only encoder models gate the smoke result.
      const bool required = model != kBaselineModel;
      const bool passed = mr.self_rank1 == embeddings.size() && std::abs(mr.min_self_score - 1.0) <= 1e-6;
      if (required) result.smoke_passed = result.smoke_passed && passed;
      smoke[lname][model] = {{"queries", embeddings.size()},
                             {"rank1", mr.self_rank1},
                             {"min_self_score", mr.min_self_score},
                             {"passed", passed},
                             {"required", required}};

      OrderedJson mj;
      if (!mr.checkpoint.empty()) mj["checkpoint"] = lname + "/" + model + ".mgcp";
      mj["index"] = lname + "/" + model + ".mgri";

      if (qrels) {
        std::vector<RankedList> lists;
        for (std::size_t row : query_rows) {
          lists.push_back(query_topk(artifacts.index, embeddings[row].vector, config.eval_k, corpus[row].id));
        }
        mr.run = dir / (model + ".run");
        write_run(mr.run, lists);
        mj["run"] = lname + "/" + model + ".run";
        const RunFile run = read_run(mr.run);
        mr.metrics = evaluate_run(std::span<const RunFile>(&run, 1), *qrels, config.eval_k);
        eval_json[lname][model] = {{"bpref", mr.metrics->bpref.mean}, {"ndcg", mr.metrics->ndcg.mean}};
      }
      if (!mr.loss_curve.empty()) mj["loss_curve"] = mr.loss_curve;
      models_manifest[model] = std::move(mj);
      log_event("info", "model.done", {{"layout", lname}, {"model", model}, {"self_rank1", mr.self_rank1}});
      lr.models.push_back(std::move(mr));
    }
    layout_manifest["models"] = std::move(models_manifest);
    manifest["layouts"][lname] = std::move(layout_manifest);
    result.layouts.push_back(std::move(lr));
  }

  if (qrels && result.layouts.size() == 2) {
    for (const ModelRun& a : result.layouts[0].models) {
      for (const ModelRun& b : result.layouts[1].models) {
        if (a.model != b.model || !a.metrics || !b.metrics) continue;
        try {
          eval_json["f1"][a.model] = {{"bpref", f1_combine(a.metrics->bpref.mean, b.metrics->bpref.mean)},
                                      {"ndcg", f1_combine(a.metrics->ndcg.mean, b.metrics->ndcg.mean)}};
        } catch (const Error&) {
          eval_json["f1"][a.model] = nullptr;
        }
      }
    }
  }

  result.manifest = config.output_dir / "manifest.json";
  result.smoke_report = config.output_dir / "smoke_report.json";
  write_text(result.manifest, manifest.dump(2) + "\n");
  write_text(result.smoke_report, OrderedJson{{"passed", result.smoke_passed}, {"layouts", smoke}}.dump(2) + "\n");
  if (qrels) {
    result.eval_report = config.output_dir / "eval_report.json";
    write_text(result.eval_report, eval_json.dump(2) + "\n");
  }
  log_event("info", "pipeline.done", {{"smoke_passed", result.smoke_passed}});
  return result;
}

}  // namespace mathgcl
