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

#include "mathgcl/search_service.hpp"

#include <charconv>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mathgcl/error.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/log.hpp"

namespace mathgcl {
namespace {

using Json = nlohmann::ordered_json;

HttpResponse json_response(int status, const Json& body) { return HttpResponse{status, body.dump()}; }

HttpResponse error_response(int status, const Error& e) {
  Json err;
  err["code"] = error_code_name(e.code());
  err["stage"] = e.stage();
  err["offset"] = e.offset() ? Json(*e.offset()) : Json();
  err["message"] = e.what();
  return json_response(status, Json{{"error", err}});
}

HttpResponse error_response(int status, ErrorCode code, const std::string& message) {
  return error_response(status, Error(code, message).with_stage("request"));
}

std::optional<Layout> pick_layout(std::optional<std::string_view> text, Layout fallback) {
  if (!text) return fallback;
  if (*text == "slt") return Layout::kSlt;
  if (*text == "opt") return Layout::kOpt;
  return std::nullopt;
}

}  // namespace

SearchService::SearchService(std::map<Key, QueryArtifacts> artifacts,
                             std::map<std::string, std::string> latex_by_id, std::size_t default_k,
                             Layout default_layout, std::string default_model)
    : artifacts_(std::move(artifacts)),
      latex_by_id_(std::move(latex_by_id)),
      default_k_(default_k),
      default_layout_(default_layout),
      default_model_(std::move(default_model)) {}

SearchService SearchService::from_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + manifest.string() + "'");
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("invalid manifest: ") + e.what());
  }
  const auto base = manifest.parent_path();
  try {
    std::map<std::string, std::string> latex;
    for (const CorpusRecord& r : read_corpus(base / m.at("corpus").get<std::string>())) latex[r.id] = r.latex;
    std::map<Key, QueryArtifacts> artifacts;
    for (const auto& [lname, entry] : m.at("layouts").items()) {
      const Layout layout = parse_layout(lname);
      const auto tokens = base / entry.at("tokens").get<std::string>();
      for (const auto& [model, files] : entry.at("models").items()) {
        const std::filesystem::path ckpt =
            files.contains("checkpoint") ? base / files.at("checkpoint").get<std::string>() : std::filesystem::path();
        QueryArtifacts a = load_query_artifacts(tokens, ckpt, base / files.at("index").get<std::string>());
        if (a.layout != layout) throw Error(ErrorCode::kArtifactMismatch, "index layout differs from manifest");
        artifacts.emplace(Key{layout, model}, std::move(a));
      }
    }
    const auto& serve = m.at("serve");
    return SearchService(std::move(artifacts), std::move(latex), serve.at("k").get<std::size_t>(),
                         parse_layout(serve.at("layout").get<std::string>()),
                         serve.at("model").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("invalid manifest: ") + e.what());
  }
}

HttpResponse SearchService::search(std::string_view q, std::optional<std::string_view> k,
                                   std::optional<std::string_view> layout,
                                   std::optional<std::string_view> model) const {
  if (q.empty()) return error_response(400, ErrorCode::kEmptyInput, "missing query parameter 'q'");
  std::size_t depth = default_k_;
  if (k) {
    const auto* end = k->data() + k->size();
    const auto [ptr, ec] = std::from_chars(k->data(), end, depth);
    if (ec != std::errc() || ptr != end || depth == 0) {
      return error_response(400, ErrorCode::kInvalidArgument, "k must be a positive integer");
    }
  }
  const std::optional<Layout> lay = pick_layout(layout, default_layout_);
  if (!lay) return error_response(404, ErrorCode::kArtifactMismatch, "unknown layout '" + std::string(*layout) + "'");
  const std::string tag = model ? std::string(*model) : default_model_;
  const auto it = artifacts_.find(Key{*lay, tag});
  if (it == artifacts_.end()) {
    return error_response(404, ErrorCode::kArtifactMismatch,
                          "no artifacts for model '" + tag + "' and layout '" + std::string(layout_name(*lay)) + "'");
  }
  try {
    const RankedList list = query_pipeline(it->second, q, *lay, depth);
    Json results = Json::array();
    for (const ScoredId& s : list.items) {
      const auto l = latex_by_id_.find(s.id);
      results.push_back(Json{{"id", s.id}, {"latex", l == latex_by_id_.end() ? "" : l->second}, {"score", s.score}});
    }
    return json_response(200, Json{{"query", q},
                                   {"layout", layout_name(*lay)},
                                   {"model", tag},
                                   {"results", std::move(results)}});
  } catch (const Error& e) {
    return error_response(400, e);
  }
}

HttpResponse SearchService::parse(std::string_view q, std::optional<std::string_view> layout) const {
  if (q.empty()) return error_response(400, ErrorCode::kEmptyInput, "missing query parameter 'q'");
  const std::optional<Layout> lay = pick_layout(layout, Layout::kSlt);
  if (!lay) return error_response(404, ErrorCode::kInvalidArgument, "unknown layout '" + std::string(*layout) + "'");
  try {
    Json body{{"query", q}};
    const auto add = [&](Layout l) {
      body[std::string(layout_name(l))] = Json::parse(serialize_graph(graph_from_latex(q, l), "query"));
    };
    if (layout) {
      add(*lay);
    } else {
      add(Layout::kSlt);
      add(Layout::kOpt);
    }
    return json_response(200, body);
  } catch (const Error& e) {
    return error_response(400, e.stage().empty() ? e.with_stage("parse") : e);
  }
}

HttpResponse SearchService::health() const {
  Json models = Json::array();
  for (const auto& [key, a] : artifacts_) {
    models.push_back(Json{{"layout", layout_name(key.first)}, {"model", key.second}, {"size", a.index.size()}});
  }
  return json_response(200, Json{{"status", "ok"}, {"models", std::move(models)}});
}

struct HttpServer::Impl {
  explicit Impl(const SearchService& s) : service(s) {}
  const SearchService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(const SearchService& service) : impl_(std::make_unique<Impl>(service)) {
  auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string> {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
  };
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  const SearchService& svc = impl_->service;
  impl_->server.Get("/search", [=, &svc](const httplib::Request& req, httplib::Response& res) {
    const auto k = param(req, "k");
    const auto layout = param(req, "layout");
    const auto model = param(req, "model");
    const auto to_view = [](const std::optional<std::string>& s) -> std::optional<std::string_view> {
      return s ? std::optional<std::string_view>(*s) : std::nullopt;
    };
    reply(res, svc.search(param(req, "q").value_or(""), to_view(k), to_view(layout), to_view(model)));
  });
  impl_->server.Get("/parse", [=, &svc](const httplib::Request& req, httplib::Response& res) {
    const auto layout = param(req, "layout");
    reply(res, svc.parse(param(req, "q").value_or(""),
                         layout ? std::optional<std::string_view>(*layout) : std::nullopt));
  });
  impl_->server.Get("/health", [=, &svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc.health());
  });
  impl_->server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"error":{"code":"Internal","message":"unexpected server error"}})", "application/json");
  });
  impl_->server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    log_event("info", "http.request", {{"path", req.path}, {"status", res.status}});
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace mathgcl
