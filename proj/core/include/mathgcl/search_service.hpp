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

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "mathgcl/query_pipeline.hpp"

namespace mathgcl {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Request handling for /search, /parse and /health over immutable
/// artifacts. Handlers are const and safe to call concurrently.
class SearchService {
 public:
  using Key = std::pair<Layout, std::string>;  // (layout, model tag)

  SearchService(std::map<Key, QueryArtifacts> artifacts, std::map<std::string, std::string> latex_by_id,
                std::size_t default_k, Layout default_layout, std::string default_model);

  /// Loads every layout/model listed in a pipeline manifest.
  static SearchService from_manifest(const std::filesystem::path& manifest);

  HttpResponse search(std::string_view q, std::optional<std::string_view> k,
                      std::optional<std::string_view> layout,
                      std::optional<std::string_view> model) const;
  HttpResponse parse(std::string_view q, std::optional<std::string_view> layout) const;
  HttpResponse health() const;

  std::size_t default_k() const noexcept { return default_k_; }

 private:
  std::map<Key, QueryArtifacts> artifacts_;
  std::map<std::string, std::string> latex_by_id_;
  std::size_t default_k_;
  Layout default_layout_;
  std::string default_model_;
};

/// Minimal HTTP front end. `start` binds (port 0 picks a free port) and
/// serves on a background thread; `stop` shuts it down.
class HttpServer {
 public:
  explicit HttpServer(const SearchService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int start(const std::string& host, int port);
  void stop();
  /// Blocks until the server stops.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mathgcl
