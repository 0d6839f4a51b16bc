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

#include "mathgcl/log.hpp"

#include <iostream>
#include <mutex>

#include <json.hpp>

namespace mathgcl {
namespace {

std::mutex g_mutex;
std::ostream* g_sink = &std::cerr;

}  // namespace

void set_log_sink(std::ostream* sink) {
  std::lock_guard lock(g_mutex);
  g_sink = sink;
}

void log_event(std::string_view level, std::string_view event, std::initializer_list<LogField> fields) {
  nlohmann::ordered_json j;
  j["level"] = level;
  j["event"] = event;
  for (const LogField& f : fields) {
    std::visit([&](const auto& v) { j[f.key] = v; }, f.value);
  }
  std::lock_guard lock(g_mutex);
  if (g_sink) *g_sink << j.dump() << '\n' << std::flush;
}

}  // namespace mathgcl
