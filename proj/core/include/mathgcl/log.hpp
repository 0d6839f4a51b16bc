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

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

namespace mathgcl {

struct LogField {
  std::string key;
  std::variant<std::string, double, std::int64_t, bool> value;

  LogField(std::string k, std::string v) : key(std::move(k)), value(std::move(v)) {}
  LogField(std::string k, const char* v) : key(std::move(k)), value(std::string(v)) {}
  LogField(std::string k, double v) : key(std::move(k)), value(v) {}
  LogField(std::string k, bool v) : key(std::move(k)), value(v) {}
  template <typename I>
    requires std::is_integral_v<I>
  LogField(std::string k, I v) : key(std::move(k)), value(static_cast<std::int64_t>(v)) {}
};

/// Line-delimited JSON logs. The sink defaults to stderr; nullptr mutes.
void set_log_sink(std::ostream* sink);
void log_event(std::string_view level, std::string_view event,
               std::initializer_list<LogField> fields = {});

}  // namespace mathgcl
