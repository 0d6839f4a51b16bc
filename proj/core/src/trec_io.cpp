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

#include "mathgcl/trec_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mathgcl/error.hpp"

namespace mathgcl {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string f; in >> f;) out.push_back(std::move(f));
  return out;
}

Error bad_line(const std::filesystem::path& path, std::size_t line_no, const std::string& why) {
  return Error(ErrorCode::kMalformedRecord, path.filename().string() + " line " + std::to_string(line_no) + ": " + why);
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line_no,
               const char* field) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw bad_line(path, line_no, std::string("bad ") + field + " '" + text + "'");
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

void QrelSet::add(const std::string& query_id, const std::string& formula_id, int grade) {
  if (grade < 0 || grade > kMaxGrade) {
    throw Error(ErrorCode::kMalformedRecord, "grade " + std::to_string(grade) + " outside 0..4");
  }
  if (!by_query_[query_id].emplace(formula_id, grade).second) {
    throw Error(ErrorCode::kMalformedRecord, "repeated judgment for (" + query_id + ", " + formula_id + ")");
  }
  ++pairs_;
}

const Judgments* QrelSet::find(const std::string& query_id) const {
  auto it = by_query_.find(query_id);
  return it == by_query_.end() ? nullptr : &it->second;
}

std::vector<std::string> QrelSet::query_ids() const {
  std::vector<std::string> out;
  for (const auto& [q, j] : by_query_) out.push_back(q);
  return out;
}

QrelSet read_qrels(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  QrelSet q;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty() || f[0].starts_with('#')) continue;
    if (f.size() != 3 && f.size() != 4) throw bad_line(path, line_no, "expected 3 or 4 fields");
    const std::string& doc = f.size() == 3 ? f[1] : f[2];
    const int grade = parse_number<int>(f.back(), path, line_no, "grade");
    try {
      q.add(f[0], doc, grade);
    } catch (const Error& e) {
      throw bad_line(path, line_no, e.detail());
    }
  }
  return q;
}

void write_qrels(const std::filesystem::path& path, const QrelSet& qrels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  for (const std::string& qid : qrels.query_ids()) {
    const Judgments& j = *qrels.find(qid);
    std::vector<std::pair<std::string, int>> rows(j.begin(), j.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [doc, grade] : rows) out << qid << ' ' << doc << ' ' << grade << '\n';
  }
}

RunFile read_run(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, std::vector<std::pair<long, ScoredId>>> staged;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split_fields(line);
    if (f.empty() || f[0].starts_with('#')) continue;
    if (f.size() != 4) throw bad_line(path, line_no, "expected 'query_id formula_id rank score'");
    const long rank = parse_number<long>(f[2], path, line_no, "rank");
    if (rank < 1) throw bad_line(path, line_no, "rank must be >= 1");
    staged[f[0]].emplace_back(rank, ScoredId{f[1], parse_number<double>(f[3], path, line_no, "score")});
  }
  RunFile run;
  for (auto& [qid, rows] : staged) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& dst = run[qid];
    for (auto& [rank, item] : rows) dst.push_back(std::move(item));
  }
  return run;
}

void write_run(const std::filesystem::path& path, std::span<const RankedList> lists) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  char score[32];
  for (const RankedList& list : lists) {
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      std::snprintf(score, sizeof score, "%.9f", list.items[i].score);
      out << list.query_id << ' ' << list.items[i].id << ' ' << i + 1 << ' ' << score << '\n';
    }
  }
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path.string() + "'");
}

}  // namespace mathgcl
