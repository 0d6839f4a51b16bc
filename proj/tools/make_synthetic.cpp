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

// Writes the synthetic benchmark corpus and its qrels.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "mathgcl/error.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/synthetic.hpp"
#include "mathgcl/trec_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic template corpus"};
  std::filesystem::path out = "data/synthetic";
  std::size_t per_template = 40;
  std::size_t queries = 5;
  std::uint64_t seed = 2024;
  app.add_option("--out", out, "Output directory");
  app.add_option("--per-template", per_template, "Formulas per template");
  app.add_option("--queries-per-template", queries, "Queries per template");
  app.add_option("--seed", seed, "Generator seed");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    const auto corpus = mathgcl::generate_synthetic_corpus(per_template, queries, seed);
    std::filesystem::create_directories(out);
    mathgcl::write_corpus(out / "corpus.jsonl", corpus.formulas);
    mathgcl::write_qrels(out / "qrels.txt", corpus.qrels);
    std::cout << "wrote " << corpus.formulas.size() << " formulas and " << corpus.qrels.size()
              << " judgments to " << out.string() << "\n";
  } catch (const mathgcl::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
