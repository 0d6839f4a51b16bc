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

#include "mathgcl/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <set>

#include "mathgcl/error.hpp"
#include "mathgcl/graph_builders.hpp"
#include "mathgcl/graph_io.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {
namespace {

const std::array<const char*, 8> kLetters = {"x", "y", "z", "t", "u", "v", "a", "b"};
const std::array<const char*, 6> kGreek = {"\\alpha", "\\beta", "\\theta", "\\lambda", "\\mu", "\\omega"};
const std::array<const char*, 3> kTrig = {"\\sin", "\\cos", "\\tan"};

std::string pick_letter(Rng& rng) { return kLetters[rng.uniform_index(kLetters.size())]; }
std::string pick_greek(Rng& rng) { return kGreek[rng.uniform_index(kGreek.size())]; }
std::string digit(Rng& rng) { return std::to_string(2 + rng.uniform_index(8)); }

// Polynomial: v^{n} + c v + d
std::string polynomial(Rng& rng) {
  const std::string v = pick_letter(rng);
  return v + "^{" + digit(rng) + "}+" + digit(rng) + v + "+" + digit(rng);
}

// Rational expression: \frac{v + a}{w - b}
std::string rational(Rng& rng) {
  const std::string v = pick_letter(rng);
  const std::string w = pick_letter(rng);
  return "\\frac{" + v + "+" + digit(rng) + "}{" + w + "-" + digit(rng) + "}";
}

// Root of a sum of squares: \sqrt{v^{2} + c w^{2}}
std::string radical(Rng& rng) {
  const std::string v = pick_letter(rng);
  const std::string w = pick_greek(rng);
  return "\\sqrt{" + v + "^{2}+" + digit(rng) + w + "^{2}}";
}

// Trigonometric sum: \sin(a v) + \cos(b w)
std::string trigonometric(Rng& rng) {
  const std::string f = kTrig[rng.uniform_index(kTrig.size())];
  const std::string g = kTrig[rng.uniform_index(kTrig.size())];
  return f + "(" + digit(rng) + pick_letter(rng) + ")+" + g + "(" + digit(rng) + pick_greek(rng) + ")";
}

// Indexed relation: v_{i} = c w_{j} - d
std::string indexed(Rng& rng) {
  const std::string v = pick_letter(rng);
  const std::string w = pick_letter(rng);
  const char* idx[] = {"i", "j", "k", "n"};
  return v + "_{" + idx[rng.uniform_index(4)] + "}=" + digit(rng) + w + "_{" + idx[rng.uniform_index(4)] +
         "}-" + digit(rng);
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(std::size_t per_template, std::size_t queries_per_template,
                                          std::uint64_t seed) {
  if (per_template == 0 || queries_per_template > per_template) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synthetic corpus shape");
  }
  const std::array<std::function<std::string(Rng&)>, kSyntheticTemplates> templates = {
      polynomial, rational, radical, trigonometric, indexed};

  SyntheticCorpus out;
  std::set<std::string> seen_opt;
  std::vector<std::vector<std::size_t>> members(kSyntheticTemplates);
  for (std::size_t t = 0; t < kSyntheticTemplates; ++t) {
    Rng rng(derive_seed(seed, t));
    std::size_t made = 0, attempts = 0;
    while (made < per_template) {
      if (++attempts > per_template * 1000) {
        throw Error(ErrorCode::kInvalidArgument, "template space too small for requested size");
      }
      std::string latex = templates[t](rng);
      const std::string key = serialize_graph(graph_from_latex(latex, Layout::kOpt), "");
      if (!seen_opt.insert(key).second) continue;
      members[t].push_back(out.formulas.size());
      out.formulas.push_back(CorpusRecord{"", std::move(latex)});
      out.template_of.push_back(t);
      ++made;
    }
  }
  // Interleave templates so ids do not reveal the template.
  std::vector<std::size_t> order(out.formulas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng shuffle_rng(derive_seed(seed, 0x5348));
  shuffle_rng.shuffle(order);
  std::vector<CorpusRecord> formulas(order.size());
  std::vector<std::size_t> template_of(order.size());
  std::vector<std::size_t> position(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "f%03zu", i);
    formulas[i] = CorpusRecord{id, out.formulas[order[i]].latex};
    template_of[i] = out.template_of[order[i]];
    position[order[i]] = i;
  }
  out.formulas = std::move(formulas);
  out.template_of = std::move(template_of);

  // First members of each template, in id order, serve as queries.
  std::vector<std::size_t> queries;
  for (std::size_t t = 0; t < kSyntheticTemplates; ++t) {
    std::vector<std::size_t> ids;
    for (std::size_t m : members[t]) ids.push_back(position[m]);
    std::sort(ids.begin(), ids.end());
    queries.insert(queries.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(queries_per_template));
  }
  std::sort(queries.begin(), queries.end());
  for (std::size_t q : queries) {
    const std::string& qid = out.formulas[q].id;
    out.query_ids.push_back(qid);
    for (std::size_t d = 0; d < out.formulas.size(); ++d) {
      if (d == q) continue;
      out.qrels.add(qid, out.formulas[d].id, out.template_of[d] == out.template_of[q] ? 4 : 0);
    }
  }
  return out;
}

}  // namespace mathgcl
