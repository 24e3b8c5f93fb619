// Copyright 2026 The RedQA Authors
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

#ifndef REDQA_SELECT_H_
#define REDQA_SELECT_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "redqa/extract.h"
#include "redqa/interpret.h"

namespace redqa {

inline constexpr std::string_view kNil = "NIL";

struct SelectionConfig {
  enum class Strategy { AraneaTop, JustAsk, Ephyra };
  enum class Distance { Levenshtein, Overlap };

  Strategy strategy = Strategy::AraneaTop;
  Distance distance = Distance::Overlap;
  // Negative means the per-distance default: 2 for levenshtein, 0.5 for
  // overlap.
  double distance_threshold = -1.0;
  double score_threshold = 0.0;
  int max_output_chars = 7000;

  double resolved_distance_threshold() const;
};

std::optional<SelectionConfig::Strategy> strategy_from_name(std::string_view name);
std::string_view to_string(SelectionConfig::Strategy strategy);

// Unit-cost edit distance.
int levenshtein(std::string_view a, std::string_view b);

// 1 - |a intersect b| / min(|a|, |b|); two empty sets are at distance 0.
double overlap_distance(const std::set<std::string>& a, const std::set<std::string>& b);

// Fixed suffix-stripping stemmer (-ing, -ed, -es, -ly, -er, -s) with
// doubled-consonant repair, iterated to a fixpoint so it is idempotent.
std::string stem(std::string_view word);

// Canonical forms for NUMERIC:COUNT (written numbers and digit strings to a
// decimal string) and NUMERIC:DATE (recognized dates to ISO year[-month
// [-day]]). Anything unparseable or of another category passes through.
std::string normalize_numeric(const std::string& surface, std::string_view category);

struct AnswerCluster {
  std::vector<Candidate> members;
  std::size_t representative = 0;  // longest surface, ties lexicographic
  double score = 0.0;              // member count
};

// Single-link agglomeration: candidates link when their distance is within
// the configured threshold.
std::vector<AnswerCluster> cluster(const std::vector<Candidate>& candidates,
                                   const SelectionConfig& config);

struct JustAskResult {
  std::optional<Candidate> answer;  // empty = NoAnswer
  std::vector<Candidate> pool;      // normalized candidates considered
  std::vector<AnswerCluster> clusters;
};

// Normalize -> cluster -> discard clusters with a member contained in the
// question -> representative of the best cluster.
JustAskResult justask_select(const std::vector<Candidate>& candidates,
                             const std::string& question_text, std::string_view category,
                             const SelectionConfig& config, const Stopwords& stopwords);

// Pairwise duplicate merge: answers whose content words share stems are
// duplicates; the lower-ranked one is dropped and its score added to the
// higher-ranked one. Re-sorts after every merge. Exposed for the score
// conservation check.
std::vector<Candidate> merge_duplicates(std::vector<Candidate> candidates,
                                        const Stopwords& stopwords);

struct EphyraResult {
  std::vector<Candidate> ranked;  // empty = NIL
  bool nil() const { return ranked.empty(); }
};

// Sort -> duplicate merge -> malformed-answer drop -> 7000 non-whitespace
// character cap -> score threshold. An empty result is the NIL sentinel.
EphyraResult ephyra_select(std::vector<Candidate> candidates, const SelectionConfig& config,
                           const Stopwords& stopwords);

}  // namespace redqa

#endif  // REDQA_SELECT_H_
