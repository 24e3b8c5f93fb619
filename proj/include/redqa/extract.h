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

#ifndef REDQA_EXTRACT_H_
#define REDQA_EXTRACT_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "redqa/corpora.h"
#include "redqa/interpret.h"
#include "redqa/retrieve.h"

namespace redqa {

// An n-gram answer candidate. `surface` is the normalized space-joined form
// the voting key; `display` keeps the casing of the first occurrence for the
// reranking heuristics.
struct Candidate {
  std::vector<std::string> terms;
  std::string surface;
  std::string display;
  double score = 0.0;
  std::set<int> support;  // passage ids the candidate occurs in
  std::set<QueryKind> origins;
};

struct NgramOccurrence {
  std::vector<std::string> terms;
  std::string surface;
  std::string display;
  double score = 0.0;
  int passage_id = 0;
  std::set<QueryKind> origins;
};

// Every contiguous 1..ngram_max-gram of every passage, one occurrence per
// position, scored with the weight of the query that retrieved the passage.
// N-grams do not cross punctuation tokens.
std::vector<NgramOccurrence> generate_ngrams(const std::vector<RetrievedPassage>& passages,
                                             const Stopwords& stopwords, int ngram_max = 4);

// One candidate per normalized surface; score is the sum of all occurrence
// scores, support the set of distinct passages.
std::vector<Candidate> vote(const std::vector<NgramOccurrence>& occurrences);

// Question classes whose answers carry a numeric component: how-old,
// how-long, how-hot, how-many and when.
bool requires_numeric_answer(const std::vector<Token>& question);

// Classes whose focus words legitimately reappear in the answer (how-many
// unit questions); these skip the question-term filter.
bool focus_words_expected(const std::vector<Token>& question);

bool is_written_number(std::string_view normalized_word);
bool has_numeric_component(const std::vector<std::string>& terms);

// Drops candidates that begin or end with a stopword, and candidates
// containing a non-stopword question term (unless focus words are expected).
std::vector<Candidate> filter_type_neutral(std::vector<Candidate> candidates,
                                           const std::vector<Token>& question,
                                           const Stopwords& stopwords);

// For numeric question classes, drops candidates without a digit token or a
// written-number word. Other classes pass through untouched.
std::vector<Candidate> filter_type_specific(std::vector<Candidate> candidates,
                                            const std::vector<Token>& question);

// Finite admissible-answer sets per answer type. File format: `[type]`
// section headers with one value per line; lookups are case-insensitive.
class ClosedClassTable {
 public:
  static ClosedClassTable load(const std::filesystem::path& path);
  static ClosedClassTable parse(std::string_view text);

  void add(const std::string& answer_type, std::string_view value);
  const std::set<std::string>* lookup(const std::string& answer_type) const;
  std::size_t type_count() const { return sets_.size(); }

 private:
  std::map<std::string, std::set<std::string>> sets_;
};

// Closed-class answer type of a question, when one of the enumerable types
// applies (nationality, capital, element-symbol, us-president,
// acronym-expansion).
std::optional<std::string> classify_answer_type(const std::vector<Token>& question);

std::vector<Candidate> filter_closed_class(std::vector<Candidate> candidates,
                                           const std::optional<std::string>& answer_type,
                                           const ClosedClassTable& table);

// Boosts every multi-word candidate by the voted scores of its surviving
// component unigrams; unigrams are left unchanged.
void combine(std::vector<Candidate>& candidates);

// (1/|c|) * sum over terms of ln(N / W_cnt(w)).
double idf_multiplier(const std::vector<std::string>& terms, const TermStats& stats);
void score_idf(std::vector<Candidate>& candidates, const TermStats& stats);

// Score descending, ties lexicographic on surface.
void sort_candidates(std::vector<Candidate>& candidates);

// Per-class preferred-form heuristic used by rerank.
bool preferred_form(const Candidate& candidate, const std::vector<Token>& question);

// Stable promotion of preferred-form candidates ahead of the rest.
void rerank(std::vector<Candidate>& candidates, const std::vector<Token>& question);

struct AnswerList {
  enum class Verdict { Answered, DontKnow };
  std::vector<Candidate> ranked;
  Verdict verdict = Verdict::DontKnow;
};

// Drops candidates below the snippet-support minimum; an empty survivor set
// is the "don't know" verdict.
AnswerList support_gate(std::vector<Candidate> candidates, int support_min = 2);

struct ExtractConfig {
  int ngram_max = 4;
  int support_min = 2;
  int max_snippets = 100;
  QueryWeights weights;
};

// Read-only resources shared by every question's pipeline run.
struct PipelineContext {
  const std::vector<ReformulationPattern>* patterns = nullptr;
  const Stopwords* stopwords = nullptr;
  const ClosedClassTable* closed_classes = nullptr;
  const TermStats* term_stats = nullptr;
  ExtractConfig config;
};

// Stage-by-stage record of one pipeline run, for inspection and the stage
// success accounting. The stage list always has seven sections: n-grams,
// voting, filtering (with one count per filter), combining, scoring,
// reranking, support.
struct StageTrace {
  struct Stage {
    std::string name;
    std::vector<std::pair<std::string, std::size_t>> counts;
    std::vector<std::pair<std::string, double>> top;  // up to 10 surfaces
  };
  QuerySet queries;
  std::vector<RetrievedPassage> passages;
  std::vector<Stage> stages;
};

// The full pipeline: queries -> retrieval -> n-grams -> voting -> three
// filters -> combining -> idf scoring -> rerank -> support gate.
AnswerList answer(const QuestionRecord& question, Backend& backend, const PipelineContext& ctx,
                  StageTrace* trace = nullptr);

// Same, over passages that were already retrieved.
AnswerList answer_from_passages(const QuestionRecord& question,
                                const std::vector<RetrievedPassage>& passages,
                                const PipelineContext& ctx, StageTrace* trace = nullptr);

}  // namespace redqa

#endif  // REDQA_EXTRACT_H_
