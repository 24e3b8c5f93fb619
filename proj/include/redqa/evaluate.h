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

#ifndef REDQA_EVALUATE_H_
#define REDQA_EVALUATE_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "redqa/corpora.h"

namespace redqa {

enum class Verdict { Correct, Wrong, NoAnswer };
std::string_view to_string(Verdict verdict);

struct Judgement {
  std::string question_id;
  Verdict verdict = Verdict::NoAnswer;
  // First rank (1-based) at which any answer matches gold; present even when
  // the top answer is wrong, so it can feed MRR and C@k.
  std::optional<int> answered_rank;
};

enum class JudgePolicy { Exact, WordBoundary, PatternFile };

struct JudgeSpec {
  JudgePolicy policy = JudgePolicy::WordBoundary;
  // question id -> ECMAScript regex, for the pattern-file policy.
  std::unordered_map<std::string, std::string> patterns;

  static JudgeSpec from_name(std::string_view name);
  static JudgeSpec load_pattern_file(const std::filesystem::path& path);
};

// Exact: normalized equality. WordBoundary: equality or one side's tokens
// appearing as a contiguous run in the other's.
bool answer_matches(std::string_view answer, std::string_view gold, JudgePolicy policy);

// Gold appearing in a passage under the policy (word-boundary containment
// for the default policy).
bool passage_contains(std::string_view passage_text, std::string_view gold, JudgePolicy policy);

Judgement judge(const std::vector<std::string>& ranked_answers,
                const std::vector<std::string>& gold_answers, const JudgeSpec& spec,
                const std::string& question_id);

double accuracy(const std::vector<Judgement>& judgements);
// correct / answered; zero answered yields 0 with *defined set to false.
double precision(const std::vector<Judgement>& judgements, bool* defined = nullptr);
// answered / total, the operational reading every published table uses.
double recall(const std::vector<Judgement>& judgements);
double mrr(const std::vector<Judgement>& judgements);
double c_at_k(const std::vector<Judgement>& judgements, int k);

struct Metrics {
  double questions = 0;
  double correct = 0;
  double wrong = 0;
  double no_answer = 0;
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double mrr = 0;
  double c_at_1 = 0;
  double c_at_5 = 0;
  bool precision_defined = true;
};

Metrics metrics_from_judgements(const std::vector<Judgement>& judgements);
// Rank-free entry point: MRR and C@k are not derivable from bare counts and
// stay 0.
Metrics metrics_from_counts(long correct, long wrong, long no_answer);

struct PassageStats {
  struct PerQuestion {
    std::string question_id;
    std::optional<int> first_positive_rank;
  };
  std::vector<PerQuestion> per_question;
  double questions_with_positive = 0;
  double mrr_all_q = 0;
  double mrr_pos_only = 0;
  bool pos_only_defined = true;
};

struct QuestionPassages {
  std::string question_id;
  std::vector<std::string> passage_texts;  // retrieval order
};

PassageStats passage_metrics(const std::vector<QuestionPassages>& passages,
                             const std::unordered_map<std::string, std::vector<std::string>>& gold,
                             const JudgeSpec& spec);

struct StageObservation {
  std::string question_id;
  std::vector<std::string> extracted;  // candidate surfaces handed to answer selection
  std::optional<std::string> final_answer;
};

struct StageStats {
  struct PerQuestion {
    std::string question_id;
    long extracted_count = 0;
    bool cae_success = false;
    bool as_success = false;
  };
  struct Bucket {
    long lo = 0;
    long hi = 0;  // inclusive; hi < lo means open-ended
    double questions = 0;
    double cae = 0;
    double as = 0;
  };

  std::vector<PerQuestion> per_question;

  // Rows: the exact-zero bucket, then (edge[i-1], edge[i]] ranges, then an
  // open-ended tail. Bucket totals always sum to the question count.
  std::vector<Bucket> histogram(const std::vector<long>& edges) const;
};

inline const std::vector<long> kDefaultBucketEdges = {10, 20, 40, 60, 100, 150, 230};

// cae_success: some extracted candidate matches gold. as_success: cae and
// the final answer is correct. A correct final answer without any matching
// extracted candidate is inconsistent input and throws std::logic_error.
StageStats stage_stats(const std::vector<StageObservation>& observations,
                       const std::unordered_map<std::string, std::vector<std::string>>& gold,
                       const JudgeSpec& spec);

struct BreakdownRow {
  QuestionWord word = QuestionWord::Other;
  double correct = 0;
  double wrong = 0;
  double no_answer = 0;
  double accuracy = 0;
};

struct RunReport {
  std::vector<Judgement> judgements;
  Metrics metrics;
  std::vector<BreakdownRow> breakdown;  // all eight buckets, fixed order
  PassageStats passage_stats;
  StageStats stage_stats;
  std::vector<long> bucket_edges = kDefaultBucketEdges;
  std::vector<std::string> notes;
};

RunReport build_report(const std::vector<Judgement>& judgements,
                       const std::unordered_map<std::string, QuestionWord>& question_words,
                       PassageStats passage_stats = {}, StageStats stage_stats = {});

RunReport report_from_counts(long correct, long wrong, long no_answer);

// Arithmetic mean of every scalar metric; per-question detail is not
// averaged and stays with the individual runs.
RunReport average_reports(const std::vector<RunReport>& runs);

struct MultiRunResult {
  RunReport averaged;
  std::vector<RunReport> runs;
};

MultiRunResult multi_run(const std::function<RunReport(int run_index)>& run_fn, int k = 5);

enum class ReportFormat { Table, Structured };

std::string render_report(const RunReport& report, ReportFormat format);
RunReport load_report(std::string_view structured_text);

}  // namespace redqa

#endif  // REDQA_EVALUATE_H_
