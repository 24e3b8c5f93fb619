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

#ifndef REDQA_ENGINE_H_
#define REDQA_ENGINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "redqa/corpora.h"
#include "redqa/evaluate.h"
#include "redqa/extract.h"
#include "redqa/retrieve.h"
#include "redqa/select.h"

namespace redqa {

struct EngineConfig {
  std::filesystem::path stopword_file;
  std::filesystem::path pattern_file;
  std::filesystem::path closed_class_file;
  std::optional<std::filesystem::path> term_stats_file;
  ExtractConfig extract;
  SelectionConfig selection;
};

// Owns the loaded resources and runs questions end to end. Immutable after
// construction; one instance serves any number of worker threads.
class Engine {
 public:
  Engine(const EngineConfig& config, Backend& backend);
  Engine(const EngineConfig& config, Backend& backend, TermStats stats);

  struct Selected {
    std::vector<Candidate> ranked;  // final answers, best first
    std::vector<Candidate> pool;    // candidates the strategy chose from
    bool no_answer() const { return ranked.empty(); }
  };

  struct QuestionRun {
    AnswerList extracted;
    Selected selected;
    StageTrace trace;
  };

  AnswerList answer(const QuestionRecord& question, StageTrace* trace = nullptr) const;
  Selected select(const AnswerList& answers, const QuestionRecord& question) const;
  QuestionRun run_question(const QuestionRecord& question) const;

  const PipelineContext& context() const { return ctx_; }
  const Stopwords& stopwords() const { return stopwords_; }
  const TermStats& term_stats() const { return term_stats_; }
  const SelectionConfig& selection() const { return selection_; }

 private:
  Stopwords stopwords_;
  std::vector<ReformulationPattern> patterns_;
  ClosedClassTable closed_classes_;
  TermStats term_stats_;
  SelectionConfig selection_;
  PipelineContext ctx_;
  Backend* backend_;
};

struct EvalOptions {
  int jobs = 1;
  JudgeSpec judge;
  std::vector<long> bucket_edges = kDefaultBucketEdges;
};

// Judges every question and assembles one report. Per-question failures are
// recorded in `errors` and excluded from the judged set; the batch finishes.
RunReport evaluate_corpus(const std::vector<QuestionRecord>& questions, const Engine& engine,
                          const EvalOptions& options, std::vector<std::string>* errors = nullptr);

}  // namespace redqa

#endif  // REDQA_ENGINE_H_
