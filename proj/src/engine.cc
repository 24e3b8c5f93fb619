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

#include "redqa/engine.h"

#include <atomic>
#include <mutex>
#include <thread>

namespace redqa {

Engine::Engine(const EngineConfig& config, Backend& backend)
    : Engine(config, backend,
             config.term_stats_file ? load_term_stats(*config.term_stats_file) : TermStats{}) {}

Engine::Engine(const EngineConfig& config, Backend& backend, TermStats stats)
    : stopwords_(Stopwords::load(config.stopword_file)),
      patterns_(load_patterns(config.pattern_file)),
      closed_classes_(ClosedClassTable::load(config.closed_class_file)),
      term_stats_(std::move(stats)),
      selection_(config.selection),
      backend_(&backend) {
  if (term_stats_.total_docs < 1) {
    // No statistics given. Every lookup floors at W_cnt = 1, and N = 1 would
    // zero every score; N = 2 keeps a uniform positive multiplier instead.
    term_stats_.total_docs = 2;
  }
  ctx_.patterns = &patterns_;
  ctx_.stopwords = &stopwords_;
  ctx_.closed_classes = &closed_classes_;
  ctx_.term_stats = &term_stats_;
  ctx_.config = config.extract;
}

AnswerList Engine::answer(const QuestionRecord& question, StageTrace* trace) const {
  return redqa::answer(question, *backend_, ctx_, trace);
}

Engine::Selected Engine::select(const AnswerList& answers, const QuestionRecord& question) const {
  Selected selected;
  switch (selection_.strategy) {
    case SelectionConfig::Strategy::AraneaTop: {
      selected.pool = answers.ranked;
      selected.ranked = answers.ranked;
      break;
    }
    case SelectionConfig::Strategy::JustAsk: {
      JustAskResult result = justask_select(answers.ranked, question.text,
                                            question.category.value_or(""), selection_,
                                            stopwords_);
      selected.pool = std::move(result.pool);
      if (result.answer) selected.ranked.push_back(std::move(*result.answer));
      break;
    }
    case SelectionConfig::Strategy::Ephyra: {
      selected.pool = answers.ranked;
      EphyraResult result = ephyra_select(answers.ranked, selection_, stopwords_);
      selected.ranked = std::move(result.ranked);
      break;
    }
  }
  return selected;
}

Engine::QuestionRun Engine::run_question(const QuestionRecord& question) const {
  QuestionRun run;
  run.extracted = answer(question, &run.trace);
  run.selected = select(run.extracted, question);
  return run;
}

RunReport evaluate_corpus(const std::vector<QuestionRecord>& questions, const Engine& engine,
                          const EvalOptions& options, std::vector<std::string>* errors) {
  struct Slot {
    bool ok = false;
    std::string error;
    Judgement judgement;
    QuestionPassages passages;
    StageObservation observation;
  };
  std::vector<Slot> slots(questions.size());

  auto work = [&](std::size_t index) {
    const QuestionRecord& q = questions[index];
    Slot& slot = slots[index];
    try {
      Engine::QuestionRun run = engine.run_question(q);

      std::vector<std::string> ranked;
      ranked.reserve(run.selected.ranked.size());
      for (const Candidate& c : run.selected.ranked) ranked.push_back(c.surface);
      slot.judgement = judge(ranked, q.gold_answers, options.judge, q.id);

      slot.passages.question_id = q.id;
      for (const RetrievedPassage& p : run.trace.passages)
        slot.passages.passage_texts.push_back(p.snippet.text);

      slot.observation.question_id = q.id;
      for (const Candidate& c : run.selected.pool)
        slot.observation.extracted.push_back(c.surface);
      if (!run.selected.ranked.empty())
        slot.observation.final_answer = run.selected.ranked.front().surface;
      slot.ok = true;
    } catch (const std::exception& e) {
      slot.error = q.id + ": " + e.what();
    }
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1 || questions.size() <= 1) {
    for (std::size_t i = 0; i < questions.size(); i++) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int n = std::min<int>(jobs, static_cast<int>(questions.size()));
    workers.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; t++) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < questions.size(); i = next.fetch_add(1))
          work(i);
      });
    }
    for (std::thread& t : workers) t.join();
  }

  std::vector<Judgement> judgements;
  std::vector<QuestionPassages> passages;
  std::vector<StageObservation> observations;
  std::unordered_map<std::string, QuestionWord> words;
  std::unordered_map<std::string, std::vector<std::string>> gold;
  for (std::size_t i = 0; i < questions.size(); i++) {
    words[questions[i].id] = questions[i].question_word;
    gold[questions[i].id] = questions[i].gold_answers;
    if (!slots[i].ok) {
      if (errors) errors->push_back(slots[i].error);
      continue;
    }
    judgements.push_back(std::move(slots[i].judgement));
    passages.push_back(std::move(slots[i].passages));
    observations.push_back(std::move(slots[i].observation));
  }

  RunReport report = build_report(judgements, words, passage_metrics(passages, gold, options.judge),
                                  stage_stats(observations, gold, options.judge));
  report.bucket_edges = options.bucket_edges;
  if (errors && !errors->empty()) {
    report.notes.push_back("WARNING: " + std::to_string(errors->size()) +
                           " question(s) failed and were excluded; metrics cover the judged "
                           "subset only");
  }
  return report;
}

}  // namespace redqa
