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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "redqa/engine.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCorpus = 2;
constexpr int kExitBackend = 3;

// Flat key=value configuration; command-line flags win over file values.
std::unordered_map<std::string, std::string> load_config(const std::string& path) {
  std::unordered_map<std::string, std::string> config;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    };
    strip(key);
    strip(value);
    config[key] = value;
  }
  return config;
}

struct Settings {
  std::string config_file;
  std::string data_dir = "data";
  std::string stopwords, patterns, closed_classes, term_stats;
  std::string backend = "local";
  std::string snippets;
  std::string web_url;
  std::string cache_dir;
  bool offline = false;
  int max_snippets = 100;
  int ngram_max = 4;
  int support_min = 2;
  double exact_weight = 5.0;
  std::string select = "aranea-top";
  std::string distance = "overlap";
  double distance_threshold = -1.0;
  double score_threshold = 0.0;
  int max_output_chars = 7000;
  std::string judge_policy = "word-boundary";
  std::string judge_patterns;
  long error_budget = -1;  // negative: unlimited

  CLI::Option* backend_opt = nullptr;
};

void add_common_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--config", s.config_file, "flat key=value config file");
  cmd->add_option("--data-dir", s.data_dir, "directory with bundled data files");
  cmd->add_option("--stopwords", s.stopwords, "stopword list (one word per line)");
  cmd->add_option("--patterns", s.patterns, "reformulation pattern file");
  cmd->add_option("--closed-classes", s.closed_classes, "closed-class answer table");
  cmd->add_option("--term-stats", s.term_stats, "term statistics file (N= header)");
  s.backend_opt =
      cmd->add_option("--backend", s.backend, "local|web")->check(CLI::IsMember({"local", "web"}));
  cmd->add_option("--snippets", s.snippets, "snippet corpus for the local backend");
  cmd->add_option("--web-url", s.web_url, "search endpoint base URL for --backend web");
  cmd->add_option("--cache-dir", s.cache_dir, "retrieval cache directory");
  cmd->add_flag("--offline", s.offline, "error on cache miss instead of calling the network");
  cmd->add_option("--max-snippets", s.max_snippets, "snippet cap per query")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--ngram-max", s.ngram_max, "longest candidate n-gram");
  cmd->add_option("--support-min", s.support_min, "snippet support needed for an answer");
  cmd->add_option("--exact-weight", s.exact_weight, "weight of exact queries");
  cmd->add_option("--select", s.select, "answer selection strategy")
      ->check(CLI::IsMember({"aranea-top", "justask", "ephyra"}));
  cmd->add_option("--distance", s.distance, "clustering distance")
      ->check(CLI::IsMember({"levenshtein", "overlap"}));
  cmd->add_option("--distance-threshold", s.distance_threshold,
                  "cluster link threshold (negative = per-distance default)");
  cmd->add_option("--score-threshold", s.score_threshold, "minimum kept answer score");
  cmd->add_option("--max-output-chars", s.max_output_chars,
                  "non-whitespace character cap on the answer list");
  cmd->add_option("--judge-policy", s.judge_policy, "exact|word-boundary|pattern-file");
  cmd->add_option("--judge-patterns", s.judge_patterns, "tab-separated id/regex file");
  cmd->add_option("--error-budget", s.error_budget,
                  "max tolerated backend failures before exit 3 (negative = unlimited)");
}

void merge_config(CLI::App* cmd, Settings& s) {
  if (s.config_file.empty()) return;
  const auto config = load_config(s.config_file);
  auto set_str = [&](const char* key, const char* flag, std::string& out) {
    auto it = config.find(key);
    if (it != config.end() && cmd->count(flag) == 0) out = it->second;
  };
  auto set_num = [&](const char* key, const char* flag, auto& out) {
    auto it = config.find(key);
    if (it != config.end() && cmd->count(flag) == 0)
      out = static_cast<std::decay_t<decltype(out)>>(std::stod(it->second));
  };
  set_str("data_dir", "--data-dir", s.data_dir);
  set_str("stopwords", "--stopwords", s.stopwords);
  set_str("patterns", "--patterns", s.patterns);
  set_str("closed_classes", "--closed-classes", s.closed_classes);
  set_str("term_stats", "--term-stats", s.term_stats);
  set_str("backend", "--backend", s.backend);
  set_str("snippets", "--snippets", s.snippets);
  set_str("web_url", "--web-url", s.web_url);
  set_str("cache_dir", "--cache-dir", s.cache_dir);
  set_str("select", "--select", s.select);
  set_str("distance", "--distance", s.distance);
  set_str("judge_policy", "--judge-policy", s.judge_policy);
  set_str("judge_patterns", "--judge-patterns", s.judge_patterns);
  set_num("max_snippets", "--max-snippets", s.max_snippets);
  set_num("ngram_max", "--ngram-max", s.ngram_max);
  set_num("support_min", "--support-min", s.support_min);
  set_num("exact_weight", "--exact-weight", s.exact_weight);
  set_num("distance_threshold", "--distance-threshold", s.distance_threshold);
  set_num("score_threshold", "--score-threshold", s.score_threshold);
  set_num("max_output_chars", "--max-output-chars", s.max_output_chars);
  set_num("error_budget", "--error-budget", s.error_budget);
  auto it = config.find("offline");
  if (it != config.end() && cmd->count("--offline") == 0)
    s.offline = it->second == "1" || it->second == "true";
}

std::string data_path(const Settings& s, const std::string& explicit_path,
                      const char* default_name) {
  if (!explicit_path.empty()) return explicit_path;
  return (std::filesystem::path(s.data_dir) / default_name).string();
}

redqa::EngineConfig engine_config(const Settings& s) {
  redqa::EngineConfig config;
  config.stopword_file = data_path(s, s.stopwords, "stopwords.txt");
  config.pattern_file = data_path(s, s.patterns, "patterns.txt");
  config.closed_class_file = data_path(s, s.closed_classes, "closed_classes.txt");
  if (!s.term_stats.empty()) config.term_stats_file = s.term_stats;
  config.extract.ngram_max = s.ngram_max;
  config.extract.support_min = s.support_min;
  config.extract.max_snippets = s.max_snippets;
  config.extract.weights.exact = s.exact_weight;
  config.selection.strategy = *redqa::strategy_from_name(s.select);
  config.selection.distance = s.distance == "levenshtein"
                                  ? redqa::SelectionConfig::Distance::Levenshtein
                                  : redqa::SelectionConfig::Distance::Overlap;
  config.selection.distance_threshold = s.distance_threshold;
  config.selection.score_threshold = s.score_threshold;
  config.selection.max_output_chars = s.max_output_chars;
  return config;
}

redqa::JudgeSpec judge_spec(const Settings& s) {
  if (s.judge_policy == "pattern-file") {
    if (s.judge_patterns.empty())
      throw std::runtime_error("--judge-policy pattern-file needs --judge-patterns");
    return redqa::JudgeSpec::load_pattern_file(s.judge_patterns);
  }
  return redqa::JudgeSpec::from_name(s.judge_policy);
}

// Everything needed to run questions: backend stack plus loaded engine.
struct Runtime {
  std::unique_ptr<redqa::SnippetStore> store;
  std::unique_ptr<redqa::Stopwords> match_stopwords;
  std::unique_ptr<redqa::Backend> inner;
  std::unique_ptr<redqa::ResultCache> cache;
  std::unique_ptr<redqa::Backend> backend;
  std::unique_ptr<redqa::Engine> engine;
};

Runtime make_runtime(const Settings& s) {
  Runtime rt;
  const redqa::EngineConfig config = engine_config(s);
  rt.match_stopwords =
      std::make_unique<redqa::Stopwords>(redqa::Stopwords::load(config.stopword_file));

  if (s.backend == "local") {
    if (s.snippets.empty()) throw std::runtime_error("--backend local needs --snippets");
    rt.store = std::make_unique<redqa::SnippetStore>(redqa::SnippetStore::load(s.snippets));
    rt.inner = std::make_unique<redqa::LocalBackend>(*rt.store, *rt.match_stopwords);
  } else {
    if (s.web_url.empty()) throw std::runtime_error("--backend web needs --web-url");
    const char* key = std::getenv("REDQA_SEARCH_API_KEY");
    rt.inner = std::make_unique<redqa::WebBackend>(s.web_url, key ? key : "");
    if (s.cache_dir.empty())
      throw std::runtime_error("--backend web needs --cache-dir for replayable runs");
  }
  if (!s.cache_dir.empty()) {
    rt.cache = std::make_unique<redqa::ResultCache>(s.cache_dir);
    rt.backend = std::make_unique<redqa::CachedBackend>(*rt.inner, *rt.cache, s.offline);
  } else {
    rt.backend = std::move(rt.inner);
  }

  if (!s.term_stats.empty()) {
    rt.engine = std::make_unique<redqa::Engine>(config, *rt.backend);
  } else if (rt.store) {
    // Document frequencies from the local corpus itself.
    redqa::TermStatsBuilder builder;
    for (const redqa::SnippetRecord& rec : rt.store->all()) builder.add_document(rec.text);
    rt.engine = std::make_unique<redqa::Engine>(config, *rt.backend, builder.build());
  } else {
    rt.engine = std::make_unique<redqa::Engine>(config, *rt.backend, redqa::TermStats{});
  }
  return rt;
}

std::vector<redqa::QuestionRecord> load_corpus(const std::string& path,
                                               const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (format == "trec") return redqa::parse_trec_questions(buf.str());
  return redqa::parse_gold_qa(buf.str());
}

int cmd_ask(const Settings& s, const std::string& question, int top, bool json) {
  Runtime rt = make_runtime(s);
  redqa::QuestionRecord record;
  record.id = "ask";
  record.text = question;
  record.question_word = redqa::question_word_of(question);

  redqa::Engine::QuestionRun run = rt.engine->run_question(record);
  const auto& passages = run.trace.passages;

  if (json) {
    // one structured record per ranked answer
    for (std::size_t i = 0; i < run.selected.ranked.size() && i < static_cast<std::size_t>(top);
         i++) {
      const redqa::Candidate& c = run.selected.ranked[i];
      nlohmann::ordered_json row;
      row["question"] = question;
      row["rank"] = i + 1;
      row["answer"] = c.surface;
      row["display"] = c.display;
      row["score"] = c.score;
      row["support"] = nlohmann::ordered_json::array();
      for (int id : c.support) row["support"].push_back(id);
      row["urls"] = nlohmann::ordered_json::array();
      for (int id : c.support) {
        if (id >= 0 && static_cast<std::size_t>(id) < passages.size())
          row["urls"].push_back(passages[static_cast<std::size_t>(id)].snippet.url);
      }
      std::printf("%s\n", row.dump().c_str());
    }
    if (run.selected.no_answer()) {
      nlohmann::ordered_json row;
      row["question"] = question;
      row["verdict"] = "dont-know";
      std::printf("%s\n", row.dump().c_str());
    }
    return kExitOk;
  }

  std::printf("question: %s\n", question.c_str());
  if (run.selected.no_answer()) {
    std::printf("don't know\n");
    return kExitOk;
  }
  for (std::size_t i = 0; i < run.selected.ranked.size() && i < static_cast<std::size_t>(top);
       i++) {
    const redqa::Candidate& c = run.selected.ranked[i];
    std::printf("%2zu. %-30s score=%.4f support=%zu\n", i + 1, c.display.c_str(), c.score,
                c.support.size());
    std::string urls;
    for (int id : c.support) {
      if (id >= 0 && static_cast<std::size_t>(id) < passages.size()) {
        if (!urls.empty()) urls += ' ';
        urls += passages[static_cast<std::size_t>(id)].snippet.url;
      }
    }
    if (!urls.empty()) std::printf("    from: %s\n", urls.c_str());
  }
  std::printf("verdict: answered\n");
  return kExitOk;
}

int cmd_eval(const Settings& s, const std::string& corpus, const std::string& format, int runs,
             int jobs, const std::string& output_dir, const std::vector<long>& buckets) {
  const std::vector<redqa::QuestionRecord> questions = load_corpus(corpus, format);
  Runtime rt = make_runtime(s);

  redqa::EvalOptions options;
  options.jobs = jobs;
  options.judge = judge_spec(s);
  if (!buckets.empty()) options.bucket_edges = buckets;

  long failures = 0;
  std::vector<std::string> all_errors;
  redqa::MultiRunResult result = redqa::multi_run(
      [&](int) {
        std::vector<std::string> errors;
        redqa::RunReport report = redqa::evaluate_corpus(questions, *rt.engine, options, &errors);
        failures += static_cast<long>(errors.size());
        for (std::string& e : errors) all_errors.push_back(std::move(e));
        return report;
      },
      runs);

  std::filesystem::create_directories(output_dir);
  for (std::size_t i = 0; i < result.runs.size(); i++) {
    std::ofstream out(std::filesystem::path(output_dir) /
                      ("run-" + std::to_string(i + 1) + ".jsonl"));
    out << redqa::render_report(result.runs[i], redqa::ReportFormat::Structured);
  }
  {
    std::ofstream out(std::filesystem::path(output_dir) / "average.txt");
    out << redqa::render_report(result.averaged, redqa::ReportFormat::Table);
  }

  for (const std::string& e : all_errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  std::fputs(redqa::render_report(result.averaged, redqa::ReportFormat::Table).c_str(), stdout);
  if (s.error_budget >= 0 && failures > s.error_budget) {
    std::fprintf(stderr, "backend failures (%ld) exceeded the error budget (%ld)\n", failures,
                 s.error_budget);
    return kExitBackend;
  }
  return kExitOk;
}

int cmd_inspect(const Settings& s, const std::string& corpus, const std::string& format,
                const std::string& id) {
  const std::vector<redqa::QuestionRecord> questions = load_corpus(corpus, format);
  const redqa::QuestionRecord* record = nullptr;
  for (const redqa::QuestionRecord& q : questions) {
    if (q.id == id) record = &q;
  }
  if (!record) {
    std::fprintf(stderr, "unknown question id '%s'\n", id.c_str());
    return kExitUsage;
  }

  Runtime rt = make_runtime(s);
  redqa::StageTrace trace;
  redqa::AnswerList answers = rt.engine->answer(*record, &trace);

  std::printf("question %s: %s\n", record->id.c_str(), record->text.c_str());
  std::printf("queries:\n");
  for (const redqa::Query& q : trace.queries.queries)
    std::printf("  %-9s w=%-4g %s\n", std::string(to_string(q.kind)).c_str(), q.weight,
                q.text().c_str());
  std::printf("passages: %zu\n", trace.passages.size());
  for (const redqa::RetrievedPassage& p : trace.passages)
    std::printf("  [%d] w=%-4g %s | %s\n", p.passage_id, p.weight, p.snippet.url.c_str(),
                p.snippet.text.c_str());
  std::printf("stages:\n");
  for (const redqa::StageTrace::Stage& stage : trace.stages) {
    std::printf("  %-12s", stage.name.c_str());
    for (const auto& [label, count] : stage.counts)
      std::printf(" %s=%zu", label.c_str(), count);
    std::printf("\n");
    for (const auto& [surface, score] : stage.top)
      std::printf("      %-30s %.4f\n", surface.c_str(), score);
  }
  std::printf("verdict: %s\n",
              answers.verdict == redqa::AnswerList::Verdict::Answered ? "answered" : "don't know");
  return kExitOk;
}

int cmd_build_stats(const std::string& snippets, const std::string& docs_file,
                    const std::string& output) {
  redqa::TermStatsBuilder builder;
  if (!snippets.empty()) {
    const redqa::SnippetStore store = redqa::SnippetStore::load(snippets);
    for (const redqa::SnippetRecord& rec : store.all()) builder.add_document(rec.text);
  } else if (!docs_file.empty()) {
    std::ifstream in(docs_file);
    if (!in) throw std::runtime_error("cannot open " + docs_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) builder.add_document(line);
    }
  } else {
    throw std::runtime_error("build-stats needs --snippets or --docs-file");
  }
  redqa::save_term_stats(builder.build(), output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redundancy-based factoid question answering"};
  app.require_subcommand(1);

  Settings settings;

  std::string ask_question;
  int ask_top = 5;
  bool ask_json = false;
  CLI::App* ask = app.add_subcommand("ask", "answer one question");
  ask->add_option("question", ask_question, "the question")->required();
  ask->add_option("--top", ask_top, "answers to print");
  ask->add_flag("--json", ask_json, "emit line-delimited structured records");
  add_common_options(ask, settings);

  std::string eval_corpus, eval_format = "gold-qa", eval_output = "out";
  int eval_runs = 5, eval_jobs = 1;
  std::vector<long> eval_buckets;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a question corpus");
  eval->add_option("--corpus", eval_corpus, "question corpus")->required();
  eval->add_option("--corpus-format", eval_format, "gold-qa|trec")
      ->check(CLI::IsMember({"gold-qa", "trec"}));
  eval->add_option("--runs", eval_runs, "evaluation runs to average")->check(CLI::PositiveNumber);
  eval->add_option("--jobs", eval_jobs, "worker threads")->check(CLI::PositiveNumber);
  eval->add_option("--output-dir", eval_output, "directory for report files");
  eval->add_option("--buckets", eval_buckets, "histogram bucket edges")->delimiter(',');
  add_common_options(eval, settings);

  std::string inspect_corpus, inspect_format = "gold-qa", inspect_id;
  CLI::App* inspect = app.add_subcommand("inspect", "trace one question through the pipeline");
  inspect->add_option("--corpus", inspect_corpus, "question corpus")->required();
  inspect->add_option("--corpus-format", inspect_format, "gold-qa|trec");
  inspect->add_option("--id", inspect_id, "question id")->required();
  add_common_options(inspect, settings);

  std::string stats_snippets, stats_docs, stats_output;
  CLI::App* build_stats = app.add_subcommand("build-stats", "build a term statistics file");
  build_stats->add_option("--snippets", stats_snippets, "snippet corpus input");
  build_stats->add_option("--docs-file", stats_docs, "plain text input, one document per line");
  build_stats->add_option("--output", stats_output, "output stats file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ask->parsed()) {
      merge_config(ask, settings);
      return cmd_ask(settings, ask_question, ask_top, ask_json);
    }
    if (eval->parsed()) {
      merge_config(eval, settings);
      return cmd_eval(settings, eval_corpus, eval_format, eval_runs, eval_jobs, eval_output,
                      eval_buckets);
    }
    if (inspect->parsed()) {
      merge_config(inspect, settings);
      return cmd_inspect(settings, inspect_corpus, inspect_format, inspect_id);
    }
    if (build_stats->parsed()) return cmd_build_stats(stats_snippets, stats_docs, stats_output);
  } catch (const redqa::ParseError& e) {
    std::fprintf(stderr, "corpus error: %s\n", e.what());
    return kExitCorpus;
  } catch (const redqa::RetrievalError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitBackend;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
