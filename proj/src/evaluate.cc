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

#include "redqa/evaluate.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace redqa {

namespace {

std::vector<std::string> norm_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i <= text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) i++;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) i++;
    if (i > start) {
      std::string word = normalize_word(text.substr(start, i - start));
      if (!word.empty()) out.push_back(std::move(word));
    }
    if (i == text.size()) break;
  }
  return out;
}

bool contiguous_subsequence(const std::vector<std::string>& needle,
                            const std::vector<std::string>& haystack) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); i++) {
    bool all = true;
    for (std::size_t j = 0; j < needle.size() && all; j++) all = haystack[i + j] == needle[j];
    if (all) return true;
  }
  return false;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
  return buf;
}

std::string number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

constexpr QuestionWord kAllWords[] = {QuestionWord::Who,  QuestionWord::When,
                                      QuestionWord::Where, QuestionWord::What,
                                      QuestionWord::Which, QuestionWord::How,
                                      QuestionWord::Name,  QuestionWord::Other};

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Correct: return "correct";
    case Verdict::Wrong: return "wrong";
    case Verdict::NoAnswer: return "no-answer";
  }
  return "no-answer";
}

JudgeSpec JudgeSpec::from_name(std::string_view name) {
  JudgeSpec spec;
  if (name == "exact") {
    spec.policy = JudgePolicy::Exact;
  } else if (name == "word-boundary" || name.empty()) {
    spec.policy = JudgePolicy::WordBoundary;
  } else {
    throw std::invalid_argument("unknown judge policy: " + std::string(name));
  }
  return spec;
}

JudgeSpec JudgeSpec::load_pattern_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open judge pattern file " + path.string());
  JudgeSpec spec;
  spec.policy = JudgePolicy::PatternFile;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("expected '<question id>\\t<regex>'", line_no);
    spec.patterns[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return spec;
}

bool answer_matches(std::string_view answer, std::string_view gold, JudgePolicy policy) {
  const std::vector<std::string> a = norm_tokens(answer);
  const std::vector<std::string> g = norm_tokens(gold);
  if (a.empty() || g.empty()) return false;
  if (a == g) return true;
  if (policy == JudgePolicy::Exact) return false;
  return contiguous_subsequence(a, g) || contiguous_subsequence(g, a);
}

bool passage_contains(std::string_view passage_text, std::string_view gold, JudgePolicy policy) {
  const std::vector<std::string> text = norm_tokens(passage_text);
  const std::vector<std::string> g = norm_tokens(gold);
  if (g.empty()) return false;
  if (policy == JudgePolicy::Exact) return text == g;
  return contiguous_subsequence(g, text);
}

Judgement judge(const std::vector<std::string>& ranked_answers,
                const std::vector<std::string>& gold_answers, const JudgeSpec& spec,
                const std::string& question_id) {
  Judgement j;
  j.question_id = question_id;
  if (ranked_answers.empty()) {
    j.verdict = Verdict::NoAnswer;
    return j;
  }

  std::optional<std::regex> pattern;
  if (spec.policy == JudgePolicy::PatternFile) {
    auto it = spec.patterns.find(question_id);
    if (it != spec.patterns.end()) pattern.emplace(it->second, std::regex::icase);
  }

  auto matches = [&](const std::string& answer) {
    if (pattern) return std::regex_search(answer, *pattern);
    for (const std::string& gold : gold_answers) {
      const JudgePolicy policy =
          spec.policy == JudgePolicy::PatternFile ? JudgePolicy::WordBoundary : spec.policy;
      if (answer_matches(answer, gold, policy)) return true;
    }
    return false;
  };

  for (std::size_t rank = 0; rank < ranked_answers.size(); rank++) {
    if (matches(ranked_answers[rank])) {
      j.answered_rank = static_cast<int>(rank) + 1;
      break;
    }
  }
  j.verdict = j.answered_rank == 1 ? Verdict::Correct : Verdict::Wrong;
  return j;
}

double accuracy(const std::vector<Judgement>& judgements) {
  if (judgements.empty()) return 0.0;
  long correct = 0;
  for (const Judgement& j : judgements) correct += j.verdict == Verdict::Correct;
  return static_cast<double>(correct) / static_cast<double>(judgements.size());
}

double precision(const std::vector<Judgement>& judgements, bool* defined) {
  long correct = 0, answered = 0;
  for (const Judgement& j : judgements) {
    correct += j.verdict == Verdict::Correct;
    answered += j.verdict != Verdict::NoAnswer;
  }
  if (defined) *defined = answered > 0;
  if (answered == 0) return 0.0;
  return static_cast<double>(correct) / static_cast<double>(answered);
}

double recall(const std::vector<Judgement>& judgements) {
  if (judgements.empty()) return 0.0;
  long answered = 0;
  for (const Judgement& j : judgements) answered += j.verdict != Verdict::NoAnswer;
  return static_cast<double>(answered) / static_cast<double>(judgements.size());
}

double mrr(const std::vector<Judgement>& judgements) {
  if (judgements.empty()) return 0.0;
  double sum = 0.0;
  for (const Judgement& j : judgements) {
    if (j.answered_rank) sum += 1.0 / static_cast<double>(*j.answered_rank);
  }
  return sum / static_cast<double>(judgements.size());
}

double c_at_k(const std::vector<Judgement>& judgements, int k) {
  if (judgements.empty()) return 0.0;
  long within = 0;
  for (const Judgement& j : judgements) within += j.answered_rank && *j.answered_rank <= k;
  return static_cast<double>(within) / static_cast<double>(judgements.size());
}

Metrics metrics_from_judgements(const std::vector<Judgement>& judgements) {
  Metrics m;
  m.questions = static_cast<double>(judgements.size());
  for (const Judgement& j : judgements) {
    switch (j.verdict) {
      case Verdict::Correct: m.correct++; break;
      case Verdict::Wrong: m.wrong++; break;
      case Verdict::NoAnswer: m.no_answer++; break;
    }
  }
  m.accuracy = accuracy(judgements);
  m.precision = precision(judgements, &m.precision_defined);
  m.recall = recall(judgements);
  m.mrr = mrr(judgements);
  m.c_at_1 = c_at_k(judgements, 1);
  m.c_at_5 = c_at_k(judgements, 5);
  return m;
}

Metrics metrics_from_counts(long correct, long wrong, long no_answer) {
  Metrics m;
  m.questions = static_cast<double>(correct + wrong + no_answer);
  m.correct = static_cast<double>(correct);
  m.wrong = static_cast<double>(wrong);
  m.no_answer = static_cast<double>(no_answer);
  const double answered = m.correct + m.wrong;
  m.accuracy = m.questions > 0 ? m.correct / m.questions : 0.0;
  m.precision_defined = answered > 0;
  m.precision = m.precision_defined ? m.correct / answered : 0.0;
  m.recall = m.questions > 0 ? answered / m.questions : 0.0;
  return m;
}

PassageStats passage_metrics(
    const std::vector<QuestionPassages>& passages,
    const std::unordered_map<std::string, std::vector<std::string>>& gold,
    const JudgeSpec& spec) {
  PassageStats stats;
  double sum_all = 0.0;
  for (const QuestionPassages& qp : passages) {
    PassageStats::PerQuestion per;
    per.question_id = qp.question_id;
    auto gold_it = gold.find(qp.question_id);
    if (gold_it != gold.end()) {
      for (std::size_t rank = 0; rank < qp.passage_texts.size() && !per.first_positive_rank;
           rank++) {
        for (const std::string& g : gold_it->second) {
          const JudgePolicy policy =
              spec.policy == JudgePolicy::PatternFile ? JudgePolicy::WordBoundary : spec.policy;
          if (passage_contains(qp.passage_texts[rank], g, policy)) {
            per.first_positive_rank = static_cast<int>(rank) + 1;
            break;
          }
        }
      }
    }
    if (per.first_positive_rank) {
      stats.questions_with_positive++;
      sum_all += 1.0 / static_cast<double>(*per.first_positive_rank);
    }
    stats.per_question.push_back(std::move(per));
  }
  const double total = static_cast<double>(stats.per_question.size());
  stats.mrr_all_q = total > 0 ? sum_all / total : 0.0;
  stats.pos_only_defined = stats.questions_with_positive > 0;
  stats.mrr_pos_only =
      stats.pos_only_defined ? sum_all / stats.questions_with_positive : 0.0;
  return stats;
}

StageStats stage_stats(const std::vector<StageObservation>& observations,
                       const std::unordered_map<std::string, std::vector<std::string>>& gold,
                       const JudgeSpec& spec) {
  StageStats stats;
  const JudgePolicy policy =
      spec.policy == JudgePolicy::PatternFile ? JudgePolicy::WordBoundary : spec.policy;
  for (const StageObservation& obs : observations) {
    StageStats::PerQuestion per;
    per.question_id = obs.question_id;
    per.extracted_count = static_cast<long>(obs.extracted.size());

    auto gold_it = gold.find(obs.question_id);
    auto matches_gold = [&](const std::string& answer) {
      if (gold_it == gold.end()) return false;
      for (const std::string& g : gold_it->second) {
        if (answer_matches(answer, g, policy)) return true;
      }
      return false;
    };

    for (const std::string& candidate : obs.extracted) {
      if (matches_gold(candidate)) {
        per.cae_success = true;
        break;
      }
    }
    const bool final_correct = obs.final_answer && matches_gold(*obs.final_answer);
    if (final_correct && !per.cae_success)
      throw std::logic_error("question " + obs.question_id +
                             ": final answer correct but no extracted candidate matches gold");
    per.as_success = per.cae_success && final_correct;
    stats.per_question.push_back(std::move(per));
  }
  return stats;
}

std::vector<StageStats::Bucket> StageStats::histogram(const std::vector<long>& edges) const {
  std::vector<Bucket> buckets;
  buckets.push_back({0, 0, 0, 0, 0});
  long lo = 1;
  for (long edge : edges) {
    buckets.push_back({lo, edge, 0, 0, 0});
    lo = edge + 1;
  }
  buckets.push_back({lo, lo - 1, 0, 0, 0});  // open-ended tail

  for (const PerQuestion& per : per_question) {
    std::size_t slot = buckets.size() - 1;
    if (per.extracted_count == 0) {
      slot = 0;
    } else {
      for (std::size_t i = 1; i + 1 < buckets.size(); i++) {
        if (per.extracted_count >= buckets[i].lo && per.extracted_count <= buckets[i].hi) {
          slot = i;
          break;
        }
      }
    }
    buckets[slot].questions++;
    buckets[slot].cae += per.cae_success;
    buckets[slot].as += per.as_success;
  }
  return buckets;
}

RunReport build_report(const std::vector<Judgement>& judgements,
                       const std::unordered_map<std::string, QuestionWord>& question_words,
                       PassageStats passage_stats, StageStats stage_stats) {
  RunReport report;
  report.judgements = judgements;
  report.metrics = metrics_from_judgements(judgements);
  report.passage_stats = std::move(passage_stats);
  report.stage_stats = std::move(stage_stats);

  for (QuestionWord word : kAllWords) {
    BreakdownRow row;
    row.word = word;
    report.breakdown.push_back(row);
  }
  for (const Judgement& j : judgements) {
    auto it = question_words.find(j.question_id);
    const QuestionWord word = it == question_words.end() ? QuestionWord::Other : it->second;
    BreakdownRow& row = report.breakdown[static_cast<std::size_t>(word)];
    switch (j.verdict) {
      case Verdict::Correct: row.correct++; break;
      case Verdict::Wrong: row.wrong++; break;
      case Verdict::NoAnswer: row.no_answer++; break;
    }
  }
  for (BreakdownRow& row : report.breakdown) {
    const double total = row.correct + row.wrong + row.no_answer;
    row.accuracy = total > 0 ? row.correct / total : 0.0;
  }

  const double answered = report.metrics.correct + report.metrics.wrong;
  std::string note = "precision = correct/answered";
  if (answered > 0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  " (%s/%s = %.1f%%); the complementary wrong/answered reading gives %.1f%%",
                  number(report.metrics.correct).c_str(), number(answered).c_str(),
                  report.metrics.precision * 100.0, report.metrics.wrong / answered * 100.0);
    note += buf;
  } else {
    note += "; no question was answered, reported as 0 (undefined)";
  }
  report.notes.push_back(std::move(note));
  return report;
}

RunReport report_from_counts(long correct, long wrong, long no_answer) {
  std::vector<Judgement> judgements;
  long id = 0;
  auto add = [&](Verdict verdict, long count) {
    for (long i = 0; i < count; i++) {
      Judgement j;
      j.question_id = std::to_string(++id);
      j.verdict = verdict;
      if (verdict == Verdict::Correct) j.answered_rank = 1;
      judgements.push_back(std::move(j));
    }
  };
  add(Verdict::Correct, correct);
  add(Verdict::Wrong, wrong);
  add(Verdict::NoAnswer, no_answer);
  RunReport report = build_report(judgements, {});
  // Ranks beyond the top answer are unknown here; rank-based metrics are
  // lower bounds, not table values.
  report.metrics.mrr = 0;
  report.metrics.c_at_1 = 0;
  report.metrics.c_at_5 = 0;
  return report;
}

RunReport average_reports(const std::vector<RunReport>& runs) {
  if (runs.empty()) throw std::invalid_argument("cannot average zero runs");
  RunReport avg;
  const double k = static_cast<double>(runs.size());

  for (QuestionWord word : kAllWords) {
    BreakdownRow row;
    row.word = word;
    avg.breakdown.push_back(row);
  }

  for (const RunReport& run : runs) {
    avg.metrics.questions += run.metrics.questions / k;
    avg.metrics.correct += run.metrics.correct / k;
    avg.metrics.wrong += run.metrics.wrong / k;
    avg.metrics.no_answer += run.metrics.no_answer / k;
    avg.metrics.accuracy += run.metrics.accuracy / k;
    avg.metrics.precision += run.metrics.precision / k;
    avg.metrics.recall += run.metrics.recall / k;
    avg.metrics.mrr += run.metrics.mrr / k;
    avg.metrics.c_at_1 += run.metrics.c_at_1 / k;
    avg.metrics.c_at_5 += run.metrics.c_at_5 / k;
    avg.metrics.precision_defined =
        avg.metrics.precision_defined && run.metrics.precision_defined;
    for (std::size_t i = 0; i < avg.breakdown.size() && i < run.breakdown.size(); i++) {
      avg.breakdown[i].correct += run.breakdown[i].correct / k;
      avg.breakdown[i].wrong += run.breakdown[i].wrong / k;
      avg.breakdown[i].no_answer += run.breakdown[i].no_answer / k;
      avg.breakdown[i].accuracy += run.breakdown[i].accuracy / k;
    }
    avg.passage_stats.questions_with_positive +=
        run.passage_stats.questions_with_positive / k;
    avg.passage_stats.mrr_all_q += run.passage_stats.mrr_all_q / k;
    avg.passage_stats.mrr_pos_only += run.passage_stats.mrr_pos_only / k;
    avg.passage_stats.pos_only_defined =
        avg.passage_stats.pos_only_defined && run.passage_stats.pos_only_defined;
  }
  avg.bucket_edges = runs.front().bucket_edges;
  avg.notes.push_back("average of " + std::to_string(runs.size()) + " runs");
  for (const std::string& note : runs.front().notes) avg.notes.push_back(note);
  return avg;
}

MultiRunResult multi_run(const std::function<RunReport(int run_index)>& run_fn, int k) {
  if (k < 1) throw std::invalid_argument("multi_run needs k >= 1");
  MultiRunResult result;
  result.runs.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; i++) result.runs.push_back(run_fn(i));
  result.averaged = average_reports(result.runs);
  return result;
}

namespace {

std::string render_table(const RunReport& r) {
  std::ostringstream out;
  out << "run report\n";
  out << "==========\n";
  out << "questions: " << number(r.metrics.questions) << "   correct: "
      << number(r.metrics.correct) << "   wrong: " << number(r.metrics.wrong)
      << "   no answer: " << number(r.metrics.no_answer) << "\n";
  out << "accuracy:  " << percent(r.metrics.accuracy) << "\n";
  out << "precision: " << percent(r.metrics.precision)
      << (r.metrics.precision_defined ? "" : " (undefined: nothing answered)") << "\n";
  out << "recall:    " << percent(r.metrics.recall) << "\n";
  out << "mrr:       " << number(r.metrics.mrr) << "\n";
  out << "c@1:       " << number(r.metrics.c_at_1) << "   c@5: " << number(r.metrics.c_at_5)
      << "\n";

  out << "\nquestion word   correct     wrong  no answer  accuracy\n";
  double tc = 0, tw = 0, tn = 0;
  for (const BreakdownRow& row : r.breakdown) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-13s %9s %9s %10s  %s\n",
                  std::string(to_string(row.word)).c_str(), number(row.correct).c_str(),
                  number(row.wrong).c_str(), number(row.no_answer).c_str(),
                  percent(row.accuracy).c_str());
    out << line;
    tc += row.correct;
    tw += row.wrong;
    tn += row.no_answer;
  }
  {
    const double total = tc + tw + tn;
    char line[128];
    std::snprintf(line, sizeof(line), "%-13s %9s %9s %10s  %s\n", "total", number(tc).c_str(),
                  number(tw).c_str(), number(tn).c_str(),
                  percent(total > 0 ? tc / total : 0.0).c_str());
    out << line;
  }

  out << "\npassage retrieval\n";
  out << "  questions with >=1 positive passage: "
      << number(r.passage_stats.questions_with_positive);
  if (r.metrics.questions > 0)
    out << " ("
        << percent(r.passage_stats.questions_with_positive / r.metrics.questions) << ")";
  out << "\n";
  out << "  mrr over all questions:      " << number(r.passage_stats.mrr_all_q) << "\n";
  out << "  mrr over positive questions: " << number(r.passage_stats.mrr_pos_only)
      << (r.passage_stats.pos_only_defined ? "" : " (undefined: no positive passages)") << "\n";

  if (!r.stage_stats.per_question.empty()) {
    out << "\nextraction stages\n";
    out << "  extracted      questions  cae success  as success\n";
    for (const StageStats::Bucket& b : r.stage_stats.histogram(r.bucket_edges)) {
      std::string range;
      if (b.lo == 0 && b.hi == 0) {
        range = "0";
      } else if (b.hi < b.lo) {
        range = std::to_string(b.lo) + "+";
      } else {
        range = std::to_string(b.lo) + "-" + std::to_string(b.hi);
      }
      char line[160];
      if (b.lo == 0 && b.hi == 0) {
        std::snprintf(line, sizeof(line), "  %-14s %9s  %11s  %10s\n", range.c_str(),
                      number(b.questions).c_str(), "-", "-");
      } else {
        std::snprintf(line, sizeof(line), "  %-14s %9s  %11s  %10s\n", range.c_str(),
                      number(b.questions).c_str(), number(b.cae).c_str(),
                      number(b.as).c_str());
      }
      out << line;
    }
  }

  if (!r.notes.empty()) {
    out << "\nnotes:\n";
    for (const std::string& note : r.notes) out << "  - " << note << "\n";
  }
  return out.str();
}

std::string render_structured(const RunReport& r) {
  std::ostringstream out;
  nlohmann::ordered_json summary;
  summary["type"] = "summary";
  summary["questions"] = r.metrics.questions;
  summary["correct"] = r.metrics.correct;
  summary["wrong"] = r.metrics.wrong;
  summary["no_answer"] = r.metrics.no_answer;
  summary["accuracy"] = r.metrics.accuracy;
  summary["precision"] = r.metrics.precision;
  summary["precision_defined"] = r.metrics.precision_defined;
  summary["recall"] = r.metrics.recall;
  summary["mrr"] = r.metrics.mrr;
  summary["c_at_1"] = r.metrics.c_at_1;
  summary["c_at_5"] = r.metrics.c_at_5;
  out << summary.dump() << "\n";

  for (const Judgement& j : r.judgements) {
    nlohmann::ordered_json row;
    row["type"] = "judgement";
    row["id"] = j.question_id;
    row["verdict"] = std::string(to_string(j.verdict));
    if (j.answered_rank)
      row["rank"] = *j.answered_rank;
    else
      row["rank"] = nullptr;
    out << row.dump() << "\n";
  }
  for (const BreakdownRow& b : r.breakdown) {
    nlohmann::ordered_json row;
    row["type"] = "breakdown";
    row["word"] = std::string(to_string(b.word));
    row["correct"] = b.correct;
    row["wrong"] = b.wrong;
    row["no_answer"] = b.no_answer;
    row["accuracy"] = b.accuracy;
    out << row.dump() << "\n";
  }
  for (const PassageStats::PerQuestion& p : r.passage_stats.per_question) {
    nlohmann::ordered_json row;
    row["type"] = "passage";
    row["id"] = p.question_id;
    if (p.first_positive_rank)
      row["first_positive_rank"] = *p.first_positive_rank;
    else
      row["first_positive_rank"] = nullptr;
    out << row.dump() << "\n";
  }
  {
    nlohmann::ordered_json row;
    row["type"] = "passage_summary";
    row["questions_with_positive"] = r.passage_stats.questions_with_positive;
    row["mrr_all_q"] = r.passage_stats.mrr_all_q;
    row["mrr_pos_only"] = r.passage_stats.mrr_pos_only;
    row["pos_only_defined"] = r.passage_stats.pos_only_defined;
    out << row.dump() << "\n";
  }
  for (const StageStats::PerQuestion& s : r.stage_stats.per_question) {
    nlohmann::ordered_json row;
    row["type"] = "stage";
    row["id"] = s.question_id;
    row["extracted"] = s.extracted_count;
    row["cae"] = s.cae_success;
    row["as"] = s.as_success;
    out << row.dump() << "\n";
  }
  for (const std::string& note : r.notes) {
    nlohmann::ordered_json row;
    row["type"] = "note";
    row["text"] = note;
    out << row.dump() << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
  return format == ReportFormat::Table ? render_table(report) : render_structured(report);
}

RunReport load_report(std::string_view structured_text) {
  RunReport report;
  std::size_t start = 0;
  while (start <= structured_text.size()) {
    std::size_t end = structured_text.find('\n', start);
    std::string_view line = end == std::string_view::npos
                                ? structured_text.substr(start)
                                : structured_text.substr(start, end - start);
    if (!line.empty()) {
      const nlohmann::json j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "summary") {
        report.metrics.questions = j.at("questions").get<double>();
        report.metrics.correct = j.at("correct").get<double>();
        report.metrics.wrong = j.at("wrong").get<double>();
        report.metrics.no_answer = j.at("no_answer").get<double>();
        report.metrics.accuracy = j.at("accuracy").get<double>();
        report.metrics.precision = j.at("precision").get<double>();
        report.metrics.precision_defined = j.at("precision_defined").get<bool>();
        report.metrics.recall = j.at("recall").get<double>();
        report.metrics.mrr = j.at("mrr").get<double>();
        report.metrics.c_at_1 = j.at("c_at_1").get<double>();
        report.metrics.c_at_5 = j.at("c_at_5").get<double>();
      } else if (type == "judgement") {
        Judgement judgement;
        judgement.question_id = j.at("id").get<std::string>();
        const std::string verdict = j.at("verdict").get<std::string>();
        judgement.verdict = verdict == "correct"  ? Verdict::Correct
                            : verdict == "wrong" ? Verdict::Wrong
                                                 : Verdict::NoAnswer;
        if (!j.at("rank").is_null()) judgement.answered_rank = j.at("rank").get<int>();
        report.judgements.push_back(std::move(judgement));
      } else if (type == "breakdown") {
        BreakdownRow row;
        const std::string word = j.at("word").get<std::string>();
        for (QuestionWord w : kAllWords) {
          if (to_string(w) == word) row.word = w;
        }
        row.correct = j.at("correct").get<double>();
        row.wrong = j.at("wrong").get<double>();
        row.no_answer = j.at("no_answer").get<double>();
        row.accuracy = j.at("accuracy").get<double>();
        report.breakdown.push_back(row);
      } else if (type == "passage") {
        PassageStats::PerQuestion per;
        per.question_id = j.at("id").get<std::string>();
        if (!j.at("first_positive_rank").is_null())
          per.first_positive_rank = j.at("first_positive_rank").get<int>();
        report.passage_stats.per_question.push_back(std::move(per));
      } else if (type == "passage_summary") {
        report.passage_stats.questions_with_positive =
            j.at("questions_with_positive").get<double>();
        report.passage_stats.mrr_all_q = j.at("mrr_all_q").get<double>();
        report.passage_stats.mrr_pos_only = j.at("mrr_pos_only").get<double>();
        report.passage_stats.pos_only_defined = j.at("pos_only_defined").get<bool>();
      } else if (type == "stage") {
        StageStats::PerQuestion per;
        per.question_id = j.at("id").get<std::string>();
        per.extracted_count = j.at("extracted").get<long>();
        per.cae_success = j.at("cae").get<bool>();
        per.as_success = j.at("as").get<bool>();
        report.stage_stats.per_question.push_back(std::move(per));
      } else if (type == "note") {
        report.notes.push_back(j.at("text").get<std::string>());
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return report;
}

}  // namespace redqa
