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

#include "redqa/extract.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace redqa {

namespace {

bool is_punct(std::string_view s) {
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

bool has_digit(std::string_view s) {
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

const std::unordered_set<std::string>& written_numbers() {
  static const std::unordered_set<std::string> words = {
      "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
      "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
      "nineteen", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
      "hundred", "thousand", "million", "billion",
      // ordinals
      "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth",
      "tenth", "eleventh", "twelfth", "thirteenth", "fourteenth", "fifteenth", "sixteenth",
      "seventeenth", "eighteenth", "nineteenth", "twentieth", "thirtieth", "fortieth",
      "fiftieth", "sixtieth", "seventieth", "eightieth", "ninetieth", "hundredth", "thousandth",
      "millionth", "billionth"};
  return words;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

bool word_starts_upper(std::string_view w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w.front())) != 0;
}

std::vector<std::string_view> split_display(std::string_view display) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < display.size()) {
    while (i < display.size() && display[i] == ' ') i++;
    std::size_t start = i;
    while (i < display.size() && display[i] != ' ') i++;
    if (i > start) words.push_back(display.substr(start, i - start));
  }
  return words;
}

bool is_year_token(std::string_view s) {
  if (s.size() != 4) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return s.front() == '1' || s.front() == '2';
}

}  // namespace

std::vector<NgramOccurrence> generate_ngrams(const std::vector<RetrievedPassage>& passages,
                                             const Stopwords& stopwords, int ngram_max) {
  std::vector<NgramOccurrence> occurrences;
  for (const RetrievedPassage& passage : passages) {
    std::vector<Token> tokens;
    try {
      tokens = tokenize(passage.snippet.text, stopwords);
    } catch (const InterpretError&) {
      continue;  // blank snippet: nothing to extract
    }

    // Word runs between punctuation tokens; n-grams never cross them.
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t seg_start = 0;
    for (std::size_t i = 0; i <= tokens.size(); i++) {
      if (i == tokens.size() || tokens[i].pos == Pos::Other) {
        if (i > seg_start) segments.emplace_back(seg_start, i);
        seg_start = i + 1;
      }
    }

    for (const auto& [begin, end] : segments) {
      for (std::size_t start = begin; start < end; start++) {
        for (int n = 1; n <= ngram_max && start + n <= end; n++) {
          NgramOccurrence occ;
          std::vector<std::string> surfaces;
          for (int k = 0; k < n; k++) {
            occ.terms.push_back(tokens[start + k].normalized);
            surfaces.push_back(tokens[start + k].surface);
          }
          occ.surface = join(occ.terms);
          occ.display = join(surfaces);
          occ.score = passage.weight;
          occ.passage_id = passage.passage_id;
          occ.origins = passage.origins;
          occurrences.push_back(std::move(occ));
        }
      }
    }
  }
  return occurrences;
}

std::vector<Candidate> vote(const std::vector<NgramOccurrence>& occurrences) {
  std::vector<Candidate> candidates;
  std::unordered_map<std::string, std::size_t> index;
  for (const NgramOccurrence& occ : occurrences) {
    auto it = index.find(occ.surface);
    if (it == index.end()) {
      Candidate cand;
      cand.terms = occ.terms;
      cand.surface = occ.surface;
      cand.display = occ.display;
      cand.score = occ.score;
      cand.support.insert(occ.passage_id);
      cand.origins = occ.origins;
      index.emplace(occ.surface, candidates.size());
      candidates.push_back(std::move(cand));
    } else {
      Candidate& cand = candidates[it->second];
      cand.score += occ.score;
      cand.support.insert(occ.passage_id);
      cand.origins.insert(occ.origins.begin(), occ.origins.end());
    }
  }
  return candidates;
}

bool requires_numeric_answer(const std::vector<Token>& question) {
  if (question.empty()) return false;
  const std::string& first = question[0].normalized;
  if (first == "when") return true;
  if (first == "how" && question.size() > 1) {
    const std::string& second = question[1].normalized;
    return second == "old" || second == "long" || second == "hot" || second == "many";
  }
  return false;
}

bool focus_words_expected(const std::vector<Token>& question) {
  // How-many answers repeat the counted unit ("5280 feet"), so the
  // question-term filter would wrongly kill them.
  return question.size() > 1 && question[0].normalized == "how" &&
         question[1].normalized == "many";
}

bool is_written_number(std::string_view normalized_word) {
  return written_numbers().contains(std::string(normalized_word));
}

bool has_numeric_component(const std::vector<std::string>& terms) {
  for (const std::string& term : terms) {
    if (has_digit(term) || is_written_number(term)) return true;
  }
  return false;
}

std::vector<Candidate> filter_type_neutral(std::vector<Candidate> candidates,
                                           const std::vector<Token>& question,
                                           const Stopwords& stopwords) {
  std::unordered_set<std::string> question_terms;
  for (const Token& tok : question) {
    if (!tok.is_stopword && !is_punct(tok.surface)) question_terms.insert(tok.normalized);
  }
  const bool keep_focus_words = focus_words_expected(question);

  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (Candidate& cand : candidates) {
    if (cand.terms.empty()) continue;
    if (stopwords.contains(cand.terms.front()) || stopwords.contains(cand.terms.back())) continue;
    if (!keep_focus_words) {
      bool overlaps = false;
      for (const std::string& term : cand.terms) {
        if (question_terms.contains(term)) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;
    }
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<Candidate> filter_type_specific(std::vector<Candidate> candidates,
                                            const std::vector<Token>& question) {
  if (!requires_numeric_answer(question)) return candidates;
  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (Candidate& cand : candidates) {
    if (has_numeric_component(cand.terms)) out.push_back(std::move(cand));
  }
  return out;
}

ClosedClassTable ClosedClassTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open closed-class table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ClosedClassTable ClosedClassTable::parse(std::string_view text) {
  ClosedClassTable table;
  std::string current;
  std::size_t start = 0;
  long line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line(end == std::string_view::npos ? text.substr(start)
                                                   : text.substr(start, end - start));
    line_no++;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    while (!line.empty() && line.front() == ' ') line.erase(line.begin());
    if (!line.empty() && line.front() != '#') {
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError("unterminated [type] header", line_no);
        current = line.substr(1, line.size() - 2);
        if (current.empty()) throw ParseError("empty [type] header", line_no);
      } else {
        if (current.empty()) throw ParseError("value before any [type] header", line_no);
        table.add(current, line);
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return table;
}

void ClosedClassTable::add(const std::string& answer_type, std::string_view value) {
  std::string normalized;
  for (char c : value) {
    char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lc == ' ' && (normalized.empty() || normalized.back() == ' ')) continue;
    normalized.push_back(lc);
  }
  while (!normalized.empty() && normalized.back() == ' ') normalized.pop_back();
  if (!normalized.empty()) sets_[answer_type].insert(std::move(normalized));
}

const std::set<std::string>* ClosedClassTable::lookup(const std::string& answer_type) const {
  auto it = sets_.find(answer_type);
  return it == sets_.end() ? nullptr : &it->second;
}

std::optional<std::string> classify_answer_type(const std::vector<Token>& question) {
  std::vector<std::string> words;
  for (const Token& tok : question) words.push_back(tok.normalized);
  auto has = [&](std::string_view w) {
    return std::find(words.begin(), words.end(), w) != words.end();
  };
  auto has_pair = [&](std::string_view a, std::string_view b) {
    for (std::size_t i = 0; i + 1 < words.size(); i++) {
      if (words[i] == a && words[i + 1] == b) return true;
    }
    return false;
  };

  if (has("nationality")) return "nationality";
  if (has_pair("capital", "of")) return "capital";
  if (has("element") && (has("symbol") || has("chemical"))) return "element-symbol";
  if (has("president")) return "us-president";
  if (has("acronym") || has_pair("stand", "for")) return "acronym-expansion";
  return std::nullopt;
}

std::vector<Candidate> filter_closed_class(std::vector<Candidate> candidates,
                                           const std::optional<std::string>& answer_type,
                                           const ClosedClassTable& table) {
  if (!answer_type) return candidates;
  const std::set<std::string>* admissible = table.lookup(*answer_type);
  if (!admissible) return candidates;
  std::vector<Candidate> out;
  out.reserve(candidates.size());
  for (Candidate& cand : candidates) {
    if (admissible->contains(cand.surface)) out.push_back(std::move(cand));
  }
  return out;
}

void combine(std::vector<Candidate>& candidates) {
  std::unordered_map<std::string, double> unigram_scores;
  for (const Candidate& cand : candidates) {
    if (cand.terms.size() == 1) unigram_scores.emplace(cand.surface, cand.score);
  }
  for (Candidate& cand : candidates) {
    if (cand.terms.size() < 2) continue;
    for (const std::string& term : cand.terms) {
      auto it = unigram_scores.find(term);
      if (it != unigram_scores.end()) cand.score += it->second;
    }
  }
}

double idf_multiplier(const std::vector<std::string>& terms, const TermStats& stats) {
  double sum = 0.0;
  for (const std::string& term : terms) {
    sum += std::log(static_cast<double>(stats.total_docs) /
                    static_cast<double>(stats.count(term)));
  }
  return sum / static_cast<double>(terms.size());
}

void score_idf(std::vector<Candidate>& candidates, const TermStats& stats) {
  for (Candidate& cand : candidates) cand.score *= idf_multiplier(cand.terms, stats);
}

void sort_candidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.surface < b.surface;
  });
}

bool preferred_form(const Candidate& candidate, const std::vector<Token>& question) {
  if (question.empty()) return false;
  const std::string& first = question[0].normalized;
  if (first == "when") {
    for (const std::string& term : candidate.terms) {
      if (is_year_token(term)) return true;
    }
    return false;
  }
  if (first == "who" || first == "where") {
    const std::vector<std::string_view> words = split_display(candidate.display);
    if (words.empty()) return false;
    return word_starts_upper(words.front()) && word_starts_upper(words.back());
  }
  if (first == "how") return has_numeric_component(candidate.terms);
  return false;
}

void rerank(std::vector<Candidate>& candidates, const std::vector<Token>& question) {
  if (question.empty()) return;
  const std::string& first = question[0].normalized;
  if (first != "when" && first != "who" && first != "where" && first != "how") return;
  std::stable_partition(candidates.begin(), candidates.end(),
                        [&](const Candidate& c) { return preferred_form(c, question); });
}

AnswerList support_gate(std::vector<Candidate> candidates, int support_min) {
  AnswerList list;
  for (Candidate& cand : candidates) {
    if (static_cast<int>(cand.support.size()) >= support_min)
      list.ranked.push_back(std::move(cand));
  }
  list.verdict = list.ranked.empty() ? AnswerList::Verdict::DontKnow
                                     : AnswerList::Verdict::Answered;
  return list;
}

namespace {

void record_stage(StageTrace* trace, std::string name, const std::vector<Candidate>& candidates,
                  bool already_ranked,
                  std::vector<std::pair<std::string, std::size_t>> counts = {}) {
  if (!trace) return;
  StageTrace::Stage stage;
  stage.name = std::move(name);
  stage.counts = counts.empty()
                     ? std::vector<std::pair<std::string, std::size_t>>{{"candidates",
                                                                         candidates.size()}}
                     : std::move(counts);
  std::vector<const Candidate*> view;
  view.reserve(candidates.size());
  for (const Candidate& c : candidates) view.push_back(&c);
  if (!already_ranked) {
    std::stable_sort(view.begin(), view.end(),
                     [](const Candidate* a, const Candidate* b) { return a->score > b->score; });
  }
  for (std::size_t i = 0; i < view.size() && i < 10; i++)
    stage.top.emplace_back(view[i]->surface, view[i]->score);
  trace->stages.push_back(std::move(stage));
}

}  // namespace

AnswerList answer_from_passages(const QuestionRecord& question,
                                const std::vector<RetrievedPassage>& passages,
                                const PipelineContext& ctx, StageTrace* trace) {
  const std::vector<Token> tokens = tokenize(question.text, *ctx.stopwords);

  std::vector<NgramOccurrence> occurrences =
      generate_ngrams(passages, *ctx.stopwords, ctx.config.ngram_max);
  if (trace) {
    StageTrace::Stage stage;
    stage.name = "n-grams";
    stage.counts = {{"occurrences", occurrences.size()}};
    trace->stages.push_back(std::move(stage));
  }

  std::vector<Candidate> candidates = vote(occurrences);
  record_stage(trace, "voting", candidates, false);

  candidates = filter_type_neutral(std::move(candidates), tokens, *ctx.stopwords);
  const std::size_t after_neutral = candidates.size();
  candidates = filter_type_specific(std::move(candidates), tokens);
  const std::size_t after_specific = candidates.size();
  const std::optional<std::string> answer_type = classify_answer_type(tokens);
  candidates = filter_closed_class(std::move(candidates), answer_type, *ctx.closed_classes);
  record_stage(trace, "filtering", candidates, false,
               {{"type-neutral", after_neutral},
                {"type-specific", after_specific},
                {"closed-class", candidates.size()}});

  combine(candidates);
  record_stage(trace, "combining", candidates, false);

  score_idf(candidates, *ctx.term_stats);
  sort_candidates(candidates);
  record_stage(trace, "scoring", candidates, true);

  rerank(candidates, tokens);
  record_stage(trace, "reranking", candidates, true);

  AnswerList list = support_gate(std::move(candidates), ctx.config.support_min);
  record_stage(trace, "support", list.ranked, true);
  return list;
}

AnswerList answer(const QuestionRecord& question, Backend& backend, const PipelineContext& ctx,
                  StageTrace* trace) {
  QuerySet queries = generate_queries(question.text, *ctx.patterns, *ctx.stopwords,
                                      ctx.config.weights);
  std::vector<RetrievedPassage> passages =
      retrieve_all(queries, backend, ctx.config.max_snippets);
  if (trace) {
    trace->queries = queries;
    trace->passages = passages;
  }
  return answer_from_passages(question, passages, ctx, trace);
}

}  // namespace redqa
