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

#include "redqa/select.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "redqa/corpora.h"

namespace redqa {

namespace {

bool is_punct(std::string_view s) {
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return !s.empty();
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) i++;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::string upper_category(std::string_view category) {
  std::string out;
  for (char c : category) {
    if (c == '_') c = ':';
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

const std::map<std::string, long>& number_words() {
  static const std::map<std::string, long> words = {
      {"zero", 0},      {"one", 1},        {"two", 2},        {"three", 3},
      {"four", 4},      {"five", 5},       {"six", 6},        {"seven", 7},
      {"eight", 8},     {"nine", 9},       {"ten", 10},       {"eleven", 11},
      {"twelve", 12},   {"thirteen", 13},  {"fourteen", 14},  {"fifteen", 15},
      {"sixteen", 16},  {"seventeen", 17}, {"eighteen", 18},  {"nineteen", 19},
      {"twenty", 20},   {"thirty", 30},    {"forty", 40},     {"fifty", 50},
      {"sixty", 60},    {"seventy", 70},   {"eighty", 80},    {"ninety", 90},
      {"first", 1},     {"second", 2},     {"third", 3},      {"fourth", 4},
      {"fifth", 5},     {"sixth", 6},      {"seventh", 7},    {"eighth", 8},
      {"ninth", 9},     {"tenth", 10},     {"eleventh", 11},  {"twelfth", 12},
      {"thirteenth", 13}, {"fourteenth", 14}, {"fifteenth", 15}, {"sixteenth", 16},
      {"seventeenth", 17}, {"eighteenth", 18}, {"nineteenth", 19}, {"twentieth", 20},
      {"thirtieth", 30}, {"fortieth", 40}, {"fiftieth", 50},  {"sixtieth", 60},
      {"seventieth", 70}, {"eightieth", 80}, {"ninetieth", 90}};
  return words;
}

const std::map<std::string, long>& scale_words() {
  static const std::map<std::string, long> words = {{"hundred", 100},
                                                    {"thousand", 1000},
                                                    {"million", 1000000},
                                                    {"hundredth", 100},
                                                    {"thousandth", 1000},
                                                    {"millionth", 1000000},
                                                    {"billion", 1000000000},
                                                    {"billionth", 1000000000}};
  return words;
}

std::optional<long> parse_written_number(const std::vector<std::string>& words) {
  if (words.empty()) return std::nullopt;
  long total = 0;
  long current = 0;
  bool any = false;
  for (std::string w : words) {
    if (w == "and") continue;
    auto num = number_words().find(w);
    if (num != number_words().end()) {
      current += num->second;
      any = true;
      continue;
    }
    auto scale = scale_words().find(w);
    if (scale != scale_words().end()) {
      if (current == 0) current = 1;
      if (scale->second == 100) {
        current *= 100;
      } else {
        total += current * scale->second;
        current = 0;
      }
      any = true;
      continue;
    }
    return std::nullopt;
  }
  if (!any) return std::nullopt;
  return total + current;
}

std::optional<long> parse_digits(std::string_view s) {
  std::string digits;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
    } else if (c != ',') {
      return std::nullopt;
    }
  }
  if (digits.empty() || digits.size() > 18) return std::nullopt;
  return std::stol(digits);
}

const std::unordered_map<std::string, int>& month_names() {
  static const std::unordered_map<std::string, int> months = {
      {"january", 1}, {"february", 2}, {"march", 3},     {"april", 4},
      {"may", 5},     {"june", 6},     {"july", 7},      {"august", 8},
      {"september", 9}, {"october", 10}, {"november", 11}, {"december", 12},
      {"jan", 1},     {"feb", 2},      {"mar", 3},       {"apr", 4},
      {"jun", 6},     {"jul", 7},      {"aug", 8},       {"sep", 9},
      {"oct", 10},    {"nov", 11},     {"dec", 12}};
  return months;
}

std::string two_digits(int v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

// Recognized forms: "<year>", "<month> <year>", "<month> <day>, <year>",
// "<day> <month> <year>". Fields absent from the surface are omitted from
// the canonical form.
std::optional<std::string> parse_date(const std::vector<std::string>& raw_words) {
  std::vector<std::string> words;
  for (const std::string& w : raw_words) {
    std::string norm = normalize_word(w);
    if (!norm.empty()) words.push_back(std::move(norm));
  }
  auto year_of = [](const std::string& w) -> std::optional<int> {
    if (w.size() != 4) return std::nullopt;
    for (char c : w) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return std::stoi(w);
  };
  auto day_of = [](const std::string& w) -> std::optional<int> {
    if (w.empty() || w.size() > 2) return std::nullopt;
    for (char c : w) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    }
    int day = std::stoi(w);
    if (day < 1 || day > 31) return std::nullopt;
    return day;
  };
  auto month_of = [](const std::string& w) -> std::optional<int> {
    auto it = month_names().find(w);
    if (it == month_names().end()) return std::nullopt;
    return it->second;
  };

  if (words.size() == 1) {
    if (auto year = year_of(words[0])) return std::to_string(*year);
    return std::nullopt;
  }
  if (words.size() == 2) {
    auto month = month_of(words[0]);
    auto year = year_of(words[1]);
    if (month && year) return std::to_string(*year) + "-" + two_digits(*month);
    return std::nullopt;
  }
  if (words.size() == 3) {
    if (auto month = month_of(words[0])) {
      auto day = day_of(words[1]);
      auto year = year_of(words[2]);
      if (day && year)
        return std::to_string(*year) + "-" + two_digits(*month) + "-" + two_digits(*day);
    }
    if (auto day = day_of(words[0])) {
      auto month = month_of(words[1]);
      auto year = year_of(words[2]);
      if (month && year)
        return std::to_string(*year) + "-" + two_digits(*month) + "-" + two_digits(*day);
    }
    return std::nullopt;
  }
  return std::nullopt;
}

std::set<std::string> term_set(const Candidate& candidate) {
  return {candidate.terms.begin(), candidate.terms.end()};
}

double candidate_distance(const Candidate& a, const Candidate& b,
                          const SelectionConfig& config) {
  if (config.distance == SelectionConfig::Distance::Levenshtein)
    return static_cast<double>(levenshtein(a.surface, b.surface));
  return overlap_distance(term_set(a), term_set(b));
}

std::size_t non_whitespace_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) n++;
  }
  return n;
}

void sort_by_score(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.surface < b.surface;
  });
}

std::vector<std::string> content_stems(const Candidate& candidate, const Stopwords& stopwords) {
  std::vector<std::string> stems;
  for (const std::string& term : candidate.terms) {
    if (stopwords.contains(term) || is_punct(term)) continue;
    stems.push_back(stem(term));
  }
  std::sort(stems.begin(), stems.end());
  stems.erase(std::unique(stems.begin(), stems.end()), stems.end());
  return stems;
}

}  // namespace

double SelectionConfig::resolved_distance_threshold() const {
  if (distance_threshold >= 0) return distance_threshold;
  return distance == Distance::Levenshtein ? 2.0 : 0.5;
}

std::optional<SelectionConfig::Strategy> strategy_from_name(std::string_view name) {
  if (name == "aranea-top") return SelectionConfig::Strategy::AraneaTop;
  if (name == "justask") return SelectionConfig::Strategy::JustAsk;
  if (name == "ephyra") return SelectionConfig::Strategy::Ephyra;
  return std::nullopt;
}

std::string_view to_string(SelectionConfig::Strategy strategy) {
  switch (strategy) {
    case SelectionConfig::Strategy::AraneaTop: return "aranea-top";
    case SelectionConfig::Strategy::JustAsk: return "justask";
    case SelectionConfig::Strategy::Ephyra: return "ephyra";
  }
  return "aranea-top";
}

int levenshtein(std::string_view a, std::string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  std::vector<int> prev(a.size() + 1), curr(a.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t j = 1; j <= b.size(); j++) {
    curr[0] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); i++) {
      const int subst = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[i] = std::min({prev[i] + 1, curr[i - 1] + 1, subst});
    }
    std::swap(prev, curr);
  }
  return prev[a.size()];
}

double overlap_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1.0;
  std::size_t common = 0;
  for (const std::string& w : a) {
    if (b.contains(w)) common++;
  }
  return 1.0 - static_cast<double>(common) /
                   static_cast<double>(std::min(a.size(), b.size()));
}

std::string stem(std::string_view word) {
  std::string w;
  for (char c : word) w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  auto strip = [&](std::string_view suffix, bool repair_double) {
    if (!w.ends_with(suffix)) return false;
    if (w.size() - suffix.size() < 3) return false;
    if (suffix == "s" && w.ends_with("ss")) return false;
    w.resize(w.size() - suffix.size());
    if (repair_double && w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]) {
      const char c = w.back();
      const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
      if (!vowel && c != 'l' && c != 's') w.pop_back();
    }
    return true;
  };

  // Iterate to a fixpoint so stem() is idempotent ("meetings" -> "meeting"
  // -> "meet").
  bool changed = true;
  while (changed) {
    changed = strip("ing", true) || strip("ed", true) || strip("es", false) ||
              strip("ly", false) || strip("er", false) || strip("s", false);
  }
  return w;
}

std::string normalize_numeric(const std::string& surface, std::string_view category) {
  const std::string cat = upper_category(category);
  if (cat == "NUMERIC:COUNT" || cat == "NUM:COUNT") {
    const std::vector<std::string> words = split_words(surface);
    if (words.size() == 1) {
      if (auto value = parse_digits(words[0])) return std::to_string(*value);
    }
    std::vector<std::string> normalized;
    for (const std::string& w : words) {
      std::string n = normalize_word(w);
      if (!n.empty()) normalized.push_back(std::move(n));
    }
    if (auto value = parse_written_number(normalized)) return std::to_string(*value);
    return surface;
  }
  if (cat == "NUMERIC:DATE" || cat == "NUM:DATE") {
    if (auto iso = parse_date(split_words(surface))) return *iso;
    return surface;
  }
  return surface;
}

std::vector<AnswerCluster> cluster(const std::vector<Candidate>& candidates,
                                   const SelectionConfig& config) {
  const double threshold = config.resolved_distance_threshold();
  const std::size_t n = candidates.size();

  // Single-link: union components under the "distance <= threshold" relation.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; i++) {
    for (std::size_t j = i + 1; j < n; j++) {
      if (candidate_distance(candidates[i], candidates[j], config) <= threshold)
        parent[find(i)] = find(j);
    }
  }

  std::vector<AnswerCluster> clusters;
  std::unordered_map<std::size_t, std::size_t> root_to_cluster;
  for (std::size_t i = 0; i < n; i++) {
    std::size_t root = find(i);
    auto it = root_to_cluster.find(root);
    if (it == root_to_cluster.end()) {
      root_to_cluster.emplace(root, clusters.size());
      clusters.push_back({});
      it = root_to_cluster.find(root);
    }
    clusters[it->second].members.push_back(candidates[i]);
  }

  for (AnswerCluster& c : clusters) {
    c.score = static_cast<double>(c.members.size());
    c.representative = 0;
    for (std::size_t i = 1; i < c.members.size(); i++) {
      const std::string& best = c.members[c.representative].surface;
      const std::string& cur = c.members[i].surface;
      if (cur.size() > best.size() || (cur.size() == best.size() && cur < best))
        c.representative = i;
    }
  }
  return clusters;
}

JustAskResult justask_select(const std::vector<Candidate>& candidates,
                             const std::string& question_text, std::string_view category,
                             const SelectionConfig& config, const Stopwords& stopwords) {
  JustAskResult result;
  if (candidates.empty()) return result;

  for (Candidate cand : candidates) {
    const std::string normalized = normalize_numeric(cand.surface, category);
    if (normalized != cand.surface) {
      cand.surface = normalized;
      cand.display = normalized;
      cand.terms = split_words(normalized);
    }
    result.pool.push_back(std::move(cand));
  }

  result.clusters = cluster(result.pool, config);

  // Content words of the question, the containment target.
  std::string question_content;
  try {
    for (const Token& tok : tokenize(question_text, stopwords)) {
      if (tok.is_stopword || is_punct(tok.surface)) continue;
      if (!question_content.empty()) question_content += ' ';
      question_content += tok.normalized;
    }
  } catch (const InterpretError&) {
    // empty question: nothing can be contained
  }

  const AnswerCluster* best = nullptr;
  for (const AnswerCluster& c : result.clusters) {
    bool contained = false;
    for (const Candidate& member : c.members) {
      if (!member.surface.empty() &&
          question_content.find(member.surface) != std::string::npos) {
        contained = true;
        break;
      }
    }
    if (contained) continue;
    if (!best || c.score > best->score ||
        (c.score == best->score &&
         c.members[c.representative].surface < best->members[best->representative].surface))
      best = &c;
  }
  if (best) result.answer = best->members[best->representative];
  return result;
}

std::vector<Candidate> merge_duplicates(std::vector<Candidate> candidates,
                                        const Stopwords& stopwords) {
  sort_by_score(candidates);
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < candidates.size() && !merged; i++) {
      for (std::size_t j = i + 1; j < candidates.size() && !merged; j++) {
        const std::vector<std::string> a = content_stems(candidates[i], stopwords);
        const std::vector<std::string> b = content_stems(candidates[j], stopwords);
        if (a.empty() || a != b) continue;
        candidates[i].score += candidates[j].score;
        candidates[i].support.insert(candidates[j].support.begin(),
                                     candidates[j].support.end());
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(j));
        sort_by_score(candidates);
        merged = true;
      }
    }
  }
  return candidates;
}

EphyraResult ephyra_select(std::vector<Candidate> candidates, const SelectionConfig& config,
                           const Stopwords& stopwords) {
  sort_by_score(candidates);
  candidates = merge_duplicates(std::move(candidates), stopwords);

  // Malformed answers: leading/trailing stopword or nothing but punctuation.
  std::vector<Candidate> well_formed;
  for (Candidate& cand : candidates) {
    if (cand.terms.empty()) continue;
    if (is_punct(cand.surface)) continue;
    bool all_punct = true;
    for (const std::string& term : cand.terms) {
      if (!is_punct(term)) all_punct = false;
    }
    if (all_punct) continue;
    if (stopwords.contains(cand.terms.front()) || stopwords.contains(cand.terms.back())) continue;
    well_formed.push_back(std::move(cand));
  }

  // Longest prefix whose total non-whitespace length fits the cap.
  EphyraResult result;
  std::size_t used = 0;
  for (Candidate& cand : well_formed) {
    const std::size_t len = non_whitespace_length(cand.surface);
    if (used + len > static_cast<std::size_t>(config.max_output_chars)) break;
    used += len;
    result.ranked.push_back(std::move(cand));
  }

  std::erase_if(result.ranked,
                [&](const Candidate& c) { return c.score < config.score_threshold; });
  return result;
}

}  // namespace redqa
