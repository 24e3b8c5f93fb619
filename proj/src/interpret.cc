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

#include "redqa/interpret.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "redqa/corpora.h"

namespace redqa {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool is_intra_word(char c, std::string_view rest_left, std::string_view rest_right) {
  // Apostrophes and hyphens stay inside a word when flanked by word chars.
  if (c != '\'' && c != '-') return false;
  return !rest_left.empty() && is_word_char(rest_left.back()) && !rest_right.empty() &&
         is_word_char(rest_right.front());
}

std::string lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

const std::unordered_map<std::string, Pos>& closed_lexicon() {
  static const std::unordered_map<std::string, Pos> lexicon = {
      // interrogatives
      {"who", Pos::Wh}, {"whom", Pos::Wh}, {"whose", Pos::Wh}, {"what", Pos::Wh},
      {"which", Pos::Wh}, {"when", Pos::Wh}, {"where", Pos::Wh}, {"why", Pos::Wh},
      {"how", Pos::Wh},
      // be-forms
      {"is", Pos::VerbBe}, {"are", Pos::VerbBe}, {"was", Pos::VerbBe}, {"were", Pos::VerbBe},
      {"am", Pos::VerbBe}, {"be", Pos::VerbBe}, {"been", Pos::VerbBe}, {"being", Pos::VerbBe},
      // determiners
      {"the", Pos::Det}, {"a", Pos::Det}, {"an", Pos::Det}, {"this", Pos::Det},
      {"that", Pos::Det}, {"these", Pos::Det}, {"those", Pos::Det},
      // prepositions
      {"of", Pos::Prep}, {"in", Pos::Prep}, {"on", Pos::Prep}, {"at", Pos::Prep},
      {"by", Pos::Prep}, {"for", Pos::Prep}, {"with", Pos::Prep}, {"from", Pos::Prep},
      {"to", Pos::Prep}, {"about", Pos::Prep}, {"as", Pos::Prep}, {"into", Pos::Prep},
      {"over", Pos::Prep}, {"after", Pos::Prep}, {"under", Pos::Prep}, {"between", Pos::Prep},
      {"near", Pos::Prep}, {"during", Pos::Prep},
      // frequent verbs the suffix rules miss
      {"do", Pos::Verb}, {"does", Pos::Verb}, {"did", Pos::Verb}, {"have", Pos::Verb},
      {"has", Pos::Verb}, {"had", Pos::Verb}, {"stand", Pos::Verb}, {"live", Pos::Verb},
      {"become", Pos::Verb}, {"win", Pos::Verb}, {"write", Pos::Verb}, {"wrote", Pos::Verb},
      // measure adjectives the how-questions lean on
      {"old", Pos::Adj}, {"long", Pos::Adj}, {"hot", Pos::Adj}, {"many", Pos::Adj},
      {"much", Pos::Adj}, {"far", Pos::Adj}, {"tall", Pos::Adj}, {"big", Pos::Adj},
      {"high", Pos::Adj}, {"deep", Pos::Adj}, {"wide", Pos::Adj}, {"large", Pos::Adj},
      // conjunctions and misc function words
      {"and", Pos::Other}, {"or", Pos::Other}, {"not", Pos::Other}, {"no", Pos::Other},
  };
  return lexicon;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',') return false;
  }
  return std::isdigit(static_cast<unsigned char>(s.front())) != 0;
}

bool is_punct_token(std::string_view s) {
  for (char c : s) {
    if (is_word_char(c)) return false;
  }
  return !s.empty();
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::Det: return "DET";
    case Pos::Noun: return "NOUN";
    case Pos::VerbBe: return "VERB-BE";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Prep: return "PREP";
    case Pos::Wh: return "WH";
    case Pos::Num: return "NUM";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<Pos> pos_from_name(std::string_view name) {
  static const std::unordered_map<std::string, Pos> names = {
      {"DET", Pos::Det},   {"NOUN", Pos::Noun}, {"VERB-BE", Pos::VerbBe}, {"VERB", Pos::Verb},
      {"ADJ", Pos::Adj},   {"ADV", Pos::Adv},   {"PREP", Pos::Prep},      {"WH", Pos::Wh},
      {"NUM", Pos::Num},   {"OTHER", Pos::Other}};
  auto it = names.find(std::string(name));
  if (it == names.end()) return std::nullopt;
  return it->second;
}

Stopwords Stopwords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword list " + path.string());
  Stopwords sw;
  std::string line;
  while (std::getline(in, line)) {
    std::string word = normalize_word(line);
    if (!word.empty() && line.find('#') != 0) sw.words_.insert(std::move(word));
  }
  return sw;
}

Stopwords Stopwords::from_words(const std::vector<std::string>& words) {
  Stopwords sw;
  for (const std::string& w : words) {
    std::string norm = normalize_word(w);
    if (!norm.empty()) sw.words_.insert(std::move(norm));
  }
  return sw;
}

bool Stopwords::contains(std::string_view normalized) const {
  return words_.contains(std::string(normalized));
}

std::vector<Token> tokenize(std::string_view question, const Stopwords& stopwords) {
  bool any_content = false;
  for (char c : question) {
    if (!std::isspace(static_cast<unsigned char>(c))) any_content = true;
  }
  if (!any_content) throw InterpretError("cannot tokenize empty question");

  std::vector<Token> tokens;
  auto emit = [&](std::string_view piece) {
    if (piece.empty()) return;
    Token tok;
    tok.surface = std::string(piece);
    tok.normalized = is_punct_token(piece) ? lower(piece) : normalize_word(piece);
    if (tok.normalized.empty()) tok.normalized = lower(piece);
    tokens.push_back(std::move(tok));
  };

  std::size_t i = 0;
  while (i < question.size()) {
    while (i < question.size() && std::isspace(static_cast<unsigned char>(question[i]))) i++;
    std::size_t start = i;
    while (i < question.size() && !std::isspace(static_cast<unsigned char>(question[i]))) i++;
    std::string_view chunk = question.substr(start, i - start);
    if (chunk.empty()) continue;

    // Peel punctuation off both ends, then split any internal runs that are
    // not intra-word apostrophes/hyphens.
    std::size_t pos = 0;
    std::size_t word_start = 0;
    std::string pending;
    while (pos < chunk.size()) {
      char c = chunk[pos];
      if (is_word_char(c) || is_intra_word(c, chunk.substr(word_start, pos - word_start),
                                           chunk.substr(pos + 1))) {
        pos++;
        continue;
      }
      if (pos > word_start) emit(chunk.substr(word_start, pos - word_start));
      emit(chunk.substr(pos, 1));
      pos++;
      word_start = pos;
    }
    if (pos > word_start) emit(chunk.substr(word_start, pos - word_start));
  }

  // The interrogative's trailing '?' is not part of the token stream.
  while (!tokens.empty() && tokens.back().surface == "?") tokens.pop_back();
  if (tokens.empty()) throw InterpretError("cannot tokenize empty question");

  tag_pos(tokens);
  for (Token& tok : tokens) tok.is_stopword = stopwords.contains(tok.normalized);
  return tokens;
}

void tag_pos(std::vector<Token>& tokens) {
  const auto& lexicon = closed_lexicon();
  for (Token& tok : tokens) {
    if (is_punct_token(tok.surface)) {
      tok.pos = Pos::Other;
      continue;
    }
    if (all_digits(tok.normalized)) {
      tok.pos = Pos::Num;
      continue;
    }
    auto it = lexicon.find(tok.normalized);
    if (it != lexicon.end()) {
      tok.pos = it->second;
      continue;
    }
    const std::string& w = tok.normalized;
    if (w.size() > 3 && w.ends_with("ed")) {
      tok.pos = Pos::Verb;
    } else if (w.size() > 4 && w.ends_with("ing")) {
      tok.pos = Pos::Verb;
    } else if (w.size() > 3 && w.ends_with("ly")) {
      tok.pos = Pos::Adv;
    } else if (w.size() > 4 && (w.ends_with("ous") || w.ends_with("ful") || w.ends_with("ive") ||
                                w.ends_with("able"))) {
      tok.pos = Pos::Adj;
    } else {
      tok.pos = Pos::Noun;
    }
  }
}

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Baseline: return "baseline";
    case QueryKind::Exact: return "exact";
    case QueryKind::Inexact: return "inexact";
    case QueryKind::Keyword: return "keyword";
  }
  return "baseline";
}

std::string Query::text() const {
  std::string out;
  int pos = slot ? slot->position : -1;
  for (int i = 0; i <= static_cast<int>(terms.size()); i++) {
    if (slot && i == pos) {
      if (!out.empty()) out += ' ';
      if (!slot->glue.empty()) out += slot->glue + ' ';
      out += "?y";
    }
    if (i == static_cast<int>(terms.size())) break;
    if (!out.empty()) out += ' ';
    out += terms[i];
  }
  return out;
}

std::string Query::canonical() const {
  std::string out;
  switch (kind) {
    case QueryKind::Baseline: out = "B:"; break;
    case QueryKind::Exact: out = "E:"; break;
    case QueryKind::Inexact: out = "I:"; break;
    case QueryKind::Keyword: out = "K:"; break;
  }
  for (std::size_t i = 0; i < terms.size(); i++) {
    if (i) out += ' ';
    out += terms[i];
  }
  if (slot) {
    out += "|?y@" + std::to_string(slot->position);
    if (!slot->glue.empty()) out += "+" + slot->glue;
  }
  return out;
}

std::vector<std::string> Query::content_terms(const Stopwords& stopwords) const {
  std::vector<std::string> out;
  for (const std::string& term : terms) {
    if (!stopwords.contains(term) && !is_punct_token(term)) out.push_back(term);
  }
  return out;
}

std::vector<std::string> Query::phrase_terms() const {
  std::vector<std::string> out;
  int pos = slot ? slot->position : -1;
  for (int i = 0; i <= static_cast<int>(terms.size()); i++) {
    if (slot && i == pos && !slot->glue.empty()) out.push_back(slot->glue);
    if (i == static_cast<int>(terms.size())) break;
    out.push_back(terms[i]);
  }
  return out;
}

namespace {

ReformulationPattern::Elem parse_elem(std::string_view word, bool in_rewrite,
                                      std::string_view line) {
  using Elem = ReformulationPattern::Elem;
  using ElemKind = ReformulationPattern::ElemKind;
  Elem elem;
  if (word == "?y") {
    elem.kind = ElemKind::AnswerSlot;
    return elem;
  }
  if (word.size() == 2 && word[0] == '$' && word[1] >= '1' && word[1] <= '9') {
    elem.kind = ElemKind::Capture;
    elem.capture = word[1] - '0';
    return elem;
  }
  if (word.size() > 2 && word.front() == '%' && word.back() == '%') {
    std::optional<Pos> pos = pos_from_name(word.substr(1, word.size() - 2));
    if (!pos) throw InterpretError("unknown POS class in pattern: " + std::string(line));
    if (in_rewrite) throw InterpretError("POS class not allowed in rewrite: " + std::string(line));
    elem.kind = ElemKind::PosClass;
    elem.pos = *pos;
    return elem;
  }
  elem.kind = ElemKind::Literal;
  elem.literal = lower(word);
  return elem;
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) i++;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

}  // namespace

ReformulationPattern ReformulationPattern::parse(std::string_view line) {
  std::size_t name_sep = line.find("::");
  std::size_t rewrite_sep = line.find("=>");
  if (name_sep == std::string_view::npos || rewrite_sep == std::string_view::npos ||
      rewrite_sep < name_sep)
    throw InterpretError("pattern line needs 'name :: match => rewrite': " + std::string(line));

  ReformulationPattern pattern;
  for (std::string_view w : split_words(line.substr(0, name_sep)))
    pattern.name += pattern.name.empty() ? std::string(w) : " " + std::string(w);

  std::vector<int> bound_captures;
  for (std::string_view w :
       split_words(line.substr(name_sep + 2, rewrite_sep - name_sep - 2))) {
    Elem elem = parse_elem(w, false, line);
    if (elem.kind == ElemKind::AnswerSlot)
      throw InterpretError("?y not allowed in match template: " + std::string(line));
    if (elem.kind == ElemKind::Capture) bound_captures.push_back(elem.capture);
    pattern.match.push_back(std::move(elem));
  }

  int slots = 0;
  for (std::string_view w : split_words(line.substr(rewrite_sep + 2))) {
    Elem elem = parse_elem(w, true, line);
    if (elem.kind == ElemKind::AnswerSlot) slots++;
    if (elem.kind == ElemKind::Capture &&
        std::find(bound_captures.begin(), bound_captures.end(), elem.capture) ==
            bound_captures.end())
      throw InterpretError("rewrite references unbound capture: " + std::string(line));
    pattern.rewrite.push_back(std::move(elem));
  }
  if (slots != 1)
    throw InterpretError("rewrite must contain exactly one ?y: " + std::string(line));
  if (pattern.name.empty() || pattern.match.empty())
    throw InterpretError("pattern needs a name and a match template: " + std::string(line));
  return pattern;
}

std::vector<ReformulationPattern> parse_patterns(std::string_view text) {
  std::vector<ReformulationPattern> patterns;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string_view line = end == std::string_view::npos ? text.substr(start)
                                                          : text.substr(start, end - start);
    std::string_view trimmed = line;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
      trimmed.remove_prefix(1);
    if (!trimmed.empty() && trimmed.front() != '#')
      patterns.push_back(ReformulationPattern::parse(line));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return patterns;
}

std::vector<ReformulationPattern> load_patterns(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open pattern file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_patterns(buf.str());
}

namespace {

using Elem = ReformulationPattern::Elem;
using ElemKind = ReformulationPattern::ElemKind;

// Matches match[mi..] against tokens[ti..); captures are greedy and give
// back tokens when the tail fails to match.
bool match_here(const std::vector<Elem>& match, std::size_t mi, const std::vector<Token>& tokens,
                std::size_t ti, std::vector<std::vector<std::string>>& captures) {
  if (mi == match.size()) return true;
  const Elem& elem = match[mi];
  switch (elem.kind) {
    case ElemKind::Literal:
      if (ti >= tokens.size() || tokens[ti].normalized != elem.literal) return false;
      return match_here(match, mi + 1, tokens, ti + 1, captures);
    case ElemKind::PosClass:
      if (ti >= tokens.size() || tokens[ti].pos != elem.pos) return false;
      return match_here(match, mi + 1, tokens, ti + 1, captures);
    case ElemKind::Capture: {
      for (std::size_t take = tokens.size() - ti; take >= 1; take--) {
        std::vector<std::string> captured;
        for (std::size_t k = 0; k < take; k++) captured.push_back(tokens[ti + k].normalized);
        captures[elem.capture] = std::move(captured);
        if (match_here(match, mi + 1, tokens, ti + take, captures)) return true;
      }
      captures[elem.capture].clear();
      return false;
    }
    case ElemKind::AnswerSlot:
      return false;  // never appears in match templates
  }
  return false;
}

bool is_preposition(const std::string& word) {
  auto it = closed_lexicon().find(word);
  return it != closed_lexicon().end() && it->second == Pos::Prep;
}

}  // namespace

std::vector<std::pair<Query, Query>> apply_patterns(
    const std::vector<Token>& tokens, const std::vector<ReformulationPattern>& patterns,
    const QueryWeights& weights) {
  std::vector<std::pair<Query, Query>> out;
  for (const ReformulationPattern& pattern : patterns) {
    std::vector<std::vector<std::string>> captures(10);
    bool matched = false;
    for (std::size_t start = 0; start < tokens.size() && !matched; start++)
      matched = match_here(pattern.match, 0, tokens, start, captures);
    if (!matched) continue;

    // Expand the rewrite. A preposition directly before ?y belongs to the
    // answer phrase: it becomes slot glue rather than a query term.
    std::vector<std::string> terms;
    Slot slot;
    for (const Elem& elem : pattern.rewrite) {
      switch (elem.kind) {
        case ElemKind::Literal:
          terms.push_back(elem.literal);
          break;
        case ElemKind::Capture:
          for (const std::string& w : captures[elem.capture]) terms.push_back(w);
          break;
        case ElemKind::AnswerSlot:
          if (!terms.empty() && is_preposition(terms.back())) {
            slot.glue = terms.back();
            terms.pop_back();
          }
          slot.position = static_cast<int>(terms.size());
          break;
        case ElemKind::PosClass:
          break;  // rejected at parse time
      }
    }

    Query exact;
    exact.kind = QueryKind::Exact;
    exact.terms = terms;
    exact.slot = slot;
    exact.weight = weights.exact;

    Query inexact;
    inexact.kind = QueryKind::Inexact;
    inexact.terms = std::move(terms);
    inexact.weight = weights.base;

    out.emplace_back(std::move(exact), std::move(inexact));
  }
  return out;
}

Query keyword_query(const std::vector<Token>& tokens, double weight) {
  Query q;
  q.kind = QueryKind::Keyword;
  q.weight = weight;
  for (const Token& tok : tokens) {
    if (!tok.is_stopword && !is_punct_token(tok.surface)) q.terms.push_back(tok.normalized);
  }
  if (q.terms.empty()) throw InterpretError("no content words");
  return q;
}

QuerySet generate_queries(std::string_view question,
                          const std::vector<ReformulationPattern>& patterns,
                          const Stopwords& stopwords, const QueryWeights& weights) {
  const std::vector<Token> tokens = tokenize(question, stopwords);

  QuerySet set;
  Query baseline;
  baseline.kind = QueryKind::Baseline;
  baseline.weight = weights.base;
  for (const Token& tok : tokens) baseline.terms.push_back(tok.normalized);
  set.queries.push_back(std::move(baseline));
  set.queries.push_back(keyword_query(tokens, weights.base));
  for (auto& [exact, inexact] : apply_patterns(tokens, patterns, weights)) {
    set.queries.push_back(std::move(exact));
    set.queries.push_back(std::move(inexact));
  }
  return set;
}

}  // namespace redqa
