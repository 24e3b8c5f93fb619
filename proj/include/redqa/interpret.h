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

#ifndef REDQA_INTERPRET_H_
#define REDQA_INTERPRET_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace redqa {

// Coarse tags assigned by the closed-lexicon/suffix tagger.
enum class Pos { Det, Noun, VerbBe, Verb, Adj, Adv, Prep, Wh, Num, Other };

std::string_view to_string(Pos pos);
std::optional<Pos> pos_from_name(std::string_view name);

class Stopwords {
 public:
  Stopwords() = default;
  static Stopwords load(const std::filesystem::path& path);
  static Stopwords from_words(const std::vector<std::string>& words);

  bool contains(std::string_view normalized) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct Token {
  std::string surface;
  std::string normalized;
  Pos pos = Pos::Other;
  bool is_stopword = false;
};

class InterpretError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Splits off punctuation as separate tokens (intra-word apostrophes and
// hyphens stay put), drops the trailing '?', lowercases into `normalized`,
// and runs the tagger. Throws InterpretError on empty/whitespace-only input.
std::vector<Token> tokenize(std::string_view question, const Stopwords& stopwords);

// Closed word lists first, then suffix heuristics, default NOUN.
void tag_pos(std::vector<Token>& tokens);

enum class QueryKind { Baseline, Exact, Inexact, Keyword };
std::string_view to_string(QueryKind kind);

// Marks where the anticipated answer sits relative to the query terms.
// `position` indexes into terms (0 = before every term, terms.size() = after
// all of them). `glue` is a preposition that belongs to the answer phrase —
// the "in" of "... is located in ?y" — so it is part of the exact-match
// phrase but not a query term.
struct Slot {
  int position = 0;
  std::string glue;

  bool operator==(const Slot&) const = default;
};

struct Query {
  QueryKind kind = QueryKind::Baseline;
  std::vector<std::string> terms;  // normalized
  std::optional<Slot> slot;
  double weight = 1.0;

  // Human-readable form with the ?y slot inlined.
  std::string text() const;
  // Deterministic cache-key component: kind prefix + terms + slot marker.
  std::string canonical() const;
  // Non-stopword terms, original order.
  std::vector<std::string> content_terms(const Stopwords& stopwords) const;
  // Terms plus glue with the slot removed; the phrase exact matching needs.
  std::vector<std::string> phrase_terms() const;

  bool operator==(const Query&) const = default;
};

// One reformulation rule: a token-predicate sequence and a rewrite template.
// File syntax: `name :: match-template => rewrite-template` with literal
// words, %NOUN%-style class predicates, $1..$9 captures, and a single ?y.
struct ReformulationPattern {
  enum class ElemKind { Literal, PosClass, Capture, AnswerSlot };
  struct Elem {
    ElemKind kind = ElemKind::Literal;
    std::string literal;
    Pos pos = Pos::Other;
    int capture = 0;  // 1-based
  };

  std::string name;
  std::vector<Elem> match;
  std::vector<Elem> rewrite;

  static ReformulationPattern parse(std::string_view line);
};

std::vector<ReformulationPattern> load_patterns(const std::filesystem::path& path);
std::vector<ReformulationPattern> parse_patterns(std::string_view text);

struct QueryWeights {
  double base = 1.0;
  double exact = 5.0;
};

// Applies every pattern in order; each match yields an (exact, inexact)
// pair. Matching is leftmost-first over the token sequence; captures are
// greedy with backtracking. Non-matching questions yield the empty list.
std::vector<std::pair<Query, Query>> apply_patterns(
    const std::vector<Token>& tokens,
    const std::vector<ReformulationPattern>& patterns,
    const QueryWeights& weights = {});

// Content words of the question, original order. Throws InterpretError when
// nothing survives the stopword/punctuation strip.
Query keyword_query(const std::vector<Token>& tokens, double weight = 1.0);

struct QuerySet {
  std::vector<Query> queries;  // baseline, keyword, then exact/inexact pairs
};

QuerySet generate_queries(std::string_view question,
                          const std::vector<ReformulationPattern>& patterns,
                          const Stopwords& stopwords,
                          const QueryWeights& weights = {});

}  // namespace redqa

#endif  // REDQA_INTERPRET_H_
