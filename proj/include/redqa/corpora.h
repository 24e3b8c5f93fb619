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

#ifndef REDQA_CORPORA_H_
#define REDQA_CORPORA_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace redqa {

// Leading-interrogative buckets used by the per-question-word breakdown.
enum class QuestionWord { Who, When, Where, What, Which, How, Name, Other };

std::string_view to_string(QuestionWord word);
QuestionWord question_word_of(std::string_view question_text);

struct QuestionRecord {
  std::string id;
  std::string text;
  std::vector<std::string> gold_answers;
  std::optional<std::string> category;
  QuestionWord question_word = QuestionWord::Other;

  bool operator==(const QuestionRecord&) const = default;
};

struct SnippetRecord {
  std::optional<std::string> question_id;
  std::string url;
  std::string title;
  std::string text;
  int rank = 1;
  std::string source_tag;

  bool operator==(const SnippetRecord&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, long line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Gold-QA corpus: one record per line,
//   Question <id>. Q:<question> - {<answer>} {<answer>}... - <CATEGORY>
// The trailing category is optional; '#'-prefixed lines are comments.
std::vector<QuestionRecord> parse_gold_qa(std::string_view text);
std::string render_gold_qa(const std::vector<QuestionRecord>& records);

// TREC-style lists: one question per line as (id, type, question), tab- or
// whitespace-delimited. Gold answers stay empty; the type becomes category.
std::vector<QuestionRecord> parse_trec_questions(std::string_view text);

// Lowercases and strips surrounding punctuation; no stemming. Returns the
// empty string for tokens that are punctuation only.
std::string normalize_word(std::string_view word);

// Document-frequency statistics backing the idf score.
struct TermStats {
  long total_docs = 0;
  std::unordered_map<std::string, long> doc_freq;

  // Unseen words count as 1 so log(N / W_cnt) stays finite and rare words
  // keep the highest weight.
  long count(const std::string& normalized_word) const;
};

class TermStatsBuilder {
 public:
  void add_document(std::string_view text);
  // Throws std::invalid_argument when no documents were added.
  TermStats build() const;

 private:
  TermStats stats_;
};

TermStats build_term_stats(const std::vector<std::string>& documents);

// On-disk format: header line "N=<int>", then "<word>\t<count>" lines.
TermStats load_term_stats(const std::filesystem::path& path);
TermStats parse_term_stats(std::string_view text);
std::string render_term_stats(const TermStats& stats);
void save_term_stats(const TermStats& stats, const std::filesystem::path& path);

// Snippet corpus: JSON-lines records with fields question_id, url, title,
// text, rank, source_tag. Lookups are deterministic and rank-ordered.
class SnippetStore {
 public:
  static SnippetStore load(const std::filesystem::path& path);
  static SnippetStore parse(std::string_view text);
  static SnippetStore from_records(std::vector<SnippetRecord> records);

  void save(const std::filesystem::path& path) const;
  std::string render() const;

  std::vector<const SnippetRecord*> by_question(const std::string& question_id) const;
  const std::vector<SnippetRecord>& all() const { return records_; }
  std::size_t size() const { return records_.size(); }

 private:
  void index();

  std::vector<SnippetRecord> records_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_question_;
};

}  // namespace redqa

#endif  // REDQA_CORPORA_H_
