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

#include "redqa/corpora.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "record_json.h"

namespace redqa {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_blank_or_comment(std::string_view line) {
  std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string_view to_string(QuestionWord word) {
  switch (word) {
    case QuestionWord::Who: return "who";
    case QuestionWord::When: return "when";
    case QuestionWord::Where: return "where";
    case QuestionWord::What: return "what";
    case QuestionWord::Which: return "which";
    case QuestionWord::How: return "how";
    case QuestionWord::Name: return "name";
    case QuestionWord::Other: return "other";
  }
  return "other";
}

QuestionWord question_word_of(std::string_view question_text) {
  std::string_view t = trim(question_text);
  std::size_t end = 0;
  while (end < t.size() && !std::isspace(static_cast<unsigned char>(t[end]))) end++;
  std::string first;
  for (char c : t.substr(0, end)) {
    if (std::isalpha(static_cast<unsigned char>(c)))
      first.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (first == "who") return QuestionWord::Who;
  if (first == "when") return QuestionWord::When;
  if (first == "where") return QuestionWord::Where;
  if (first == "what") return QuestionWord::What;
  if (first == "which") return QuestionWord::Which;
  if (first == "how") return QuestionWord::How;
  if (first == "name") return QuestionWord::Name;
  return QuestionWord::Other;
}

std::vector<QuestionRecord> parse_gold_qa(std::string_view text) {
  std::vector<QuestionRecord> records;
  std::unordered_set<std::string> seen_ids;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); i++) {
    const long line_no = static_cast<long>(i) + 1;
    std::string_view line = lines[i];
    if (is_blank_or_comment(line)) continue;
    line = trim(line);

    constexpr std::string_view kPrefix = "Question ";
    if (!line.starts_with(kPrefix)) throw ParseError("expected 'Question <id>.'", line_no);
    line.remove_prefix(kPrefix.size());
    std::size_t dot = line.find('.');
    if (dot == std::string_view::npos || dot == 0)
      throw ParseError("missing '.' after question id", line_no);
    QuestionRecord rec;
    rec.id = std::string(trim(line.substr(0, dot)));
    line.remove_prefix(dot + 1);
    line = trim(line);
    if (!line.starts_with("Q:")) throw ParseError("missing 'Q:' question marker", line_no);
    line.remove_prefix(2);

    std::size_t answers_at = line.find(" - {");
    if (answers_at == std::string_view::npos)
      throw ParseError("missing '- {...}' answer section", line_no);
    rec.text = std::string(trim(line.substr(0, answers_at)));
    if (rec.text.empty()) throw ParseError("empty question text", line_no);
    line.remove_prefix(answers_at + 3);  // keep the '{'

    while (true) {
      line = trim(line);
      if (line.empty() || line.front() != '{') break;
      std::size_t close = line.find('}');
      if (close == std::string_view::npos) throw ParseError("unterminated '{' answer group", line_no);
      std::string answer(trim(line.substr(1, close - 1)));
      if (answer.empty()) throw ParseError("empty answer group", line_no);
      rec.gold_answers.push_back(std::move(answer));
      line.remove_prefix(close + 1);
    }
    if (rec.gold_answers.empty()) throw ParseError("no answer groups", line_no);

    line = trim(line);
    if (!line.empty()) {
      if (!line.starts_with("-")) throw ParseError("unexpected trailing text", line_no);
      line.remove_prefix(1);
      std::string category(trim(line));
      if (category.empty()) throw ParseError("empty category after '-'", line_no);
      rec.category = std::move(category);
    }

    if (!seen_ids.insert(rec.id).second)
      throw ParseError("duplicate question id '" + rec.id + "'", line_no);
    rec.question_word = question_word_of(rec.text);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string render_gold_qa(const std::vector<QuestionRecord>& records) {
  std::string out;
  for (const QuestionRecord& rec : records) {
    out += "Question " + rec.id + ". Q:" + rec.text + " -";
    for (const std::string& answer : rec.gold_answers) out += " {" + answer + "}";
    if (rec.category) out += " - " + *rec.category;
    out += '\n';
  }
  return out;
}

std::vector<QuestionRecord> parse_trec_questions(std::string_view text) {
  std::vector<QuestionRecord> records;
  std::unordered_set<std::string> seen_ids;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); i++) {
    const long line_no = static_cast<long>(i) + 1;
    std::string_view line = lines[i];
    if (is_blank_or_comment(line)) continue;

    std::string_view id, type, question;
    if (line.find('\t') != std::string_view::npos) {
      std::size_t t1 = line.find('\t');
      std::size_t t2 = line.find('\t', t1 + 1);
      if (t2 == std::string_view::npos) throw ParseError("expected 3 tab-delimited fields", line_no);
      id = trim(line.substr(0, t1));
      type = trim(line.substr(t1 + 1, t2 - t1 - 1));
      question = trim(line.substr(t2 + 1));
    } else {
      std::string_view rest = trim(line);
      std::size_t s1 = rest.find(' ');
      if (s1 == std::string_view::npos) throw ParseError("expected (id, type, question) fields", line_no);
      id = rest.substr(0, s1);
      rest = trim(rest.substr(s1 + 1));
      std::size_t s2 = rest.find(' ');
      if (s2 == std::string_view::npos) throw ParseError("expected (id, type, question) fields", line_no);
      type = rest.substr(0, s2);
      question = trim(rest.substr(s2 + 1));
    }
    if (id.empty() || type.empty() || question.empty())
      throw ParseError("missing field", line_no);

    QuestionRecord rec;
    rec.id = std::string(id);
    rec.text = std::string(question);
    rec.category = std::string(type);
    rec.question_word = question_word_of(rec.text);
    if (!seen_ids.insert(rec.id).second)
      throw ParseError("duplicate question id '" + rec.id + "'", line_no);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string normalize_word(std::string_view word) {
  std::size_t begin = 0, end = word.size();
  while (begin < end && !std::isalnum(static_cast<unsigned char>(word[begin]))) begin++;
  while (end > begin && !std::isalnum(static_cast<unsigned char>(word[end - 1]))) end--;
  std::string out;
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; i++)
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(word[i]))));
  return out;
}

long TermStats::count(const std::string& normalized_word) const {
  auto it = doc_freq.find(normalized_word);
  return it == doc_freq.end() ? 1 : it->second;
}

void TermStatsBuilder::add_document(std::string_view text) {
  stats_.total_docs++;
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) i++;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) i++;
    if (i > start) {
      std::string word = normalize_word(text.substr(start, i - start));
      if (!word.empty() && seen.insert(word).second) stats_.doc_freq[word]++;
    }
  }
}

TermStats TermStatsBuilder::build() const {
  if (stats_.total_docs == 0) throw std::invalid_argument("term stats need at least one document");
  return stats_;
}

TermStats build_term_stats(const std::vector<std::string>& documents) {
  TermStatsBuilder builder;
  for (const std::string& doc : documents) builder.add_document(doc);
  return builder.build();
}

TermStats parse_term_stats(std::string_view text) {
  const std::vector<std::string_view> lines = split_lines(text);
  TermStats stats;
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); i++) {
    const long line_no = static_cast<long>(i) + 1;
    std::string_view line = lines[i];
    if (is_blank_or_comment(line)) continue;
    if (!have_header) {
      if (!line.starts_with("N=")) throw ParseError("expected 'N=<int>' header", line_no);
      stats.total_docs = std::stol(std::string(line.substr(2)));
      if (stats.total_docs < 1) throw ParseError("N must be >= 1", line_no);
      have_header = true;
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected '<word>\\t<count>'", line_no);
    std::string word(trim(line.substr(0, tab)));
    long count = std::stol(std::string(line.substr(tab + 1)));
    if (word.empty()) throw ParseError("empty word", line_no);
    if (count < 1 || count > stats.total_docs)
      throw ParseError("count outside [1, N] for '" + word + "'", line_no);
    stats.doc_freq[word] = count;
  }
  if (!have_header) throw ParseError("missing 'N=<int>' header", 1);
  return stats;
}

std::string render_term_stats(const TermStats& stats) {
  std::string out = "N=" + std::to_string(stats.total_docs) + "\n";
  std::vector<std::pair<std::string, long>> sorted(stats.doc_freq.begin(), stats.doc_freq.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [word, count] : sorted) out += word + "\t" + std::to_string(count) + "\n";
  return out;
}

TermStats load_term_stats(const std::filesystem::path& path) {
  return parse_term_stats(read_file(path));
}

void save_term_stats(const TermStats& stats, const std::filesystem::path& path) {
  write_file(path, render_term_stats(stats));
}

SnippetStore SnippetStore::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw std::runtime_error("snippet corpus not found: " + path.string());
  return parse(read_file(path));
}

SnippetStore SnippetStore::parse(std::string_view text) {
  SnippetStore store;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); i++) {
    const long line_no = static_cast<long>(i) + 1;
    std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    try {
      store.records_.push_back(snippet_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad snippet record: ") + e.what(), line_no);
    }
    if (store.records_.back().rank < 1)
      throw ParseError("snippet rank must be >= 1", line_no);
    if (store.records_.back().text.empty())
      throw ParseError("snippet text must be non-empty", line_no);
  }
  store.index();
  return store;
}

SnippetStore SnippetStore::from_records(std::vector<SnippetRecord> records) {
  SnippetStore store;
  store.records_ = std::move(records);
  store.index();
  return store;
}

void SnippetStore::index() {
  by_question_.clear();
  for (std::size_t i = 0; i < records_.size(); i++) {
    if (records_[i].question_id) by_question_[*records_[i].question_id].push_back(i);
  }
  for (auto& [id, indices] : by_question_) {
    std::stable_sort(indices.begin(), indices.end(), [this](std::size_t a, std::size_t b) {
      return records_[a].rank < records_[b].rank;
    });
  }
}

std::string SnippetStore::render() const {
  std::string out;
  for (const SnippetRecord& rec : records_) {
    out += snippet_to_json(rec).dump();
    out += '\n';
  }
  return out;
}

void SnippetStore::save(const std::filesystem::path& path) const { write_file(path, render()); }

std::vector<const SnippetRecord*> SnippetStore::by_question(const std::string& question_id) const {
  std::vector<const SnippetRecord*> out;
  auto it = by_question_.find(question_id);
  if (it == by_question_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t i : it->second) out.push_back(&records_[i]);
  return out;
}

}  // namespace redqa
