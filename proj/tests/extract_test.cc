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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "naive_pipeline.h"
#include "redqa/extract.h"
#include "test_util.h"

using namespace redqa;
using testutil::default_stopwords;

namespace {

RetrievedPassage passage(const std::string& text, double weight, int id,
                         std::set<QueryKind> origins = {QueryKind::Keyword}) {
  RetrievedPassage p;
  p.snippet.text = text;
  p.snippet.url = "http://p/" + std::to_string(id);
  p.snippet.rank = 1;
  p.weight = weight;
  p.passage_id = id;
  p.origins = std::move(origins);
  return p;
}

Candidate make_candidate(const std::string& surface, double score, int support_size = 2) {
  Candidate c;
  std::string word;
  for (char ch : surface + " ") {
    if (ch == ' ') {
      if (!word.empty()) c.terms.push_back(word);
      word.clear();
    } else {
      word.push_back(ch);
    }
  }
  c.surface = surface;
  c.display = surface;
  c.score = score;
  for (int i = 0; i < support_size; i++) c.support.insert(i);
  return c;
}

std::vector<Token> question_tokens(const std::string& question) {
  return tokenize(question, default_stopwords());
}

std::map<std::string, double> score_map(const std::vector<Candidate>& candidates) {
  std::map<std::string, double> out;
  for (const Candidate& c : candidates) out[c.surface] = c.score;
  return out;
}

}  // namespace

TEST_CASE("generate_ngrams emits every contiguous 1..4-gram once per position") {
  const auto occurrences =
      generate_ngrams({passage("the capital of Somalia", 1.0, 0)}, default_stopwords());
  // 4 tokens: 4 + 3 + 2 + 1 occurrences
  CHECK(occurrences.size() == 10);

  std::set<std::string> bigrams;
  for (const auto& occ : occurrences) {
    if (occ.terms.size() == 2) bigrams.insert(occ.surface);
  }
  CHECK(bigrams == std::set<std::string>{"the capital", "capital of", "of somalia"});
}

TEST_CASE("generate_ngrams inherits the query weight and does not cross punctuation") {
  const auto weighted = generate_ngrams(
      {passage("grand canyon", 5.0, 0, {QueryKind::Exact})}, default_stopwords());
  REQUIRE_FALSE(weighted.empty());
  for (const auto& occ : weighted) CHECK(occ.score == 5.0);

  const auto split = generate_ngrams({passage("alpha beta, gamma", 1.0, 0)}, default_stopwords());
  for (const auto& occ : split) CHECK(occ.surface.find("beta gamma") == std::string::npos);
}

TEST_CASE("vote sums occurrence scores and counts distinct supporting snippets") {
  const auto candidates = vote(generate_ngrams(
      {passage("mogadishu port", 5.0, 0), passage("mogadishu city", 1.0, 1)},
      default_stopwords()));
  const Candidate* mog = nullptr;
  for (const auto& c : candidates) {
    if (c.surface == "mogadishu") mog = &c;
  }
  REQUIRE(mog != nullptr);
  CHECK(mog->score == 6.0);
  CHECK(mog->support.size() == 2);
}

TEST_CASE("vote: a unique n-gram keeps its query weight") {
  const auto candidates =
      vote(generate_ngrams({passage("solo", 5.0, 0)}, default_stopwords()));
  REQUIRE(candidates.size() == 1);
  CHECK(candidates[0].score == 5.0);
}

TEST_CASE("vote: repeats inside one snippet raise the score, not the support") {
  const auto candidates =
      vote(generate_ngrams({passage("echo echo echo", 1.0, 0)}, default_stopwords()));
  const Candidate* echo = nullptr;
  for (const auto& c : candidates) {
    if (c.surface == "echo") echo = &c;
  }
  REQUIRE(echo != nullptr);
  CHECK(echo->score == 3.0);        // 3 occurrences, weight 1 each
  CHECK(echo->support.size() == 1);  // snippets, not occurrences
}

TEST_CASE("type-neutral filter drops stopword edges and question terms") {
  const auto question = question_tokens("What is the capital of Somalia?");
  std::vector<Candidate> candidates = {make_candidate("the capital", 2),
                                       make_candidate("mogadishu", 3),
                                       make_candidate("capital city", 2),
                                       make_candidate("city of", 2)};
  const auto kept = filter_type_neutral(std::move(candidates), question, default_stopwords());
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].surface == "mogadishu");
}

TEST_CASE("type-neutral filter keeps focus words for how-many questions") {
  const auto question = question_tokens("How many legs does a spider have?");
  std::vector<Candidate> candidates = {make_candidate("8 legs", 4)};
  const auto kept = filter_type_neutral(std::move(candidates), question, default_stopwords());
  CHECK(kept.size() == 1);
}

TEST_CASE("type-specific filter requires a numeric component for numeric classes") {
  const auto how_old = question_tokens("How old is the pyramid?");
  std::vector<Candidate> candidates = {make_candidate("seventy two", 4),
                                       make_candidate("very", 9)};
  const auto kept = filter_type_specific(std::move(candidates), how_old);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].surface == "seventy two");

  const auto where = question_tokens("Where is the pyramid?");
  std::vector<Candidate> untouched = {make_candidate("paris", 2)};
  CHECK(filter_type_specific(std::move(untouched), where).size() == 1);
}

TEST_CASE("closed-class filter keeps only admissible surfaces for typed questions") {
  ClosedClassTable table;
  table.add("nationality", "irish");
  table.add("nationality", "polish");

  const auto question = question_tokens("What nationality has Conan O'Brien?");
  const auto answer_type = classify_answer_type(question);
  REQUIRE(answer_type == "nationality");

  std::vector<Candidate> candidates = {make_candidate("irish", 2), make_candidate("ireland", 9)};
  const auto kept = filter_closed_class(std::move(candidates), answer_type, table);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].surface == "irish");

  // open-class questions pass through
  const auto open = classify_answer_type(question_tokens("Who painted the Mona Lisa?"));
  CHECK_FALSE(open.has_value());
  std::vector<Candidate> pass = {make_candidate("ireland", 9)};
  CHECK(filter_closed_class(std::move(pass), open, table).size() == 1);
}

TEST_CASE("combine boosts multi-word candidates by their surviving unigram scores") {
  std::vector<Candidate> candidates = {make_candidate("grand canyon", 4),
                                       make_candidate("grand", 2), make_candidate("canyon", 3)};
  combine(candidates);
  CHECK(score_map(candidates)["grand canyon"] == 9.0);
  CHECK(score_map(candidates)["grand"] == 2.0);
  CHECK(score_map(candidates)["canyon"] == 3.0);

  std::vector<Candidate> orphan = {make_candidate("lost cause", 4)};
  combine(orphan);
  CHECK(orphan[0].score == 4.0);  // both unigrams were filtered out
}

TEST_CASE("combine hand-trace on a two-snippet fixture: one surviving unigram adds +7") {
  const auto question = question_tokens("When did it happen?");
  auto candidates = vote(generate_ngrams(
      {passage("1959 the blue", 3.0, 0), passage("1959 rain", 4.0, 1)}, default_stopwords()));
  candidates = filter_type_neutral(std::move(candidates), question, default_stopwords());
  candidates = filter_type_specific(std::move(candidates), question);

  // the trigram survives with vote score 3; of its unigrams only "1959"
  // (vote score 3 + 4 = 7) is still alive
  const auto before = score_map(candidates);
  REQUIRE(before.contains("1959 the blue"));
  REQUIRE(before.at("1959") == 7.0);
  REQUIRE_FALSE(before.contains("blue"));
  REQUIRE_FALSE(before.contains("the"));

  combine(candidates);
  CHECK(score_map(candidates).at("1959 the blue") == before.at("1959 the blue") + 7.0);
}

TEST_CASE("idf scoring matches the closed form") {
  TermStats stats;
  stats.total_docs = 100;
  stats.doc_freq = {{"grand", 10}, {"canyon", 1}};

  // W_cnt = N forces log(1) = 0
  TermStats flat;
  flat.total_docs = 7;
  flat.doc_freq = {{"word", 7}};
  std::vector<Candidate> zero = {make_candidate("word", 5)};
  score_idf(zero, flat);
  CHECK(zero[0].score == 0.0);

  std::vector<Candidate> pair = {make_candidate("grand canyon", 4)};
  score_idf(pair, stats);
  const double expected = 4.0 * 0.5 * (std::log(100.0 / 10.0) + std::log(100.0 / 1.0));
  CHECK(pair[0].score == doctest::Approx(expected).epsilon(1e-12));
  CHECK(pair[0].score == doctest::Approx(13.8155105579).epsilon(1e-9));
}

TEST_CASE("idf scores are invariant under uniform (N, W_cnt) scaling") {
  std::mt19937 rng(3);
  for (int round = 0; round < 200; round++) {
    TermStats base;
    base.total_docs = 1 + static_cast<long>(rng() % 1000);
    std::vector<std::string> terms;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; i++) {
      std::string word = "w" + std::to_string(i);
      base.doc_freq[word] = 1 + static_cast<long>(rng() % base.total_docs);
      terms.push_back(word);
    }
    const long k = 1 + static_cast<long>(rng() % 50);
    TermStats scaled;
    scaled.total_docs = base.total_docs * k;
    for (const auto& [word, count] : base.doc_freq) scaled.doc_freq[word] = count * k;

    const double a = idf_multiplier(terms, base);
    const double b = idf_multiplier(terms, scaled);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("rerank promotes preferred forms, preserving order inside each group") {
  const auto when = question_tokens("When did Alaska become a state?");
  std::vector<Candidate> candidates = {make_candidate("january alaska", 9.0),
                                       make_candidate("1959", 5.0),
                                       make_candidate("winter", 4.0)};
  rerank(candidates, when);
  REQUIRE(candidates.size() == 3);
  CHECK(candidates[0].surface == "1959");
  CHECK(candidates[1].surface == "january alaska");
  CHECK(candidates[2].surface == "winter");

  // no candidate matches: order unchanged
  std::vector<Candidate> none = {make_candidate("spring", 3), make_candidate("summer", 2)};
  rerank(none, when);
  CHECK(none[0].surface == "spring");

  // all candidates match: order unchanged
  std::vector<Candidate> all = {make_candidate("1959", 3), make_candidate("1960", 2)};
  rerank(all, when);
  CHECK(all[0].surface == "1959");
}

TEST_CASE("support gate drops weakly supported candidates and reports don't-know") {
  std::vector<Candidate> candidates = {make_candidate("a1", 9, 1), make_candidate("b2", 5, 2),
                                       make_candidate("c3", 4, 3)};
  const AnswerList list = support_gate(std::move(candidates), 2);
  CHECK(list.verdict == AnswerList::Verdict::Answered);
  REQUIRE(list.ranked.size() == 2);
  CHECK(list.ranked[0].surface == "b2");

  std::vector<Candidate> weak = {make_candidate("x", 9, 1), make_candidate("y", 5, 1)};
  const AnswerList none = support_gate(std::move(weak), 2);
  CHECK(none.verdict == AnswerList::Verdict::DontKnow);
  CHECK(none.ranked.empty());
}

TEST_CASE("property: voting is monotone in occurrences") {
  std::mt19937 rng(17);
  for (int round = 0; round < 100; round++) {
    std::vector<NgramOccurrence> occurrences;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; i++) {
      NgramOccurrence occ;
      occ.terms = {"w" + std::to_string(rng() % 4)};
      occ.surface = occ.terms[0];
      occ.display = occ.surface;
      occ.score = rng() % 2 ? 5.0 : 1.0;
      occ.passage_id = static_cast<int>(rng() % 5);
      occurrences.push_back(occ);
    }
    const auto before = score_map(vote(occurrences));

    NgramOccurrence extra;
    extra.terms = {"w0"};
    extra.surface = "w0";
    extra.display = "w0";
    extra.score = 1.0;
    extra.passage_id = 0;
    occurrences.push_back(extra);
    const auto after = score_map(vote(occurrences));
    CHECK(after.at("w0") >= (before.contains("w0") ? before.at("w0") : 0.0));
  }
}

TEST_CASE("property: filters only remove candidates and never change scores") {
  std::mt19937 rng(29);
  const auto question = question_tokens("What is the capital of Somalia?");
  ClosedClassTable table;
  table.add("capital", "w0");
  table.add("capital", "w1 w2");
  const auto answer_type = classify_answer_type(question);

  for (int round = 0; round < 100; round++) {
    std::vector<Candidate> input;
    std::set<std::string> seen;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; i++) {
      std::string surface = "w" + std::to_string(rng() % 5);
      if (rng() % 3 == 0) surface += " w" + std::to_string(rng() % 5);
      if (rng() % 5 == 0) surface = "the " + surface;
      if (rng() % 7 == 0) surface += " somalia";
      if (seen.insert(surface).second)  // voted lists have unique surfaces
        input.push_back(make_candidate(surface, static_cast<double>(rng() % 50)));
    }
    const auto before = score_map(input);

    for (auto stage = 0; stage < 3; stage++) {
      std::vector<Candidate> output;
      if (stage == 0)
        output = filter_type_neutral(input, question, default_stopwords());
      else if (stage == 1)
        output = filter_type_specific(input, question);
      else
        output = filter_closed_class(input, answer_type, table);
      for (const Candidate& c : output) {
        REQUIRE(before.contains(c.surface));
        CHECK(c.score == before.at(c.surface));
      }
      CHECK(output.size() <= input.size());
    }
  }
}

TEST_CASE("property: combining never decreases a multi-word candidate's score") {
  std::mt19937 rng(31);
  for (int round = 0; round < 100; round++) {
    std::vector<Candidate> candidates;
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; i++) {
      std::string surface = "u" + std::to_string(rng() % 4);
      const int words = 1 + static_cast<int>(rng() % 3);
      for (int w = 1; w < words; w++) surface += " u" + std::to_string(rng() % 4);
      candidates.push_back(make_candidate(surface, static_cast<double>(rng() % 20)));
    }
    // dedupe surfaces so the fixture is a valid voted list
    std::set<std::string> seen;
    std::vector<Candidate> unique;
    for (Candidate& c : candidates) {
      if (seen.insert(c.surface).second) unique.push_back(std::move(c));
    }
    const auto before = score_map(unique);
    combine(unique);
    for (const Candidate& c : unique) {
      if (c.terms.size() >= 2)
        CHECK(c.score >= before.at(c.surface));
      else
        CHECK(c.score == before.at(c.surface));
    }
  }
}

TEST_CASE("staged pipeline equals the naive literal restatement on micro corpora") {
  std::mt19937 rng(57);
  const std::vector<std::string> vocab = {"the",  "of",    "blue", "stone", "river",
                                          "1959", "tower", "red",  "is"};
  const std::vector<std::string> questions = {
      "What is the stone tower?", "Where is the blue river?", "When did the tower fall?",
      "How many stone blocks?", "Who is the river keeper?"};

  const std::set<std::string> stop = {"the", "of", "is", "a", "what", "where", "when",
                                      "how", "who", "many", "did"};
  const Stopwords stopwords = Stopwords::from_words({stop.begin(), stop.end()});

  for (int round = 0; round < 60; round++) {
    naive::Setup setup;
    setup.question = questions[rng() % questions.size()];
    setup.stopwords = stop;
    const int snippets = 1 + static_cast<int>(rng() % 5);
    for (int s = 0; s < snippets; s++) {
      naive::Passage p;
      const int len = 1 + static_cast<int>(rng() % 8);
      for (int w = 0; w < len; w++) {
        if (w) p.text += ' ';
        p.text += vocab[rng() % vocab.size()];
      }
      p.weight = rng() % 2 ? 5.0 : 1.0;
      setup.passages.push_back(std::move(p));
    }
    std::vector<std::string> docs;
    for (const auto& p : setup.passages) docs.push_back(p.text);
    const TermStats stats = build_term_stats(docs);
    setup.doc_freq = {stats.doc_freq.begin(), stats.doc_freq.end()};
    setup.total_docs = stats.total_docs;

    const naive::Ranked expected = naive::run(setup);

    // staged side
    std::vector<RetrievedPassage> passages;
    for (std::size_t i = 0; i < setup.passages.size(); i++)
      passages.push_back(
          passage(setup.passages[i].text, setup.passages[i].weight, static_cast<int>(i)));
    ClosedClassTable empty_table;
    PipelineContext ctx;
    std::vector<ReformulationPattern> no_patterns;
    ctx.patterns = &no_patterns;
    ctx.stopwords = &stopwords;
    ctx.closed_classes = &empty_table;
    ctx.term_stats = &stats;

    QuestionRecord record;
    record.id = "q";
    record.text = setup.question;
    const AnswerList actual = answer_from_passages(record, passages, ctx);

    CHECK(actual.ranked.empty() == expected.dont_know);
    REQUIRE(actual.ranked.size() == expected.answers.size());
    for (std::size_t i = 0; i < expected.answers.size(); i++) {
      CHECK(actual.ranked[i].surface == expected.answers[i].first);
      CHECK(actual.ranked[i].score == expected.answers[i].second);
    }
  }
}

TEST_CASE("closed-class table parses type sections case-insensitively") {
  const ClosedClassTable table = ClosedClassTable::parse(
      "# comment\n[nationality]\nIrish\npolish\n\n[capital]\nMogadishu\n");
  REQUIRE(table.lookup("nationality") != nullptr);
  CHECK(table.lookup("nationality")->contains("irish"));
  CHECK(table.lookup("capital")->contains("mogadishu"));
  CHECK(table.lookup("unknown") == nullptr);
  CHECK(table.type_count() == 2);
  CHECK_THROWS_AS(ClosedClassTable::parse("orphan value\n"), ParseError);
}

TEST_CASE("bundled closed-class table covers the six shipped answer types") {
  const ClosedClassTable table =
      ClosedClassTable::load(testutil::data_dir() / "closed_classes.txt");
  CHECK(table.type_count() == 6);
  REQUIRE(table.lookup("capital") != nullptr);
  CHECK(table.lookup("capital")->contains("mogadishu"));
  REQUIRE(table.lookup("us-president") != nullptr);
  CHECK(table.lookup("us-president")->contains("thomas jefferson"));
  REQUIRE(table.lookup("element-symbol") != nullptr);
  CHECK(table.lookup("element-symbol")->contains("fe"));
}
