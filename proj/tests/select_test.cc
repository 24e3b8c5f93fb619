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

#include <numeric>
#include <random>

#include "redqa/select.h"
#include "test_util.h"

using namespace redqa;
using testutil::default_stopwords;

namespace {

Candidate cand(const std::string& surface, double score = 1.0) {
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
  c.support = {0, 1};
  return c;
}

// Textbook full-matrix dynamic program, the oracle for the optimized
// implementation.
int lev_oracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); i++) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); j++) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); i++) {
    for (std::size_t j = 1; j <= b.size(); j++) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
  }
  return d[a.size()][b.size()];
}

std::string random_word(std::mt19937& rng, int max_len = 8) {
  std::string out;
  const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  for (int i = 0; i < len; i++) out.push_back(static_cast<char>('a' + rng() % 4));
  return out;
}

double total_score(const std::vector<Candidate>& candidates) {
  double sum = 0;
  for (const Candidate& c : candidates) sum += c.score;
  return sum;
}

}  // namespace

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("kitten", "sitting") == lev_oracle("kitten", "sitting"));
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("same", "same") == 0);
}

TEST_CASE("levenshtein is a metric on random short strings") {
  std::mt19937 rng(5);
  for (int round = 0; round < 500; round++) {
    const std::string a = random_word(rng), b = random_word(rng), c = random_word(rng);
    const int ab = levenshtein(a, b);
    CHECK(ab == levenshtein(b, a));
    CHECK((ab == 0) == (a == b));
    CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
    CHECK(ab == lev_oracle(a, b));
  }
}

TEST_CASE("overlap distance definition and edge cases") {
  const std::set<std::string> ab = {"a", "b"};
  const std::set<std::string> bcd = {"b", "c", "d"};
  CHECK(overlap_distance(ab, ab) == 0.0);
  CHECK(overlap_distance(ab, {"x", "y"}) == 1.0);
  CHECK(overlap_distance(ab, bcd) == doctest::Approx(0.5));
  CHECK(overlap_distance({}, {}) == 0.0);
}

TEST_CASE("stem strips suffixes and is idempotent") {
  CHECK(stem("playing") == "play");
  CHECK(stem("played") == "play");
  CHECK(stem("play") == "play");
  CHECK(stem("running") == "run");
  CHECK(stem("capitals") == "capital");
  CHECK(stem("meetings") == "meet");
  CHECK(stem("Classes") == "class");

  // idempotence over the full stopword list plus a fixture lexicon
  std::vector<std::string> lexicon;
  {
    std::istringstream in(testutil::read_file(testutil::data_dir() / "stopwords.txt"));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') lexicon.push_back(line);
    }
  }
  for (const char* w : {"dresses", "capitals", "cities", "countries", "presidents", "written",
                        "locations", "answers", "questions", "snippets", "better", "lovely",
                        "goes", "really", "miss", "pass", "address", "speed"})
    lexicon.push_back(w);
  for (const std::string& word : lexicon) CHECK(stem(stem(word)) == stem(word));
}

TEST_CASE("numeric normalization for counts and dates") {
  CHECK(normalize_numeric("seventy two", "NUMERIC_COUNT") == "72");
  CHECK(normalize_numeric("72", "NUMERIC:COUNT") == "72");
  CHECK(normalize_numeric("7,000", "NUMERIC:COUNT") == "7000");
  CHECK(normalize_numeric("three hundred twenty one", "NUMERIC:COUNT") == "321");
  CHECK(normalize_numeric("third", "NUMERIC:COUNT") == "3");

  CHECK(normalize_numeric("July 4, 1776", "NUMERIC_DATE") == "1776-07-04");
  CHECK(normalize_numeric("4 July 1776", "NUMERIC:DATE") == "1776-07-04");
  CHECK(normalize_numeric("July 1776", "NUMERIC:DATE") == "1776-07");
  CHECK(normalize_numeric("1776", "NUMERIC:DATE") == "1776");

  // pass-throughs: other categories and unparseable values
  CHECK(normalize_numeric("paris", "LOCATION_CITY") == "paris");
  CHECK(normalize_numeric("many moons", "NUMERIC:COUNT") == "many moons");
  CHECK(normalize_numeric("sometime soon", "NUMERIC:DATE") == "sometime soon");
}

TEST_CASE("cluster groups similar answers and picks the longest representative") {
  SelectionConfig config;
  config.distance = SelectionConfig::Distance::Overlap;
  config.distance_threshold = 0.5;

  const auto clusters = cluster({cand("mogadishu"), cand("mogadishu somalia")}, config);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].score == 2.0);
  CHECK(clusters[0].members[clusters[0].representative].surface == "mogadishu somalia");

  const auto apart = cluster({cand("tokyo"), cand("quito")}, config);
  CHECK(apart.size() == 2);
  CHECK(cluster({}, config).empty());
}

TEST_CASE("cluster output partitions its input") {
  std::mt19937 rng(8);
  SelectionConfig config;
  config.distance = SelectionConfig::Distance::Levenshtein;
  for (int round = 0; round < 50; round++) {
    std::vector<Candidate> candidates;
    std::set<std::string> seen;
    const int n = static_cast<int>(rng() % 10);
    for (int i = 0; i < n; i++) {
      const std::string w = random_word(rng, 5);
      if (!w.empty() && seen.insert(w).second) candidates.push_back(cand(w));
    }
    const auto clusters = cluster(candidates, config);
    std::size_t members = 0;
    std::set<std::string> covered;
    for (const auto& c : clusters) {
      members += c.members.size();
      for (const auto& m : c.members) covered.insert(m.surface);
      REQUIRE(c.representative < c.members.size());
      for (const auto& m : c.members)
        CHECK(c.members[c.representative].surface.size() >= m.surface.size());
    }
    CHECK(members == candidates.size());
    CHECK(covered.size() == candidates.size());
  }
}

TEST_CASE("justask picks the representative of the strongest surviving cluster") {
  SelectionConfig config;
  const std::vector<Candidate> candidates = {cand("mogadishu"), cand("mogadishu somalia"),
                                             cand("mogadishu port"), cand("nairobi")};
  const JustAskResult result = justask_select(candidates, "What city leads the south?", "",
                                              config, default_stopwords());
  REQUIRE(result.answer.has_value());
  CHECK(result.answer->surface == "mogadishu somalia");
}

TEST_CASE("justask discards clusters contained in the question") {
  SelectionConfig config;
  const JustAskResult gone = justask_select({cand("grand canyon")}, "Where is the Grand Canyon?",
                                            "", config, default_stopwords());
  CHECK_FALSE(gone.answer.has_value());

  const JustAskResult empty =
      justask_select({}, "Where is the Grand Canyon?", "", config, default_stopwords());
  CHECK_FALSE(empty.answer.has_value());
}

TEST_CASE("justask normalizes numeric candidates before clustering") {
  SelectionConfig config;
  const JustAskResult result = justask_select({cand("seventy two"), cand("72")},
                                              "How many moons does Jupiter have?",
                                              "NUMERIC_COUNT", config, default_stopwords());
  REQUIRE(result.answer.has_value());
  CHECK(result.answer->surface == "72");
  REQUIRE(result.clusters.size() == 1);  // both normalize to "72"
}

TEST_CASE("property: justask never returns a string contained in the question") {
  std::mt19937 rng(13);
  SelectionConfig config;
  const std::vector<std::string> vocab = {"red", "blue", "green", "stone", "river", "tower"};
  for (int round = 0; round < 300; round++) {
    std::string question = "what is the";
    for (int i = 0; i < 3; i++) question += " " + vocab[rng() % vocab.size()];
    std::vector<Candidate> candidates;
    std::set<std::string> seen;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; i++) {
      std::string surface = vocab[rng() % vocab.size()];
      if (rng() % 2) surface += " " + vocab[rng() % vocab.size()];
      if (seen.insert(surface).second) candidates.push_back(cand(surface));
    }
    const JustAskResult result =
        justask_select(candidates, question, "", config, default_stopwords());
    if (!result.answer) continue;

    std::string content;
    for (const Token& tok : tokenize(question, default_stopwords())) {
      if (tok.is_stopword) continue;
      if (!content.empty()) content += ' ';
      content += tok.normalized;
    }
    CHECK(content.find(result.answer->surface) == std::string::npos);
  }
}

TEST_CASE("ephyra merges stem-equal duplicates, adding the lower score to the higher") {
  SelectionConfig config;
  const EphyraResult result =
      ephyra_select({cand("alaska", 3.0), cand("alaskas", 2.0)}, config, default_stopwords());
  REQUIRE(result.ranked.size() == 1);
  CHECK(result.ranked[0].surface == "alaska");
  CHECK(result.ranked[0].score == 5.0);
  CHECK_FALSE(result.nil());
}

TEST_CASE("ephyra drops malformed answers after merging") {
  SelectionConfig config;
  const EphyraResult result =
      ephyra_select({cand("the canyon", 9.0), cand("river of", 8.0), cand("---", 7.0),
                     cand("mountain", 1.0)},
                    config, default_stopwords());
  REQUIRE(result.ranked.size() == 1);
  CHECK(result.ranked[0].surface == "mountain");

  // stem-equal duplicates merge before the format filter runs, so a
  // malformed higher-ranked answer absorbs its duplicates and then dies
  const EphyraResult absorbed =
      ephyra_select({cand("the canyon", 9.0), cand("canyon", 1.0)}, config, default_stopwords());
  CHECK(absorbed.nil());
}

TEST_CASE("ephyra enforces the 7000 non-whitespace cap at the boundary") {
  SelectionConfig config;
  // 7 answers of 999 non-whitespace chars each = 6993, plus one of 7 = 7000
  std::vector<Candidate> fits;
  for (int i = 0; i < 7; i++)
    fits.push_back(cand(std::string(999, 'a' + i), 100.0 - i));
  fits.push_back(cand(std::string(7, 'z'), 1.0));
  CHECK(ephyra_select(fits, config, default_stopwords()).ranked.size() == 8);

  // 6999 + 2 = 7001: the last answer is dropped
  std::vector<Candidate> over;
  over.push_back(cand(std::string(6999, 'a'), 9.0));
  over.push_back(cand("zz", 1.0));
  const EphyraResult trimmed = ephyra_select(over, config, default_stopwords());
  REQUIRE(trimmed.ranked.size() == 1);
  CHECK(trimmed.ranked[0].surface.size() == 6999);

  // exactly 7000 in one answer is kept
  CHECK(ephyra_select({cand(std::string(7000, 'a'), 1.0)}, config, default_stopwords())
            .ranked.size() == 1);
  // 7001 in one answer cannot fit
  CHECK(ephyra_select({cand(std::string(7001, 'a'), 1.0)}, config, default_stopwords()).nil());
}

TEST_CASE("ephyra applies the score threshold and returns NIL when empty") {
  SelectionConfig config;
  config.score_threshold = 10.0;
  const EphyraResult result =
      ephyra_select({cand("canyon", 3.0), cand("river", 2.0)}, config, default_stopwords());
  CHECK(result.nil());
  CHECK(result.ranked.empty());
}

TEST_CASE("property: duplicate merging conserves total score") {
  std::mt19937 rng(21);
  SelectionConfig config;
  const std::vector<std::string> vocab = {"play", "playing", "played", "stone", "stones",
                                          "river", "tower", "towers"};
  for (int round = 0; round < 200; round++) {
    std::vector<Candidate> candidates;
    std::set<std::string> seen;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; i++) {
      std::string surface = vocab[rng() % vocab.size()];
      if (rng() % 3 == 0) surface += " " + vocab[rng() % vocab.size()];
      if (seen.insert(surface).second)
        candidates.push_back(cand(surface, static_cast<double>(1 + rng() % 9)));
    }
    const double before = total_score(candidates);
    const auto merged = merge_duplicates(candidates, default_stopwords());
    CHECK(total_score(merged) == doctest::Approx(before).epsilon(1e-12));
    CHECK(merged.size() <= candidates.size());
  }
}

TEST_CASE("strategy names round trip") {
  CHECK(strategy_from_name("aranea-top") == SelectionConfig::Strategy::AraneaTop);
  CHECK(strategy_from_name("justask") == SelectionConfig::Strategy::JustAsk);
  CHECK(strategy_from_name("ephyra") == SelectionConfig::Strategy::Ephyra);
  CHECK_FALSE(strategy_from_name("bogus").has_value());
}
