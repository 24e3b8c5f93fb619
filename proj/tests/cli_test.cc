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

#include <cstdio>
#include <cstdlib>

#include "redqa/corpora.h"
#include "test_util.h"

namespace testutil = redqa::testutil;

namespace {

std::string binary_path() { return std::string(REDQA_BINARY_DIR) + "/tools/redqa"; }

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CommandResult run_command(const std::string& args) {
  const std::string command = binary_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult result;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof(buffer), pipe))
    result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string mini_flags() {
  const std::string data = testutil::data_dir().string();
  return "--data-dir " + data + " --snippets " + data + "/mini/snippets.jsonl";
}

}  // namespace

TEST_CASE("ask prints the engineered answer first") {
  const CommandResult r =
      run_command("ask \"What is the capital of Somalia?\" " + mini_flags());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Mogadishu") != std::string::npos);
  CHECK(r.output.find("verdict: answered") != std::string::npos);
  CHECK(r.output.find("http://corpus.test/q1/") != std::string::npos);
}

TEST_CASE("ask on an unanswerable question says don't know with exit 0") {
  const CommandResult r =
      run_command("ask \"What is the capital of Atlantis?\" " + mini_flags());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("don't know") != std::string::npos);
}

TEST_CASE("missing corpus paths exit nonzero") {
  const CommandResult r = run_command(
      "ask \"Anything?\" --data-dir " + testutil::data_dir().string() +
      " --snippets /nonexistent/snippets.jsonl");
  CHECK(r.exit_code == 1);
}

TEST_CASE("eval writes one file per run plus the average") {
  testutil::TempDir out("evalout");
  const std::string data = testutil::data_dir().string();
  const CommandResult r = run_command(
      "eval --corpus " + data + "/mini/questions.txt --runs 2 --output-dir " +
      out.path().string() + " " + mini_flags());
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists(out.path() / "run-1.jsonl"));
  CHECK(std::filesystem::exists(out.path() / "run-2.jsonl"));
  CHECK(std::filesystem::exists(out.path() / "average.txt"));
  // deterministic backend: identical per-run files
  CHECK(testutil::read_file(out.path() / "run-1.jsonl") ==
        testutil::read_file(out.path() / "run-2.jsonl"));
  CHECK(r.output.find("accuracy") != std::string::npos);
}

TEST_CASE("eval is byte-identical across invocations") {
  testutil::TempDir out_a("evala");
  testutil::TempDir out_b("evalb");
  const std::string data = testutil::data_dir().string();
  const std::string base = "eval --corpus " + data + "/mini/questions.txt --runs 1 " +
                           mini_flags() + " --output-dir ";
  REQUIRE(run_command(base + out_a.path().string()).exit_code == 0);
  REQUIRE(run_command(base + out_b.path().string()).exit_code == 0);
  CHECK(testutil::read_file(out_a.path() / "run-1.jsonl") ==
        testutil::read_file(out_b.path() / "run-1.jsonl"));
  CHECK(testutil::read_file(out_a.path() / "average.txt") ==
        testutil::read_file(out_b.path() / "average.txt"));
}

TEST_CASE("corpus parse failures exit with code 2") {
  testutil::TempDir tmp("badcorpus");
  testutil::write_file(tmp.path() / "bad.txt", "Question 1. Q:no answers\n");
  const CommandResult r = run_command(
      "eval --corpus " + (tmp.path() / "bad.txt").string() + " " + mini_flags());
  CHECK(r.exit_code == 2);
}

TEST_CASE("inspect prints the seven stage sections") {
  const std::string data = testutil::data_dir().string();
  const CommandResult r = run_command(
      "inspect --corpus " + data + "/mini/questions.txt --id 1 " + mini_flags());
  CHECK(r.exit_code == 0);
  for (const char* stage :
       {"n-grams", "voting", "filtering", "combining", "scoring", "reranking", "support"})
    CHECK(r.output.find(stage) != std::string::npos);
  CHECK(r.output.find("queries:") != std::string::npos);
  CHECK(r.output.find("type-neutral") != std::string::npos);
}

TEST_CASE("inspect with an unknown id exits nonzero") {
  const std::string data = testutil::data_dir().string();
  const CommandResult r = run_command(
      "inspect --corpus " + data + "/mini/questions.txt --id 999 " + mini_flags());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("unknown question id") != std::string::npos);
}

TEST_CASE("build-stats produces a loadable stats file") {
  testutil::TempDir tmp("stats");
  const std::string data = testutil::data_dir().string();
  const std::string out = (tmp.path() / "stats.tsv").string();
  const CommandResult r = run_command(
      "build-stats --snippets " + data + "/mini/snippets.jsonl --output " + out);
  CHECK(r.exit_code == 0);
  const redqa::TermStats stats = redqa::load_term_stats(out);
  CHECK(stats.total_docs == 103);
  CHECK(stats.count("capital") > 10);
}

TEST_CASE("config file values apply where flags are absent, flags win otherwise") {
  testutil::TempDir tmp("config");
  const std::string data = testutil::data_dir().string();
  testutil::write_file(tmp.path() / "run.conf",
                       "data_dir=" + data + "\nsnippets=" + data +
                           "/mini/snippets.jsonl\nselect=aranea-top\n");
  const CommandResult r = run_command(
      "ask \"What is the capital of Japan?\" --config " + (tmp.path() / "run.conf").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Tokyo") != std::string::npos);

  // bad config: not key=value
  testutil::write_file(tmp.path() / "bad.conf", "just words\n");
  const CommandResult bad = run_command(
      "ask \"Anything?\" --config " + (tmp.path() / "bad.conf").string());
  CHECK(bad.exit_code == 1);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_command("eval").exit_code == 1);           // missing --corpus
  CHECK(run_command("no-such-command").exit_code == 1);
  CHECK(run_command("ask \"Q?\" --backend bogus").exit_code == 1);
}

TEST_CASE("ask --json emits one structured record per answer") {
  const CommandResult r =
      run_command("ask \"What is the capital of Ghana?\" --json --top 2 " + mini_flags());
  CHECK(r.exit_code == 0);
  // first line parses as JSON and names the top answer with its support
  const std::string first_line = r.output.substr(0, r.output.find('\n'));
  CHECK(first_line.find("\"answer\":\"accra\"") != std::string::npos);
  CHECK(first_line.find("\"rank\":1") != std::string::npos);
  CHECK(first_line.find("\"support\":[") != std::string::npos);
}

TEST_CASE("offline web eval with a cold cache reports errors and still writes a report") {
  testutil::TempDir cache("coldcache");
  testutil::TempDir out("coldout");
  const std::string data = testutil::data_dir().string();
  const CommandResult r = run_command(
      "eval --corpus " + data + "/mini/questions.txt --runs 1 --backend web "
      "--web-url http://127.0.0.1:9 --cache-dir " + cache.path().string() +
      " --offline --data-dir " + data + " --output-dir " + out.path().string());
  CHECK(r.exit_code == 0);  // the default error budget is unlimited
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(r.output.find("WARNING") != std::string::npos);
  CHECK(std::filesystem::exists(out.path() / "average.txt"));

  // with a zero budget the same run exits with the backend failure code
  const CommandResult strict = run_command(
      "eval --corpus " + data + "/mini/questions.txt --runs 1 --backend web "
      "--web-url http://127.0.0.1:9 --cache-dir " + cache.path().string() +
      " --offline --error-budget 0 --data-dir " + data + " --output-dir " +
      out.path().string());
  CHECK(strict.exit_code == 3);
}
