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

#ifndef REDQA_SRC_RECORD_JSON_H_
#define REDQA_SRC_RECORD_JSON_H_

#include <json.hpp>

#include "redqa/corpora.h"

namespace redqa {

inline nlohmann::ordered_json snippet_to_json(const SnippetRecord& rec) {
  nlohmann::ordered_json j;
  if (rec.question_id)
    j["question_id"] = *rec.question_id;
  else
    j["question_id"] = nullptr;
  j["url"] = rec.url;
  j["title"] = rec.title;
  j["text"] = rec.text;
  j["rank"] = rec.rank;
  j["source_tag"] = rec.source_tag;
  return j;
}

inline SnippetRecord snippet_from_json(const nlohmann::json& j) {
  SnippetRecord rec;
  if (j.contains("question_id") && !j.at("question_id").is_null())
    rec.question_id = j.at("question_id").get<std::string>();
  rec.url = j.at("url").get<std::string>();
  rec.title = j.at("title").get<std::string>();
  rec.text = j.at("text").get<std::string>();
  rec.rank = j.at("rank").get<int>();
  rec.source_tag = j.at("source_tag").get<std::string>();
  return rec;
}

}  // namespace redqa

#endif  // REDQA_SRC_RECORD_JSON_H_
