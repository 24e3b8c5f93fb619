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

#include "redqa/retrieve.h"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <httplib.h>

#include "record_json.h"

namespace redqa {

namespace {

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) i++;
    std::size_t start = i;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) ||
            ((text[i] == '\'' || text[i] == '-') && i + 1 < text.size() &&
             std::isalnum(static_cast<unsigned char>(text[i + 1])))))
      i++;
    if (i > start) {
      std::string word;
      for (char c : text.substr(start, i - start))
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      out.push_back(std::move(word));
    }
  }
  return out;
}

bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty()) return true;
  if (phrase.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= haystack.size(); i++) {
    bool all = true;
    for (std::size_t j = 0; j < phrase.size() && all; j++) all = haystack[i + j] == phrase[j];
    if (all) return true;
  }
  return false;
}

bool contains_all(const std::vector<std::string>& haystack, const std::vector<std::string>& terms) {
  std::unordered_set<std::string> have(haystack.begin(), haystack.end());
  for (const std::string& term : terms) {
    if (!have.contains(term)) return false;
  }
  return true;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace

std::string normalize_snippet_text(std::string_view text) {
  std::string out;
  for (const std::string& word : word_tokens(text)) {
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

std::vector<const SnippetRecord*> match_local(const Query& query, const SnippetStore& store,
                                              const Stopwords& stopwords) {
  std::vector<std::string> needed;
  std::vector<std::string> phrase;
  switch (query.kind) {
    case QueryKind::Exact:
      phrase = query.phrase_terms();
      break;
    case QueryKind::Inexact:
    case QueryKind::Keyword:
      needed = query.terms;
      break;
    case QueryKind::Baseline:
      needed = query.content_terms(stopwords);
      break;
  }

  std::vector<std::pair<std::size_t, const SnippetRecord*>> hits;
  const std::vector<SnippetRecord>& records = store.all();
  for (std::size_t i = 0; i < records.size(); i++) {
    const std::vector<std::string> words = word_tokens(records[i].text);
    bool ok = query.kind == QueryKind::Exact ? contains_phrase(words, phrase)
                                             : contains_all(words, needed);
    if (ok) hits.emplace_back(i, &records[i]);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    return a.second->rank < b.second->rank;
  });
  std::vector<const SnippetRecord*> out;
  out.reserve(hits.size());
  for (const auto& [idx, rec] : hits) out.push_back(rec);
  return out;
}

std::vector<SnippetRecord> LocalBackend::search(const Query& query, int limit) {
  std::vector<SnippetRecord> out;
  for (const SnippetRecord* rec : match_local(query, *store_, *stopwords_)) {
    if (static_cast<int>(out.size()) >= limit) break;
    out.push_back(*rec);
  }
  return out;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ResultCache::key_of(const std::string& backend_identity, const Query& query,
                                int limit) {
  return backend_identity + "\n" + query.canonical() + "\n" + std::to_string(limit);
}

std::filesystem::path ResultCache::path_of(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.json",
                static_cast<unsigned long long>(fnv1a(key)));
  return dir_ / name;
}

std::optional<std::vector<SnippetRecord>> ResultCache::get(const std::string& key) const {
  const std::filesystem::path path = path_of(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    nlohmann::json j = nlohmann::json::parse(buf.str());
    if (j.at("key").get<std::string>() != key)
      throw std::runtime_error("key mismatch (hash collision or stale entry)");
    std::vector<SnippetRecord> out;
    for (const nlohmann::json& item : j.at("results")) out.push_back(snippet_from_json(item));
    return out;
  } catch (const std::exception& e) {
    throw CacheError(path.filename().string(), e.what());
  }
}

void ResultCache::put(const std::string& key, const std::vector<SnippetRecord>& results) {
  nlohmann::ordered_json j;
  j["key"] = key;
  j["results"] = nlohmann::ordered_json::array();
  for (const SnippetRecord& rec : results) j["results"].push_back(snippet_to_json(rec));

  const std::filesystem::path path = path_of(key);
  const std::filesystem::path tmp = path.string() + ".tmp";
  std::lock_guard<std::mutex> lock(write_mutex_);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(path.filename().string(), "cannot write");
    out << j.dump();
  }
  std::filesystem::rename(tmp, path);
}

std::vector<SnippetRecord> CachedBackend::search(const Query& query, int limit) {
  const std::string key = ResultCache::key_of(inner_->identity(), query, limit);
  if (auto cached = cache_->get(key)) return *cached;
  if (offline_)
    throw RetrievalError(inner_->identity(), query.text(), "cache miss in offline mode");
  cache_->put(key, inner_->search(query, limit));
  auto stored = cache_->get(key);
  if (!stored) throw CacheError(key, "entry vanished after write");
  return *stored;
}

WebBackend::WebBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::vector<SnippetRecord> WebBackend::search(const Query& query, int limit) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  httplib::Params params{{"q", query.text()}, {"limit", std::to_string(limit)}};
  httplib::Result res = client.Get("/search", params, headers);
  if (!res)
    throw RetrievalError(identity(), query.text(), httplib::to_string(res.error()));
  if (res->status != 200)
    throw RetrievalError(identity(), query.text(), "HTTP " + std::to_string(res->status));

  std::vector<SnippetRecord> out;
  try {
    nlohmann::json j = nlohmann::json::parse(res->body);
    for (const nlohmann::json& item : j.at("results")) {
      SnippetRecord rec;
      rec.url = item.value("url", "");
      rec.title = item.value("title", "");
      rec.text = item.at("text").get<std::string>();
      rec.rank = static_cast<int>(out.size()) + 1;
      rec.source_tag = "web";
      out.push_back(std::move(rec));
      if (static_cast<int>(out.size()) >= limit) break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw RetrievalError(identity(), query.text(), std::string("bad response: ") + e.what());
  }
  return out;
}

std::vector<RetrievedPassage> retrieve(const Query& query, Backend& backend, int max_snippets) {
  if (max_snippets < 1) throw std::invalid_argument("max_snippets must be >= 1");
  std::vector<SnippetRecord> results;
  try {
    results = backend.search(query, max_snippets);
  } catch (const RetrievalError&) {
    throw;
  } catch (const std::exception& e) {
    throw RetrievalError(backend.identity(), query.text(), e.what());
  }
  if (static_cast<int>(results.size()) > max_snippets)
    results.resize(static_cast<std::size_t>(max_snippets));

  std::vector<RetrievedPassage> out;
  out.reserve(results.size());
  for (std::size_t i = 0; i < results.size(); i++) {
    RetrievedPassage passage;
    passage.snippet = std::move(results[i]);
    passage.query = query;
    passage.retrieval_rank = static_cast<int>(i) + 1;
    passage.weight = query.weight;
    passage.origins = {query.kind};
    out.push_back(std::move(passage));
  }
  return out;
}

std::vector<RetrievedPassage> retrieve_all(const QuerySet& queries, Backend& backend,
                                           int max_snippets) {
  std::vector<RetrievedPassage> merged;
  std::unordered_map<std::string, std::size_t> by_text;
  for (const Query& query : queries.queries) {
    for (RetrievedPassage& passage : retrieve(query, backend, max_snippets)) {
      const std::string key = normalize_snippet_text(passage.snippet.text);
      auto it = by_text.find(key);
      if (it == by_text.end()) {
        by_text.emplace(key, merged.size());
        merged.push_back(std::move(passage));
        continue;
      }
      RetrievedPassage& existing = merged[it->second];
      existing.origins.insert(query.kind);
      if (passage.weight > existing.weight) {
        passage.origins = existing.origins;
        std::size_t slot = it->second;
        merged[slot] = std::move(passage);
      }
    }
  }
  for (std::size_t i = 0; i < merged.size(); i++) merged[i].passage_id = static_cast<int>(i);
  return merged;
}

}  // namespace redqa
