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

#ifndef REDQA_RETRIEVE_H_
#define REDQA_RETRIEVE_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "redqa/corpora.h"
#include "redqa/interpret.h"

namespace redqa {

struct RetrievedPassage {
  SnippetRecord snippet;
  Query query;
  int retrieval_rank = 1;  // 1-based, contiguous within one query's results
  double weight = 1.0;     // copied from the originating query
  std::set<QueryKind> origins;
  int passage_id = 0;  // stable identity assigned after merging
};

class RetrievalError : public std::runtime_error {
 public:
  RetrievalError(std::string backend, std::string query, const std::string& message)
      : std::runtime_error("retrieval failed [" + backend + "] " + query + ": " + message),
        backend_(std::move(backend)),
        query_(std::move(query)) {}
  const std::string& backend() const { return backend_; }
  const std::string& query() const { return query_; }

 private:
  std::string backend_;
  std::string query_;
};

class CacheError : public std::runtime_error {
 public:
  CacheError(std::string entry, const std::string& message)
      : std::runtime_error("cache entry " + entry + ": " + message), entry_(std::move(entry)) {}
  const std::string& entry() const { return entry_; }

 private:
  std::string entry_;
};

class Backend {
 public:
  virtual ~Backend() = default;
  // Returns at most `limit` snippets, best first. Order is stable for
  // identical inputs when backed by a cache or a local store.
  virtual std::vector<SnippetRecord> search(const Query& query, int limit) = 0;
  virtual std::string identity() const = 0;
};

// Lowercased word tokens joined by single spaces; the comparison space for
// phrase matching and duplicate detection.
std::string normalize_snippet_text(std::string_view text);

// Search semantics over a loaded corpus: exact queries need the de-slotted
// phrase as a (word-boundary) substring, inexact/keyword need every term
// present, baseline matches on its content words. Order is ascending stored
// rank, ties by store position.
std::vector<const SnippetRecord*> match_local(const Query& query, const SnippetStore& store,
                                              const Stopwords& stopwords);

class LocalBackend : public Backend {
 public:
  LocalBackend(const SnippetStore& store, const Stopwords& stopwords)
      : store_(&store), stopwords_(&stopwords) {}
  std::vector<SnippetRecord> search(const Query& query, int limit) override;
  std::string identity() const override { return "local"; }

 private:
  const SnippetStore* store_;
  const Stopwords* stopwords_;
};

// One file per key under the cache directory, hash-named, holding the
// serialized result list. Reads are lock-free; writes are serialized.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);

  static std::string key_of(const std::string& backend_identity, const Query& query, int limit);

  // Miss returns nullopt; a corrupt entry throws CacheError naming it.
  std::optional<std::vector<SnippetRecord>> get(const std::string& key) const;
  void put(const std::string& key, const std::vector<SnippetRecord>& results);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_of(const std::string& key) const;

  std::filesystem::path dir_;
  mutable std::mutex write_mutex_;
};

// Cache-through wrapper: misses are written to the cache and read back, so
// live runs and replays share one code path. With `offline` set a miss is a
// RetrievalError instead of a network call.
class CachedBackend : public Backend {
 public:
  CachedBackend(Backend& inner, ResultCache& cache, bool offline = false)
      : inner_(&inner), cache_(&cache), offline_(offline) {}
  std::vector<SnippetRecord> search(const Query& query, int limit) override;
  std::string identity() const override { return inner_->identity(); }

 private:
  Backend* inner_;
  ResultCache* cache_;
  bool offline_;
};

// Thin HTTP search client. GET <base>/search?q=<query>&limit=<n> must return
// {"results": [{"url": ..., "title": ..., "text": ...}, ...]}. The API key,
// when present, is sent as a bearer token.
class WebBackend : public Backend {
 public:
  explicit WebBackend(std::string base_url, std::string api_key = "");
  std::vector<SnippetRecord> search(const Query& query, int limit) override;
  std::string identity() const override { return "web:" + base_url_; }

 private:
  std::string base_url_;
  std::string api_key_;
};

// Runs one query: stamps contiguous ranks 1..k and the query weight.
std::vector<RetrievedPassage> retrieve(const Query& query, Backend& backend,
                                       int max_snippets = 100);

// Runs every query in order (per-query caps apply before merging), then
// deduplicates by normalized snippet text keeping the highest-weight
// occurrence and the union of originating query kinds.
std::vector<RetrievedPassage> retrieve_all(const QuerySet& queries, Backend& backend,
                                           int max_snippets = 100);

}  // namespace redqa

#endif  // REDQA_RETRIEVE_H_
