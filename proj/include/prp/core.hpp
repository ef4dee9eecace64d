#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace prp {

struct Document {
    std::string id;
    std::string text;
    std::optional<long> token_count;
};

struct Query {
    std::string id;
    std::string text;
    std::optional<std::string> gold_doc_id;
};

/// One retriever hit inside a query's shortlist. initial_rank is 1-based and
/// frozen at ingestion; reranking permutes candidates but never rewrites it.
struct Candidate {
    std::string doc_id;
    double retriever_score = 0.0;
    int initial_rank = 0;
};

enum class Provenance { retriever, truncated, reranked };

const char* to_string(Provenance p);

struct RankedList {
    std::string query_id;
    std::vector<Candidate> candidates;
    Provenance provenance = Provenance::retriever;
};

using Corpus = std::map<std::string, Document>;

/// Loads a line-delimited JSON corpus ({"id", "text", "token_count"?}).
/// Duplicate ids, empty text, and malformed lines are errors naming the line.
/// Documents whose token_count exceeds token_budget produce a warning only.
Corpus load_corpus(const std::filesystem::path& path,
                   std::vector<std::string>* warnings = nullptr,
                   long token_budget = 512);

/// Loads queries ({"id", "text", "gold_doc_id"?}); duplicate ids rejected.
std::vector<Query> load_queries(const std::filesystem::path& path);

/// Loads a retriever run ({"query_id", "doc_id", "score"}), groups rows by
/// query, orders each group by descending score (ties: ascending doc_id) and
/// assigns initial_rank 1..n. Lists come back sorted by query_id, so the
/// result is independent of line order in the file.
std::vector<RankedList> load_run(const std::filesystem::path& path, const Corpus& corpus);

/// First min(K, n) candidates in retriever order; K beyond n is a no-op.
RankedList truncate_top_k(const RankedList& list, int k);

}  // namespace prp
