#include "prp/core.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace prp {

using nlohmann::json;

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::retriever: return "retriever";
        case Provenance::truncated: return "truncated";
        case Provenance::reranked: return "reranked";
    }
    return "?";
}

namespace {

// Walks a JSONL file, handing each non-blank line to fn as parsed JSON.
// Parse failures are rethrown with "<path>:<line>:" context.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": parse error: " + e.what());
        }
        fn(row, lineno);
    }
}

std::string context(const std::filesystem::path& path, std::size_t lineno) {
    return path.string() + ":" + std::to_string(lineno) + ": ";
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path,
                   std::vector<std::string>* warnings,
                   long token_budget) {
    Corpus corpus;
    for_each_jsonl(path, [&](const json& row, std::size_t lineno) {
        Document doc;
        if (!row.contains("id") || !row.at("id").is_string()) {
            throw std::runtime_error(context(path, lineno) + "missing string field \"id\"");
        }
        doc.id = row.at("id").get<std::string>();
        if (doc.id.empty()) {
            throw std::runtime_error(context(path, lineno) + "empty document id");
        }
        if (!row.contains("text") || !row.at("text").is_string()) {
            throw std::runtime_error(context(path, lineno) + "missing string field \"text\"");
        }
        doc.text = row.at("text").get<std::string>();
        if (doc.text.empty()) {
            throw std::runtime_error(context(path, lineno) + "empty text for document \"" +
                                     doc.id + "\"");
        }
        if (row.contains("token_count") && !row.at("token_count").is_null()) {
            long n = row.at("token_count").get<long>();
            if (n < 0) {
                throw std::runtime_error(context(path, lineno) + "negative token_count");
            }
            doc.token_count = n;
        }
        if (doc.token_count && *doc.token_count > token_budget && warnings) {
            warnings->push_back(context(path, lineno) + "document \"" + doc.id + "\" has " +
                                std::to_string(*doc.token_count) + " tokens (budget " +
                                std::to_string(token_budget) + ")");
        }
        auto [it, inserted] = corpus.emplace(doc.id, std::move(doc));
        if (!inserted) {
            throw std::runtime_error(context(path, lineno) + "duplicate document id \"" +
                                     it->first + "\"");
        }
    });
    return corpus;
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
    std::vector<Query> queries;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const json& row, std::size_t lineno) {
        Query q;
        if (!row.contains("id") || !row.at("id").is_string()) {
            throw std::runtime_error(context(path, lineno) + "missing string field \"id\"");
        }
        q.id = row.at("id").get<std::string>();
        if (q.id.empty()) {
            throw std::runtime_error(context(path, lineno) + "empty query id");
        }
        if (!seen.insert(q.id).second) {
            throw std::runtime_error(context(path, lineno) + "duplicate query id \"" + q.id +
                                     "\"");
        }
        if (!row.contains("text") || !row.at("text").is_string()) {
            throw std::runtime_error(context(path, lineno) + "missing string field \"text\"");
        }
        q.text = row.at("text").get<std::string>();
        if (row.contains("gold_doc_id") && !row.at("gold_doc_id").is_null()) {
            q.gold_doc_id = row.at("gold_doc_id").get<std::string>();
        }
        queries.push_back(std::move(q));
    });
    return queries;
}

std::vector<RankedList> load_run(const std::filesystem::path& path, const Corpus& corpus) {
    struct Row {
        std::string doc_id;
        double score;
    };
    std::map<std::string, std::vector<Row>> groups;
    std::set<std::pair<std::string, std::string>> seen;
    for_each_jsonl(path, [&](const json& row, std::size_t lineno) {
        if (!row.contains("query_id") || !row.contains("doc_id") || !row.contains("score")) {
            throw std::runtime_error(context(path, lineno) +
                                     "expected fields query_id, doc_id, score");
        }
        std::string query_id = row.at("query_id").get<std::string>();
        std::string doc_id = row.at("doc_id").get<std::string>();
        double score = row.at("score").get<double>();
        if (corpus.find(doc_id) == corpus.end()) {
            throw std::runtime_error(context(path, lineno) + "doc_id \"" + doc_id +
                                     "\" does not resolve in the corpus");
        }
        if (!seen.emplace(query_id, doc_id).second) {
            throw std::runtime_error(context(path, lineno) + "duplicate pair (" + query_id +
                                     ", " + doc_id + ")");
        }
        groups[query_id].push_back({std::move(doc_id), score});
    });

    std::vector<RankedList> lists;
    lists.reserve(groups.size());
    for (auto& [query_id, rows] : groups) {
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.score != b.score) {
                return a.score > b.score;
            }
            return a.doc_id < b.doc_id;
        });
        RankedList list;
        list.query_id = query_id;
        list.provenance = Provenance::retriever;
        list.candidates.reserve(rows.size());
        int rank = 1;
        for (auto& row : rows) {
            list.candidates.push_back({std::move(row.doc_id), row.score, rank++});
        }
        lists.push_back(std::move(list));
    }
    return lists;
}

RankedList truncate_top_k(const RankedList& list, int k) {
    if (k < 1) {
        throw std::invalid_argument("truncate_top_k: K must be >= 1");
    }
    RankedList out;
    out.query_id = list.query_id;
    out.provenance = Provenance::truncated;
    auto n = static_cast<std::size_t>(k) < list.candidates.size()
                 ? static_cast<std::size_t>(k)
                 : list.candidates.size();
    out.candidates.assign(list.candidates.begin(), list.candidates.begin() + n);
    return out;
}

}  // namespace prp
