#include "prp/comparator.hpp"

#include <cctype>
#include <fstream>

#include <json.hpp>

namespace prp {

const char* to_string(OrderPolicy p) {
    switch (p) {
        case OrderPolicy::lower_rank_first: return "lower_rank_first";
        case OrderPolicy::as_given: return "as_given";
        case OrderPolicy::both_directions: return "both_directions";
    }
    return "?";
}

const char* to_string(Winner w) {
    switch (w) {
        case Winner::A: return "A";
        case Winner::B: return "B";
        case Winner::Undecided: return "Undecided";
    }
    return "?";
}

OrderPolicy order_policy_from_string(std::string_view s) {
    if (s == "lower_rank_first") return OrderPolicy::lower_rank_first;
    if (s == "as_given") return OrderPolicy::as_given;
    if (s == "both_directions") return OrderPolicy::both_directions;
    throw std::invalid_argument("unknown order policy \"" + std::string(s) + "\"");
}

SlotAssignment assign_slots(const Candidate& x, const Candidate& y, OrderPolicy policy) {
    if (x.doc_id == y.doc_id) {
        throw std::invalid_argument("assign_slots: identical documents \"" + x.doc_id + "\"");
    }
    SlotAssignment out;
    out.policy = policy;
    if (policy == OrderPolicy::lower_rank_first && y.initial_rank > x.initial_rank) {
        out.slot_a = y.doc_id;
        out.slot_b = x.doc_id;
    } else {
        out.slot_a = x.doc_id;
        out.slot_b = y.doc_id;
    }
    return out;
}

SlotAssignment mirrored(const SlotAssignment& a) {
    return {a.slot_b, a.slot_a, a.policy};
}

namespace {

std::string normalize_response(std::string_view raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i]))));
    }
    return out;
}

}  // namespace

Winner parse_winner(std::string_view raw, std::string_view label_a, std::string_view label_b) {
    std::string norm = normalize_response(raw);
    if (norm == normalize_response(label_a)) return Winner::A;
    if (norm == normalize_response(label_b)) return Winner::B;
    return Winner::Undecided;
}

namespace {

// Document named the winner by one direction's outcome, or nullptr.
const std::string* winner_doc(const ComparisonOutcome& outcome, const SlotAssignment& slots) {
    switch (outcome.winner) {
        case Winner::A: return &slots.slot_a;
        case Winner::B: return &slots.slot_b;
        case Winner::Undecided: return nullptr;
    }
    return nullptr;
}

}  // namespace

PairVerdict resolve_pair(const ComparisonOutcome& forward,
                         const std::optional<ComparisonOutcome>& backward,
                         const SlotAssignment& forward_assignment,
                         const std::string& first_doc_id) {
    const std::string* winner = nullptr;
    if (!backward) {
        winner = winner_doc(forward, forward_assignment);
    } else {
        const std::string* fwd = winner_doc(forward, forward_assignment);
        const std::string* bwd = winner_doc(*backward, mirrored(forward_assignment));
        if (fwd && bwd && *fwd == *bwd) {
            winner = fwd;
        }
    }
    if (!winner) {
        return PairVerdict::tie;
    }
    return *winner == first_doc_id ? PairVerdict::first_wins : PairVerdict::second_wins;
}

SplitMix64 derive_comparison_rng(std::uint64_t seed, std::string_view query_id,
                                 std::string_view slot_a, std::string_view slot_b,
                                 Direction direction) {
    // FNV-1a 64 over the keying tuple, with separators so field boundaries
    // cannot alias.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_byte = [&](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    auto mix = [&](std::string_view s) {
        for (char c : s) mix_byte(static_cast<unsigned char>(c));
        mix_byte(0x1f);
    };
    for (int i = 0; i < 8; ++i) {
        mix_byte(static_cast<unsigned char>((seed >> (8 * i)) & 0xff));
    }
    mix_byte(0x1f);
    mix(query_id);
    mix(slot_a);
    mix(slot_b);
    mix_byte(direction == Direction::forward ? 0 : 1);
    return SplitMix64{h};
}

ComparisonOutcome compare_simulated(const SlotAssignment& assignment,
                                    const std::map<std::string, double>& relevance,
                                    const BiasModel& bias, SplitMix64& rng,
                                    double synthesized_latency_s) {
    auto lookup = [&](const std::string& doc_id) {
        auto it = relevance.find(doc_id);
        if (it == relevance.end()) {
            throw std::runtime_error("compare_simulated: missing relevance entry for \"" +
                                     doc_id + "\"");
        }
        return it->second;
    };
    double rel_a = lookup(assignment.slot_a);
    double rel_b = lookup(assignment.slot_b);

    Winner winner;
    if (rng.next_unit() < bias.beta) {
        winner = Winner::A;
    } else {
        bool wrong = rng.next_unit() < bias.epsilon;
        if (rel_a == rel_b) {
            // No strictly-higher slot exists; fall to a fair coin.
            winner = rng.next_unit() < 0.5 ? Winner::A : Winner::B;
        } else {
            Winner correct = rel_a > rel_b ? Winner::A : Winner::B;
            winner = wrong ? (correct == Winner::A ? Winner::B : Winner::A) : correct;
        }
    }

    ComparisonOutcome out;
    out.winner = winner;
    out.raw_response = winner == Winner::A ? "A" : "B";
    out.latency_seconds = synthesized_latency_s;
    out.output_tokens = 1;
    return out;
}

ComparisonOutcome SimulatedComparator::compare(const CompareRequest& req,
                                               const PromptTemplate&) {
    auto it = m_relevance.find(req.query_id);
    if (it == m_relevance.end()) {
        throw std::runtime_error("SimulatedComparator: no relevance entries for query \"" +
                                 req.query_id + "\"");
    }
    SplitMix64 rng = derive_comparison_rng(m_bias.seed, req.query_id, req.slot_a_doc,
                                           req.slot_b_doc, req.direction);
    SlotAssignment slots{req.slot_a_doc, req.slot_b_doc, OrderPolicy::as_given};
    return compare_simulated(slots, it->second, m_bias, rng, m_call_latency_s);
}

SimulatedComparator::RelevanceTable load_relevance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    SimulatedComparator::RelevanceTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json row;
        try {
            row = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": parse error: " + e.what());
        }
        table[row.at("query_id").get<std::string>()][row.at("doc_id").get<std::string>()] =
            row.at("relevance").get<double>();
    }
    return table;
}

}  // namespace prp
