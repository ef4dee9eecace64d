#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "prp/core.hpp"
#include "prp/prompt.hpp"

namespace prp {

enum class OrderPolicy { lower_rank_first, as_given, both_directions };
enum class Winner { A, B, Undecided };
enum class Direction { forward, backward };
enum class PairVerdict { first_wins, second_wins, tie };

const char* to_string(OrderPolicy p);
const char* to_string(Winner w);
OrderPolicy order_policy_from_string(std::string_view s);

/// Raised by a backend when transport fails after the configured retries.
struct backend_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SlotAssignment {
    std::string slot_a;
    std::string slot_b;
    OrderPolicy policy = OrderPolicy::as_given;
};

struct ComparisonOutcome {
    Winner winner = Winner::Undecided;
    std::string raw_response;
    double latency_seconds = 0.0;
    long output_tokens = 0;
};

/// Append-only audit row; one per backend call.
struct ComparisonRecord {
    std::string query_id;
    SlotAssignment assignment;
    ComparisonOutcome outcome;
    std::string prompt_name;
    std::string timestamp;  // RFC3339 for remote backends, empty for simulated
};

/// Parametric error model for the simulated backend: with probability beta
/// the answer is "A" regardless of content (positional bias event); otherwise
/// with probability epsilon the relevance-incorrect slot is answered.
struct BiasModel {
    double epsilon = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
};

/// Places the pair into prompt slots. Under lower_rank_first the candidate
/// with the numerically larger initial_rank (worse retriever position)
/// occupies slot A. Under both_directions this returns the as_given
/// assignment; the caller obtains the second direction via mirrored().
SlotAssignment assign_slots(const Candidate& x, const Candidate& y, OrderPolicy policy);

SlotAssignment mirrored(const SlotAssignment& a);

/// Strict response grammar: trim ASCII whitespace, case-fold, then accept
/// exactly one of the two labels. Everything else is Undecided.
Winner parse_winner(std::string_view raw, std::string_view label_a = "A",
                    std::string_view label_b = "B");

/// Maps per-direction outcomes back onto the original (first, second) pair.
/// One-directional: the winning slot is unmapped through the assignment;
/// Undecided is a tie. Both directions: a document wins only when both
/// directions name it; disagreement is a tie. first_doc_id identifies the
/// pair's first element inside the forward assignment.
PairVerdict resolve_pair(const ComparisonOutcome& forward,
                         const std::optional<ComparisonOutcome>& backward,
                         const SlotAssignment& forward_assignment,
                         const std::string& first_doc_id);

/// Deterministic per-invocation random stream (splitmix64).
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Stream keyed on (seed, query_id, slot_a, slot_b, direction) so simulated
/// outcomes are identical regardless of invocation order or parallelism.
SplitMix64 derive_comparison_rng(std::uint64_t seed, std::string_view query_id,
                                 std::string_view slot_a, std::string_view slot_b,
                                 Direction direction);

/// One simulated comparison over hidden relevance. Draw order: u1 (bias),
/// then u2 (noise), then — only when the two relevances are equal — a coin.
ComparisonOutcome compare_simulated(const SlotAssignment& assignment,
                                    const std::map<std::string, double>& relevance,
                                    const BiasModel& bias, SplitMix64& rng,
                                    double synthesized_latency_s = 0.0);

/// Inputs for one backend call. Slot ids drive the simulated backend; slot
/// texts drive prompt rendering in the remote backend.
struct CompareRequest {
    std::string query_id;
    std::string query_text;
    std::string slot_a_doc;
    std::string slot_b_doc;
    std::string slot_a_text;
    std::string slot_b_text;
    Direction direction = Direction::forward;
};

class ComparatorBackend {
public:
    virtual ~ComparatorBackend() = default;

    /// Exactly one backend call. Must be safe for concurrent invocation.
    virtual ComparisonOutcome compare(const CompareRequest& req, const PromptTemplate& tpl) = 0;
};

/// Offline oracle backend: answers from per-query hidden relevance under the
/// bias model. Latency is synthesized (per-call seconds) when configured.
class SimulatedComparator final : public ComparatorBackend {
public:
    using RelevanceTable = std::map<std::string, std::map<std::string, double>>;

    SimulatedComparator(RelevanceTable relevance, BiasModel bias,
                        double synthesized_call_latency_s = 0.0)
        : m_relevance(std::move(relevance)),
          m_bias(bias),
          m_call_latency_s(synthesized_call_latency_s) {}

    ComparisonOutcome compare(const CompareRequest& req, const PromptTemplate& tpl) override;

private:
    RelevanceTable m_relevance;
    BiasModel m_bias;
    double m_call_latency_s;
};

/// Loads {"query_id", "doc_id", "relevance"} JSONL into a relevance table.
SimulatedComparator::RelevanceTable load_relevance(const std::filesystem::path& path);

}  // namespace prp
