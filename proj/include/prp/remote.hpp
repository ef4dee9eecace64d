#pragma once

#include <map>
#include <string>

#include "prp/comparator.hpp"

namespace prp {

/// Generic completion-endpoint adapter settings. The response body is JSON;
/// response_field is a dotted path to the generated text ("text",
/// "choices.0.text", ...). Header values may carry secrets resolved from the
/// environment by the config layer.
struct RemoteConfig {
    std::string url;
    std::map<std::string, std::string> headers;
    std::string response_field = "text";
    double timeout_s = 30.0;
    int max_retries = 2;
};

/// Remote LLM backend. Each call POSTs one rendered prompt with generation
/// constrained to a single greedy token at temperature zero, then parses the
/// answer under the template's label grammar. Transport failures (connect,
/// timeout, non-2xx) are retried up to max_retries and then surfaced as
/// backend_error; a response that reaches us but fails the grammar is never
/// retried — it becomes Winner::Undecided with the raw text preserved.
class RemoteComparator final : public ComparatorBackend {
public:
    explicit RemoteComparator(RemoteConfig config);

    ComparisonOutcome compare(const CompareRequest& req, const PromptTemplate& tpl) override;

private:
    RemoteConfig m_config;
    std::string m_host;  // scheme://host:port
    std::string m_path;
};

}  // namespace prp
