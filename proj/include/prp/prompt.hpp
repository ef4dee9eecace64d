#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace prp {

/// A named comparison prompt. body carries the {query}, {doc1}, {doc2}
/// placeholders, each exactly once; expected_labels are the two answers the
/// backend may emit (slot A label first).
struct PromptTemplate {
    std::string name;
    std::string body;
    std::array<std::string, 2> expected_labels{"A", "B"};
};

/// Throws std::invalid_argument when a placeholder is missing/repeated or the
/// labels are not distinct single characters after trim + case-fold.
void validate_template(const PromptTemplate& tpl);

std::string render_prompt(const PromptTemplate& tpl, std::string_view query,
                          std::string_view doc1, std::string_view doc2);

/// The four bundled prompt variants; the last ("Final Version") is the
/// engine's default template.
const std::vector<PromptTemplate>& builtin_templates();

const PromptTemplate& default_template();

/// Finds a template by name in the given set; throws when absent.
const PromptTemplate& find_template(const std::vector<PromptTemplate>& templates,
                                    const std::string& name);

/// Reads a JSON array of {name, body, expected_labels}.
std::vector<PromptTemplate> load_templates(const std::filesystem::path& path);

}  // namespace prp
