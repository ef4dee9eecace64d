#include "prp/prompt.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace prp {

using nlohmann::json;

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string_view::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

std::string normalize_label(std::string_view label) {
    std::size_t begin = 0;
    std::size_t end = label.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(label[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(label[end - 1]))) --end;
    std::string out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(label[i]))));
    }
    return out;
}

void replace_once(std::string& s, std::string_view placeholder, std::string_view value) {
    auto pos = s.find(placeholder);
    s.replace(pos, placeholder.size(), value);
}

}  // namespace

void validate_template(const PromptTemplate& tpl) {
    for (std::string_view ph : {"{query}", "{doc1}", "{doc2}"}) {
        auto n = count_occurrences(tpl.body, ph);
        if (n != 1) {
            throw std::invalid_argument("template \"" + tpl.name + "\": placeholder " +
                                        std::string(ph) + " occurs " + std::to_string(n) +
                                        " times (want exactly 1)");
        }
    }
    auto a = normalize_label(tpl.expected_labels[0]);
    auto b = normalize_label(tpl.expected_labels[1]);
    if (a == b) {
        throw std::invalid_argument("template \"" + tpl.name + "\": expected labels not distinct");
    }
    // The backend tokenizer is behind the wire; the only check possible here
    // is that each label is a single character after normalization.
    if (a.size() != 1 || b.size() != 1) {
        throw std::invalid_argument("template \"" + tpl.name +
                                    "\": expected labels must normalize to single characters");
    }
}

std::string render_prompt(const PromptTemplate& tpl, std::string_view query,
                          std::string_view doc1, std::string_view doc2) {
    std::string out = tpl.body;
    replace_once(out, "{query}", query);
    replace_once(out, "{doc1}", doc1);
    replace_once(out, "{doc2}", doc2);
    return out;
}

const std::vector<PromptTemplate>& builtin_templates() {
    static const std::vector<PromptTemplate> templates = {
        {"Original",
         "Given a query {query}, which of the following two passages is more relevant to the "
         "query?\n\nPassage A: {doc1}\n\nPassage B: {doc2}\n\nOutput Passage A or Passage B:",
         {"A", "B"}},
        {"Passage Mode",
         "Given a query {query}, which of the following two passages is more relevant to the "
         "query?\n\nPassage A: {doc1}\n\nPassage B: {doc2}\n\nOutput the more relevant Passage:",
         {"A", "B"}},
        {"Number Mode",
         "Given a query {query}, which of the following passages is more relevant to the "
         "query?\n\nPassage 1: {doc1}\n\nPassage 2: {doc2}\n\nThe answer is captured in a * "
         "format. For example, *2* or *1*. Just return the number of the more relevant Passage:",
         {"1", "2"}},
        {"Final Version",
         "Given a query {query}, which of the following two passages is more relevant to the "
         "query?\n\nA: {doc1}\n\nB: {doc2}\n\nOutput A or B:",
         {"A", "B"}},
    };
    return templates;
}

const PromptTemplate& default_template() {
    return builtin_templates().back();
}

const PromptTemplate& find_template(const std::vector<PromptTemplate>& templates,
                                    const std::string& name) {
    for (const auto& tpl : templates) {
        if (tpl.name == name) {
            return tpl;
        }
    }
    throw std::runtime_error("unknown prompt template \"" + name + "\"");
}

std::vector<PromptTemplate> load_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    json doc = json::parse(in);
    if (!doc.is_array()) {
        throw std::runtime_error(path.string() + ": expected a JSON array of templates");
    }
    std::vector<PromptTemplate> templates;
    templates.reserve(doc.size());
    for (const auto& row : doc) {
        PromptTemplate tpl;
        tpl.name = row.at("name").get<std::string>();
        tpl.body = row.at("body").get<std::string>();
        if (row.contains("expected_labels")) {
            const auto& labels = row.at("expected_labels");
            if (!labels.is_array() || labels.size() != 2) {
                throw std::runtime_error(path.string() + ": template \"" + tpl.name +
                                         "\": expected_labels must be a 2-element array");
            }
            tpl.expected_labels = {labels[0].get<std::string>(), labels[1].get<std::string>()};
        }
        validate_template(tpl);
        templates.push_back(std::move(tpl));
    }
    return templates;
}

}  // namespace prp
