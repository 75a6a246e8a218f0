#pragma once

// JSON encodings of classes, distributions, samples, menus and vertex sets.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapl/core.hpp"

namespace mapl {

/// Malformed or unreadable input file.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {"n_domain", "n_labels", "hypotheses": [[label, ...], ...]}
HypothesisClass class_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HypothesisClass& h);

// {"n_domain", "n_labels", "probs": [[x, y, p], ...]}; sum checked to 1e-9.
Distribution distribution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Distribution& p);

// {"n_domain", "n_labels", "examples": [[x, y], ...]}
struct LabeledSample {
    std::size_t n_domain = 0;
    std::size_t n_labels = 0;
    SampleSequence examples;
};
LabeledSample sample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LabeledSample& s);

// {"n_labels", "sets": [[label, ...], ...]}
Menu menu_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Menu& mu);

// {"n", "vertices": [[label, ...], ...]}
struct VertexSet {
    std::size_t n = 0;
    std::vector<LabelVector> vertices;
};
VertexSet vertex_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Hypothesis& h);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace mapl
