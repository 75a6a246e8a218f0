#include "mapl/io.hpp"

#include <fstream>
#include <sstream>
#include <tuple>

namespace mapl {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw IoError(std::string("bad field '") + key + "': " + e.what());
    }
}

} // namespace

HypothesisClass class_from_json(const json& j) {
    const auto n_domain = field<std::size_t>(j, "n_domain");
    const auto n_labels = field<std::size_t>(j, "n_labels");
    std::vector<Hypothesis> members;
    for (auto& table : field<std::vector<std::vector<Label>>>(j, "hypotheses")) members.emplace_back(std::move(table));
    return HypothesisClass(n_domain, n_labels, std::move(members));
}

json to_json(const HypothesisClass& h) {
    json tables = json::array();
    for (const auto& m : h.members()) tables.push_back(m.table());
    return {{"n_domain", h.n_domain()}, {"n_labels", h.n_labels()}, {"hypotheses", tables}};
}

Distribution distribution_from_json(const json& j) {
    const auto n_domain = field<std::size_t>(j, "n_domain");
    const auto n_labels = field<std::size_t>(j, "n_labels");
    std::vector<std::tuple<Instance, Label, double>> triples;
    const auto probs = field<json>(j, "probs");
    if (!probs.is_array()) throw IoError("field 'probs' must be an array");
    for (const auto& row : probs) {
        if (!row.is_array() || row.size() != 3) throw IoError("each 'probs' entry must be [x, y, p]");
        try {
            triples.emplace_back(row[0].get<Instance>(), row[1].get<Label>(), row[2].get<double>());
        } catch (const json::exception& e) {
            throw IoError(std::string("bad 'probs' entry: ") + e.what());
        }
    }
    return Distribution::from_triples(n_domain, n_labels, triples, 1e-9);
}

json to_json(const Distribution& p) {
    json probs = json::array();
    for (Instance x = 0; x < p.n_domain(); ++x)
        for (Label y = 0; y < p.n_labels(); ++y)
            if (p.prob(x, y) > 0.0) probs.push_back(json::array({x, y, p.prob(x, y)}));
    return {{"n_domain", p.n_domain()}, {"n_labels", p.n_labels()}, {"probs", probs}};
}

LabeledSample sample_from_json(const json& j) {
    LabeledSample s;
    s.n_domain = field<std::size_t>(j, "n_domain");
    s.n_labels = field<std::size_t>(j, "n_labels");
    for (const auto& row : field<std::vector<std::vector<std::uint32_t>>>(j, "examples")) {
        if (row.size() != 2) throw IoError("each 'examples' entry must be [x, y]");
        require(row[0] < s.n_domain && row[1] < s.n_labels, "sample: example out of range");
        s.examples.push_back({row[0], row[1]});
    }
    return s;
}

json to_json(const LabeledSample& s) {
    json rows = json::array();
    for (const auto& z : s.examples) rows.push_back(json::array({z.x, z.y}));
    return {{"n_domain", s.n_domain}, {"n_labels", s.n_labels}, {"examples", rows}};
}

Menu menu_from_json(const json& j) {
    return Menu(field<std::size_t>(j, "n_labels"), field<std::vector<std::vector<Label>>>(j, "sets"));
}

json to_json(const Menu& mu) { return {{"n_labels", mu.n_labels()}, {"sets", mu.sets()}}; }

VertexSet vertex_set_from_json(const json& j) {
    VertexSet v;
    v.n = field<std::size_t>(j, "n");
    v.vertices = field<std::vector<LabelVector>>(j, "vertices");
    for (const auto& vert : v.vertices)
        if (vert.size() != v.n) throw IoError("vertex length differs from n");
    return v;
}

json to_json(const Hypothesis& h) { return h.table(); }

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

} // namespace mapl
