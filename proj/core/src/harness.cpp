#include "mapl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include "mapl/io.hpp"
#include "mapl/listlearn.hpp"

namespace mapl {

using nlohmann::json;

HypothesisClass gen_constant_class(std::size_t k, std::size_t n_domain) {
    require(k >= 1 && n_domain >= 1, "gen_constant_class: K and n_domain must be positive");
    std::vector<Hypothesis> members;
    for (std::size_t i = 0; i < k; ++i) members.push_back(Hypothesis::constant(n_domain, static_cast<Label>(i)));
    return HypothesisClass(n_domain, k, std::move(members));
}

Problem gen_appendix_a(std::size_t k, std::size_t grid) {
    require(k >= 3, "gen_appendix_a: K must be at least 3");
    require(grid >= 3 && grid % 3 == 0, "gen_appendix_a: grid must be a positive multiple of 3");
    const auto g = static_cast<std::int64_t>(grid);
    const auto others = static_cast<std::int64_t>(k - 1);
    std::vector<Rational> probs(grid * k, Rational(0));
    for (std::size_t x = 0; x < grid; ++x) {
        if (x < grid / 3) {
            probs[x * k] = Rational(1, g);
        } else {
            for (std::size_t y = 1; y < k; ++y) probs[x * k + y] = Rational(1, g * others);
        }
    }
    return {gen_constant_class(k, grid), Distribution::exact(grid, k, std::move(probs))};
}

std::vector<Distribution> gen_lower_bound_instance(const HypothesisClass& h, double epsilon,
                                                   const PseudoCubeWitness& witness) {
    const double head = 1.0 - 144.0 * std::numbers::e * epsilon;
    require(epsilon > 0.0 && head > 0.0, "gen_lower_bound_instance: need 0 < epsilon < 1/(144 e)");
    const std::size_t d = witness.points.size();
    require(d >= 1 && !witness.cube.empty(), "gen_lower_bound_instance: empty witness");
    std::vector<Distribution> family;
    for (const auto& vertex : witness.cube) {
        require(vertex.size() == d, "gen_lower_bound_instance: witness vertex length differs from tuple length");
        std::vector<double> probs(h.n_domain() * h.n_labels(), 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const double mass = d == 1 ? 1.0 : (i == 0 ? head : (1.0 - head) / static_cast<double>(d - 1));
            probs[witness.points[i] * h.n_labels() + vertex[i]] += mass;
        }
        family.emplace_back(h.n_domain(), h.n_labels(), std::move(probs));
    }
    return family;
}

std::vector<Distribution> gen_lower_bound_instance(const HypothesisClass& h, double epsilon, std::size_t cap) {
    const auto ds = ds_dimension(h, cap);
    if (!ds.witness) throw ContractViolation("gen_lower_bound_instance: class has no DS-shattered tuple");
    return gen_lower_bound_instance(h, epsilon, *ds.witness);
}

HypothesisClass gen_singleton_class(std::size_t n_domain, std::size_t k) {
    require(n_domain >= 1 && k >= 2, "gen_singleton_class: needs n_domain >= 1 and K >= 2");
    std::vector<Hypothesis> members{Hypothesis::constant(n_domain, 0)};
    for (std::size_t j = 0; j < n_domain; ++j)
        for (std::size_t c = 1; c < k; ++c) {
            std::vector<Label> table(n_domain, 0);
            table[j] = static_cast<Label>(c);
            members.emplace_back(std::move(table));
        }
    return HypothesisClass(n_domain, k, std::move(members));
}

Distribution gen_realizable_distribution(const Hypothesis& target, std::size_t n_labels,
                                         std::span<const double> marginal) {
    require(marginal.size() == target.domain_size(), "gen_realizable_distribution: marginal length differs");
    std::vector<double> probs(target.domain_size() * n_labels, 0.0);
    for (Instance x = 0; x < target.domain_size(); ++x) probs[x * n_labels + target(x)] = marginal[x];
    return Distribution(target.domain_size(), n_labels, std::move(probs));
}

HypothesisClass gen_random_class(std::size_t n_domain, std::size_t k, std::size_t size, Rng& rng) {
    require(n_domain >= 1 && k >= 1 && size >= 1, "gen_random_class: sizes must be positive");
    double space = std::pow(static_cast<double>(k), static_cast<double>(n_domain));
    const std::size_t want = static_cast<std::size_t>(std::min(space, static_cast<double>(size)));
    std::set<Hypothesis> found;
    while (found.size() < want) {
        std::vector<Label> table(n_domain);
        for (auto& y : table) y = static_cast<Label>(rng.uniform_index(k));
        found.emplace(std::move(table));
    }
    return HypothesisClass(n_domain, k, std::vector<Hypothesis>(found.begin(), found.end()));
}

std::vector<LabelVector> gen_random_vertices(std::size_t n, std::size_t k, std::size_t size, Rng& rng) {
    const double space = std::pow(static_cast<double>(k), static_cast<double>(n));
    const std::size_t want = static_cast<std::size_t>(std::min(space, static_cast<double>(size)));
    std::set<LabelVector> found;
    while (found.size() < want) {
        LabelVector v(n);
        for (auto& y : v) y = static_cast<Label>(rng.uniform_index(k));
        found.insert(std::move(v));
    }
    return {found.begin(), found.end()};
}

Distribution gen_random_distribution(std::size_t n_domain, std::size_t n_labels, Rng& rng) {
    std::vector<double> probs(n_domain * n_labels);
    double total = 0.0;
    for (double& p : probs) total += p = rng.uniform01() + 1e-3;
    for (double& p : probs) p /= total;
    // Absorb rounding so the table sums to 1 within the core tolerance.
    double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    probs.back() += 1.0 - sum;
    return Distribution(n_domain, n_labels, std::move(probs));
}

// ---- Monte Carlo -------------------------------------------------------------------

ExcessRiskSummary summarize(std::vector<double> excess, double best_error, double epsilon) {
    ExcessRiskSummary out;
    out.best_error = best_error;
    out.excess = excess;
    if (excess.empty()) return out;
    const double n = static_cast<double>(excess.size());
    out.mean = std::accumulate(excess.begin(), excess.end(), 0.0) / n;
    double ss = 0.0;
    for (double e : excess) ss += (e - out.mean) * (e - out.mean);
    out.stddev = excess.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    out.freq_above = static_cast<double>(std::count_if(excess.begin(), excess.end(), [&](double e) { return e > epsilon; })) / n;
    std::sort(excess.begin(), excess.end());
    auto quantile = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::ceil(q * n)) - 1;
        return excess[std::min(idx, excess.size() - 1)];
    };
    out.median = quantile(0.5);
    out.q90 = quantile(0.9);
    out.max = excess.back();
    return out;
}

ExcessRiskSummary monte_carlo_excess_risk(const Learner& learner, const HypothesisClass& h, const Distribution& p,
                                          std::size_t n, std::size_t trials, std::uint64_t seed, double epsilon,
                                          std::size_t threads) {
    require(trials >= 1, "monte_carlo_excess_risk: trials must be at least 1");
    const double best = best_in_class(h, p).second;
    const Rng root(seed);
    std::function<double(std::size_t)> one = [&](std::size_t i) {
        const Rng trial = root.split(i);
        Rng data = trial.split(0);
        const auto s = sample(p, n, data);
        const auto out = learner(s, trial.split(1).seed());
        return error_rate(out, p) - best;
    };
    return summarize(parallel_map<double>(trials, threads, one), best, epsilon);
}

// ---- experiments -------------------------------------------------------------------

ExperimentSpec experiment_spec_from_json(const json& j) {
    ExperimentSpec spec;
    try {
        spec.generator = j.at("generator");
        spec.learner = j.at("learner");
        spec.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
        spec.trials = j.value("trials", std::size_t{1});
        spec.epsilon = j.value("epsilon", 0.1);
        spec.delta = j.value("delta", 0.1);
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.threads = j.value("threads", std::size_t{1});
        spec.output = j.value("output", std::string());
        spec.name = j.value("name", std::string("experiment"));
    } catch (const json::exception& e) {
        throw IoError(std::string("experiment spec: ") + e.what());
    }
    require(spec.trials >= 1, "experiment spec: trials must be at least 1");
    require(!spec.n_grid.empty(), "experiment spec: n_grid must be nonempty");
    require(std::is_sorted(spec.n_grid.begin(), spec.n_grid.end()), "experiment spec: n_grid must be ascending");
    return spec;
}

json to_json(const ExperimentSpec& spec) {
    return {{"generator", spec.generator}, {"learner", spec.learner}, {"n_grid", spec.n_grid},
            {"trials", spec.trials},       {"epsilon", spec.epsilon}, {"delta", spec.delta},
            {"seed", spec.seed},           {"threads", spec.threads}, {"output", spec.output.string()},
            {"name", spec.name}};
}

Problem build_generator(const json& g) {
    const auto id = g.value("id", std::string());
    if (id == "appendix_a") return gen_appendix_a(g.value("K", std::size_t{11}), g.value("grid", std::size_t{300}));
    if (id == "singleton") {
        const auto n_domain = g.value("n_domain", std::size_t{8});
        const auto k = g.value("K", std::size_t{3});
        auto cls = gen_singleton_class(n_domain, k);
        std::vector<Label> table(n_domain, 0);
        if (g.contains("target_point")) table.at(g.at("target_point").get<std::size_t>()) = g.value("target_label", Label{1});
        std::vector<double> marginal =
            g.value("marginal", std::vector<double>(n_domain, 1.0 / static_cast<double>(n_domain)));
        auto dist = gen_realizable_distribution(Hypothesis(std::move(table)), k, marginal);
        return {std::move(cls), std::move(dist)};
    }
    if (id == "constant") {
        const auto k = g.value("K", std::size_t{2});
        const auto n_domain = g.value("n_domain", std::size_t{1});
        Rng rng(g.value("seed", std::uint64_t{0}));
        return {gen_constant_class(k, n_domain), gen_random_distribution(n_domain, k, rng)};
    }
    if (id == "random") {
        Rng rng(g.value("seed", std::uint64_t{0}));
        const auto n_domain = g.value("n_domain", std::size_t{4});
        const auto k = g.value("K", std::size_t{3});
        auto cls = gen_random_class(n_domain, k, g.value("size", std::size_t{8}), rng);
        return {std::move(cls), gen_random_distribution(n_domain, k, rng)};
    }
    if (id == "files") {
        return {class_from_json(read_json_file(g.at("class").get<std::string>())),
                distribution_from_json(read_json_file(g.at("distribution").get<std::string>()))};
    }
    throw ContractViolation("unknown generator id '" + id + "'");
}

MaplConfig mapl_config_from_json(const json& l, double epsilon, double delta) {
    MaplConfig cfg;
    cfg.mode = parse_mode(l.value("mode", std::string("practical")));
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.eta = l.value("eta", 0.5);
    if (l.contains("d")) cfg.d_override = l.at("d").get<std::size_t>();
    if (l.contains("d_n")) cfg.d_n_override = l.at("d_n").get<std::size_t>();
    cfg.practical_scale = l.value("practical_scale", cfg.practical_scale);
    cfg.cover.max_blocks = l.value("max_blocks", cfg.cover.max_blocks);
    if (l.value("cover", std::string("block_aligned")) == "full") cfg.cover.mode = CoverMode::full;
    return cfg;
}

Learner build_learner(const json& l, const HypothesisClass& h, double epsilon, double delta) {
    const auto id = l.value("id", std::string());
    if (id == "erm")
        return [h](std::span<const Example> s, std::uint64_t) { return h[most_consistent_member(h, s)]; };
    if (id == "mapl") {
        auto cfg = mapl_config_from_json(l, epsilon, delta);
        // Resolve the dimensions once rather than in every trial.
        const auto [d, d_n] = mapl_dimensions(h, cfg);
        cfg.d_override = d;
        cfg.d_n_override = d_n;
        return [h, cfg](std::span<const Example> s, std::uint64_t seed) {
            MaplConfig c = cfg;
            c.seed = seed;
            return mapl(s, h, c).hypothesis;
        };
    }
    throw ContractViolation("unknown learner id '" + id + "'");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string trials_csv(std::span<const TrialRecord> records) {
    std::string out = std::string(kTrialCsvVersion) + "\n";
    out += "trial,n,seed,error,best_error,excess,list_miss,cover_size,list_length,menu_size,compressed_size\n";
    for (const auto& r : records) {
        out += std::to_string(r.trial) + "," + std::to_string(r.n) + "," + std::to_string(r.seed) + "," + fmt(r.error) +
               "," + fmt(r.best_error) + "," + fmt(r.excess) + "," + fmt(r.list_miss) + "," +
               std::to_string(r.cover_size) + "," + std::to_string(r.list_length) + "," +
               std::to_string(r.menu_size) + "," + std::to_string(r.compressed_size) + "\n";
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const auto [cls, dist] = build_generator(spec.generator);
    const auto [best_h, best_err] = best_in_class(cls, dist);
    const bool is_mapl = spec.learner.value("id", std::string()) == "mapl";
    MaplConfig cfg;
    Learner learner;
    if (is_mapl) {
        cfg = mapl_config_from_json(spec.learner, spec.epsilon, spec.delta);
        const auto [d, d_n] = mapl_dimensions(cls, cfg);
        cfg.d_override = d;
        cfg.d_n_override = d_n;
    } else {
        learner = build_learner(spec.learner, cls, spec.epsilon, spec.delta);
    }

    const Rng root(spec.seed);
    ExperimentResult result;
    const std::size_t total = spec.n_grid.size() * spec.trials;
    std::function<TrialRecord(std::size_t)> one = [&](std::size_t item) {
        const auto start = std::chrono::steady_clock::now();
        TrialRecord r;
        r.n = spec.n_grid[item / spec.trials];
        r.trial = item % spec.trials;
        const Rng trial = root.split(r.n).split(r.trial);
        r.seed = trial.seed();
        Rng data = trial.split(0);
        const auto s = sample(dist, r.n, data);
        Hypothesis out;
        if (is_mapl) {
            MaplConfig c = cfg;
            c.seed = trial.split(1).seed();
            const auto res = mapl(s, cls, c);
            out = res.hypothesis;
            r.list_miss = list_miss_probability(best_h, res.report.list, dist);
            r.cover_size = res.report.cover_size;
            r.list_length = res.report.list_length;
            r.menu_size = res.report.menu_size;
            r.compressed_size = res.report.compressed_size;
        } else {
            out = learner(s, trial.split(1).seed());
        }
        r.error = error_rate(out, dist);
        r.best_error = best_err;
        r.excess = r.error - best_err;
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    };
    result.records = parallel_map<TrialRecord>(total, spec.threads, one);
    result.csv = trials_csv(result.records);

    json per_n = json::array();
    double wall = 0.0;
    for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
        std::vector<double> excess;
        double n_wall = 0.0;
        for (std::size_t t = 0; t < spec.trials; ++t) {
            const auto& r = result.records[k * spec.trials + t];
            excess.push_back(r.excess);
            n_wall += r.wall_seconds;
        }
        wall += n_wall;
        const auto s = summarize(excess, best_err, spec.epsilon);
        per_n.push_back({{"n", spec.n_grid[k]},        {"mean_excess", s.mean}, {"stddev", s.stddev},
                         {"median", s.median},         {"q90", s.q90},          {"max", s.max},
                         {"freq_above_epsilon", s.freq_above}, {"wall_seconds", n_wall}});
    }
    result.summary = {{"version", 1},         {"spec", to_json(spec)}, {"best_error", best_err},
                      {"mode", is_mapl ? to_string(cfg.mode) : std::string("n/a")},
                      {"per_n", per_n},       {"wall_seconds", wall}};
    if (!spec.output.empty()) {
        result.csv_path = spec.output / (spec.name + ".csv");
        result.summary_path = spec.output / (spec.name + ".json");
        write_text_file(result.csv_path, result.csv);
        write_json_file(result.summary_path, result.summary);
    }
    return result;
}

} // namespace mapl
