#pragma once

// Generators (including the constant-class counterexample and the hard
// distribution family over a DS-shattered tuple), Monte Carlo excess-risk
// estimation, and the experiment runner.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mapl/core.hpp"
#include "mapl/dimensions.hpp"
#include "mapl/pipeline.hpp"

namespace mapl {

// ---- generators ------------------------------------------------------------------

/// {h_0, ..., h_{K-1}} with h_i constant i on n_domain points.
HypothesisClass gen_constant_class(std::size_t k, std::size_t n_domain);

/// A class together with the distribution to learn it under.
struct Problem {
    HypothesisClass cls;
    Distribution dist;
};

/// Constants over K labels on a grid of [0,1]; the first third of the grid
/// carries label 0, the rest a uniform label from {1..K-1}. Exact table.
Problem gen_appendix_a(std::size_t k, std::size_t grid);

/// One distribution per vertex of the witness cube: point 1 of the tuple has
/// mass 1 - 144 e eps, the others share the rest evenly, and each point is
/// labeled by the vertex.
std::vector<Distribution> gen_lower_bound_instance(const HypothesisClass& h, double epsilon,
                                                   const PseudoCubeWitness& witness);
/// Same, with the witness from ds_dimension(h, cap). Throws if d_DS = 0.
std::vector<Distribution> gen_lower_bound_instance(const HypothesisClass& h, double epsilon, std::size_t cap = 4);

/// The all-zero function plus, for every point j and label c != 0, the
/// function that is c at j and 0 elsewhere. Natarajan dimension 1.
HypothesisClass gen_singleton_class(std::size_t n_domain, std::size_t k);

/// P(x, target(x)) = marginal[x].
Distribution gen_realizable_distribution(const Hypothesis& target, std::size_t n_labels,
                                         std::span<const double> marginal);

/// `size` distinct uniformly random tables (fewer if the space is smaller).
HypothesisClass gen_random_class(std::size_t n_domain, std::size_t k, std::size_t size, Rng& rng);

/// Random vertex set in [k]^n with `size` distinct vectors (or fewer).
std::vector<LabelVector> gen_random_vertices(std::size_t n, std::size_t k, std::size_t size, Rng& rng);

/// Random table over n_domain x n_labels (Dirichlet-like via normalized uniforms).
Distribution gen_random_distribution(std::size_t n_domain, std::size_t n_labels, Rng& rng);

// ---- Monte Carlo -------------------------------------------------------------------

/// Learner under test: sample and a seed in, hypothesis out.
using Learner = std::function<Hypothesis(std::span<const Example>, std::uint64_t)>;

struct ExcessRiskSummary {
    std::vector<double> excess;
    double best_error = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
    double q90 = 0.0;
    double max = 0.0;
    /// Fraction of trials with excess > epsilon.
    double freq_above = 0.0;
};

/// Per trial i: s ~ P^n from split(i) of seed, learner seeded by split(i).split(1),
/// excess = er_P(output) - min_H er_P. Trials run on `threads` workers; the
/// result does not depend on the thread count.
ExcessRiskSummary monte_carlo_excess_risk(const Learner& learner, const HypothesisClass& h, const Distribution& p,
                                          std::size_t n, std::size_t trials, std::uint64_t seed,
                                          double epsilon = 0.1, std::size_t threads = 1);

/// Summary statistics of a vector of excess risks.
ExcessRiskSummary summarize(std::vector<double> excess, double best_error, double epsilon);

/// Evaluates fn(0..count-1) on a pool of `threads` workers and returns the
/// results in index order.
template <class T>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += threads) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// ---- experiments -------------------------------------------------------------------

struct TrialRecord {
    std::size_t trial = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double error = 0.0;
    double best_error = 0.0;
    double excess = 0.0;
    /// P(h*(X) = Y not on the menu) for MAPL runs; 0 otherwise.
    double list_miss = 0.0;
    std::size_t cover_size = 0;
    std::size_t list_length = 0;
    std::size_t menu_size = 0;
    std::size_t compressed_size = 0;
    double wall_seconds = 0.0;
};

/// Parsed experiment description (see README for the JSON layout).
struct ExperimentSpec {
    nlohmann::json generator;
    nlohmann::json learner;
    std::vector<std::size_t> n_grid;
    std::size_t trials = 1;
    double epsilon = 0.1;
    double delta = 0.1;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::filesystem::path output;
    /// File stem for the CSV and JSON summary.
    std::string name = "experiment";
};

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);

/// Class and distribution named by a generator description.
Problem build_generator(const nlohmann::json& generator);

/// Learner named by a learner description, for class h.
/// Ids: "mapl" (split mode; keys mode, d, d_n, practical_scale, max_blocks)
/// and "erm" (a member with the fewest mistakes on the sample).
Learner build_learner(const nlohmann::json& learner, const HypothesisClass& h, double epsilon, double delta);

/// MaplConfig from a learner description.
MaplConfig mapl_config_from_json(const nlohmann::json& learner, double epsilon, double delta);

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::string csv;
    nlohmann::json summary;
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
};

inline constexpr const char* kTrialCsvVersion = "# mapl-trials v1";

/// One CSV row per trial in grid-then-trial order. Wall time is kept out of
/// the CSV (it lives in the summary) so reruns are byte-identical.
std::string trials_csv(std::span<const TrialRecord> records);

/// Runs every (n, trial) pair, writes <output>/<name>.csv and
/// <output>/<name>.json when an output directory is set.
ExperimentResult run_experiment(const ExperimentSpec& spec);

} // namespace mapl
