// Command-line workbench over the mapl library. Every subcommand prints one
// JSON document on stdout and, with --out, also writes it under that
// directory. Exit status: 0 success, 2 invariant violation or bad input,
// 3 search budget exhausted.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mapl/mapl.hpp"

using namespace mapl;
using nlohmann::json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string mode = "practical";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--mode", c.mode, "faithful or practical")->check(CLI::IsMember({"faithful", "practical"}));
    cmd->add_option("--out", c.out, "Directory to write the result into");
}

void emit(const json& j, const Common& c, const std::string& file) {
    std::cout << j.dump(2) << "\n";
    if (!c.out.empty()) write_json_file(std::filesystem::path(c.out) / file, j);
}

json hypotheses_json(std::size_t n_domain, std::size_t n_labels, std::span<const Hypothesis> hs) {
    json tables = json::array();
    for (const auto& h : hs) tables.push_back(h.table());
    return {{"n_domain", n_domain}, {"n_labels", n_labels}, {"hypotheses", tables}};
}

SampleSequence checked_sample(const LabeledSample& s, const HypothesisClass& h) {
    require(s.n_domain == h.n_domain() && s.n_labels == h.n_labels(), "sample and class dimensions differ");
    return s.examples;
}

json report_json(const MaplReport& r) {
    return {{"entry", r.entry},
            {"mode", to_string(r.mode)},
            {"n1", r.n1},
            {"n2", r.n2},
            {"n3", r.n3},
            {"d_weak", r.d_weak},
            {"d_n", r.d_n},
            {"cover_size", r.cover_size},
            {"list_length", r.list_length},
            {"menu_size", r.menu_size},
            {"lscs_block", r.lscs_block},
            {"compressed_size", r.compressed_size},
            {"boost_rounds", r.boost_rounds},
            {"list_indices", r.list_indices},
            {"menu", to_json(r.menu)}};
}

json run_dims(const std::string& file, std::size_t cap, std::size_t max_m) {
    const auto h = class_from_json(read_json_file(file));
    const auto dn = natarajan_dimension(h, cap);
    const auto ds = ds_dimension(h, cap);
    json out{{"d_N", dn.dimension},
             {"d_DS", ds.dimension},
             {"exact", dn.status == SearchStatus::exact && ds.status == SearchStatus::exact}};
    out["natarajan_witness"] = dn.witness ? json{{"points", dn.witness->points}, {"f", dn.witness->f}, {"g", dn.witness->g}}
                                          : json(nullptr);
    out["ds_witness"] = ds.witness ? json{{"points", ds.witness->points}, {"cube", ds.witness->cube}} : json(nullptr);
    json profile = json::array();
    for (std::size_t m = 1; m <= max_m; ++m) {
        const auto d = density(h, m);
        profile.push_back({{"m", m}, {"density", d.value.str()}, {"value", d.value.to_double()}, {"exact", d.exact}});
    }
    out["density_profile"] = profile;
    return out;
}

json run_orient(const std::string& file) {
    const auto vs = vertex_set_from_json(read_json_file(file));
    const auto g = OneInclusionGraph::build(vs.vertices, vs.n);
    const auto o = min_max_outdegree_orientation(g);
    json edges = json::array();
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto& edge = g.edges()[e];
        if (edge.members.size() < 2) continue;
        json members = json::array();
        for (auto v : edge.members) members.push_back(g.vertices()[v]);
        edges.push_back({{"direction", edge.direction}, {"members", members}, {"head", g.vertices()[o.head[e]]}});
    }
    json outdeg = json::array();
    for (std::size_t v = 0; v < g.vertices().size(); ++v)
        outdeg.push_back({{"vertex", g.vertices()[v]}, {"out_degree", out_degree(g, o.head, v)}});
    return {{"k", o.max_out_degree}, {"edges", edges}, {"out_degrees", outdeg}};
}

CompressionParams params_for(const Common& c, std::size_t d_weak, std::size_t max_blocks) {
    CompressionParams p;
    p.mode = parse_mode(c.mode);
    p.d_weak = d_weak;
    p.max_blocks = max_blocks;
    return p;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapl: agnostic multiclass learning workbench"};
    app.require_subcommand(1);

    Common common;
    std::string class_file;
    std::string sample_file;
    std::string menu_file;
    std::string dist_file;
    std::string vertex_file;
    std::string spec_file;
    std::size_t cap = 4;
    std::size_t max_m = 3;
    std::size_t d_weak = 0;
    std::size_t max_blocks = 0;
    std::size_t d_n = 0;
    std::string cover_mode = "block_aligned";
    std::size_t T = 0;
    double eta = 0.5;
    double epsilon = 0.1;
    double delta = 0.1;
    std::size_t n = 0;
    std::size_t threads = 0;

    auto* dims = app.add_subcommand("dims", "Natarajan and DS dimensions, witnesses, density profile");
    dims->add_option("class", class_file, "Class file")->required();
    dims->add_option("--cap", cap, "Largest dimension searched");
    dims->add_option("--max-m", max_m, "Density profile up to this many points");
    add_common(dims, common);

    auto* orient = app.add_subcommand("orient", "Minimum max-out-degree orientation of a one-inclusion graph");
    orient->add_option("vertices", vertex_file, "Vertex-set file")->required();
    add_common(orient, common);

    auto* compress = app.add_subcommand("compress", "Compress a sample and reconstruct");
    compress->add_option("class", class_file, "Class file")->required();
    compress->add_option("sample", sample_file, "Sample file")->required();
    compress->add_option("--d-weak", d_weak, "Weak sample size (default: derived)");
    compress->add_option("--max-blocks", max_blocks, "Practical cap on blocks");
    add_common(compress, common);

    auto* cover = app.add_subcommand("cover", "Enumerate the finite cover of a sample");
    cover->add_option("class", class_file, "Class file")->required();
    cover->add_option("sample", sample_file, "Sample file")->required();
    cover->add_option("--d-weak", d_weak, "Weak sample size (default: derived)");
    cover->add_option("--max-blocks", max_blocks, "Blocks per majority");
    cover->add_option("--cover-mode", cover_mode, "full or block_aligned")
        ->check(CLI::IsMember({"full", "block_aligned"}));
    add_common(cover, common);

    auto* list_learn = app.add_subcommand("list-learn", "Multiplicative-weights list over a finite class");
    list_learn->add_option("class", class_file, "Finite class F")->required();
    list_learn->add_option("sample", sample_file, "Sample file")->required();
    list_learn->add_option("--T", T, "Rounds (default: sample length)");
    list_learn->add_option("--eta", eta, "Step size in (0, 1]");
    add_common(list_learn, common);

    auto* list_bound = app.add_subcommand("list-bound", "Menu-restricted compression learner");
    list_bound->add_option("class", class_file, "Class file")->required();
    list_bound->add_option("menu", menu_file, "Menu file")->required();
    list_bound->add_option("sample", sample_file, "Sample file")->required();
    list_bound->add_option("--d-n", d_n, "Natarajan dimension (default: computed)");
    add_common(list_bound, common);

    auto* mapl_cmd = app.add_subcommand("mapl", "Run the three-stage agnostic learner");
    mapl_cmd->add_option("class", class_file, "Class file")->required();
    auto* dist_opt = mapl_cmd->add_option("--distribution", dist_file, "Distribution file");
    auto* sample_opt = mapl_cmd->add_option("--sample", sample_file, "Sample file");
    dist_opt->excludes(sample_opt);
    mapl_cmd->add_option("--n", n, "Sample size drawn from the distribution (default: calculator sizes)");
    mapl_cmd->add_option("--epsilon", epsilon, "Accuracy");
    mapl_cmd->add_option("--delta", delta, "Confidence");
    mapl_cmd->add_option("--max-blocks", max_blocks, "Blocks per majority in the cover");
    add_common(mapl_cmd, common);

    auto* bench = app.add_subcommand("bench", "Run an experiment spec");
    bench->add_option("spec", spec_file, "Experiment spec file")->required();
    bench->add_option("--threads", threads, "Worker threads (default: from spec)");
    add_common(bench, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*dims) {
            emit(run_dims(class_file, cap, max_m), common, "dims.json");
        } else if (*orient) {
            emit(run_orient(vertex_file), common, "orient.json");
        } else if (*compress) {
            const auto h = class_from_json(read_json_file(class_file));
            const auto s = checked_sample(sample_from_json(read_json_file(sample_file)), h);
            auto params = params_for(common, d_weak, max_blocks);
            params.d_weak = weak_size(h, params);
            BoostReport rep;
            const auto idx = scsr_compress(s, h, params, common.seed, &rep);
            SampleSequence t;
            for (auto i : idx) t.push_back(s[i]);
            const auto out = scsr_reconstruct(t, h, params);
            emit({{"indices", idx},
                  {"size", idx.size()},
                  {"size_bound", scsr_size(s.size(), params.d_weak, params)},
                  {"d_weak", params.d_weak},
                  {"rounds", rep.rounds},
                  {"hypothesis", to_json(out)},
                  {"empirical_error", empirical_error(out, s).str()}},
                 common, "compress.json");
        } else if (*cover) {
            const auto h = class_from_json(read_json_file(class_file));
            const auto s = checked_sample(sample_from_json(read_json_file(sample_file)), h);
            auto params = params_for(common, d_weak, max_blocks);
            CoverOptions opts;
            opts.mode = cover_mode == "full" ? CoverMode::full : CoverMode::block_aligned;
            opts.max_blocks = std::max<std::size_t>(max_blocks, 1);
            opts.seed = common.seed;
            emit(to_json(cc_enumerate(s, h, make_scsr_scheme(h, params), opts)), common, "cover.json");
        } else if (*list_learn) {
            const auto f = class_from_json(read_json_file(class_file));
            const auto s = checked_sample(sample_from_json(read_json_file(sample_file)), f);
            const auto out = mw_list_learn(T == 0 ? s.size() : T, s, eta, f, common.seed);
            emit({{"list", hypotheses_json(f.n_domain(), f.n_labels(), out.list)},
                  {"trace", {{"chosen", out.chosen}, {"reward", out.reward}}}},
                 common, "list.json");
        } else if (*list_bound) {
            const auto h = class_from_json(read_json_file(class_file));
            const auto mu = menu_from_json(read_json_file(menu_file));
            require(mu.n_domain() == h.n_domain() && mu.n_labels() == h.n_labels(), "menu and class dimensions differ");
            const auto s = checked_sample(sample_from_json(read_json_file(sample_file)), h);
            const std::size_t dn =
                d_n > 0 ? d_n : std::max<std::size_t>(natarajan_dimension(h, h.n_domain()).dimension, 1);
            auto params = params_for(common, 0, max_blocks);
            const auto idx = lscs_compress(s, h, mu, dn, params, common.seed);
            SampleSequence t;
            for (auto i : idx) t.push_back(s[i]);
            const auto out = lscs_reconstruct(t, h, mu, dn);
            emit({{"hypothesis", to_json(out)},
                  {"indices", idx},
                  {"menu_loss", empirical_menu_loss(mu, out, s).str()}},
                 common, "list_bound.json");
        } else if (*mapl_cmd) {
            const auto h = class_from_json(read_json_file(class_file));
            MaplConfig cfg;
            cfg.mode = parse_mode(common.mode);
            cfg.epsilon = epsilon;
            cfg.delta = delta;
            cfg.seed = common.seed;
            if (max_blocks > 0) cfg.cover.max_blocks = max_blocks;
            json out;
            std::optional<Distribution> p;
            MaplResult res;
            if (!dist_file.empty()) {
                p = distribution_from_json(read_json_file(dist_file));
                require(p->n_domain() == h.n_domain() && p->n_labels() == h.n_labels(),
                        "distribution and class dimensions differ");
                if (n > 0) {
                    Rng draw = Rng(common.seed).split(100);
                    res = mapl::mapl(sample(*p, n, draw), h, cfg);
                } else {
                    res = mapl_sized(*p, h, cfg);
                }
            } else {
                require(!sample_file.empty(), "mapl needs --distribution or --sample");
                res = mapl::mapl(checked_sample(sample_from_json(read_json_file(sample_file)), h), h, cfg);
            }
            out["hypothesis"] = to_json(res.hypothesis);
            out["report"] = report_json(res.report);
            if (p) {
                const auto [best, best_err] = best_in_class(h, *p);
                const double err = error_rate(res.hypothesis, *p);
                out["error"] = err;
                out["best_error"] = best_err;
                out["excess"] = err - best_err;
                out["list_miss"] = list_miss_probability(best, res.report.list, *p);
            }
            emit(out, common, "mapl.json");
        } else if (*bench) {
            auto spec = experiment_spec_from_json(read_json_file(spec_file));
            if (!common.out.empty()) spec.output = common.out;
            if (threads > 0) spec.threads = threads;
            const auto res = run_experiment(spec);
            std::cout << res.summary.dump(2) << "\n";
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "mapl: budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const ContractViolation& e) {
        std::cerr << "mapl: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "mapl: " << e.what() << "\n";
        return 2;
    } catch (const NotRealizable& e) {
        std::cerr << "mapl: " << e.what() << "\n";
        return 2;
    } catch (const CompressionFailure& e) {
        std::cerr << "mapl: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "mapl: malformed JSON: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
