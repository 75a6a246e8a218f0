#include "mapl/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "mapl/dimensions.hpp"
#include "mapl/listbound.hpp"
#include "mapl/listlearn.hpp"

namespace mapl {

namespace {

/// Re-throws the active stage failure with the stage named in the message.
template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    const std::string tag = std::string("stage ") + stage + ": ";
    try {
        return fn();
    } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(tag + e.what());
    } catch (const CompressionFailure& e) {
        throw CompressionFailure(tag + e.what());
    } catch (const NotRealizable& e) {
        throw NotRealizable(tag + e.what());
    } catch (const ContractViolation& e) {
        throw ContractViolation(tag + e.what());
    }
}

std::size_t at_least(double v, std::size_t floor) {
    if (!(v < 1e18)) throw BudgetExceeded("sample_size_calculator: size overflows");
    return std::max<std::size_t>(static_cast<std::size_t>(std::ceil(v)), floor);
}

} // namespace

std::tuple<SampleSequence, SampleSequence, SampleSequence> split_thirds(std::span<const Example> s) {
    require(s.size() >= 3, "split_thirds: needs at least 3 examples");
    const std::size_t k = s.size() / 3;
    return {SampleSequence(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k)),
            SampleSequence(s.begin() + static_cast<std::ptrdiff_t>(k), s.begin() + static_cast<std::ptrdiff_t>(2 * k)),
            SampleSequence(s.begin() + static_cast<std::ptrdiff_t>(2 * k), s.end())};
}

SampleSizes sample_size_calculator(std::size_t d, std::size_t d_n, double epsilon, double delta, Mode mode,
                                   std::optional<std::size_t> cover_size, double practical_scale, double gamma) {
    require(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0,
            "sample_size_calculator: epsilon and delta must lie in (0, 1)");
    require(d >= 1 && d_n >= 1, "sample_size_calculator: dimensions must be at least 1");
    const double dd = static_cast<double>(d);
    const double ln_d = std::log(std::max(dd / epsilon, 1.0));
    const double n1 = (dd * ln_d * ln_d + std::log(1.0 / delta)) / epsilon;

    double ln_f = 0.0;
    if (cover_size) {
        ln_f = std::log(static_cast<double>(std::max<std::size_t>(*cover_size, 1)));
    } else {
        const auto n1i = static_cast<std::size_t>(std::ceil(n1));
        const double k = static_cast<double>(scsr_rounds(n1i, gamma) * d);
        ln_f = (k + 1.0) * std::log(static_cast<double>(n1i));
    }
    const double n2 = std::ceil(8.0 * (2.0 * ln_f + 7.0 * std::log(9.0 / delta) + 6.0) / epsilon);

    const double dn = static_cast<double>(d_n);
    const double a = dn * std::log(std::max(n2, 2.0));
    const double ln_a = std::log(std::max(a / epsilon, 1.0));
    const double n3 = (a * ln_a * ln_a + std::log(1.0 / delta)) / (epsilon * epsilon);

    const double scale = mode == Mode::practical ? practical_scale : 1.0;
    const std::size_t floor = mode == Mode::practical ? 3 : 1;
    return {at_least(n1 * scale, floor), at_least(n2 * scale, floor), at_least(n3 * scale, floor), true};
}

std::pair<std::size_t, std::size_t> mapl_dimensions(const HypothesisClass& h, const MaplConfig& cfg) {
    const std::size_t d = cfg.d_override ? *cfg.d_override : weak_size(h, cfg.compression);
    std::size_t d_n = 0;
    if (cfg.d_n_override) {
        d_n = *cfg.d_n_override;
    } else {
        d_n = natarajan_dimension(h, std::max<std::size_t>(h.distinct_columns().size(), 1)).dimension;
    }
    return {std::max<std::size_t>(d, 1), std::max<std::size_t>(d_n, 1)};
}

MaplResult mapl_stages(std::span<const Example> s1, std::span<const Example> s2, std::span<const Example> s3,
                       const HypothesisClass& h, const MaplConfig& cfg) {
    require(!s2.empty(), "mapl: the list stage needs at least one example");
    const auto [d, d_n] = in_stage("dimensions", [&] { return mapl_dimensions(h, cfg); });
    const Rng root(cfg.seed);

    MaplResult result;
    auto& rep = result.report;
    rep.mode = cfg.mode;
    rep.n1 = s1.size();
    rep.n2 = s2.size();
    rep.n3 = s3.size();
    rep.d_weak = d;
    rep.d_n = d_n;

    CompressionParams scsr = cfg.compression;
    scsr.mode = cfg.mode;
    scsr.d_weak = d;
    rep.cover = in_stage("cover", [&] {
        CoverOptions opts = cfg.cover;
        opts.seed = root.split(1).seed();
        return cc_enumerate(s1, h, make_scsr_scheme(h, scsr), opts);
    });
    rep.cover_size = rep.cover.size();

    const auto mw = in_stage("list", [&] {
        return mw_list_learn(s2.size(), s2, cfg.eta, rep.cover, root.split(2).seed());
    });
    rep.list = mw.list;
    rep.list_indices.assign(mw.chosen.begin(), mw.chosen.end() - 1);
    rep.list_length = rep.list.size();
    rep.menu = menu_from_list(rep.list, h.n_domain(), h.n_labels());
    rep.menu_size = rep.menu.size();

    CompressionParams lscs = cfg.compression;
    lscs.mode = cfg.mode;
    rep.lscs_block = lscs_block_size(d_n, rep.menu_size);
    result.hypothesis = in_stage("final", [&] {
        BoostReport boost;
        const auto idx = lscs_compress(s3, h, rep.menu, d_n, lscs, root.split(3).seed(), &boost);
        rep.compressed_size = idx.size();
        rep.boost_rounds = boost.rounds;
        SampleSequence t;
        for (auto i : idx) t.push_back(s3[i]);
        return lscs_reconstruct(t, h, rep.menu, d_n);
    });
    return result;
}

MaplResult mapl(std::span<const Example> s, const HypothesisClass& h, const MaplConfig& cfg) {
    const auto [s1, s2, s3] = split_thirds(s);
    auto result = mapl_stages(s1, s2, s3, h, cfg);
    result.report.entry = "split";
    return result;
}

MaplResult mapl_sized(const Distribution& p, const HypothesisClass& h, const MaplConfig& cfg) {
    require(p.n_domain() == h.n_domain() && p.n_labels() == h.n_labels(),
            "mapl_sized: distribution and class dimensions differ");
    const auto [d, d_n] = in_stage("dimensions", [&] { return mapl_dimensions(h, cfg); });
    const double gamma = cfg.compression.gamma;
    const auto first = sample_size_calculator(d, d_n, cfg.epsilon, cfg.delta, cfg.mode, std::nullopt,
                                              cfg.practical_scale, gamma);
    const Rng root(cfg.seed);
    Rng draw1 = root.split(11);
    const auto s1 = sample(p, first.n1, draw1);

    // Size the later stages from the cover this sample actually produces.
    CompressionParams scsr = cfg.compression;
    scsr.mode = cfg.mode;
    scsr.d_weak = d;
    CoverOptions opts = cfg.cover;
    opts.seed = root.split(1).seed();
    const auto cover = in_stage("cover", [&] { return cc_enumerate(s1, h, make_scsr_scheme(h, scsr), opts); });
    const auto sizes = sample_size_calculator(d, d_n, cfg.epsilon, cfg.delta, cfg.mode, cover.size(),
                                              cfg.practical_scale, gamma);
    Rng draw2 = root.split(12);
    Rng draw3 = root.split(13);
    const auto s2 = sample(p, sizes.n2, draw2);
    const auto s3 = sample(p, sizes.n3, draw3);
    auto result = mapl_stages(s1, s2, s3, h, cfg);
    result.report.entry = "sized";
    return result;
}

} // namespace mapl
