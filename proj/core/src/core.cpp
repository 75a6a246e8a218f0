#include "mapl/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace mapl {

bool Hypothesis::realizes(std::span<const Example> s) const {
    return std::all_of(s.begin(), s.end(), [&](const Example& z) { return table_[z.x] == z.y; });
}

HypothesisClass::HypothesisClass(std::size_t n_domain, std::size_t n_labels, std::vector<Hypothesis> members)
    : n_domain_(n_domain), n_labels_(n_labels), members_(std::move(members)) {
    require(!members_.empty(), "HypothesisClass: class must be nonempty");
    require(n_labels_ >= 1, "HypothesisClass: label alphabet must be nonempty");
    for (const auto& h : members_) {
        require(h.domain_size() == n_domain_, "HypothesisClass: table length differs from domain size");
        for (Label y : h.table()) require(y < n_labels_, "HypothesisClass: label out of range");
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());

    std::map<std::vector<Label>, std::size_t> seen;
    column_id_.reserve(n_domain_);
    for (Instance x = 0; x < n_domain_; ++x) {
        std::vector<Label> col;
        col.reserve(members_.size());
        for (const auto& h : members_) col.push_back(h(x));
        auto [it, fresh] = seen.emplace(std::move(col), column_reps_.size());
        if (fresh) column_reps_.push_back(x);
        column_id_.push_back(it->second);
    }
}

std::vector<LabelVector> HypothesisClass::project(std::span<const Instance> points) const {
    std::vector<LabelVector> out;
    out.reserve(members_.size());
    for (const auto& h : members_) {
        LabelVector v;
        v.reserve(points.size());
        for (Instance x : points) {
            require(x < n_domain_, "project: instance out of range");
            v.push_back(h(x));
        }
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool HypothesisClass::realizes(std::span<const Example> s) const {
    return std::any_of(members_.begin(), members_.end(), [&](const Hypothesis& h) { return h.realizes(s); });
}

Menu::Menu(std::size_t n_labels, std::vector<std::vector<Label>> sets) : n_labels_(n_labels), sets_(std::move(sets)) {
    for (auto& s : sets_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (Label y : s) require(y < n_labels_, "Menu: label out of range");
    }
}

Menu Menu::full(std::size_t n_domain, std::size_t n_labels) {
    std::vector<Label> all(n_labels);
    for (std::size_t y = 0; y < n_labels; ++y) all[y] = static_cast<Label>(y);
    return Menu(n_labels, std::vector<std::vector<Label>>(n_domain, all));
}

bool Menu::contains(Instance x, Label y) const {
    const auto& s = sets_[x];
    return std::binary_search(s.begin(), s.end(), y);
}

std::size_t Menu::size() const noexcept {
    std::size_t p = 0;
    for (const auto& s : sets_) p = std::max(p, s.size());
    return p;
}

// ---- Distribution ------------------------------------------------------------

Distribution::Distribution(std::size_t n_domain, std::size_t n_labels, std::vector<double> probs)
    : n_domain_(n_domain), n_labels_(n_labels), probs_(std::move(probs)) {
    require(probs_.size() == n_domain_ * n_labels_, "Distribution: table size must be n_domain * n_labels");
    double total = 0.0;
    for (double p : probs_) {
        require(p >= 0.0 && std::isfinite(p), "Distribution: probabilities must be finite and nonnegative");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, "Distribution: probabilities must sum to 1 (within 1e-12)");
    finalize();
}

Distribution Distribution::exact(std::size_t n_domain, std::size_t n_labels, std::vector<Rational> probs) {
    require(probs.size() == n_domain * n_labels, "Distribution: table size must be n_domain * n_labels");
    Rational total(0);
    for (const auto& p : probs) {
        require(p >= Rational(0), "Distribution: probabilities must be nonnegative");
        total += p;
    }
    require(total == Rational(1), "Distribution: exact probabilities must sum to exactly 1");
    Distribution d;
    d.n_domain_ = n_domain;
    d.n_labels_ = n_labels;
    d.probs_.reserve(probs.size());
    for (const auto& p : probs) d.probs_.push_back(p.to_double());
    d.exact_ = std::move(probs);
    d.finalize();
    return d;
}

Distribution Distribution::from_triples(std::size_t n_domain, std::size_t n_labels,
                                        std::span<const std::tuple<Instance, Label, double>> triples,
                                        double tolerance) {
    std::vector<double> probs(n_domain * n_labels, 0.0);
    double total = 0.0;
    for (const auto& [x, y, p] : triples) {
        require(x < n_domain && y < n_labels, "Distribution: (x, y) out of range");
        require(p >= 0.0 && std::isfinite(p), "Distribution: probabilities must be finite and nonnegative");
        probs[x * n_labels + y] += p;
        total += p;
    }
    require(std::abs(total - 1.0) <= tolerance,
            "Distribution: probabilities sum to " + std::to_string(total) + ", expected 1");
    for (double& p : probs) p /= total;
    return Distribution(n_domain, n_labels, std::move(probs));
}

void Distribution::finalize() {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) {
            acc += probs_[i];
            cdf_.push_back(acc);
            support_.push_back(static_cast<std::uint32_t>(i));
        }
    }
}

double Distribution::marginal(Instance x) const {
    double m = 0.0;
    for (std::size_t y = 0; y < n_labels_; ++y) m += probs_[x * n_labels_ + y];
    return m;
}

Example Distribution::draw(double u) const {
    const double target = u * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
    if (it == cdf_.end()) --it;
    const auto cell = support_[static_cast<std::size_t>(it - cdf_.begin())];
    return Example{static_cast<Instance>(cell / n_labels_), static_cast<Label>(cell % n_labels_)};
}

// ---- measures ------------------------------------------------------------------

void check_compatible(const Hypothesis& h, const Distribution& p) {
    require(h.domain_size() == p.n_domain(), "hypothesis and distribution have different domain sizes");
}

double error_rate(const Hypothesis& h, const Distribution& p) {
    check_compatible(h, p);
    double err = 0.0;
    for (Instance x = 0; x < p.n_domain(); ++x)
        for (Label y = 0; y < p.n_labels(); ++y)
            if (y != h(x)) err += p.prob(x, y);
    return std::clamp(err, 0.0, 1.0);
}

Rational error_rate_exact(const Hypothesis& h, const Distribution& p) {
    check_compatible(h, p);
    require(p.has_exact(), "error_rate_exact: distribution has no exact table");
    Rational err(0);
    for (Instance x = 0; x < p.n_domain(); ++x)
        for (Label y = 0; y < p.n_labels(); ++y)
            if (y != h(x)) err += p.exact_prob(x, y);
    return err;
}

Rational empirical_error(const Hypothesis& h, std::span<const Example> s) {
    if (s.empty()) return Rational(0);
    std::int64_t wrong = 0;
    for (const auto& z : s) wrong += (h(z.x) != z.y);
    return Rational(wrong, static_cast<std::int64_t>(s.size()));
}

SampleSequence realizable_subsequence(std::span<const Example> s, const Hypothesis& h) {
    SampleSequence out;
    for (const auto& z : s)
        if (h(z.x) == z.y) out.push_back(z);
    return out;
}

int masked_loss(const Hypothesis& hstar, const Hypothesis& f, const Example& z) {
    return hstar(z.x) == z.y && f(z.x) != z.y ? 1 : 0;
}

int menu_loss(const Menu& mu, const Hypothesis& f, const Example& z) {
    return f(z.x) != z.y && mu.contains(z.x, z.y) ? 1 : 0;
}

Rational empirical_menu_loss(const Menu& mu, const Hypothesis& f, std::span<const Example> s) {
    if (s.empty()) return Rational(0);
    std::int64_t loss = 0;
    for (const auto& z : s) loss += menu_loss(mu, f, z);
    return Rational(loss, static_cast<std::int64_t>(s.size()));
}

SampleSequence sample(const Distribution& p, std::size_t n, Rng& rng) {
    SampleSequence out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(p.draw(rng.uniform01()));
    return out;
}

SampleSequence sample(const Distribution& p, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample(p, n, rng);
}

std::pair<Hypothesis, double> best_in_class(const HypothesisClass& h, const Distribution& p) {
    std::size_t best = 0;
    double best_err = error_rate(h[0], p);
    for (std::size_t i = 1; i < h.size(); ++i) {
        const double e = error_rate(h[i], p);
        if (e < best_err) {
            best = i;
            best_err = e;
        }
    }
    return {h[best], best_err};
}

std::size_t most_consistent_member(const HypothesisClass& h, std::span<const Example> s) {
    std::size_t best = 0;
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        std::size_t c = 0;
        for (const auto& z : s) c += (h[i](z.x) == z.y);
        if (i == 0 || c > best_count) {
            best = i;
            best_count = c;
        }
    }
    return best;
}

} // namespace mapl
