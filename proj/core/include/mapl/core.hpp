#pragma once

// Finite encodings of instances, labels, hypotheses, classes, distributions
// and samples, plus the error measures and losses used by every learner.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "mapl/errors.hpp"
#include "mapl/rational.hpp"
#include "mapl/rng.hpp"

namespace mapl {

using Instance = std::uint32_t;
using Label = std::uint32_t;

/// Label emitted where a learner has nothing better to say.
inline constexpr Label kDefaultLabel = 0;

struct Example {
    Instance x = 0;
    Label y = 0;

    friend auto operator<=>(const Example&, const Example&) = default;
};

using SampleSequence = std::vector<Example>;

/// A total function on [0, n_domain), stored as a label table.
class Hypothesis {
public:
    Hypothesis() = default;
    explicit Hypothesis(std::vector<Label> table) : table_(std::move(table)) {}

    /// The all-`label` table on `n_domain` points.
    static Hypothesis constant(std::size_t n_domain, Label label) { return Hypothesis(std::vector<Label>(n_domain, label)); }

    Label operator()(Instance x) const { return table_[x]; }
    std::size_t domain_size() const noexcept { return table_.size(); }
    const std::vector<Label>& table() const noexcept { return table_; }

    bool realizes(std::span<const Example> s) const;

    friend auto operator<=>(const Hypothesis&, const Hypothesis&) = default;

private:
    std::vector<Label> table_;
};

/// Label vector of a class restricted to a tuple of instances.
using LabelVector = std::vector<Label>;

/// Nonempty, deduplicated set of hypotheses kept in lexicographic table order.
/// The canonical order is the tie-break order used everywhere.
class HypothesisClass {
public:
    HypothesisClass(std::size_t n_domain, std::size_t n_labels, std::vector<Hypothesis> members);

    std::size_t n_domain() const noexcept { return n_domain_; }
    std::size_t n_labels() const noexcept { return n_labels_; }
    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<Hypothesis>& members() const noexcept { return members_; }
    const Hypothesis& operator[](std::size_t i) const { return members_[i]; }

    /// H restricted to `points` (repetitions allowed): sorted distinct label vectors.
    std::vector<LabelVector> project(std::span<const Instance> points) const;

    /// One representative instance per distinct column (h(x))_{h in H).
    /// Instances with equal columns are interchangeable for every projection.
    const std::vector<Instance>& distinct_columns() const noexcept { return column_reps_; }
    /// Index into distinct_columns() of x's column.
    std::size_t column_of(Instance x) const { return column_id_[x]; }

    /// Members satisfying `keep`; empty optional if none do.
    template <class Pred>
    std::optional<HypothesisClass> filter(Pred keep) const {
        std::vector<Hypothesis> out;
        for (const auto& h : members_)
            if (keep(h)) out.push_back(h);
        if (out.empty()) return std::nullopt;
        return HypothesisClass(n_domain_, n_labels_, std::move(out));
    }

    /// Whether some member realizes s.
    bool realizes(std::span<const Example> s) const;

    friend bool operator==(const HypothesisClass& a, const HypothesisClass& b) {
        return a.n_domain_ == b.n_domain_ && a.n_labels_ == b.n_labels_ && a.members_ == b.members_;
    }

private:
    std::size_t n_domain_;
    std::size_t n_labels_;
    std::vector<Hypothesis> members_;
    std::vector<Instance> column_reps_;
    std::vector<std::size_t> column_id_;
};

/// Per-instance finite label set. Each set is sorted and duplicate-free.
class Menu {
public:
    Menu() = default;
    Menu(std::size_t n_labels, std::vector<std::vector<Label>> sets);

    /// Every label allowed everywhere.
    static Menu full(std::size_t n_domain, std::size_t n_labels);

    std::size_t n_domain() const noexcept { return sets_.size(); }
    std::size_t n_labels() const noexcept { return n_labels_; }
    const std::vector<Label>& at(Instance x) const { return sets_[x]; }
    bool contains(Instance x, Label y) const;
    /// Max set cardinality (the menu "size" p).
    std::size_t size() const noexcept;
    bool all_empty() const noexcept { return size() == 0; }
    const std::vector<std::vector<Label>>& sets() const noexcept { return sets_; }

    friend bool operator==(const Menu&, const Menu&) = default;

private:
    std::size_t n_labels_ = 0;
    std::vector<std::vector<Label>> sets_;
};

/// Explicit probability table over (instance, label) pairs. Immutable.
/// Optionally carries the exact rational table it was built from.
class Distribution {
public:
    /// Dense row-major table probs[x * n_labels + y]; must sum to 1 within 1e-12.
    Distribution(std::size_t n_domain, std::size_t n_labels, std::vector<double> probs);

    /// Exact construction; the rationals must sum to exactly 1.
    static Distribution exact(std::size_t n_domain, std::size_t n_labels, std::vector<Rational> probs);

    /// Sparse (x, y, p) triples; sum must be 1 within `tolerance`, after which
    /// the table is renormalized.
    static Distribution from_triples(std::size_t n_domain, std::size_t n_labels,
                                     std::span<const std::tuple<Instance, Label, double>> triples,
                                     double tolerance = 1e-9);

    std::size_t n_domain() const noexcept { return n_domain_; }
    std::size_t n_labels() const noexcept { return n_labels_; }
    double prob(Instance x, Label y) const { return probs_[x * n_labels_ + y]; }
    double marginal(Instance x) const;
    const std::vector<double>& table() const noexcept { return probs_; }

    bool has_exact() const noexcept { return exact_.has_value(); }
    const Rational& exact_prob(Instance x, Label y) const { return (*exact_)[x * n_labels_ + y]; }

    /// Inverse-CDF draw of one example from a uniform in [0,1).
    Example draw(double u) const;

private:
    Distribution() = default;
    void finalize();

    std::size_t n_domain_ = 0;
    std::size_t n_labels_ = 0;
    std::vector<double> probs_;
    std::optional<std::vector<Rational>> exact_;
    std::vector<double> cdf_;
    std::vector<std::uint32_t> support_;
};

// ---- measures and losses ---------------------------------------------------

/// P({(x, y) : y != h(x)}).
double error_rate(const Hypothesis& h, const Distribution& p);
/// Same quantity from the exact table; requires p.has_exact().
Rational error_rate_exact(const Hypothesis& h, const Distribution& p);

/// Fraction of s misclassified by h; 0 on the empty sequence.
Rational empirical_error(const Hypothesis& h, std::span<const Example> s);

/// The examples of s that h gets right, in order.
SampleSequence realizable_subsequence(std::span<const Example> s, const Hypothesis& h);

/// 1{hstar(x) = y != f(x)}.
int masked_loss(const Hypothesis& hstar, const Hypothesis& f, const Example& z);

/// 1{f(x) != y and y in mu(x)}.
int menu_loss(const Menu& mu, const Hypothesis& f, const Example& z);

/// Mean menu loss over s; 0 on the empty sequence.
Rational empirical_menu_loss(const Menu& mu, const Hypothesis& f, std::span<const Example> s);

/// n i.i.d. draws from p.
SampleSequence sample(const Distribution& p, std::size_t n, std::uint64_t seed);
SampleSequence sample(const Distribution& p, std::size_t n, Rng& rng);

/// Minimizer of error_rate over H; the first in canonical order on ties.
std::pair<Hypothesis, double> best_in_class(const HypothesisClass& h, const Distribution& p);

/// Index into H of a member maximizing |s(h)|, first in canonical order on ties.
std::size_t most_consistent_member(const HypothesisClass& h, std::span<const Example> s);

void check_compatible(const Hypothesis& h, const Distribution& p);

} // namespace mapl
