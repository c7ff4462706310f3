#include "ainfty/subset_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ainfty/errors.hpp"

namespace ainfty {

const char* to_string(SubsetStrategy s) {
    switch (s) {
        case SubsetStrategy::Auto: return "auto";
        case SubsetStrategy::Brute: return "brute";
        case SubsetStrategy::ClassExact: return "class-exact";
        case SubsetStrategy::LevelSet: return "level-set";
    }
    return "?";
}

std::optional<SubsetStrategy> parse_strategy(std::string_view text) {
    if (text == "auto") return SubsetStrategy::Auto;
    if (text == "brute") return SubsetStrategy::Brute;
    if (text == "class-exact" || text == "class_exact") return SubsetStrategy::ClassExact;
    if (text == "level-set" || text == "level_set") return SubsetStrategy::LevelSet;
    return std::nullopt;
}

namespace {

std::pair<long, long> exponent_parts(const Rational& delta) {
    if (delta.sign() <= 0) throw std::invalid_argument("delta must be positive");
    if (!delta.numerator().fits_slong_p() || !delta.denominator().fits_slong_p())
        throw Error("delta has an impractically large numerator or denominator");
    return {delta.numerator().get_si(), delta.denominator().get_si()};
}

/// Candidate comparison and final-value computation for one objective on
/// one basis element. Candidates are ranked by an exact rational key so
/// that every strategy agrees on the supremum bit for bit.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual bool feasible(const Rational&, const Rational&) const { return true; }
    virtual Rational key(const Rational& mu, const Rational& w) const = 0;
    virtual ExtendedValue value(const Rational& mu, const Rational& w) const = 0;
    virtual Backend backend() const = 0;
    /// Sort direction for the level-set scan: true = descending weight.
    virtual bool level_set_descending() const = 0;
};

double root_of(const Rational& k, long v) {
    if (k.is_zero()) return 0.0;
    return std::exp(k.log() / static_cast<double>(v));
}

class MeasureOverWeightScorer final : public Scorer {
public:
    MeasureOverWeightScorer(const Instance& inst, std::int32_t base, const Rational& delta)
        : b_measure_(inst.base_measure(base)), b_weight_(inst.base_weight(base)) {
        std::tie(u_, v_) = exponent_parts(delta);
    }
    Rational key(const Rational& mu, const Rational& w) const override {
        return mu.pow_int(v_) / w.pow_int(u_);
    }
    ExtendedValue value(const Rational& mu, const Rational& w) const override {
        if (w.is_zero())
            return ExtendedValue::infinity(backend());
        const Rational frac_mu = mu / b_measure_;
        const Rational frac_w = w / b_weight_;
        if (v_ == 1) return ExtendedValue::exact(frac_mu / frac_w.pow_int(u_));
        return ExtendedValue::floating(root_of(frac_mu.pow_int(v_) / frac_w.pow_int(u_), v_));
    }
    Backend backend() const override { return v_ == 1 ? Backend::Exact : Backend::Floating; }
    bool level_set_descending() const override { return false; }

private:
    long u_ = 1, v_ = 1;
    Rational b_measure_, b_weight_;
};

class WeightOverMeasureScorer final : public Scorer {
public:
    WeightOverMeasureScorer(const Instance& inst, std::int32_t base, const Rational& delta)
        : b_measure_(inst.base_measure(base)), b_weight_(inst.base_weight(base)) {
        std::tie(u_, v_) = exponent_parts(delta);
    }
    Rational key(const Rational& mu, const Rational& w) const override {
        return w.pow_int(v_) / mu.pow_int(u_);
    }
    ExtendedValue value(const Rational& mu, const Rational& w) const override {
        if (w.is_zero()) return ExtendedValue::exact(Rational(0));
        const Rational frac_w = w / b_weight_;
        const Rational frac_mu = mu / b_measure_;
        if (v_ == 1) return ExtendedValue::exact(frac_w / frac_mu.pow_int(u_));
        return ExtendedValue::floating(root_of(frac_w.pow_int(v_) / frac_mu.pow_int(u_), v_));
    }
    Backend backend() const override { return v_ == 1 ? Backend::Exact : Backend::Floating; }
    bool level_set_descending() const override { return true; }

private:
    long u_ = 1, v_ = 1;
    Rational b_measure_, b_weight_;
};

class WeightBudgetScorer final : public Scorer {
public:
    WeightBudgetScorer(const Instance& inst, std::int32_t base, const Rational& alpha)
        : budget_(alpha * inst.base_measure(base)), b_weight_(inst.base_weight(base)) {
        if (alpha.sign() <= 0 || alpha >= Rational(1))
            throw std::invalid_argument("alpha must lie in (0,1)");
    }
    bool feasible(const Rational& mu, const Rational&) const override { return mu < budget_; }
    Rational key(const Rational&, const Rational& w) const override { return w; }
    ExtendedValue value(const Rational&, const Rational& w) const override {
        return ExtendedValue::exact(w / b_weight_);
    }
    Backend backend() const override { return Backend::Exact; }
    bool level_set_descending() const override { return true; }

private:
    Rational budget_, b_weight_;
};

std::unique_ptr<Scorer> make_scorer(const Instance& inst, std::int32_t base,
                                    const SubsetObjective& objective) {
    return std::visit(
        [&](const auto& obj) -> std::unique_ptr<Scorer> {
            using T = std::decay_t<decltype(obj)>;
            if constexpr (std::is_same_v<T, MeasureOverWeightObjective>)
                return std::make_unique<MeasureOverWeightScorer>(inst, base, obj.delta);
            else if constexpr (std::is_same_v<T, WeightOverMeasureObjective>)
                return std::make_unique<WeightOverMeasureScorer>(inst, base, obj.delta);
            else
                return std::make_unique<WeightBudgetScorer>(inst, base, obj.alpha);
        },
        objective);
}

struct Best {
    bool found = false;
    Rational key, mu, w;
    std::vector<std::int32_t> subset;

    bool consider(const Scorer& sc, const Rational& mu_, const Rational& w_,
                  const std::vector<std::int32_t>& subset_) {
        if (!sc.feasible(mu_, w_)) return false;
        Rational k = sc.key(mu_, w_);
        if (!found || k > key) {
            found = true;
            key = std::move(k);
            mu = mu_;
            w = w_;
            subset = subset_;
            return true;
        }
        return false;
    }
};

void brute_dfs(const Instance& inst, std::span<const std::int32_t> atoms, std::size_t i,
               Rational mu, Rational w, std::vector<std::int32_t>& current, const Scorer& sc,
               Best& best) {
    if (i == atoms.size()) {
        if (!current.empty()) best.consider(sc, mu, w, current);
        return;
    }
    const std::int32_t a = atoms[i];
    current.push_back(a);
    brute_dfs(inst, atoms, i + 1, mu + inst.measure(a), w + inst.weight(a) * inst.measure(a),
              current, sc, best);
    current.pop_back();
    brute_dfs(inst, atoms, i + 1, std::move(mu), std::move(w), current, sc, best);
}

SubsetResult run_brute(const Instance& inst, std::int32_t base, const Scorer& sc,
                       const SubsetLimits& limits) {
    const auto atoms = inst.base_atoms(base);
    if (atoms.size() > limits.brute_max_atoms)
        throw StrategyInfeasible("brute subset search over " + std::to_string(atoms.size()) +
                                 " atoms exceeds the bound of " +
                                 std::to_string(limits.brute_max_atoms));
    Best best;
    std::vector<std::int32_t> current;
    brute_dfs(inst, atoms, 0, Rational(0), Rational(0), current, sc, best);
    // No feasible nonempty subset (possible only under a measure budget):
    // the empty set remains and its value is 0.
    if (!best.found)
        return {sc.backend() == Backend::Exact ? ExtendedValue::exact(Rational(0))
                                               : ExtendedValue::floating(0.0),
                {}};
    return {sc.value(best.mu, best.w), std::move(best.subset)};
}

struct AtomClass {
    Rational weight, measure;
    std::vector<std::int32_t> atoms; // instance order
};

std::vector<AtomClass> group_classes(const Instance& inst, std::span<const std::int32_t> atoms) {
    std::vector<AtomClass> classes;
    for (const std::int32_t a : atoms) {
        const Rational& w = inst.weight(a);
        const Rational& m = inst.measure(a);
        auto it = std::find_if(classes.begin(), classes.end(), [&](const AtomClass& c) {
            return c.weight == w && c.measure == m;
        });
        if (it == classes.end()) {
            classes.push_back({w, m, {a}});
        } else {
            it->atoms.push_back(a);
        }
    }
    return classes;
}

void class_dfs(const std::vector<AtomClass>& classes, std::size_t ci, Rational mu, Rational w,
               std::vector<std::size_t>& counts, const Scorer& sc, Best& best,
               std::vector<std::size_t>& best_counts) {
    if (ci == classes.size()) {
        bool any = false;
        for (const std::size_t k : counts)
            if (k > 0) { any = true; break; }
        if (!any) return;
        static const std::vector<std::int32_t> no_subset;
        if (best.consider(sc, mu, w, no_subset)) best_counts = counts;
        return;
    }
    const AtomClass& c = classes[ci];
    const std::size_t cap = c.atoms.size();
    Rational step_mu = c.measure;
    Rational step_w = c.weight * c.measure;
    Rational cur_mu = mu + Rational(static_cast<long>(cap)) * step_mu;
    Rational cur_w = w + Rational(static_cast<long>(cap)) * step_w;
    for (std::size_t k = cap;; --k) {
        counts[ci] = k;
        class_dfs(classes, ci + 1, cur_mu, cur_w, counts, sc, best, best_counts);
        if (k == 0) break;
        cur_mu -= step_mu;
        cur_w -= step_w;
    }
    counts[ci] = 0;
}

SubsetResult run_class_exact(const Instance& inst, std::int32_t base, const Scorer& sc,
                             const SubsetLimits& limits) {
    const auto atoms = inst.base_atoms(base);
    const auto classes = group_classes(inst, atoms);
    double combinations = 1.0;
    for (const AtomClass& c : classes) {
        combinations *= static_cast<double>(c.atoms.size() + 1);
        if (combinations > limits.class_max_combinations)
            throw StrategyInfeasible("class-exact subset search needs more than " +
                                     std::to_string(static_cast<long long>(
                                         limits.class_max_combinations)) +
                                     " count combinations");
    }
    Best best;
    std::vector<std::size_t> counts(classes.size(), 0), best_counts;
    class_dfs(classes, 0, Rational(0), Rational(0), counts, sc, best, best_counts);
    if (!best.found)
        return {sc.backend() == Backend::Exact ? ExtendedValue::exact(Rational(0))
                                               : ExtendedValue::floating(0.0),
                {}};
    std::vector<std::int32_t> subset;
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        subset.insert(subset.end(), classes[ci].atoms.begin(),
                      classes[ci].atoms.begin() + static_cast<long>(best_counts[ci]));
    std::sort(subset.begin(), subset.end());
    return {sc.value(best.mu, best.w), std::move(subset)};
}

SubsetResult run_level_set(const Instance& inst, std::int32_t base, const Scorer& sc) {
    const auto atom_span = inst.base_atoms(base);
    std::vector<std::int32_t> atoms(atom_span.begin(), atom_span.end());
    const bool desc = sc.level_set_descending();
    std::stable_sort(atoms.begin(), atoms.end(), [&](std::int32_t x, std::int32_t y) {
        return desc ? inst.weight(y) < inst.weight(x) : inst.weight(x) < inst.weight(y);
    });
    Best best;
    Rational mu(0), w(0);
    std::vector<std::int32_t> prefix;
    prefix.reserve(atoms.size());
    for (const std::int32_t a : atoms) {
        prefix.push_back(a);
        mu += inst.measure(a);
        w += inst.weight(a) * inst.measure(a);
        best.consider(sc, mu, w, prefix);
    }
    if (!best.found)
        return {sc.backend() == Backend::Exact ? ExtendedValue::exact(Rational(0))
                                               : ExtendedValue::floating(0.0),
                {}};
    std::sort(best.subset.begin(), best.subset.end());
    return {sc.value(best.mu, best.w), std::move(best.subset)};
}

} // namespace

SubsetResult extremal_subset(const Instance& inst, std::int32_t base,
                             const SubsetObjective& objective, SubsetStrategy strategy,
                             const SubsetLimits& limits) {
    const auto sc = make_scorer(inst, base, objective);

    // w(E) = 0 with |E| > 0 forces +infinity for the measure-over-weight
    // objective; any zero-weight atom of B witnesses it.
    if (std::holds_alternative<MeasureOverWeightObjective>(objective)) {
        for (const std::int32_t a : inst.base_atoms(base))
            if (inst.weight(a).is_zero())
                return {ExtendedValue::infinity(sc->backend()), {a}};
    }

    if (strategy == SubsetStrategy::Auto)
        strategy = inst.base_atoms(base).size() <= limits.brute_max_atoms
                       ? SubsetStrategy::Brute
                       : SubsetStrategy::ClassExact;
    switch (strategy) {
        case SubsetStrategy::Brute: return run_brute(inst, base, *sc, limits);
        case SubsetStrategy::ClassExact: return run_class_exact(inst, base, *sc, limits);
        case SubsetStrategy::LevelSet: return run_level_set(inst, base, *sc);
        default: throw Error("unreachable strategy");
    }
}

ExtendedValue subset_objective_value(const Instance& inst, std::int32_t base,
                                     const SubsetObjective& objective,
                                     std::span<const std::int32_t> subset) {
    const auto sc = make_scorer(inst, base, objective);
    if (subset.empty()) return ExtendedValue::exact(Rational(0));
    for (const std::int32_t a : subset)
        if (!inst.base_contains(base, a))
            throw InvalidSet("witness subset atom '" + inst.atom_id(a) +
                             "' lies outside the basis element");
    Rational mu = set_measure(inst, subset);
    Rational w = integral(inst, subset);
    return sc->value(mu, w);
}

} // namespace ainfty
