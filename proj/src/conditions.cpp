#include "ainfty/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ainfty/errors.hpp"

namespace ainfty {

const char* to_string(ConditionId id) {
    switch (id) {
        case ConditionId::P1: return "P1";
        case ConditionId::P1Prime: return "P1'";
        case ConditionId::P2: return "P2";
        case ConditionId::P2Prime: return "P2'";
        case ConditionId::P3: return "P3";
        case ConditionId::P3Prime: return "P3'";
        case ConditionId::P4: return "P4";
        case ConditionId::P4Prime: return "P4'";
        case ConditionId::P5: return "P5";
        case ConditionId::P6: return "P6";
        case ConditionId::P7: return "P7";
        case ConditionId::P8: return "P8";
    }
    return "?";
}

std::optional<ConditionId> parse_condition(std::string_view text) {
    std::string t;
    for (const char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const bool prime = t.ends_with("'") || t.ends_with("p") || t.ends_with("prime");
    if (t.ends_with("prime")) t.resize(t.size() - 5);
    else if (t.ends_with("'") || (t.size() > 2 && t.ends_with("p"))) t.resize(t.size() - 1);
    if (!t.empty() && t.back() == '_') t.pop_back();
    if (t == "p1") return prime ? ConditionId::P1Prime : ConditionId::P1;
    if (t == "p2") return prime ? ConditionId::P2Prime : ConditionId::P2;
    if (t == "p3") return prime ? ConditionId::P3Prime : ConditionId::P3;
    if (t == "p4") return prime ? ConditionId::P4Prime : ConditionId::P4;
    if (!prime) {
        if (t == "p5") return ConditionId::P5;
        if (t == "p6") return ConditionId::P6;
        if (t == "p7") return ConditionId::P7;
        if (t == "p8") return ConditionId::P8;
    }
    return std::nullopt;
}

std::vector<ConditionId> all_conditions() {
    return {ConditionId::P1, ConditionId::P1Prime, ConditionId::P2, ConditionId::P2Prime,
            ConditionId::P3, ConditionId::P3Prime, ConditionId::P4, ConditionId::P4Prime,
            ConditionId::P5, ConditionId::P6,      ConditionId::P7, ConditionId::P8};
}

std::string ConditionParams::str() const {
    std::string out;
    const auto add = [&](const char* name, const Rational& r) {
        if (!out.empty()) out += ';';
        out += name;
        out += '=';
        out += r.str();
    };
    if (p) add("p", *p);
    if (q) add("q", *q);
    if (delta) add("delta", *delta);
    if (alpha) add("alpha", *alpha);
    if (beta) add("beta", *beta);
    if (s_grid) {
        if (!out.empty()) out += ';';
        out += "s_grid=";
        for (std::size_t i = 0; i < s_grid->size(); ++i) {
            if (i) out += '|';
            out += (*s_grid)[i].str();
        }
    }
    return out;
}

namespace {

void require_positive_base_weights(const Instance& inst) {
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        if (inst.base_weight(static_cast<std::int32_t>(b)).is_zero())
            throw ZeroWeightBase(inst.base_name(static_cast<std::int32_t>(b)), b);
}

/// Running per-base maximum with first-found tie-breaking.
struct PerBaseMax {
    std::vector<std::pair<std::int32_t, ExtendedValue>> per_base;
    ExtendedValue best;
    std::int32_t best_base = -1;

    bool add(std::int32_t b, ExtendedValue v) {
        const bool improved = best_base < 0 || v > best;
        per_base.emplace_back(b, std::move(v));
        if (improved) {
            best = per_base.back().second;
            best_base = b;
        }
        return improved;
    }
};

ConstantReport base_report(ConditionId id, ConditionParams params, Backend backend) {
    ConstantReport r;
    r.condition = id;
    r.params = std::move(params);
    r.backend = backend;
    return r;
}

void finish(ConstantReport& r, PerBaseMax& acc) {
    r.per_base = std::move(acc.per_base);
    r.overall = acc.best;
    if (r.witness.base < 0) r.witness.base = acc.best_base;
}

// ---- per-base value routines (shared by evaluators and witness re-checks) --

std::int32_t first_zero_weight_atom(const Instance& inst, std::int32_t b) {
    for (const std::int32_t a : inst.base_atoms(b))
        if (inst.weight(a).is_zero()) return a;
    return -1;
}

ExtendedValue p1_base(const Instance& inst, std::int32_t b, const Rational& p) {
    const bool exact = p == Rational(2);
    if (first_zero_weight_atom(inst, b) >= 0)
        return ExtendedValue::infinity(exact ? Backend::Exact : Backend::Floating);
    if (exact) {
        Rational inv_sum(0);
        for (const std::int32_t a : inst.base_atoms(b))
            inv_sum += inst.measure(a) / inst.weight(a);
        const Rational avg_w = average(inst, b);
        const Rational avg_inv = inv_sum / inst.base_measure(b);
        return ExtendedValue::exact(avg_w * avg_inv);
    }
    // 1 - p' = -1/(p-1)
    const double pd = p.to_double();
    const double e1 = -1.0 / (pd - 1.0);
    double agg = 0.0;
    for (const std::int32_t a : inst.base_atoms(b))
        agg += std::exp(e1 * inst.weight(a).log()) * inst.measure(a).to_double();
    agg /= inst.base_measure(b).to_double();
    const double avg_w = average(inst, b).to_double();
    return ExtendedValue::floating(avg_w * std::pow(agg, pd - 1.0));
}

ExtendedValue p2_base(const Instance& inst, std::int32_t b) {
    if (first_zero_weight_atom(inst, b) >= 0) return ExtendedValue::infinity(Backend::Floating);
    double log_sum = 0.0;
    for (const std::int32_t a : inst.base_atoms(b))
        log_sum += inst.weight(a).log() * inst.measure(a).to_double();
    const double geo = std::exp(log_sum / inst.base_measure(b).to_double());
    return ExtendedValue::floating(average(inst, b).to_double() / geo);
}

ExtendedValue p2p_base(const Instance& inst, std::int32_t b, const Rational& s) {
    const double sd = s.to_double();
    double agg = 0.0;
    for (const std::int32_t a : inst.base_atoms(b)) {
        if (inst.weight(a).is_zero()) continue;
        agg += std::exp(sd * inst.weight(a).log()) * inst.measure(a).to_double();
    }
    agg /= inst.base_measure(b).to_double();
    const double mean_s = std::pow(agg, 1.0 / sd);
    return ExtendedValue::floating(average(inst, b).to_double() / mean_s);
}

ExtendedValue p3_base(const Instance& inst, std::int32_t b, const Rational& q) {
    if (q.is_integer() && q.numerator().fits_slong_p()) {
        const long qi = q.numerator().get_si();
        Rational sum(0);
        for (const std::int32_t a : inst.base_atoms(b))
            sum += inst.weight(a).pow_int(qi) * inst.measure(a);
        const Rational ratio =
            (sum / inst.base_measure(b)) / average(inst, b).pow_int(qi);
        return ExtendedValue::floating(std::exp(ratio.log() / static_cast<double>(qi)));
    }
    const double qd = q.to_double();
    double agg = 0.0;
    for (const std::int32_t a : inst.base_atoms(b)) {
        if (inst.weight(a).is_zero()) continue;
        agg += std::exp(qd * inst.weight(a).log()) * inst.measure(a).to_double();
    }
    agg /= inst.base_measure(b).to_double();
    return ExtendedValue::floating(std::pow(agg, 1.0 / qd) / average(inst, b).to_double());
}

std::pair<ExtendedValue, std::vector<std::int32_t>> p4p_base(const Instance& inst,
                                                             std::int32_t b,
                                                             const Rational& alpha) {
    const Rational threshold = alpha * average(inst, b);
    Rational mass(0);
    std::vector<std::int32_t> level_set;
    for (const std::int32_t a : inst.base_atoms(b))
        if (inst.weight(a) <= threshold) {
            mass += inst.measure(a);
            level_set.push_back(a);
        }
    return {ExtendedValue::exact(mass / inst.base_measure(b)), std::move(level_set)};
}

ExtendedValue p5_base(const Instance& inst, std::int32_t b) {
    if (inst.base_weight(b).is_zero()) return ExtendedValue::exact(Rational(0));
    const Rational m = median(inst, b);
    if (m.is_zero()) return ExtendedValue::infinity(Backend::Exact);
    return ExtendedValue::exact(average(inst, b) / m);
}

ExtendedValue p6_base(const Instance& inst, std::int32_t b) {
    const Rational avg = average(inst, b);
    double sum = 0.0;
    for (const std::int32_t a : inst.base_atoms(b)) {
        const Rational& w = inst.weight(a);
        if (w > avg)
            sum += (w * inst.measure(a)).to_double() * (w / avg).log();
    }
    return ExtendedValue::floating(sum / inst.base_weight(b).to_double());
}

ExtendedValue p7_base_naive(const Instance& inst, std::int32_t b) {
    std::vector<Rational> f(inst.atom_count(), Rational(0));
    for (const std::int32_t a : inst.base_atoms(b)) f[static_cast<std::size_t>(a)] = inst.weight(a);
    Rational total(0);
    for (const std::int32_t a : inst.base_atoms(b))
        total += maximal_function(inst, f, a) * inst.measure(a);
    return ExtendedValue::exact(total / inst.base_weight(b));
}

/// Distinct positive weight values on a basis element with their measures,
/// sorted descending, plus cumulative sums from the top. Reusable across
/// bases (rebuild() recycles heap storage).
struct ValueProfile {
    std::vector<std::pair<Rational, Rational>> classes; // scratch: (value, measure)
    std::vector<Rational> values;     // descending, all > 0
    std::vector<Rational> cum_mass;   // cum_mass[i]  = w({w >= values[i]})
    std::vector<Rational> cum_measure;// cum_measure[i] = |{w >= values[i]}|

    void rebuild(const Instance& inst, std::int32_t b) {
        const auto atoms = inst.base_atoms(b);
        classes.clear();
        if (atoms.size() <= 16) {
            for (const std::int32_t a : atoms) {
                const Rational& w = inst.weight(a);
                if (w.is_zero()) continue;
                auto it = std::find_if(classes.begin(), classes.end(),
                                       [&](const auto& c) { return c.first == w; });
                if (it == classes.end()) classes.emplace_back(w, inst.measure(a));
                else it->second += inst.measure(a);
            }
        } else {
            std::unordered_map<Rational, Rational, RationalHash> map;
            map.reserve(atoms.size());
            for (const std::int32_t a : atoms) {
                const Rational& w = inst.weight(a);
                if (w.is_zero()) continue;
                auto [it, fresh] = map.try_emplace(w, inst.measure(a));
                if (!fresh) it->second += inst.measure(a);
            }
            classes.assign(map.begin(), map.end());
        }
        std::sort(classes.begin(), classes.end(),
                  [](const auto& x, const auto& y) { return y.first < x.first; });
        values.clear();
        cum_mass.clear();
        cum_measure.clear();
        Rational mass(0), meas(0);
        for (auto& [v, mu] : classes) {
            mass += v * mu;
            meas += mu;
            values.push_back(std::move(v));
            cum_mass.push_back(mass);
            cum_measure.push_back(meas);
        }
    }

    /// w({w > t}) and |{w > t}| via the first index with values[i] <= t.
    Rational mass_above(const Rational& t) const {
        const std::size_t idx = count_above(t);
        return idx == 0 ? Rational(0) : cum_mass[idx - 1];
    }
    Rational measure_above(const Rational& t) const {
        const std::size_t idx = count_above(t);
        return idx == 0 ? Rational(0) : cum_measure[idx - 1];
    }
    std::size_t count_above(const Rational& t) const {
        // values sorted descending; count entries strictly greater than t
        const auto it = std::partition_point(values.begin(), values.end(),
                                             [&](const Rational& v) { return v > t; });
        return static_cast<std::size_t>(it - values.begin());
    }
};

/// lim_{λ→λ0+} w({w >= λ}) / (λ |{w >= βλ}|) on one basis element.
ExtendedValue p8_value_at(const ValueProfile& prof, const Rational& beta,
                          const Rational& lambda0) {
    const Rational n = prof.mass_above(lambda0);
    if (n.is_zero()) return ExtendedValue::exact(Rational(0));
    const Rational d = prof.measure_above(beta * lambda0);
    if (d.is_zero()) return ExtendedValue::infinity(Backend::Exact);
    return ExtendedValue::exact(n / (lambda0 * d));
}

// ---- P7 batched evaluation ------------------------------------------------
//
// For f = w·χ_B and x in B,
//   M(x) = max over B' containing x of w(B ∩ B') / |B'|.
// Bases meeting B in a single atom are dominated by g(x)/min|B'| over all
// B' containing x, so only bases with |B ∩ B'| >= 2 must be enumerated.
// Those are reachable either through a low-degree atom of the
// intersection or, when the intersection consists of high-degree atoms
// only, through a precomputed (heavy atom pair) -> bases table.

struct P7Accel {
    std::size_t degree_threshold = 0;
    std::vector<bool> heavy;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> heavy_pair_bases;
};

P7Accel build_p7_accel(const Instance& inst) {
    P7Accel acc;
    const std::size_t n = inst.atom_count();
    std::size_t total_degree = 0;
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        total_degree += inst.base_atoms(static_cast<std::int32_t>(b)).size();
    acc.degree_threshold =
        std::max<std::size_t>(8, static_cast<std::size_t>(std::sqrt(static_cast<double>(total_degree))) + 1);
    acc.heavy.assign(n, false);
    bool any_heavy = false;
    for (std::size_t a = 0; a < n; ++a)
        if (inst.bases_of_atom(static_cast<std::int32_t>(a)).size() > acc.degree_threshold) {
            acc.heavy[a] = true;
            any_heavy = true;
        }
    if (!any_heavy) return acc;
    std::vector<std::int32_t> hb;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        hb.clear();
        for (const std::int32_t a : inst.base_atoms(static_cast<std::int32_t>(b)))
            if (acc.heavy[static_cast<std::size_t>(a)]) hb.push_back(a);
        for (std::size_t i = 0; i + 1 < hb.size(); ++i)
            for (std::size_t j = i + 1; j < hb.size(); ++j) {
                const auto key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(hb[i]))
                                  << 32) |
                                 static_cast<std::uint32_t>(hb[j]);
                acc.heavy_pair_bases[key].push_back(static_cast<std::int32_t>(b));
            }
    }
    return acc;
}

} // namespace

ConstantReport eval_p1(const Instance& inst, const Rational& p) {
    if (p <= Rational(1)) throw std::invalid_argument("P1 requires p > 1");
    ConditionParams params;
    params.p = p;
    const bool exact = p == Rational(2);
    ConstantReport r = base_report(ConditionId::P1, params,
                                   exact ? Backend::Exact : Backend::Floating);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        if (acc.add(bi, p1_base(inst, bi, p))) {
            r.witness.base = bi;
            r.witness.subset.clear();
            if (const std::int32_t z = first_zero_weight_atom(inst, bi); z >= 0)
                r.witness.subset = {z};
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p1_prime(const Instance& inst, const Rational& delta,
                             SubsetStrategy strategy, const SubsetLimits& limits) {
    if (delta.sign() <= 0) throw std::invalid_argument("P1' requires delta > 0");
    require_positive_base_weights(inst);
    ConditionParams params;
    params.delta = delta;
    ConstantReport r = base_report(ConditionId::P1Prime, params,
                                   delta.is_integer() ? Backend::Exact : Backend::Floating);
    const SubsetObjective objective = MeasureOverWeightObjective{delta};
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        SubsetResult res = extremal_subset(inst, bi, objective, strategy, limits);
        if (acc.add(bi, res.value)) {
            r.witness.base = bi;
            r.witness.subset = std::move(res.subset);
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p2(const Instance& inst) {
    require_positive_base_weights(inst);
    ConstantReport r = base_report(ConditionId::P2, {}, Backend::Floating);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        acc.add(static_cast<std::int32_t>(b), p2_base(inst, static_cast<std::int32_t>(b)));
    finish(r, acc);
    return r;
}

ConstantReport eval_p2_prime(const Instance& inst, std::vector<Rational> s_grid) {
    if (s_grid.empty()) throw std::invalid_argument("P2' requires a nonempty s grid");
    std::sort(s_grid.begin(), s_grid.end());
    s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());
    for (const Rational& s : s_grid)
        if (s.sign() <= 0 || s >= Rational(1))
            throw std::invalid_argument("P2' requires every s in (0,1)");
    require_positive_base_weights(inst);
    ConditionParams params;
    params.s_grid = s_grid;
    ConstantReport r = base_report(ConditionId::P2Prime, params, Backend::Floating);

    std::vector<ExtendedValue> per_s_max(s_grid.size());
    std::vector<std::int32_t> per_s_arg(s_grid.size(), -1);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        ExtendedValue base_best;
        bool base_found = false;
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            ExtendedValue v = p2p_base(inst, bi, s_grid[si]);
            if (per_s_arg[si] < 0 || v > per_s_max[si]) {
                per_s_max[si] = v;
                per_s_arg[si] = bi;
            }
            if (!base_found || v > base_best) {
                base_best = v;
                base_found = true;
            }
        }
        acc.add(bi, base_best);
    }
    finish(r, acc);
    r.per_s.reserve(s_grid.size());
    for (std::size_t si = 0; si < s_grid.size(); ++si)
        r.per_s.emplace_back(s_grid[si], per_s_max[si]);
    // Witness: first grid point (ascending) whose supremum matches the
    // overall value, together with its first attaining base.
    for (std::size_t si = 0; si < s_grid.size(); ++si)
        if (per_s_max[si] == r.overall) {
            r.witness.base = per_s_arg[si];
            r.witness.s = s_grid[si];
            break;
        }
    return r;
}

ConstantReport eval_p3(const Instance& inst, const Rational& q) {
    if (q <= Rational(1)) throw std::invalid_argument("P3 requires q > 1");
    require_positive_base_weights(inst);
    ConditionParams params;
    params.q = q;
    ConstantReport r = base_report(ConditionId::P3, params, Backend::Floating);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        acc.add(static_cast<std::int32_t>(b), p3_base(inst, static_cast<std::int32_t>(b), q));
    finish(r, acc);
    return r;
}

ConstantReport eval_p3_prime(const Instance& inst, const Rational& delta,
                             SubsetStrategy strategy, const SubsetLimits& limits) {
    if (delta.sign() <= 0) throw std::invalid_argument("P3' requires delta > 0");
    require_positive_base_weights(inst);
    ConditionParams params;
    params.delta = delta;
    ConstantReport r = base_report(ConditionId::P3Prime, params,
                                   delta.is_integer() ? Backend::Exact : Backend::Floating);
    const SubsetObjective objective = WeightOverMeasureObjective{delta};
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        SubsetResult res = extremal_subset(inst, bi, objective, strategy, limits);
        if (acc.add(bi, res.value)) {
            r.witness.base = bi;
            r.witness.subset = std::move(res.subset);
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p4(const Instance& inst, const Rational& alpha, SubsetStrategy strategy,
                       const SubsetLimits& limits) {
    if (alpha.sign() <= 0 || alpha >= Rational(1))
        throw std::invalid_argument("P4 requires alpha in (0,1)");
    require_positive_base_weights(inst);
    ConditionParams params;
    params.alpha = alpha;
    ConstantReport r = base_report(ConditionId::P4, params, Backend::Exact);
    const SubsetObjective objective = WeightBudgetObjective{alpha};
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        SubsetResult res = extremal_subset(inst, bi, objective, strategy, limits);
        if (acc.add(bi, res.value)) {
            r.witness.base = bi;
            r.witness.subset = std::move(res.subset);
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p4_prime(const Instance& inst, const Rational& alpha) {
    if (alpha.sign() <= 0 || alpha >= Rational(1))
        throw std::invalid_argument("P4' requires alpha in (0,1)");
    ConditionParams params;
    params.alpha = alpha;
    ConstantReport r = base_report(ConditionId::P4Prime, params, Backend::Exact);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        auto [value, level_set] = p4p_base(inst, bi, alpha);
        if (acc.add(bi, value)) {
            r.witness.base = bi;
            r.witness.subset = std::move(level_set);
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p5(const Instance& inst) {
    ConstantReport r = base_report(ConditionId::P5, {}, Backend::Exact);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        acc.add(static_cast<std::int32_t>(b), p5_base(inst, static_cast<std::int32_t>(b)));
    finish(r, acc);
    return r;
}

ConstantReport eval_p6(const Instance& inst) {
    require_positive_base_weights(inst);
    ConstantReport r = base_report(ConditionId::P6, {}, Backend::Floating);
    PerBaseMax acc;
    for (std::size_t b = 0; b < inst.base_count(); ++b)
        acc.add(static_cast<std::int32_t>(b), p6_base(inst, static_cast<std::int32_t>(b)));
    finish(r, acc);
    return r;
}

ConstantReport eval_p7(const Instance& inst) {
    require_positive_base_weights(inst);
    ConstantReport r = base_report(ConditionId::P7, {}, Backend::Exact);

    const std::size_t n_atoms = inst.atom_count();
    const std::size_t n_bases = inst.base_count();
    const P7Accel accel = build_p7_accel(inst);

    std::vector<std::uint32_t> mark_epoch(n_atoms, 0), best_epoch(n_atoms, 0);
    std::vector<std::uint32_t> cand_epoch(n_bases, 0);
    std::vector<Rational> g(n_atoms), best_avg(n_atoms);
    std::vector<std::int32_t> candidates, heavy_in_b, intersection;
    std::uint32_t epoch = 0;

    PerBaseMax acc;
    for (std::size_t b = 0; b < n_bases; ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        const auto atoms_b = inst.base_atoms(bi);
        ++epoch;
        for (const std::int32_t y : atoms_b) {
            const auto yi = static_cast<std::size_t>(y);
            mark_epoch[yi] = epoch;
            g[yi] = inst.weight(y) * inst.measure(y);
        }
        candidates.clear();
        heavy_in_b.clear();
        for (const std::int32_t y : atoms_b) {
            if (accel.heavy[static_cast<std::size_t>(y)]) {
                heavy_in_b.push_back(y);
                continue;
            }
            for (const std::int32_t b2 : inst.bases_of_atom(y))
                if (cand_epoch[static_cast<std::size_t>(b2)] != epoch) {
                    cand_epoch[static_cast<std::size_t>(b2)] = epoch;
                    candidates.push_back(b2);
                }
        }
        for (std::size_t i = 0; i + 1 < heavy_in_b.size(); ++i)
            for (std::size_t j = i + 1; j < heavy_in_b.size(); ++j) {
                const auto key =
                    (static_cast<std::uint64_t>(static_cast<std::uint32_t>(heavy_in_b[i]))
                     << 32) |
                    static_cast<std::uint32_t>(heavy_in_b[j]);
                const auto it = accel.heavy_pair_bases.find(key);
                if (it == accel.heavy_pair_bases.end()) continue;
                for (const std::int32_t b2 : it->second)
                    if (cand_epoch[static_cast<std::size_t>(b2)] != epoch) {
                        cand_epoch[static_cast<std::size_t>(b2)] = epoch;
                        candidates.push_back(b2);
                    }
            }

        for (const std::int32_t b2 : candidates) {
            const auto atoms_b2 = inst.base_atoms(b2);
            intersection.clear();
            if (atoms_b2.size() <= atoms_b.size()) {
                for (const std::int32_t z : atoms_b2)
                    if (mark_epoch[static_cast<std::size_t>(z)] == epoch)
                        intersection.push_back(z);
            } else {
                for (const std::int32_t z : atoms_b)
                    if (inst.base_contains(b2, z)) intersection.push_back(z);
            }
            if (intersection.empty()) continue;
            Rational mass(0);
            for (const std::int32_t z : intersection) mass += g[static_cast<std::size_t>(z)];
            if (mass.is_zero()) continue;
            const Rational avg_over_b2 = mass / inst.base_measure(b2);
            for (const std::int32_t z : intersection) {
                const auto zi = static_cast<std::size_t>(z);
                if (best_epoch[zi] != epoch || avg_over_b2 > best_avg[zi]) {
                    best_epoch[zi] = epoch;
                    best_avg[zi] = avg_over_b2;
                }
            }
        }

        Rational total(0);
        for (const std::int32_t x : atoms_b) {
            const auto xi = static_cast<std::size_t>(x);
            Rational m = g[xi] / inst.base_measure(inst.min_base_of_atom(x));
            if (best_epoch[xi] == epoch && best_avg[xi] > m) m = best_avg[xi];
            total += m * inst.measure(x);
        }
        acc.add(bi, ExtendedValue::exact(total / inst.base_weight(bi)));
    }
    finish(r, acc);
    return r;
}

ConstantReport eval_p8(const Instance& inst, const Rational& beta) {
    if (beta.sign() <= 0) throw std::invalid_argument("P8 requires beta > 0");
    ConditionParams params;
    params.beta = beta;
    ConstantReport r = base_report(ConditionId::P8, params, Backend::Exact);
    const bool beta_is_one = beta == Rational(1);
    PerBaseMax acc;
    ValueProfile prof;
    std::vector<Rational> cands;
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto bi = static_cast<std::int32_t>(b);
        // A base with w(B) = 0 has no lambda with positive numerator mass
        // and contributes 0.
        if (inst.base_weight(bi).is_zero()) {
            acc.add(bi, ExtendedValue::exact(Rational(0)));
            continue;
        }
        prof.rebuild(inst, bi);
        const Rational w_b = average(inst, bi);

        // The supremum over the open range (w_B, infinity) is attained as a
        // one-sided limit at one of the breakpoints {v, v/beta} or at w_B.
        cands.clear();
        cands.push_back(w_b);
        for (const Rational& v : prof.values) {
            if (v >= w_b) cands.push_back(v);
            if (!beta_is_one) {
                Rational u = v / beta;
                if (u >= w_b) cands.push_back(std::move(u));
            }
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        ExtendedValue best = ExtendedValue::exact(Rational(0));
        std::optional<Rational> best_lambda;
        for (const Rational& lambda : cands) {
            if (prof.mass_above(lambda).is_zero()) break; // decreasing in lambda
            ExtendedValue v = p8_value_at(prof, beta, lambda);
            if (!best_lambda || v > best) {
                best = v;
                best_lambda = lambda;
            }
            if (best.is_infinite()) break;
        }
        if (acc.add(bi, best)) {
            r.witness.base = bi;
            r.witness.lambda = best_lambda;
        }
    }
    finish(r, acc);
    return r;
}

ConstantReport evaluate(const Instance& inst, ConditionId id, const ConditionParams& params,
                        SubsetStrategy strategy, const SubsetLimits& limits) {
    const auto reject = [&](bool bad, const char* name) {
        if (bad)
            throw std::invalid_argument(std::string("parameter '") + name +
                                        "' is not accepted by condition " + to_string(id));
    };
    const auto need = [&](bool missing, const char* name) {
        if (missing)
            throw std::invalid_argument(std::string("condition ") + to_string(id) +
                                        " requires parameter '" + name + "'");
    };
    const bool uses_p = id == ConditionId::P1;
    const bool uses_q = id == ConditionId::P3;
    const bool uses_delta = id == ConditionId::P1Prime || id == ConditionId::P3Prime;
    const bool uses_alpha = id == ConditionId::P4 || id == ConditionId::P4Prime;
    const bool uses_beta = id == ConditionId::P8;
    const bool uses_grid = id == ConditionId::P2Prime;
    reject(params.p && !uses_p, "p");
    reject(params.q && !uses_q, "q");
    reject(params.delta && !uses_delta, "delta");
    reject(params.alpha && !uses_alpha, "alpha");
    reject(params.beta && !uses_beta, "beta");
    reject(params.s_grid && !uses_grid, "s_grid");
    need(uses_p && !params.p, "p");
    need(uses_q && !params.q, "q");
    need(uses_delta && !params.delta, "delta");
    need(uses_alpha && !params.alpha, "alpha");
    need(uses_beta && !params.beta, "beta");
    need(uses_grid && !params.s_grid, "s_grid");

    switch (id) {
        case ConditionId::P1: return eval_p1(inst, *params.p);
        case ConditionId::P1Prime: return eval_p1_prime(inst, *params.delta, strategy, limits);
        case ConditionId::P2: return eval_p2(inst);
        case ConditionId::P2Prime: return eval_p2_prime(inst, *params.s_grid);
        case ConditionId::P3: return eval_p3(inst, *params.q);
        case ConditionId::P3Prime: return eval_p3_prime(inst, *params.delta, strategy, limits);
        case ConditionId::P4: return eval_p4(inst, *params.alpha, strategy, limits);
        case ConditionId::P4Prime: return eval_p4_prime(inst, *params.alpha);
        case ConditionId::P5: return eval_p5(inst);
        case ConditionId::P6: return eval_p6(inst);
        case ConditionId::P7: return eval_p7(inst);
        case ConditionId::P8: return eval_p8(inst, *params.beta);
    }
    throw Error("unreachable condition id");
}

ExtendedValue reevaluate_witness(const Instance& inst, const ConstantReport& report) {
    const std::int32_t b = report.witness.base;
    if (b < 0) throw Error("report carries no witness base");
    switch (report.condition) {
        case ConditionId::P1: return p1_base(inst, b, *report.params.p);
        case ConditionId::P1Prime:
            return subset_objective_value(inst, b,
                                          MeasureOverWeightObjective{*report.params.delta},
                                          report.witness.subset);
        case ConditionId::P2: return p2_base(inst, b);
        case ConditionId::P2Prime:
            if (!report.witness.s) throw Error("P2' witness carries no s");
            return p2p_base(inst, b, *report.witness.s);
        case ConditionId::P3: return p3_base(inst, b, *report.params.q);
        case ConditionId::P3Prime:
            return subset_objective_value(inst, b,
                                          WeightOverMeasureObjective{*report.params.delta},
                                          report.witness.subset);
        case ConditionId::P4:
            return subset_objective_value(inst, b, WeightBudgetObjective{*report.params.alpha},
                                          report.witness.subset);
        case ConditionId::P4Prime: return p4p_base(inst, b, *report.params.alpha).first;
        case ConditionId::P5: return p5_base(inst, b);
        case ConditionId::P6: return p6_base(inst, b);
        case ConditionId::P7: return p7_base_naive(inst, b);
        case ConditionId::P8: {
            if (inst.base_weight(b).is_zero()) return ExtendedValue::exact(Rational(0));
            if (!report.witness.lambda) return ExtendedValue::exact(Rational(0));
            ValueProfile prof;
            prof.rebuild(inst, b);
            return p8_value_at(prof, *report.params.beta, *report.witness.lambda);
        }
    }
    throw Error("unreachable condition id");
}

} // namespace ainfty
