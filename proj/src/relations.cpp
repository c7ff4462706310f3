#include "ainfty/relations.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ainfty/errors.hpp"

namespace ainfty {

const char* to_string(RelationStatus s) {
    switch (s) {
        case RelationStatus::Self: return "self";
        case RelationStatus::Equivalent: return "equivalent";
        case RelationStatus::Implies: return "implies";
        case RelationStatus::Fails: return "fails";
    }
    return "?";
}

const char* to_string(GrowthVerdict::Kind k) {
    switch (k) {
        case GrowthVerdict::Kind::Bounded: return "bounded";
        case GrowthVerdict::Kind::Divergent: return "divergent";
        case GrowthVerdict::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(GrowthRate::Form f) {
    return f == GrowthRate::Form::Polynomial ? "polynomial" : "exponential";
}

namespace {

constexpr std::array<ConditionId, 8> kCanonical = {
    ConditionId::P1, ConditionId::P2, ConditionId::P3, ConditionId::P4,
    ConditionId::P5, ConditionId::P6, ConditionId::P7, ConditionId::P8};

int canonical_index(ConditionId id) {
    switch (id) {
        case ConditionId::P1: case ConditionId::P1Prime: return 0;
        case ConditionId::P2: case ConditionId::P2Prime: return 1;
        case ConditionId::P3: case ConditionId::P3Prime: return 2;
        case ConditionId::P4: case ConditionId::P4Prime: return 3;
        case ConditionId::P5: return 4;
        case ConditionId::P6: return 5;
        case ConditionId::P7: return 6;
        case ConditionId::P8: return 7;
    }
    throw Error("unreachable condition id");
}

// Row-major statuses for sources P1..P8 against targets P1..P8:
// 'e' diagonal, 'i' implies, 'x' fails (previously known), 'n' fails
// (resolved by the built-in witness families or derived from them).
constexpr std::array<const char*, 8> kTable = {
    "eixiixnx", // P1
    "xexiixnx", // P2
    "xxeixinx", // P3
    "xxxexxnx", // P4
    "xnxiexnx", // P5
    "xxxixenx", // P6
    "xxxxxxex", // P7
    "xxiixine", // P8
};

std::string fails_provenance(int src, int tgt) {
    // Sources/targets here are 0-based indices into P1..P8.
    const bool cex1 = (src == 2 || src == 3 || src == 5 || src == 6 || src == 7) &&
                      (tgt == 0 || tgt == 1 || tgt == 4);
    if (cex1) return "DMO16 counterexample 1 ((P8) does not imply (P5))";
    if ((src == 1 || src == 4) && tgt == 0)
        return "DMO16 counterexample 2 ((P2) does not imply (P1))";
    const bool cex3 = (src == 0 || src == 1 || src == 3 || src == 4 || src == 6) &&
                      (tgt == 2 || tgt == 5 || tgt == 7);
    if (cex3) return "DMO16 counterexample 3 ((P1) does not imply (P6))";
    if (src == 5 && (tgt == 2 || tgt == 7))
        return "DMO16 counterexample 5 ((P6) does not imply (P3))";
    if (src == 2 && tgt == 7) return "DMO16 counterexample 6 ((P3) does not imply (P8))";
    if (src == 6 && tgt == 3) return "DMO16 counterexample 7 ((P7) does not imply (P4))";
    throw Error("no provenance for a fails cell; registry data is inconsistent");
}

std::string implies_provenance(int src, int tgt) {
    const auto direct = [&](int a, int b) { return src == a && tgt == b; };
    if (direct(0, 1) || direct(1, 4) || direct(4, 3) || direct(7, 2) || direct(2, 5) ||
        direct(5, 3))
        return "DMO16 Theorem 4.1";
    return "DMO16 Theorem 4.1 (transitive closure of the two chains)";
}

std::string new_fails_provenance(int src, int tgt) {
    if (src == 4 && tgt == 1) return "constructed witness: family lemma1";
    if (src == 0 && tgt == 6) return "constructed witness: family lemma2";
    if (src == 7 && tgt == 6) return "constructed witness: family lemma3";
    if (tgt == 6) {
        if (src == 1 || src == 3 || src == 4)
            return "family lemma2 (its weight satisfies (P1), hence the source) against (P7)";
        if (src == 2 || src == 5)
            return "family lemma3 (its weight satisfies (P8), hence the source) against (P7)";
    }
    throw Error("no provenance for a new fails cell; registry data is inconsistent");
}

std::string conditional_note(int src, int tgt) {
    if (tgt != 6) return {};
    switch (src) {
        case 0:
            return "the implication holds when the basis is a Muckenhoupt basis "
                   "(DMO16 Theorem 4.2)";
        case 1:
            return "the implication holds when the maximal operator is bounded on some L^p "
                   "and equals the supremum of subbase averages on each base "
                   "(DMO16 Theorem 4.2)";
        case 2:
            return "the implication holds when the maximal operator is bounded on every L^p, "
                   "p > 1 (DMO16 Theorem 4.2)";
        case 5:
            return "the implication holds when the maximal operator is of weak type (1,1) "
                   "(DMO16 Theorem 4.2)";
        default: return {};
    }
}

std::optional<RelationEntry::WitnessFamily> builtin_witness(int src, int tgt) {
    if (src == 4 && tgt == 1) {
        RelationEntry::WitnessFamily w;
        w.family = "lemma1";
        w.bounded_condition = ConditionId::P5;
        w.bound = Rational(1);
        w.diverging_condition = ConditionId::P2;
        return w;
    }
    if (src == 0 && tgt == 6) {
        RelationEntry::WitnessFamily w;
        w.family = "lemma2";
        w.bounded_condition = ConditionId::P1Prime;
        w.bounded_params.delta = Rational(1, 2);
        w.bound = Rational(4);
        w.diverging_condition = ConditionId::P7;
        return w;
    }
    if (src == 7 && tgt == 6) {
        RelationEntry::WitnessFamily w;
        w.family = "lemma3";
        w.bounded_condition = ConditionId::P8;
        w.bounded_params.beta = Rational(1);
        w.bound = Rational(4);
        w.diverging_condition = ConditionId::P7;
        return w;
    }
    return std::nullopt;
}

RelationEntry canonical_entry(int src, int tgt) {
    RelationEntry e;
    e.source = kCanonical[static_cast<std::size_t>(src)];
    e.target = kCanonical[static_cast<std::size_t>(tgt)];
    switch (kTable[static_cast<std::size_t>(src)][static_cast<std::size_t>(tgt)]) {
        case 'e':
            e.status = RelationStatus::Self;
            e.provenance = "diagonal";
            break;
        case 'i':
            e.status = RelationStatus::Implies;
            e.provenance = implies_provenance(src, tgt);
            break;
        case 'x':
            e.status = RelationStatus::Fails;
            e.provenance = fails_provenance(src, tgt);
            break;
        case 'n':
            e.status = RelationStatus::Fails;
            e.provenance = new_fails_provenance(src, tgt);
            e.witness = builtin_witness(src, tgt);
            break;
        default: throw Error("bad registry cell");
    }
    e.note = conditional_note(src, tgt);
    return e;
}

bool is_primed(ConditionId id) {
    return id == ConditionId::P1Prime || id == ConditionId::P2Prime ||
           id == ConditionId::P3Prime || id == ConditionId::P4Prime;
}

} // namespace

RelationEntry lookup(ConditionId source, ConditionId target) {
    if (source == target) {
        RelationEntry e;
        e.source = source;
        e.target = target;
        e.status = RelationStatus::Self;
        e.provenance = "diagonal";
        return e;
    }
    const int src = canonical_index(source), tgt = canonical_index(target);
    if (src == tgt) {
        RelationEntry e;
        e.source = source;
        e.target = target;
        e.status = RelationStatus::Equivalent;
        e.provenance = "DMO16 Theorem 3.1";
        return e;
    }
    RelationEntry e = canonical_entry(src, tgt);
    e.source = source;
    e.target = target;
    if (is_primed(source) || is_primed(target))
        e.provenance += "; primed form via DMO16 Theorem 3.1";
    return e;
}

std::vector<RelationEntry> relation_table() {
    std::vector<RelationEntry> cells;
    cells.reserve(64);
    for (int s = 0; s < 8; ++s)
        for (int t = 0; t < 8; ++t) cells.push_back(canonical_entry(s, t));
    return cells;
}

std::vector<std::pair<ConditionId, ConditionId>> equivalence_pairs() {
    return {{ConditionId::P1, ConditionId::P1Prime},
            {ConditionId::P2, ConditionId::P2Prime},
            {ConditionId::P3, ConditionId::P3Prime},
            {ConditionId::P4, ConditionId::P4Prime}};
}

namespace {

struct Fit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
};

Fit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    Fit f;
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        f.residual += r * r;
    }
    f.residual /= n;
    return f;
}

} // namespace

GrowthVerdict classify_growth(std::span<const ProfilePoint> points) {
    for (const ProfilePoint& p : points)
        if (p.value.is_infinite())
            return {GrowthVerdict::Kind::Divergent, std::nullopt, 0.0};
    if (points.size() < 4)
        throw Error("classify_growth requires at least 4 finite points");

    std::vector<double> levels, values;
    levels.reserve(points.size());
    values.reserve(points.size());
    for (const ProfilePoint& p : points) {
        levels.push_back(static_cast<double>(p.level));
        values.push_back(p.value.to_double());
    }

    const std::size_t half = points.size() / 2;
    double lo = values[half], hi = values[half];
    for (std::size_t i = half; i < values.size(); ++i) {
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    if (hi == lo || (lo > 0 && hi / lo < 1.1))
        return {GrowthVerdict::Kind::Bounded, std::nullopt, 0.0};

    for (const double v : values)
        if (v <= 0) return {GrowthVerdict::Kind::Inconclusive, std::nullopt, 0.0};

    std::vector<double> log_levels(levels.size()), log_values(values.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        log_levels[i] = std::log(levels[i]);
        log_values[i] = std::log(values[i]);
    }
    const Fit vs_log_n = least_squares(log_levels, log_values);
    const Fit vs_n = least_squares(levels, log_values);

    if (vs_n.slope > 0.05 && vs_n.residual < vs_log_n.residual)
        return {GrowthVerdict::Kind::Divergent,
                GrowthRate{GrowthRate::Form::Exponential, std::exp(vs_n.slope)}, vs_n.residual};
    if (vs_log_n.slope > 0.05)
        return {GrowthVerdict::Kind::Divergent,
                GrowthRate{GrowthRate::Form::Polynomial, vs_log_n.slope}, vs_log_n.residual};
    return {GrowthVerdict::Kind::Inconclusive, std::nullopt,
            std::min(vs_n.residual, vs_log_n.residual)};
}

FamilyProfile family_profile(ConditionId condition, const ConditionParams& params,
                             const std::string& family, std::span<const long> levels,
                             bool cumulative, SubsetStrategy strategy) {
    if (levels.empty()) throw std::invalid_argument("family_profile: empty level range");
    FamilyProfile profile;
    profile.points.reserve(levels.size());
    for (const long n : levels) {
        try {
            const Instance inst = make_family({family, n, cumulative});
            ConstantReport rep = evaluate(inst, condition, params, strategy);
            profile.points.push_back({n, rep.overall});
        } catch (const std::exception& e) {
            throw Error("family profile " + family + " level n=" + std::to_string(n) + ": " +
                        e.what());
        }
    }
    profile.verdict = classify_growth(profile.points);
    return profile;
}

namespace {

std::vector<long> level_range(long n_max) {
    std::vector<long> levels;
    levels.reserve(static_cast<std::size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) levels.push_back(n);
    return levels;
}

/// The family's guaranteed floor for the diverging condition at level n,
/// and whether the comparison is strict.
bool clears_floor(const std::string& family, long n, const ExtendedValue& value) {
    if (value.is_infinite()) return true;
    if (family == "lemma1") // (P2) constant exceeds (2/3) n^(1/3)
        return value.to_double() > (2.0 / 3.0) * std::cbrt(static_cast<double>(n));
    if (family == "lemma2") // (P7) constant reaches 2^(n-2)
        return value.is_exact() && value.rational() >= Rational(2).pow_int(n - 2);
    if (family == "lemma3") // (P7) constant exceeds 2^n / 4
        return value.is_exact() && value.rational() > Rational(2).pow_int(n - 2);
    throw Error("unknown witness family '" + family + "'");
}

bool within_bound(const ExtendedValue& value, const Rational& bound) {
    if (value.is_infinite()) return false;
    if (value.is_exact()) return value.rational() <= bound;
    return value.to_double() <= bound.to_double();
}

} // namespace

CheckTableReport check_table(const CheckTableOptions& options) {
    CheckTableReport report;
    report.cells = relation_table();
    report.ok = true;

    for (const RelationEntry& cell : report.cells) {
        if (!cell.witness) continue;
        const RelationEntry::WitnessFamily& w = *cell.witness;
        long n_max = options.lemma1_max;
        if (w.family == "lemma2") n_max = options.lemma2_max;
        else if (w.family == "lemma3") n_max = options.lemma3_max;
        const std::vector<long> levels = level_range(n_max);

        WitnessCheck check;
        check.source = cell.source;
        check.target = cell.target;
        check.family = w.family;
        check.bounded_condition = w.bounded_condition;
        check.bounded_params = w.bounded_params;
        check.bound = w.bound;
        check.diverging_params = w.diverging_params;

        const SubsetStrategy strategy =
            w.family == "lemma2" ? SubsetStrategy::ClassExact : SubsetStrategy::Auto;
        FamilyProfile bounded =
            family_profile(w.bounded_condition, w.bounded_params, w.family, levels, false,
                           strategy);
        FamilyProfile diverging = family_profile(w.diverging_condition, w.diverging_params,
                                                 w.family, levels, false, strategy);

        check.bounded_ok = true;
        for (const ProfilePoint& p : bounded.points)
            if (!within_bound(p.value, w.bound)) {
                check.bounded_ok = false;
                check.failures.push_back("(" + std::string(to_string(cell.source)) + "=>" +
                                         to_string(cell.target) + ", n=" +
                                         std::to_string(p.level) + ", bounded side " +
                                         p.value.str() + " exceeds " + w.bound.str() + ")");
            }
        check.floor_ok = true;
        for (const ProfilePoint& p : diverging.points)
            if (!clears_floor(w.family, p.level, p.value)) {
                check.floor_ok = false;
                check.failures.push_back("(" + std::string(to_string(cell.source)) + "=>" +
                                         to_string(cell.target) + ", n=" +
                                         std::to_string(p.level) + ", diverging side " +
                                         p.value.str() + " misses the family floor)");
            }
        check.divergent_ok =
            diverging.verdict.kind == GrowthVerdict::Kind::Divergent;
        if (!check.divergent_ok)
            check.failures.push_back("(" + std::string(to_string(cell.source)) + "=>" +
                                     to_string(cell.target) + ", diverging side classified " +
                                     to_string(diverging.verdict.kind) + ")");
        check.bounded_points = std::move(bounded.points);
        check.diverging_points = std::move(diverging.points);
        check.diverging_verdict = diverging.verdict;
        report.ok = report.ok && check.ok();
        report.witnesses.push_back(std::move(check));
    }
    return report;
}

} // namespace ainfty
