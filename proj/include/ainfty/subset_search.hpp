#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ainfty/extended_value.hpp"
#include "ainfty/instance.hpp"

namespace ainfty {

/// How the supremum over subsets E of a basis element is searched.
///  - Brute enumerates all nonempty subsets (exact supremum).
///  - ClassExact enumerates count vectors over (weight value, atom measure)
///    equivalence classes; exact because every objective here depends on a
///    subset only through per-class counts.
///  - LevelSet scans prefixes of the atoms sorted by weight value: a
///    documented lower bound on the supremum, never the default.
enum class SubsetStrategy { Auto, Brute, ClassExact, LevelSet };

const char* to_string(SubsetStrategy s);
std::optional<SubsetStrategy> parse_strategy(std::string_view text);

struct SubsetLimits {
    std::size_t brute_max_atoms = 20;
    double class_max_combinations = 1e7;
};

/// Maximize (|E|/|B|) / (w(E)/w(B))^delta over nonempty E.  A subset with
/// w(E) = 0 and |E| > 0 forces +infinity.
struct MeasureOverWeightObjective {
    Rational delta; // > 0
};

/// Maximize (w(E)/w(B)) / (|E|/|B|)^delta over nonempty E.
struct WeightOverMeasureObjective {
    Rational delta; // > 0
};

/// Maximize w(E)/w(B) subject to the measure budget |E| < alpha |B|.
/// The empty set always qualifies, so the value is 0 when no nonempty
/// subset fits the budget.
struct WeightBudgetObjective {
    Rational alpha; // in (0,1)
};

using SubsetObjective =
    std::variant<MeasureOverWeightObjective, WeightOverMeasureObjective, WeightBudgetObjective>;

struct SubsetResult {
    ExtendedValue value;
    std::vector<std::int32_t> subset; // atom indices, ascending
};

/// Supremum of the objective over subsets of one basis element, by the
/// given strategy. Candidates are compared through exact rational keys, so
/// Brute and ClassExact return identical values whenever both are
/// admissible. Throws StrategyInfeasible when the strategy bound is
/// exceeded (Auto picks Brute for small bases, ClassExact otherwise, and
/// never silently degrades to LevelSet).
SubsetResult extremal_subset(const Instance& inst, std::int32_t base,
                             const SubsetObjective& objective, SubsetStrategy strategy,
                             const SubsetLimits& limits = {});

/// Objective value of one explicit subset (used to re-check witnesses).
ExtendedValue subset_objective_value(const Instance& inst, std::int32_t base,
                                     const SubsetObjective& objective,
                                     std::span<const std::int32_t> subset);

} // namespace ainfty
