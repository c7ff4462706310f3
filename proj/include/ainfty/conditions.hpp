#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ainfty/extended_value.hpp"
#include "ainfty/instance.hpp"
#include "ainfty/subset_search.hpp"

namespace ainfty {

/// The twelve A-infinity-type conditions.
enum class ConditionId {
    P1, P1Prime, P2, P2Prime, P3, P3Prime, P4, P4Prime, P5, P6, P7, P8
};

const char* to_string(ConditionId id);
std::optional<ConditionId> parse_condition(std::string_view text);
std::vector<ConditionId> all_conditions();

/// Parameters, present exactly when the condition requires them:
///   P1: p (> 1);  P1'/P3': delta (> 0);  P2': s_grid (each in (0,1));
///   P3: q (> 1);  P4/P4': alpha (in (0,1));  P8: beta (> 0).
struct ConditionParams {
    std::optional<Rational> p, q, delta, alpha, beta;
    std::optional<std::vector<Rational>> s_grid;

    std::string str() const; // compact "p=2;delta=1/2" rendering
};

/// What attains (or approaches) the reported constant.
struct Witness {
    std::int32_t base = -1;
    std::vector<std::int32_t> subset;  // subset conditions / level sets
    std::optional<Rational> lambda;    // P8: sup is the limit from the right at lambda
    std::optional<Rational> s;         // P2': attaining grid point
};

/// Tightest constant of one condition on one instance: per-base values,
/// their maximum, and the attaining witness.
struct ConstantReport {
    ConditionId condition;
    ConditionParams params;
    Backend backend = Backend::Exact;
    std::vector<std::pair<std::int32_t, ExtendedValue>> per_base;
    ExtendedValue overall;
    Witness witness;
    /// P2' only: supremum over bases for each grid point, grid ascending.
    std::vector<std::pair<Rational, ExtendedValue>> per_s;
};

ConstantReport eval_p1(const Instance& inst, const Rational& p);
ConstantReport eval_p1_prime(const Instance& inst, const Rational& delta,
                             SubsetStrategy strategy = SubsetStrategy::Auto,
                             const SubsetLimits& limits = {});
ConstantReport eval_p2(const Instance& inst);
ConstantReport eval_p2_prime(const Instance& inst, std::vector<Rational> s_grid);
ConstantReport eval_p3(const Instance& inst, const Rational& q);
ConstantReport eval_p3_prime(const Instance& inst, const Rational& delta,
                             SubsetStrategy strategy = SubsetStrategy::Auto,
                             const SubsetLimits& limits = {});
ConstantReport eval_p4(const Instance& inst, const Rational& alpha,
                       SubsetStrategy strategy = SubsetStrategy::Auto,
                       const SubsetLimits& limits = {});
ConstantReport eval_p4_prime(const Instance& inst, const Rational& alpha);
ConstantReport eval_p5(const Instance& inst);
ConstantReport eval_p6(const Instance& inst);
ConstantReport eval_p7(const Instance& inst);
ConstantReport eval_p8(const Instance& inst, const Rational& beta);

/// Dispatch by condition id; validates that exactly the required
/// parameters are present.
ConstantReport evaluate(const Instance& inst, ConditionId id, const ConditionParams& params,
                        SubsetStrategy strategy = SubsetStrategy::Auto,
                        const SubsetLimits& limits = {});

/// Recomputes the reported constant from the witness alone (independent of
/// the per-base maximization path); used to validate reports.
ExtendedValue reevaluate_witness(const Instance& inst, const ConstantReport& report);

} // namespace ainfty
