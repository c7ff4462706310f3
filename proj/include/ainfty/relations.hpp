#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ainfty/conditions.hpp"
#include "ainfty/families.hpp"

namespace ainfty {

enum class RelationStatus { Self, Equivalent, Implies, Fails };

const char* to_string(RelationStatus s);

/// One cell of the implication table, with the literature/provenance note
/// and, for the three cells resolved by the built-in families, the family
/// witness to run.
struct RelationEntry {
    ConditionId source, target;
    RelationStatus status;
    std::string provenance;
    std::string note; // conditional-implication annotations, when any

    struct WitnessFamily {
        std::string family;
        ConditionId bounded_condition; // profiled as the bounded side
        ConditionParams bounded_params;
        Rational bound;                // stays within this constant
        ConditionId diverging_condition;
        ConditionParams diverging_params;
    };
    std::optional<WitnessFamily> witness;
};

/// Registry cell for a pair of conditions (all twelve ids accepted; primed
/// conditions resolve through their equivalence classes).
RelationEntry lookup(ConditionId source, ConditionId target);

/// The 8x8 canonical table (P1..P8), row-major.
std::vector<RelationEntry> relation_table();

/// The four equivalence pairs (unprimed, primed).
std::vector<std::pair<ConditionId, ConditionId>> equivalence_pairs();

// ---- growth classification --------------------------------------------

struct GrowthRate {
    enum class Form { Polynomial, Exponential } form;
    double value; // polynomial exponent against n, or exponential base
};

struct GrowthVerdict {
    enum class Kind { Bounded, Divergent, Inconclusive } kind;
    std::optional<GrowthRate> rate;
    double residual = 0.0;
};

const char* to_string(GrowthVerdict::Kind k);
const char* to_string(GrowthRate::Form f);

struct ProfilePoint {
    long level;
    ExtendedValue value;
};

/// Classifies a sequence of condition constants across family levels:
/// any infinite point is immediately divergent; otherwise at least four
/// points are required. A sequence whose last-half max/min ratio stays
/// below 1.1 is bounded; otherwise least-squares fits of log C against
/// log n and against n decide divergent-exponential (n-slope > 0.05 with
/// the better residual), divergent-polynomial (log n-slope > 0.05), or
/// inconclusive.
GrowthVerdict classify_growth(std::span<const ProfilePoint> points);

struct FamilyProfile {
    std::vector<ProfilePoint> points;
    GrowthVerdict verdict;
};

/// Evaluates one condition on a family at each requested level and
/// classifies the resulting constant sequence.
FamilyProfile family_profile(ConditionId condition, const ConditionParams& params,
                             const std::string& family, std::span<const long> levels,
                             bool cumulative = false,
                             SubsetStrategy strategy = SubsetStrategy::Auto);

// ---- machine check of the table -----------------------------------------

struct CheckTableOptions {
    long lemma1_max = 1024;
    long lemma2_max = 8;
    long lemma3_max = 10;
};

/// Result of running one witness family: the bounded side must stay within
/// its constant at every level, the diverging side must clear the family's
/// guaranteed floor at every level and classify as divergent.
struct WitnessCheck {
    ConditionId source, target;
    std::string family;
    ConditionId bounded_condition;
    ConditionParams bounded_params;
    Rational bound;
    ConditionParams diverging_params;
    std::vector<ProfilePoint> bounded_points, diverging_points;
    GrowthVerdict diverging_verdict;
    bool bounded_ok = false, floor_ok = false, divergent_ok = false;
    std::vector<std::string> failures; // "(cell, level, value)" lines
    bool ok() const { return bounded_ok && floor_ok && divergent_ok; }
};

struct CheckTableReport {
    bool ok = false;
    std::vector<RelationEntry> cells; // the 8x8 table
    std::vector<WitnessCheck> witnesses;
};

/// Runs the three built-in witness profiles against the registry and
/// reports every table cell. Deterministic and idempotent.
CheckTableReport check_table(const CheckTableOptions& options = {});

} // namespace ainfty
