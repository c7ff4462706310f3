#pragma once

#include <string>
#include <vector>

#include "ainfty/instance.hpp"

namespace ainfty {

/// Selects one of the built-in counterexample families at a level.
/// Cumulative mode unions levels 1..level into one instance (mirroring the
/// countably infinite space the levels truncate).
struct FamilySpec {
    std::string name; // "lemma1" | "lemma2" | "lemma3"
    long level = 1;   // >= 1
    bool cumulative = false;
};

std::vector<std::string> family_names();

/// Builds the family instance.
///   lemma1 level n: atoms xn_0 (|x|=2, w=n) and xn_1 (|x|=1, w=1), one
///     base containing both.
///   lemma2 level n: xn_0 (|x|=1, w=1) and xn_i (|x|=w=2^-n) for
///     1 <= i <= 4^n; bases: all atoms, plus every pair {xn_0, xn_i}.
///   lemma3 level n: counting measure on xn_0..xn_m(n) with
///     m(n) = 4 + 4^2 + ... + 4^n; w(xn_0) = 1 and w(xn_i) = 2^-j for
///     m(j-1) < i <= m(j); bases: all atoms, plus every pair {xn_0, xn_i}.
Instance make_family(const FamilySpec& spec);

/// m(n) = 4 + 4^2 + ... + 4^n.
long lemma3_m(long n);

/// One atom laid out on the half-line: it occupies [left, right).
struct IntervalLayout {
    std::int32_t atom;
    Rational left, right;
};

/// Lays the atoms out as consecutive left-closed right-open intervals
/// starting at 0, in the given order; atom j occupies an interval of
/// length |x_j|.
std::vector<IntervalLayout> tau_layout(const Instance& inst,
                                       std::span<const std::int32_t> order);
/// Id-addressed variant.
std::vector<IntervalLayout> tau_layout_ids(const Instance& inst,
                                           const std::vector<std::string>& order);

/// Half-line representation: disjoint consecutive intervals from 0, one per
/// atom, each carrying the atom's weight value; the basis maps through.
struct LiftedInstance {
    struct Interval {
        Rational left, right, weight;
    };
    std::vector<Interval> intervals;
    std::vector<std::pair<std::string, std::vector<std::int32_t>>> basis;
};

/// Lifts an instance onto the half-line using the instance atom order.
LiftedInstance lift(const Instance& inst);

/// Reads a lifted instance back as an atomic one (each interval becomes an
/// atom whose measure is the interval length); condition constants are
/// evaluated on this representation.
Instance lifted_to_instance(const LiftedInstance& lifted);

} // namespace ainfty
