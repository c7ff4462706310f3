#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ainfty/errors.hpp"
#include "ainfty/rational.hpp"

namespace ainfty {

/// One point of the discrete measure space, with its point mass.
struct Atom {
    std::string id;
    Rational measure; // strictly positive
};

/// Reference to a basis element by position, with its resolved atom set.
struct BaseRef {
    std::int32_t index = -1;
    std::span<const std::int32_t> atoms;
};

/// A finite atomic measure space with a covering basis and a nonnegative
/// weight. Immutable after construction; every accessor is safe to call
/// concurrently.
class Instance {
public:
    using NamedIndexSet = std::pair<std::string, std::vector<std::int32_t>>;
    using NamedIdSet = std::pair<std::string, std::vector<std::string>>;

    /// Index-addressed construction (weights positional, bases index sets).
    static Instance from_parts(std::vector<Atom> atoms, std::vector<Rational> weights,
                               std::vector<NamedIndexSet> basis);

    /// Id-addressed construction, as used by the document parser.
    static Instance from_named(std::vector<Atom> atoms,
                               const std::vector<std::pair<std::string, Rational>>& weights,
                               const std::vector<NamedIdSet>& basis);

    std::size_t atom_count() const { return measures_.size(); }
    std::size_t base_count() const { return base_names_.size(); }

    const std::string& atom_id(std::int32_t a) const { return atom_ids_[check_atom(a)]; }
    const Rational& measure(std::int32_t a) const { return measures_[check_atom(a)]; }
    const Rational& weight(std::int32_t a) const { return weights_[check_atom(a)]; }
    std::span<const Rational> weights() const { return weights_; }

    /// Index of the atom with the given id; throws InvalidSet if unknown.
    std::int32_t atom_index(std::string_view id) const;

    const std::string& base_name(std::int32_t b) const { return base_names_[check_base(b)]; }
    std::span<const std::int32_t> base_atoms(std::int32_t b) const {
        check_base(b);
        return {base_atoms_.data() + base_offsets_[b],
                base_offsets_[b + 1] - base_offsets_[b]};
    }
    BaseRef base_ref(std::int32_t b) const { return {b, base_atoms(b)}; }
    /// |B| and w(B), precomputed at construction.
    const Rational& base_measure(std::int32_t b) const { return base_measures_[check_base(b)]; }
    const Rational& base_weight(std::int32_t b) const { return base_weights_[check_base(b)]; }
    bool base_contains(std::int32_t b, std::int32_t atom) const;

    /// Basis elements containing the atom (inverted index).
    std::span<const std::int32_t> bases_of_atom(std::int32_t a) const {
        check_atom(a);
        return {atom_bases_.data() + atom_base_offsets_[a],
                atom_base_offsets_[a + 1] - atom_base_offsets_[a]};
    }
    /// Among bases containing the atom, one of minimal measure |B|.
    std::int32_t min_base_of_atom(std::int32_t a) const { return min_base_[check_atom(a)]; }

    /// Copy with weight scaled by cw and measure by cm (both > 0).
    Instance scaled(const Rational& weight_factor, const Rational& measure_factor) const;

private:
    Instance() = default;
    std::size_t check_atom(std::int32_t a) const {
        if (a < 0 || static_cast<std::size_t>(a) >= measures_.size())
            throw InvalidSet("atom index out of range: " + std::to_string(a));
        return static_cast<std::size_t>(a);
    }
    std::size_t check_base(std::int32_t b) const {
        if (b < 0 || static_cast<std::size_t>(b) >= base_names_.size())
            throw Error("basis index out of range: " + std::to_string(b));
        return static_cast<std::size_t>(b);
    }

    std::vector<std::string> atom_ids_;
    std::vector<Rational> measures_;
    std::vector<Rational> weights_;

    std::vector<std::string> base_names_;
    std::vector<std::size_t> base_offsets_;     // CSR over base_atoms_, sorted per base
    std::vector<std::int32_t> base_atoms_;
    std::vector<Rational> base_measures_;
    std::vector<Rational> base_weights_;

    std::vector<std::size_t> atom_base_offsets_; // CSR over atom_bases_
    std::vector<std::int32_t> atom_bases_;
    std::vector<std::int32_t> min_base_;

    // Lazy id -> index map; built on first atom_index() call.
    struct IdMap {
        std::once_flag once;
        std::unordered_map<std::string, std::int32_t> map;
    };
    mutable std::shared_ptr<IdMap> id_map_ = std::make_shared<IdMap>();
};

/// Integral of the weight over a set of atoms: sum of w(x)|x|.
/// The set is taken with set semantics (duplicates collapse).
Rational integral(const Instance& inst, std::span<const std::int32_t> set);
/// Integral of an arbitrary function given by per-atom values.
Rational integral(const Instance& inst, std::span<const Rational> values,
                  std::span<const std::int32_t> set);
/// Id-addressed variant; throws InvalidSet on unknown ids.
Rational integral_ids(const Instance& inst, std::span<const std::string> ids);

/// Plain measure of a set of atoms.
Rational set_measure(const Instance& inst, std::span<const std::int32_t> set);

/// Average of the weight over a basis element: w(B)/|B|.
Rational average(const Instance& inst, std::int32_t base);

/// Median of the weight over a basis element: the least t >= 0 with
/// |{x in B : w(x) > t}| < |B|/2.
Rational median(const Instance& inst, std::int32_t base);

/// Maximal operator associated with the basis, applied to per-atom values f
/// and evaluated at one atom: max over bases containing the atom of the
/// average of f over the base.
Rational maximal_function(const Instance& inst, std::span<const Rational> values,
                          std::int32_t atom);

} // namespace ainfty
