#include "ainfty/instance.hpp"

#include <algorithm>
#include <unordered_set>

namespace ainfty {

Instance Instance::from_parts(std::vector<Atom> atoms, std::vector<Rational> weights,
                              std::vector<NamedIndexSet> basis) {
    const std::size_t n = atoms.size();
    if (n == 0) throw ValidationError("instance must contain at least one atom");
    if (weights.size() != n)
        throw ValidationError("weight list size does not match atom count");

    {
        std::unordered_set<std::string_view> seen;
        seen.reserve(n * 2);
        for (const Atom& a : atoms) {
            if (a.id.empty()) throw ValidationError("empty atom id");
            if (!seen.insert(a.id).second)
                throw ValidationError("duplicate atom id '" + a.id + "'");
            if (a.measure.sign() <= 0)
                throw ValidationError("non-positive measure for atom '" + a.id + "'");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (weights[i].sign() < 0)
            throw ValidationError("negative weight for atom '" + atoms[i].id + "'");

    Instance inst;
    inst.atom_ids_.reserve(n);
    inst.measures_.reserve(n);
    for (Atom& a : atoms) {
        inst.atom_ids_.push_back(std::move(a.id));
        inst.measures_.push_back(std::move(a.measure));
    }
    inst.weights_ = std::move(weights);

    const std::size_t m = basis.size();
    std::size_t total = 0;
    for (const auto& [name, set] : basis) {
        if (set.empty())
            throw ValidationError("empty basis element '" + name + "'");
        total += set.size();
    }
    inst.base_names_.reserve(m);
    inst.base_offsets_.reserve(m + 1);
    inst.base_atoms_.reserve(total);
    inst.base_measures_.reserve(m);
    inst.base_weights_.reserve(m);
    inst.base_offsets_.push_back(0);
    std::vector<std::size_t> degree(n, 0);
    for (auto& [name, set] : basis) {
        std::sort(set.begin(), set.end());
        for (std::size_t i = 0; i < set.size(); ++i) {
            const std::int32_t a = set[i];
            if (a < 0 || static_cast<std::size_t>(a) >= n)
                throw ValidationError("basis element '" + name + "' refers to atom index " +
                                      std::to_string(a) + " out of range");
            if (i > 0 && set[i - 1] == a)
                throw ValidationError("duplicate atom '" + inst.atom_ids_[a] +
                                      "' in basis element '" + name + "'");
            ++degree[static_cast<std::size_t>(a)];
        }
        Rational bm(0), bw(0);
        for (const std::int32_t a : set) {
            bm += inst.measures_[static_cast<std::size_t>(a)];
            bw += inst.weights_[static_cast<std::size_t>(a)] *
                  inst.measures_[static_cast<std::size_t>(a)];
        }
        inst.base_names_.push_back(std::move(name));
        inst.base_atoms_.insert(inst.base_atoms_.end(), set.begin(), set.end());
        inst.base_offsets_.push_back(inst.base_atoms_.size());
        inst.base_measures_.push_back(std::move(bm));
        inst.base_weights_.push_back(std::move(bw));
    }

    for (std::size_t a = 0; a < n; ++a)
        if (degree[a] == 0)
            throw ValidationError("atom '" + inst.atom_ids_[a] +
                                  "' is not covered by any basis element");

    // Inverted index (CSR), filled base by base so each atom's list is sorted.
    inst.atom_base_offsets_.assign(n + 1, 0);
    for (std::size_t a = 0; a < n; ++a)
        inst.atom_base_offsets_[a + 1] = inst.atom_base_offsets_[a] + degree[a];
    inst.atom_bases_.assign(inst.atom_base_offsets_[n], 0);
    {
        std::vector<std::size_t> cursor(inst.atom_base_offsets_.begin(),
                                        inst.atom_base_offsets_.end() - 1);
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t k = inst.base_offsets_[b]; k < inst.base_offsets_[b + 1]; ++k) {
                const auto a = static_cast<std::size_t>(inst.base_atoms_[k]);
                inst.atom_bases_[cursor[a]++] = static_cast<std::int32_t>(b);
            }
    }

    inst.min_base_.assign(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        std::int32_t best = -1;
        for (std::size_t k = inst.atom_base_offsets_[a]; k < inst.atom_base_offsets_[a + 1]; ++k) {
            const std::int32_t b = inst.atom_bases_[k];
            if (best < 0 || inst.base_measures_[static_cast<std::size_t>(b)] <
                                inst.base_measures_[static_cast<std::size_t>(best)])
                best = b;
        }
        inst.min_base_[a] = best;
    }
    return inst;
}

Instance Instance::from_named(std::vector<Atom> atoms,
                              const std::vector<std::pair<std::string, Rational>>& weights,
                              const std::vector<NamedIdSet>& basis) {
    std::unordered_map<std::string_view, std::int32_t> index;
    index.reserve(atoms.size() * 2);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!index.emplace(atoms[i].id, static_cast<std::int32_t>(i)).second)
            throw ValidationError("duplicate atom id '" + atoms[i].id + "'");
    }
    std::vector<Rational> w(atoms.size(), Rational(0));
    std::vector<bool> have(atoms.size(), false);
    for (const auto& [id, value] : weights) {
        const auto it = index.find(id);
        if (it == index.end())
            throw ValidationError("weight given for unknown atom id '" + id + "'");
        const auto i = static_cast<std::size_t>(it->second);
        if (have[i]) throw ValidationError("duplicate weight entry for atom '" + id + "'");
        have[i] = true;
        w[i] = value;
    }
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (!have[i]) throw ValidationError("missing weight for atom '" + atoms[i].id + "'");

    std::vector<NamedIndexSet> resolved;
    resolved.reserve(basis.size());
    for (const auto& [name, ids] : basis) {
        std::vector<std::int32_t> set;
        set.reserve(ids.size());
        for (const std::string& id : ids) {
            const auto it = index.find(id);
            if (it == index.end())
                throw ValidationError("unknown atom id '" + id + "' in basis element '" +
                                      name + "'");
            set.push_back(it->second);
        }
        resolved.emplace_back(name, std::move(set));
    }
    return from_parts(std::move(atoms), std::move(w), std::move(resolved));
}

std::int32_t Instance::atom_index(std::string_view id) const {
    std::call_once(id_map_->once, [this] {
        id_map_->map.reserve(atom_ids_.size() * 2);
        for (std::size_t i = 0; i < atom_ids_.size(); ++i)
            id_map_->map.emplace(atom_ids_[i], static_cast<std::int32_t>(i));
    });
    const auto it = id_map_->map.find(std::string(id));
    if (it == id_map_->map.end())
        throw InvalidSet("unknown atom id '" + std::string(id) + "'");
    return it->second;
}

bool Instance::base_contains(std::int32_t b, std::int32_t atom) const {
    const auto atoms = base_atoms(b);
    return std::binary_search(atoms.begin(), atoms.end(), atom);
}

Instance Instance::scaled(const Rational& weight_factor, const Rational& measure_factor) const {
    if (weight_factor.sign() <= 0 || measure_factor.sign() <= 0)
        throw ValidationError("scale factors must be positive");
    std::vector<Atom> atoms;
    atoms.reserve(atom_count());
    for (std::size_t i = 0; i < atom_count(); ++i)
        atoms.push_back({atom_ids_[i], measures_[i] * measure_factor});
    std::vector<Rational> w;
    w.reserve(atom_count());
    for (const Rational& x : weights_) w.push_back(x * weight_factor);
    std::vector<NamedIndexSet> basis;
    basis.reserve(base_count());
    for (std::size_t b = 0; b < base_count(); ++b) {
        const auto s = base_atoms(static_cast<std::int32_t>(b));
        basis.emplace_back(base_names_[b], std::vector<std::int32_t>(s.begin(), s.end()));
    }
    return from_parts(std::move(atoms), std::move(w), std::move(basis));
}

namespace {

std::vector<std::int32_t> as_sorted_set(const Instance& inst, std::span<const std::int32_t> set) {
    std::vector<std::int32_t> s(set.begin(), set.end());
    for (const std::int32_t a : s)
        if (a < 0 || static_cast<std::size_t>(a) >= inst.atom_count())
            throw InvalidSet("atom index out of range: " + std::to_string(a));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace

Rational integral(const Instance& inst, std::span<const std::int32_t> set) {
    return integral(inst, inst.weights(), set);
}

Rational integral(const Instance& inst, std::span<const Rational> values,
                  std::span<const std::int32_t> set) {
    if (values.size() != inst.atom_count())
        throw InvalidSet("value list size does not match atom count");
    Rational sum(0);
    for (const std::int32_t a : as_sorted_set(inst, set))
        sum += values[static_cast<std::size_t>(a)] * inst.measure(a);
    return sum;
}

Rational integral_ids(const Instance& inst, std::span<const std::string> ids) {
    std::vector<std::int32_t> set;
    set.reserve(ids.size());
    for (const std::string& id : ids) set.push_back(inst.atom_index(id));
    return integral(inst, set);
}

Rational set_measure(const Instance& inst, std::span<const std::int32_t> set) {
    Rational sum(0);
    for (const std::int32_t a : as_sorted_set(inst, set)) sum += inst.measure(a);
    return sum;
}

Rational average(const Instance& inst, std::int32_t base) {
    return inst.base_weight(base) / inst.base_measure(base);
}

Rational median(const Instance& inst, std::int32_t base) {
    // Scan candidates t in {0} ∪ {distinct weight values on B} ascending and
    // return the first with |{w > t}| < |B|/2. The candidate set suffices
    // because t -> |{w > t}| is a right-continuous decreasing step function
    // with jumps exactly at weight values.
    const auto atoms = inst.base_atoms(base);
    std::vector<std::pair<Rational, Rational>> by_value; // (weight value, measure)
    by_value.reserve(atoms.size());
    for (const std::int32_t a : atoms) by_value.emplace_back(inst.weight(a), inst.measure(a));
    std::sort(by_value.begin(), by_value.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    const Rational& total = inst.base_measure(base);
    Rational above = total; // measure of {w > t} for the current candidate t
    Rational zero(0);
    // t = 0: subtract the mass of zero-weight atoms.
    std::size_t i = 0;
    while (i < by_value.size() && by_value[i].first.is_zero()) {
        above -= by_value[i].second;
        ++i;
    }
    if (Rational(2) * above < total) return zero;
    while (i < by_value.size()) {
        const Rational& t = by_value[i].first;
        while (i < by_value.size() && by_value[i].first == t) {
            above -= by_value[i].second;
            ++i;
        }
        if (Rational(2) * above < total) return t;
    }
    throw Error("median: scan exhausted without satisfying the defining inequality");
}

Rational maximal_function(const Instance& inst, std::span<const Rational> values,
                          std::int32_t atom) {
    if (values.size() != inst.atom_count())
        throw InvalidSet("value list size does not match atom count");
    const auto bases = inst.bases_of_atom(atom);
    if (bases.empty())
        throw UncoveredAtom("atom '" + inst.atom_id(atom) + "' belongs to no basis element");
    bool first = true;
    Rational best(0);
    for (const std::int32_t b : bases) {
        Rational sum(0);
        for (const std::int32_t y : inst.base_atoms(b))
            sum += values[static_cast<std::size_t>(y)] * inst.measure(y);
        Rational avg = sum / inst.base_measure(b);
        if (first || avg > best) {
            best = std::move(avg);
            first = false;
        }
    }
    return best;
}

} // namespace ainfty
