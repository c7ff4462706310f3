#include "ainfty/families.hpp"

#include <algorithm>

#include "ainfty/errors.hpp"

namespace ainfty {

std::vector<std::string> family_names() { return {"lemma1", "lemma2", "lemma3"}; }

long lemma3_m(long n) {
    long m = 0, p = 1;
    for (long j = 1; j <= n; ++j) {
        p *= 4;
        m += p;
    }
    return m;
}

namespace {

struct Parts {
    std::vector<Atom> atoms;
    std::vector<Rational> weights;
    std::vector<Instance::NamedIndexSet> basis;
};

std::string atom_id(long n, long i) { return "x" + std::to_string(n) + "_" + std::to_string(i); }

void append_lemma1(Parts& parts, long n) {
    const auto base = static_cast<std::int32_t>(parts.atoms.size());
    parts.atoms.push_back({atom_id(n, 0), Rational(2)});
    parts.weights.push_back(Rational(n));
    parts.atoms.push_back({atom_id(n, 1), Rational(1)});
    parts.weights.push_back(Rational(1));
    parts.basis.emplace_back("B" + std::to_string(n),
                             std::vector<std::int32_t>{base, base + 1});
}

void append_lemma2(Parts& parts, long n) {
    if (n > 15) throw ValidationError("lemma2 level too large to materialize (4^n atoms)");
    const long count = 1l << (2 * n); // 4^n
    const auto first = static_cast<std::int32_t>(parts.atoms.size());
    const Rational small = Rational(1, 2).pow_int(n); // 2^-n
    parts.atoms.push_back({atom_id(n, 0), Rational(1)});
    parts.weights.push_back(Rational(1));
    for (long i = 1; i <= count; ++i) {
        parts.atoms.push_back({atom_id(n, i), small});
        parts.weights.push_back(small);
    }
    std::vector<std::int32_t> all(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) all[static_cast<std::size_t>(i)] = first + static_cast<std::int32_t>(i);
    parts.basis.emplace_back("B" + std::to_string(n) + "_0", std::move(all));
    for (long i = 1; i <= count; ++i)
        parts.basis.emplace_back(
            "B" + std::to_string(n) + "_" + std::to_string(i),
            std::vector<std::int32_t>{first, first + static_cast<std::int32_t>(i)});
}

void append_lemma3(Parts& parts, long n) {
    if (n > 13) throw ValidationError("lemma3 level too large to materialize (~4^n atoms)");
    const long m_n = lemma3_m(n);
    const auto first = static_cast<std::int32_t>(parts.atoms.size());
    parts.atoms.push_back({atom_id(n, 0), Rational(1)});
    parts.weights.push_back(Rational(1));
    long prev_m = 0;
    for (long j = 1; j <= n; ++j) {
        const long m_j = lemma3_m(j);
        const Rational w = Rational(1, 2).pow_int(j); // 2^-j
        for (long i = prev_m + 1; i <= m_j; ++i) {
            parts.atoms.push_back({atom_id(n, i), Rational(1)});
            parts.weights.push_back(w);
        }
        prev_m = m_j;
    }
    std::vector<std::int32_t> all(static_cast<std::size_t>(m_n) + 1);
    for (long i = 0; i <= m_n; ++i) all[static_cast<std::size_t>(i)] = first + static_cast<std::int32_t>(i);
    parts.basis.emplace_back("B" + std::to_string(n) + "_0", std::move(all));
    for (long i = 1; i <= m_n; ++i)
        parts.basis.emplace_back(
            "B" + std::to_string(n) + "_" + std::to_string(i),
            std::vector<std::int32_t>{first, first + static_cast<std::int32_t>(i)});
}

} // namespace

Instance make_family(const FamilySpec& spec) {
    if (spec.level <= 0) throw ValidationError("family level must be a positive integer");
    void (*append)(Parts&, long) = nullptr;
    if (spec.name == "lemma1") append = append_lemma1;
    else if (spec.name == "lemma2") append = append_lemma2;
    else if (spec.name == "lemma3") append = append_lemma3;
    else throw ValidationError("unknown family '" + spec.name + "'");

    Parts parts;
    if (spec.cumulative) {
        for (long n = 1; n <= spec.level; ++n) append(parts, n);
    } else {
        append(parts, spec.level);
    }
    return Instance::from_parts(std::move(parts.atoms), std::move(parts.weights),
                                std::move(parts.basis));
}

std::vector<IntervalLayout> tau_layout(const Instance& inst,
                                       std::span<const std::int32_t> order) {
    const std::size_t n = inst.atom_count();
    if (order.size() != n)
        throw ValidationError("atom order must be a permutation of all atoms (got " +
                              std::to_string(order.size()) + " of " + std::to_string(n) + ")");
    std::vector<bool> seen(n, false);
    std::vector<IntervalLayout> layout;
    layout.reserve(n);
    Rational cursor(0);
    for (const std::int32_t a : order) {
        if (a < 0 || static_cast<std::size_t>(a) >= n)
            throw ValidationError("atom order index out of range: " + std::to_string(a));
        if (seen[static_cast<std::size_t>(a)])
            throw ValidationError("atom order repeats atom '" + inst.atom_id(a) + "'");
        seen[static_cast<std::size_t>(a)] = true;
        Rational right = cursor + inst.measure(a);
        layout.push_back({a, cursor, right});
        cursor = std::move(right);
    }
    return layout;
}

std::vector<IntervalLayout> tau_layout_ids(const Instance& inst,
                                           const std::vector<std::string>& order) {
    std::vector<std::int32_t> idx;
    idx.reserve(order.size());
    for (const std::string& id : order) idx.push_back(inst.atom_index(id));
    return tau_layout(inst, idx);
}

LiftedInstance lift(const Instance& inst) {
    std::vector<std::int32_t> order(inst.atom_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    const auto layout = tau_layout(inst, order);

    LiftedInstance lifted;
    lifted.intervals.reserve(layout.size());
    for (const IntervalLayout& seg : layout)
        lifted.intervals.push_back({seg.left, seg.right, inst.weight(seg.atom)});
    lifted.basis.reserve(inst.base_count());
    for (std::size_t b = 0; b < inst.base_count(); ++b) {
        const auto atoms = inst.base_atoms(static_cast<std::int32_t>(b));
        lifted.basis.emplace_back(inst.base_name(static_cast<std::int32_t>(b)),
                                  std::vector<std::int32_t>(atoms.begin(), atoms.end()));
    }
    return lifted;
}

Instance lifted_to_instance(const LiftedInstance& lifted) {
    std::vector<Atom> atoms;
    std::vector<Rational> weights;
    atoms.reserve(lifted.intervals.size());
    weights.reserve(lifted.intervals.size());
    Rational expected_left(0);
    for (std::size_t k = 0; k < lifted.intervals.size(); ++k) {
        const auto& seg = lifted.intervals[k];
        if (seg.left != expected_left)
            throw ValidationError("lifted intervals are not consecutive from 0");
        if (seg.right <= seg.left)
            throw ValidationError("lifted interval has non-positive length");
        atoms.push_back({"I" + std::to_string(k), seg.right - seg.left});
        weights.push_back(seg.weight);
        expected_left = seg.right;
    }
    std::vector<Instance::NamedIndexSet> basis;
    basis.reserve(lifted.basis.size());
    for (const auto& [name, set] : lifted.basis) basis.emplace_back(name, set);
    return Instance::from_parts(std::move(atoms), std::move(weights), std::move(basis));
}

} // namespace ainfty
