#include <doctest.h>

#include "ainfty/families.hpp"
#include "test_support.hpp"

using namespace ainfty;
using ainfty::testing::random_instance;

namespace {

Instance three_unit_atoms(std::vector<long> weights) {
    std::vector<Atom> atoms;
    std::vector<Rational> w;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        atoms.push_back({"a" + std::to_string(i), Rational(1)});
        w.push_back(Rational(weights[i]));
    }
    std::vector<std::int32_t> all(weights.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
    return Instance::from_parts(std::move(atoms), std::move(w), {{"B", all}});
}

} // namespace

TEST_CASE("integral over basis elements") {
    SUBCASE("lemma1 level n has w(B_n) = 2n+1") {
        const Instance inst = make_family({"lemma1", 5});
        CHECK(inst.base_weight(0) == Rational(11));
        CHECK(integral(inst, inst.base_atoms(0)) == Rational(11));
    }
    SUBCASE("weight one integrates to the measure") {
        const Instance inst = three_unit_atoms({1, 1, 1});
        CHECK(integral(inst, inst.base_atoms(0)) == inst.base_measure(0));
    }
    SUBCASE("lemma3 level 3 has w(B_{3,0}) = 15") {
        const Instance inst = make_family({"lemma3", 3});
        CHECK(inst.base_weight(0) == Rational(15)); // 2^(n+1) - 1
    }
    SUBCASE("empty set integrates to zero") {
        const Instance inst = three_unit_atoms({1, 2, 3});
        CHECK(integral(inst, std::span<const std::int32_t>{}) == Rational(0));
    }
    SUBCASE("unknown ids are rejected") {
        const Instance inst = three_unit_atoms({1, 2, 3});
        const std::vector<std::string> ids{"a0", "zz"};
        CHECK_THROWS_AS(integral_ids(inst, ids), InvalidSet);
    }
    SUBCASE("duplicates collapse under set semantics") {
        const Instance inst = three_unit_atoms({1, 2, 3});
        const std::vector<std::int32_t> dup{0, 0, 1};
        CHECK(integral(inst, dup) == Rational(3));
    }
}

TEST_CASE("average of the weight over a base") {
    CHECK(average(make_family({"lemma1", 5}), 0) == Rational(11, 3));
    const Instance constant = three_unit_atoms({4, 4, 4});
    CHECK(average(constant, 0) == Rational(4));
    CHECK(average(make_family({"lemma2", 3}), 0) == Rational(2, 9)); // |B|=9, w(B)=2
}

TEST_CASE("median by ascending threshold scan") {
    CHECK(median(make_family({"lemma1", 7}), 0) == Rational(7));
    CHECK(median(three_unit_atoms({5, 5, 5}), 0) == Rational(5));
    CHECK(median(three_unit_atoms({1, 2, 5}), 0) == Rational(2));
    CHECK(median(three_unit_atoms({0, 0, 1}), 0) == Rational(0));
    CHECK(median(three_unit_atoms({0, 3, 3}), 0) == Rational(3));
}

TEST_CASE("median satisfies both defining clauses on random instances") {
    std::mt19937 rng(7101);
    ainfty::testing::GenOptions opts;
    opts.allow_zero_weights = true;
    for (int trial = 0; trial < 100; ++trial) {
        const Instance inst = random_instance(rng, opts);
        for (std::size_t b = 0; b < inst.base_count(); ++b) {
            const auto bi = static_cast<std::int32_t>(b);
            const Rational m = median(inst, bi);
            const Rational half = inst.base_measure(bi) / Rational(2);
            const auto above = [&](const Rational& t) {
                Rational s(0);
                for (const std::int32_t a : inst.base_atoms(bi))
                    if (inst.weight(a) > t) s += inst.measure(a);
                return s;
            };
            CHECK(above(m) < half);
            for (const std::int32_t a : inst.base_atoms(bi)) {
                const Rational& v = inst.weight(a);
                if (v < m) CHECK(above(v) >= half);
            }
        }
    }
}

TEST_CASE("maximal operator over the basis") {
    SUBCASE("single basis element: M f = f_B everywhere") {
        const Instance inst = three_unit_atoms({1, 2, 5});
        std::vector<Rational> f{Rational(1), Rational(2), Rational(5)};
        for (std::int32_t a = 0; a < 3; ++a)
            CHECK(maximal_function(inst, f, a) == Rational(8, 3));
    }
    SUBCASE("lemma2: pair-base average dominates at the small atoms") {
        const long n = 3;
        const Instance inst = make_family({"lemma2", n});
        std::vector<Rational> f(inst.weights().begin(), inst.weights().end()); // w = w·χ_B on B_{n,0}
        const Rational expected =
            (Rational(1) + Rational::pow2(-2 * n)) / (Rational(1) + Rational::pow2(-n));
        CHECK(maximal_function(inst, f, 1) == expected);
        CHECK(maximal_function(inst, f, static_cast<std::int32_t>(inst.atom_count() - 1)) ==
              expected);
    }
    SUBCASE("lemma2 level 1 at the big atom: max of 2/3 and 5/6") {
        const Instance inst = make_family({"lemma2", 1});
        std::vector<Rational> f(inst.weights().begin(), inst.weights().end());
        CHECK(maximal_function(inst, f, 0) == Rational(5, 6));
    }
}

TEST_CASE("maximal function dominates the base average (random)") {
    std::mt19937 rng(7102);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(rng);
        for (std::size_t b = 0; b < inst.base_count(); ++b) {
            const auto bi = static_cast<std::int32_t>(b);
            std::vector<Rational> f(inst.atom_count(), Rational(0));
            for (const std::int32_t a : inst.base_atoms(bi))
                f[static_cast<std::size_t>(a)] = inst.weight(a);
            for (const std::int32_t a : inst.base_atoms(bi))
                CHECK(maximal_function(inst, f, a) >= average(inst, bi));
        }
    }
}

TEST_CASE("integral is additive and averages sit between weight extremes") {
    std::mt19937 rng(7103);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(rng);
        std::vector<std::int32_t> evens, odds, all;
        for (std::size_t i = 0; i < inst.atom_count(); ++i) {
            (i % 2 ? odds : evens).push_back(static_cast<std::int32_t>(i));
            all.push_back(static_cast<std::int32_t>(i));
        }
        CHECK(integral(inst, evens) + integral(inst, odds) == integral(inst, all));
        for (std::size_t b = 0; b < inst.base_count(); ++b) {
            const auto bi = static_cast<std::int32_t>(b);
            Rational lo = inst.weight(inst.base_atoms(bi).front());
            Rational hi = lo;
            for (const std::int32_t a : inst.base_atoms(bi)) {
                lo = std::min(lo, inst.weight(a));
                hi = std::max(hi, inst.weight(a));
            }
            const Rational avg = average(inst, bi);
            CHECK(avg >= lo);
            CHECK(avg <= hi);
        }
    }
}

TEST_CASE("measure rescaling leaves average and median unchanged, scales integrals") {
    std::mt19937 rng(7104);
    const Rational c(5, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const Instance inst = random_instance(rng);
        const Instance scaled = inst.scaled(Rational(1), c);
        for (std::size_t b = 0; b < inst.base_count(); ++b) {
            const auto bi = static_cast<std::int32_t>(b);
            CHECK(average(scaled, bi) == average(inst, bi));
            CHECK(median(scaled, bi) == median(inst, bi));
            CHECK(scaled.base_weight(bi) == c * inst.base_weight(bi));
        }
    }
}

TEST_CASE("instance construction rejects invariant violations") {
    const auto atom = [](const char* id, long m) { return Atom{id, Rational(m)}; };
    const std::vector<Rational> ones{Rational(1), Rational(1)};

    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("a", 1)}, ones, {{"B", {0, 1}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 0), atom("b", 1)}, ones, {{"B", {0, 1}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("b", 1)},
                                         {Rational(-1), Rational(1)}, {{"B", {0, 1}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("b", 1)}, ones, {{"B", {}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("b", 1)}, ones, {{"B", {0}}}),
                    ValidationError); // b uncovered
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("b", 1)}, ones, {{"B", {0, 5}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({atom("a", 1), atom("b", 1)}, ones, {{"B", {0, 1, 1}}}),
                    ValidationError);
    CHECK_THROWS_AS(Instance::from_parts({}, {}, {}), ValidationError);
    CHECK_THROWS_AS(
        Instance::from_named({atom("a", 1)}, {}, {{"B", {"a"}}}),
        ValidationError); // missing weight
    CHECK_THROWS_AS(
        Instance::from_named({atom("a", 1)}, {{"a", Rational(1)}, {"z", Rational(1)}},
                             {{"B", {"a"}}}),
        ValidationError); // weight for unknown atom
    CHECK_THROWS_AS(
        Instance::from_named({atom("a", 1)}, {{"a", Rational(1)}}, {{"B", {"a", "z"}}}),
        ValidationError); // unknown id in base
}

TEST_CASE("atom lookup and base accessors") {
    const Instance inst = make_family({"lemma2", 1});
    CHECK(inst.atom_count() == 5);
    CHECK(inst.base_count() == 5);
    CHECK(inst.atom_index("x1_0") == 0);
    CHECK_THROWS_AS(inst.atom_index("nope"), InvalidSet);
    CHECK(inst.base_name(0) == "B1_0");
    CHECK(inst.base_measure(0) == Rational(3));
    CHECK(inst.base_contains(0, 2));
    CHECK_FALSE(inst.base_contains(1, 2));
    CHECK(inst.bases_of_atom(0).size() == 5);
    CHECK(inst.bases_of_atom(1).size() == 2);
    // min-measure base containing the hub is one of the pairs (|B| = 3/2)
    CHECK(inst.base_measure(inst.min_base_of_atom(0)) == Rational(3, 2));
}
