#include <doctest.h>

#include <array>
#include <cmath>
#include <thread>

#include "ainfty/conditions.hpp"
#include "ainfty/families.hpp"
#include "test_support.hpp"

using namespace ainfty;
using ainfty::testing::canonical_conditions;
using ainfty::testing::p8_grid_scan;
using ainfty::testing::random_instance;

namespace {

Instance unit_atoms(std::vector<long> weights,
                    std::vector<std::vector<std::int32_t>> extra_bases = {}) {
    std::vector<Atom> atoms;
    std::vector<Rational> w;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        atoms.push_back({"a" + std::to_string(i), Rational(1)});
        w.push_back(Rational(weights[i]));
    }
    std::vector<std::int32_t> all(weights.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
    std::vector<Instance::NamedIndexSet> basis{{"B", all}};
    for (std::size_t k = 0; k < extra_bases.size(); ++k)
        basis.emplace_back("E" + std::to_string(k), extra_bases[k]);
    return Instance::from_parts(std::move(atoms), std::move(w), std::move(basis));
}

Instance constant_weight(long c) { return unit_atoms({c, c, c}); }

} // namespace

TEST_CASE("P1: Muckenhoupt product") {
    SUBCASE("constant weight gives 1 for any p") {
        CHECK(eval_p1(constant_weight(1), Rational(2)).overall.rational() == Rational(1));
        CHECK(eval_p1(constant_weight(3), Rational(3, 2)).overall.to_double() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lemma1 level n at p = 2 equals (2n+1)(n+2)/(9n)") {
        CHECK(eval_p1(make_family({"lemma1", 4}), Rational(2)).overall.rational() ==
              Rational(3, 2));
        CHECK(eval_p1(make_family({"lemma1", 7}), Rational(2)).overall.rational() ==
              Rational(15 * 9, 63)); // (2n+1)(n+2)/(9n), n = 7
    }
    SUBCASE("a zero-weight atom forces +infinity") {
        const Instance inst = unit_atoms({0, 2, 3});
        const auto report = eval_p1(inst, Rational(2));
        CHECK(report.overall.is_infinite());
        CHECK(reevaluate_witness(inst, report).is_infinite());
    }
    SUBCASE("lemma2 level 1 at p = 2 is 10/9 on every base") {
        const auto report = eval_p1(make_family({"lemma2", 1}), Rational(2));
        CHECK(report.overall.rational() == Rational(10, 9));
        for (const auto& [b, v] : report.per_base) CHECK(v.rational() == Rational(10, 9));
    }
    CHECK_THROWS_AS(eval_p1(constant_weight(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("P1': subset measure-vs-weight comparison") {
    SUBCASE("constant weight at integer delta = 1 gives exactly 1") {
        const auto report = eval_p1_prime(constant_weight(1), Rational(1));
        CHECK(report.backend == Backend::Exact);
        CHECK(report.overall.rational() == Rational(1));
    }
    SUBCASE("three unit atoms, delta = 1/2: frozen brute-force value") {
        const auto report = eval_p1_prime(unit_atoms({1, 2, 5}), Rational(1, 2));
        CHECK(report.overall.to_double() ==
              doctest::Approx(4.0 * std::sqrt(6.0) / 9.0).epsilon(1e-14));
    }
    SUBCASE("lemma2 stays within the constant 4 at delta = 1/2") {
        for (long n = 1; n <= 4; ++n) {
            const auto report = eval_p1_prime(make_family({"lemma2", n}), Rational(1, 2),
                                              SubsetStrategy::ClassExact);
            CHECK(report.overall.to_double() <= 4.0);
        }
    }
    SUBCASE("zero-weight base is a hard error") {
        CHECK_THROWS_AS(eval_p1_prime(unit_atoms({0, 0, 1}, {{0, 1}}), Rational(1, 2)),
                        ZeroWeightBase);
    }
}

TEST_CASE("P2: average against geometric mean") {
    SUBCASE("constant weight gives 1") {
        CHECK(eval_p2(constant_weight(6)).overall.to_double() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lemma1 level 8 equals 17/12 (8^(2/3) = 4 is exact)") {
        CHECK(eval_p2(make_family({"lemma1", 8})).overall.to_double() ==
              doctest::Approx(17.0 / 12.0).epsilon(1e-9));
    }
    SUBCASE("lemma1 grows like n^(1/3)") {
        const double c64 = eval_p2(make_family({"lemma1", 64})).overall.to_double();
        CHECK(c64 == doctest::Approx(129.0 / 48.0).epsilon(1e-9)); // (2n+1)/(3 n^(2/3))
        CHECK(c64 > (2.0 / 3.0) * std::cbrt(64.0));
    }
    SUBCASE("zero atom under the log makes the base infinite") {
        CHECK(eval_p2(unit_atoms({0, 1, 1})).overall.is_infinite());
    }
    CHECK_THROWS_AS(eval_p2(unit_atoms({0, 0, 1}, {{0, 1}})), ZeroWeightBase);
}

TEST_CASE("P2': power means on a grid") {
    SUBCASE("constant weight gives 1 at every s") {
        const auto report =
            eval_p2_prime(constant_weight(2), {Rational(1, 4), Rational(1, 2)});
        for (const auto& [s, v] : report.per_s)
            CHECK(v.to_double() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lemma1 level 8 at s = 1/2 equals 51/(33+8*sqrt(2))") {
        const auto report = eval_p2_prime(make_family({"lemma1", 8}), {Rational(1, 2)});
        CHECK(report.overall.to_double() ==
              doctest::Approx(51.0 / (33.0 + 8.0 * std::sqrt(2.0))).epsilon(1e-12));
    }
    SUBCASE("the grid supremum approaches the P2 value as s -> 0+") {
        for (long n : {4L, 16L, 64L}) {
            const Instance inst = make_family({"lemma1", n});
            const double p2 = eval_p2(inst).overall.to_double();
            const double p2p =
                eval_p2_prime(inst, {Rational(1, 1000)}).overall.to_double();
            CHECK(std::fabs(p2p - p2) / p2 < 0.01);
        }
    }
    SUBCASE("per-s values are nonincreasing in s (power-mean monotonicity)") {
        std::mt19937 rng(9301);
        const std::vector<Rational> grid{Rational(1, 100), Rational(1, 10), Rational(1, 3),
                                         Rational(1, 2), Rational(4, 5)};
        for (int trial = 0; trial < 30; ++trial) {
            const auto report = eval_p2_prime(random_instance(rng), grid);
            for (std::size_t i = 1; i < report.per_s.size(); ++i) {
                const double prev = report.per_s[i - 1].second.to_double();
                const double cur = report.per_s[i].second.to_double();
                CHECK(cur <= prev * (1 + 1e-12));
            }
            // the grid supremum sits at the smallest s, up to float ties
            CHECK(ExtendedValue::cmp(report.overall, report.per_s.front().second) >= 0);
            CHECK(report.overall.approx_equal(report.per_s.front().second, 1e-12));
            CHECK(report.witness.s.has_value());
        }
    }
    CHECK_THROWS_AS(eval_p2_prime(constant_weight(1), {Rational(1)}), std::invalid_argument);
    CHECK_THROWS_AS(eval_p2_prime(constant_weight(1), {}), std::invalid_argument);
}

TEST_CASE("P3: reverse Hoelder ratio") {
    SUBCASE("constant weight gives 1") {
        CHECK(eval_p3(constant_weight(5), Rational(2)).overall.to_double() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("lemma1 level 2 at q = 2 equals 3*sqrt(3)/5") {
        CHECK(eval_p3(make_family({"lemma1", 2}), Rational(2)).overall.to_double() ==
              doctest::Approx(3.0 * std::sqrt(3.0) / 5.0).epsilon(1e-12));
    }
    SUBCASE("lemma2 full base grows like 2^(n/2) at q = 2") {
        for (long n : {2L, 4L, 6L}) {
            const auto report = eval_p3(make_family({"lemma2", n}), Rational(2));
            const double expected = std::sqrt((1 + std::pow(2.0, -n)) * (1 + std::pow(2.0, n))) / 2;
            CHECK(report.per_base.front().second.to_double() ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("fractional q agrees with integer q at the same value") {
        // q given as 4/2 must round-trip through the exact integer path
        const Instance inst = unit_atoms({1, 2, 5});
        CHECK(eval_p3(inst, Rational(4, 2)).overall.to_double() ==
              doctest::Approx(eval_p3(inst, Rational(2)).overall.to_double()).epsilon(1e-15));
    }
    CHECK_THROWS_AS(eval_p3(constant_weight(1), Rational(1)), std::invalid_argument);
}

TEST_CASE("P3': subset weight-vs-measure comparison") {
    SUBCASE("three unit atoms, delta = 1/2: (5/8)sqrt(3) at the top atom") {
        const auto report = eval_p3_prime(unit_atoms({1, 2, 5}), Rational(1, 2));
        CHECK(report.overall.to_double() ==
              doctest::Approx(0.625 * std::sqrt(3.0)).epsilon(1e-14));
        CHECK(report.witness.subset == std::vector<std::int32_t>{2});
    }
    SUBCASE("constant weight at delta = 1 gives exactly 1") {
        const auto report = eval_p3_prime(constant_weight(1), Rational(1));
        CHECK(report.overall.rational() == Rational(1));
    }
    SUBCASE("lemma2 singleton {x_n0} diverges like (1+2^n)^(1/2) / 2") {
        const long n = 5;
        const auto report =
            eval_p3_prime(make_family({"lemma2", n}), Rational(1, 2), SubsetStrategy::ClassExact);
        const double singleton = 0.5 * std::sqrt(1 + std::pow(2.0, n));
        CHECK(report.overall.to_double() >= singleton * (1 - 1e-12));
    }
}

TEST_CASE("P4: weight mass under a measure budget") {
    SUBCASE("four unit atoms at alpha = 1/2 give 1/4") {
        const auto report = eval_p4(unit_atoms({1, 1, 1, 1}), Rational(1, 2));
        CHECK(report.overall.rational() == Rational(1, 4));
    }
    SUBCASE("lemma1: only the light atom fits the budget") {
        for (long n : {1L, 5L, 9L}) {
            const auto report = eval_p4(make_family({"lemma1", n}), Rational(1, 2));
            CHECK(report.overall.rational() == Rational(1, 2 * n + 1));
            CHECK(report.witness.subset == std::vector<std::int32_t>{1});
        }
    }
    SUBCASE("lemma2 level 1 at alpha = 1/2: the heavy atom of the full base") {
        const Instance inst = make_family({"lemma2", 1});
        const auto report = eval_p4(inst, Rational(1, 2));
        CHECK(report.overall.rational() == Rational(1, 2));
        CHECK(report.witness.base == 0);
        CHECK(report.witness.subset == std::vector<std::int32_t>{0});
    }
}

TEST_CASE("P4': measure of the low-weight level set") {
    SUBCASE("constant weight: the set {w <= w_B/2} is empty") {
        CHECK(eval_p4_prime(constant_weight(1), Rational(1, 2)).overall.rational() ==
              Rational(0));
    }
    SUBCASE("lemma1 level 4: one third of the base sits at or below w_B/2") {
        CHECK(eval_p4_prime(make_family({"lemma1", 4}), Rational(1, 2)).overall.rational() ==
              Rational(1, 3));
    }
    SUBCASE("lemma2 level 1: both thresholds fall below both weights") {
        CHECK(eval_p4_prime(make_family({"lemma2", 1}), Rational(1, 2)).overall.rational() ==
              Rational(0));
    }
    SUBCASE("an identically-zero base yields 1 without erroring") {
        const Instance inst = unit_atoms({0, 0, 1}, {{0, 1}});
        const auto report = eval_p4_prime(inst, Rational(1, 2));
        CHECK(report.overall.rational() == Rational(1)); // the zero base E0
    }
}

TEST_CASE("P5: average against median") {
    SUBCASE("lemma1 satisfies the condition with constant 1 at every level") {
        for (long n = 1; n <= 64; ++n) {
            const auto report = eval_p5(make_family({"lemma1", n}));
            CHECK(report.overall.rational() == Rational(2 * n + 1, 3 * n));
            CHECK(report.overall.rational() <= Rational(1));
        }
    }
    SUBCASE("constant weight gives exactly 1") {
        CHECK(eval_p5(constant_weight(9)).overall.rational() == Rational(1));
    }
    SUBCASE("zero median with positive average is +infinity") {
        const Instance inst = unit_atoms({0, 0, 1});
        const auto report = eval_p5(inst);
        CHECK(report.overall.is_infinite());
        CHECK(reevaluate_witness(inst, report).is_infinite());
    }
    SUBCASE("an identically-zero base contributes 0") {
        const Instance inst = unit_atoms({0, 0, 1}, {{0, 1}});
        CHECK(eval_p5(inst).per_base[1].second.rational() == Rational(0));
    }
}

TEST_CASE("P6: normalized entropy-type integral") {
    SUBCASE("constant weight gives 0 (log+ of 1)") {
        CHECK(eval_p6(constant_weight(4)).overall.to_double() == 0.0);
    }
    SUBCASE("lemma1 level 4: only the heavy atom exceeds the average") {
        CHECK(eval_p6(make_family({"lemma1", 4})).overall.to_double() ==
              doctest::Approx((8.0 / 9.0) * std::log(4.0 / 3.0)).epsilon(1e-12));
    }
    SUBCASE("lemma2 full base value is log((1+2^n)/2)/2") {
        for (long n : {3L, 6L}) {
            const auto report = eval_p6(make_family({"lemma2", n}));
            CHECK(report.per_base.front().second.to_double() ==
                  doctest::Approx(std::log((1 + std::pow(2.0, n)) / 2.0) / 2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("P7: integrated maximal function") {
    SUBCASE("a single basis element always gives 1") {
        CHECK(eval_p7(unit_atoms({1, 7, 3})).overall.rational() == Rational(1));
    }
    SUBCASE("lemma2 level 1 gives 5/4 on the full base") {
        const auto report = eval_p7(make_family({"lemma2", 1}));
        CHECK(report.overall.rational() == Rational(5, 4));
        CHECK(report.witness.base == 0);
    }
    SUBCASE("lemma2 level n gives 2^(n-1)(1+4^-n)") {
        for (long n : {2L, 3L, 5L}) {
            const Rational expected =
                Rational::pow2(n - 1) * (Rational(1) + Rational::pow2(-2 * n));
            CHECK(eval_p7(make_family({"lemma2", n})).overall.rational() == expected);
        }
    }
    SUBCASE("batched evaluation equals the per-atom maximal-operator route") {
        std::mt19937 rng(9302);
        for (int trial = 0; trial < 40; ++trial) {
            const Instance inst = random_instance(rng);
            const auto report = eval_p7(inst);
            for (const auto& [b, v] : report.per_base)
                CHECK(v.rational() ==
                      ainfty::testing::naive_p7_base(inst, b).rational());
        }
        for (const char* family : {"lemma1", "lemma2", "lemma3"})
            for (long n : {1L, 2L, 3L}) {
                const Instance inst = make_family({family, n});
                const auto report = eval_p7(inst);
                for (const auto& [b, v] : report.per_base)
                    CHECK(v.rational() ==
                          ainfty::testing::naive_p7_base(inst, b).rational());
            }
    }
}

TEST_CASE("P8: distribution-level comparison over lambda > w_B") {
    SUBCASE("constant weight gives 0 (the super-level set empties)") {
        CHECK(eval_p8(constant_weight(1), Rational(1)).overall.rational() == Rational(0));
    }
    SUBCASE("lemma3 level 1 at beta = 1 is exactly 5/3, approached at lambda -> 3/5+") {
        const auto report = eval_p8(make_family({"lemma3", 1}), Rational(1));
        CHECK(report.overall.rational() == Rational(5, 3));
        CHECK(report.witness.lambda.has_value());
        CHECK(*report.witness.lambda == Rational(3, 5));
    }
    SUBCASE("lemma3 stays within the constant 4 at beta = 1") {
        for (long n = 1; n <= 5; ++n)
            CHECK(eval_p8(make_family({"lemma3", n}), Rational(1)).overall.rational() <=
                  Rational(4));
    }
    SUBCASE("breakpoint method matches a dense lambda-grid scan") {
        std::mt19937 rng(9303);
        for (int trial = 0; trial < 40; ++trial) {
            const Instance inst = random_instance(rng);
            for (const Rational beta : {Rational(1), Rational(1, 2), Rational(2)}) {
                const auto exact = eval_p8(inst, beta).overall;
                const double grid = p8_grid_scan(inst, beta, 200);
                if (exact.is_infinite()) {
                    CHECK(std::isinf(grid));
                } else {
                    CHECK(grid == doctest::Approx(exact.to_double()).epsilon(1e-6));
                }
            }
        }
    }
    SUBCASE("grid scan on the built-in family shapes at 10^4 points per interval") {
        // Pair bases within a level are isomorphic; the first and last pair
        // plus the full base cover every base shape.
        for (const char* family : {"lemma2", "lemma3"})
            for (long n : {1L, 3L, 6L}) {
                const Instance inst = make_family({family, n});
                const auto report = eval_p8(inst, Rational(1));
                const std::vector<std::int32_t> sample{
                    0, 1, static_cast<std::int32_t>(inst.base_count() - 1)};
                for (const std::int32_t b : sample) {
                    const double grid =
                        ainfty::testing::p8_grid_scan_base(inst, b, Rational(1), 10000);
                    const double exact = report.per_base[static_cast<std::size_t>(b)]
                                             .second.to_double();
                    CHECK(grid == doctest::Approx(exact).epsilon(1e-6));
                }
            }
    }
    SUBCASE("beta > 1 can empty the denominator set: +infinity") {
        const Instance inst = unit_atoms({1, 10});
        const auto report = eval_p8(inst, Rational(2));
        CHECK(report.overall.is_infinite());
        CHECK(reevaluate_witness(inst, report).is_infinite());
    }
    SUBCASE("an identically-zero base contributes 0 without erroring") {
        const Instance inst = unit_atoms({0, 0, 1}, {{0, 1}});
        CHECK(eval_p8(inst, Rational(1)).per_base[1].second.rational() == Rational(0));
    }
}

TEST_CASE("weight and measure scaling leave every constant unchanged") {
    std::mt19937 rng(9304);
    const std::vector<Rational> factors{Rational(1, 3), Rational(2), Rational(7)};
    for (int trial = 0; trial < 8; ++trial) {
        const Instance inst = random_instance(rng);
        for (const auto& [id, params] : canonical_conditions()) {
            const ConstantReport base = evaluate(inst, id, params);
            for (const Rational& c : factors) {
                for (const bool scale_weight : {true, false}) {
                    const Instance scaled = scale_weight ? inst.scaled(c, Rational(1))
                                                         : inst.scaled(Rational(1), c);
                    const ConstantReport other = evaluate(scaled, id, params);
                    if (base.backend == Backend::Exact) {
                        CHECK(other.overall == base.overall);
                    } else {
                        CHECK(other.overall.approx_equal(base.overall, 1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("appending a basis element never decreases any constant") {
    std::mt19937 rng(9305);
    for (int trial = 0; trial < 10; ++trial) {
        const Instance inst = random_instance(rng);
        std::vector<Atom> atoms;
        std::vector<Rational> weights;
        std::vector<Instance::NamedIndexSet> basis;
        for (std::size_t i = 0; i < inst.atom_count(); ++i) {
            const auto a = static_cast<std::int32_t>(i);
            atoms.push_back({inst.atom_id(a), inst.measure(a)});
            weights.push_back(inst.weight(a));
        }
        for (std::size_t b = 0; b < inst.base_count(); ++b) {
            const auto s = inst.base_atoms(static_cast<std::int32_t>(b));
            basis.emplace_back(inst.base_name(static_cast<std::int32_t>(b)),
                               std::vector<std::int32_t>(s.begin(), s.end()));
        }
        std::uniform_int_distribution<int> pick(0, static_cast<int>(inst.atom_count()) - 1);
        std::vector<std::int32_t> extra{static_cast<std::int32_t>(pick(rng))};
        const std::int32_t second = static_cast<std::int32_t>(pick(rng));
        if (second != extra[0]) extra.push_back(second);
        std::sort(extra.begin(), extra.end());
        basis.emplace_back("EXTRA", extra);
        bool zero = true;
        for (const std::int32_t a : extra)
            if (!weights[static_cast<std::size_t>(a)].is_zero()) zero = false;
        if (zero) weights[static_cast<std::size_t>(extra[0])] = Rational(1);

        const Instance grown =
            Instance::from_parts(std::move(atoms), std::move(weights), std::move(basis));
        for (const auto& [id, params] : canonical_conditions()) {
            const auto before = evaluate(inst, id, params).overall;
            const auto after = evaluate(grown, id, params).overall;
            CHECK(ExtendedValue::cmp(after, before) >= 0);
        }
    }
}

TEST_CASE("reported witnesses reproduce the reported constants") {
    std::mt19937 rng(9306);
    for (int trial = 0; trial < 12; ++trial) {
        const Instance inst = random_instance(rng);
        for (const auto& [id, params] : canonical_conditions()) {
            const ConstantReport report = evaluate(inst, id, params);
            const ExtendedValue again = reevaluate_witness(inst, report);
            if (report.backend == Backend::Exact) {
                CHECK(again == report.overall);
            } else {
                CHECK(again.approx_equal(report.overall, 1e-12));
            }
        }
    }
    for (const char* family : {"lemma1", "lemma2", "lemma3"}) {
        const Instance inst = make_family({family, 3});
        for (const auto& [id, params] : canonical_conditions()) {
            const ConstantReport report = evaluate(inst, id, params);
            const ExtendedValue again = reevaluate_witness(inst, report);
            if (report.backend == Backend::Exact) {
                CHECK(again == report.overall);
            } else {
                CHECK(again.approx_equal(report.overall, 1e-12));
            }
        }
    }
}

TEST_CASE("evaluate() demands exactly the required parameters") {
    const Instance inst = constant_weight(1);
    ConditionParams none;
    CHECK_THROWS_AS(evaluate(inst, ConditionId::P1, none), std::invalid_argument);
    ConditionParams stray;
    stray.beta = Rational(1);
    CHECK_THROWS_AS(evaluate(inst, ConditionId::P5, stray), std::invalid_argument);
    ConditionParams both;
    both.p = Rational(2);
    both.q = Rational(2);
    CHECK_THROWS_AS(evaluate(inst, ConditionId::P1, both), std::invalid_argument);
    ConditionParams ok;
    ok.p = Rational(2);
    CHECK(evaluate(inst, ConditionId::P1, ok).overall.rational() == Rational(1));
}

TEST_CASE("evaluators are pure: concurrent runs on a shared instance agree") {
    const Instance inst = make_family({"lemma2", 3});
    const auto expected_p7 = eval_p7(inst).overall;
    const auto expected_p5 = eval_p5(inst).overall;
    std::array<bool, 8> ok{};
    {
        std::vector<std::thread> workers;
        for (std::size_t t = 0; t < ok.size(); ++t)
            workers.emplace_back([&, t] {
                const auto p7 = eval_p7(inst).overall;
                const auto p5 = eval_p5(inst).overall;
                const auto idx = inst.atom_index("x3_1"); // lazy id map under contention
                ok[t] = p7 == expected_p7 && p5 == expected_p5 && idx == 1;
            });
        for (std::thread& w : workers) w.join();
    }
    for (const bool b : ok) CHECK(b);
}

TEST_CASE("condition ids parse in their printed and shell-safe spellings") {
    CHECK(parse_condition("P1") == ConditionId::P1);
    CHECK(parse_condition("P1'") == ConditionId::P1Prime);
    CHECK(parse_condition("p2prime") == ConditionId::P2Prime);
    CHECK(parse_condition("P3p") == ConditionId::P3Prime);
    CHECK(parse_condition("p4_prime") == ConditionId::P4Prime);
    CHECK(parse_condition("P8") == ConditionId::P8);
    CHECK_FALSE(parse_condition("P9").has_value());
    CHECK_FALSE(parse_condition("P5'").has_value());
    for (const ConditionId id : all_conditions())
        CHECK(parse_condition(to_string(id)) == id);
}
