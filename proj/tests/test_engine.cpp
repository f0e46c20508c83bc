#include <gtest/gtest.h>

#include <set>

#include "confspace/engine.hpp"
#include "confspace/verify.hpp"

using namespace confspace;

namespace {

const Coefficients kZ = Coefficients::integers();

AbelianGroup G(const char* s) { return AbelianGroup::parse(s); }

}  // namespace

TEST(PlaneCohomology, Examples) {
    EXPECT_EQ(cohomology_plane(6, kZ, Strategy::matrix).at(5), G("Z/3"));
    auto t = cohomology_plane(24, Coefficients::mod(3), Strategy::even_reduced);
    EXPECT_EQ(t.dim(9), 2);
    EXPECT_EQ(t.dim(17), 3);
    for (int n = 1; n <= 10; ++n)
        for (Strategy s : {Strategy::matrix, Strategy::even_reduced, Strategy::reconstructed})
            EXPECT_EQ(cohomology_plane(n, kZ, s).at(0), AbelianGroup::free(1)) << n << " " << to_string(s);
}

TEST(PlaneCohomology, DegreeRangeAndTrivialCases) {
    auto t0 = cohomology_plane(0, kZ, Strategy::matrix);
    ASSERT_EQ(t0.groups.size(), 1u);
    EXPECT_EQ(t0.at(0), AbelianGroup::free(1));
    auto t5 = cohomology_plane(5, kZ, Strategy::matrix);
    EXPECT_EQ(t5.groups.size(), 5u);
    EXPECT_TRUE(t5.at(7).is_trivial());
    EXPECT_THROW(cohomology_plane(-1, kZ, Strategy::matrix), std::invalid_argument);
}

TEST(SphereCohomology, Examples) {
    auto t5 = cohomology_sphere(5, kZ, Strategy::matrix);
    EXPECT_EQ(t5.at(2), G("Z/8"));
    EXPECT_EQ(t5.at(3), G("Z + Z/2"));
    EXPECT_EQ(t5.at(5), G("Z/2"));
    EXPECT_EQ(cohomology_sphere(10, Coefficients::mod(3), Strategy::closed_form).dim(6), 2);
    auto t1 = cohomology_sphere(1, kZ, Strategy::matrix);
    EXPECT_EQ(t1.at(0), AbelianGroup::free(1));
    EXPECT_EQ(t1.at(2), AbelianGroup::free(1));
    EXPECT_THROW(cohomology_sphere(0, kZ, Strategy::matrix), std::invalid_argument);
}

TEST(StrategyAgreement, PlaneFieldDimensions) {
    for (int p : {2, 3, 5, 7}) {
        const Coefficients k = Coefficients::mod(p);
        for (int n = 0; n <= 14; ++n) {
            auto m = cohomology_plane(n, k, Strategy::matrix);
            auto e = cohomology_plane(n, k, Strategy::even_reduced);
            auto c = cohomology_plane(n, k, Strategy::closed_form);
            for (int r = 0; r <= top_degree(Space::plane, n); ++r) {
                ASSERT_EQ(m.dim(r), count_bp(p, n, r)) << p << " " << n << " " << r;
                ASSERT_EQ(e.dim(r), m.dim(r)) << p << " " << n << " " << r;
                ASSERT_EQ(c.dim(r), m.dim(r)) << p << " " << n << " " << r;
            }
        }
    }
}

TEST(StrategyAgreement, SphereFieldDimensions) {
    for (int p : {2, 3, 5}) {
        const Coefficients k = Coefficients::mod(p);
        for (int n = 1; n <= 12; ++n) {
            auto m = cohomology_sphere(n, k, Strategy::matrix);
            for (int r = 0; r <= top_degree(Space::sphere, n); ++r)
                ASSERT_EQ(m.dim(r), dim_sphere_mod_p(p, n, r)) << p << " " << n << " " << r;
        }
    }
}

TEST(StrategyAgreement, IntegralReconstruction) {
    for (int n = 0; n <= 14; ++n) {
        auto m = cohomology_plane(n, kZ, Strategy::matrix);
        EXPECT_EQ(m.groups, reconstruct_integral(Space::plane, n).groups) << "plane n=" << n;
        EXPECT_EQ(m.groups, cohomology_plane(n, kZ, Strategy::even_reduced).groups) << "plane n=" << n;
        EXPECT_FALSE(cross_check(m).has_value());
    }
    for (int n = 1; n <= 12; ++n) {
        auto m = cohomology_sphere(n, kZ, Strategy::matrix);
        EXPECT_EQ(m.groups, reconstruct_integral(Space::sphere, n).groups) << "sphere n=" << n;
        EXPECT_FALSE(cross_check(m).has_value());
    }
}

TEST(Reconstruction, Examples) {
    EXPECT_EQ(reconstruct_integral(Space::sphere, 16).at(2), G("Z/30"));
    EXPECT_EQ(reconstruct_integral(Space::sphere, 12).at(7), G("(Z/2)^3"));
    EXPECT_EQ(reconstruct_integral(Space::sphere, 4).at(3), G("Z + Z/2"));
}

TEST(LowDegrees, SphereTheoremRange) {
    for (int n = 2; n <= 20; ++n) {
        GradedComplex b = build_sphere(n);
        EXPECT_TRUE(complex_cohomology_at(b, 1, kZ).is_trivial()) << n;
        EXPECT_EQ(complex_cohomology_at(b, 2, kZ), AbelianGroup::from_cyclic_orders(0, {BigInt(2 * n - 2)})) << n;
    }
    for (int n = 4; n <= 12; ++n) EXPECT_EQ(complex_cohomology_at(build_sphere(n), 3, kZ), G("Z + Z/2")) << n;
}

TEST(PlaneCohomology, FiniteSquarefreeAboveDegreeOne) {
    for (int n = 2; n <= 14; ++n) {
        auto t = cohomology_plane(n, kZ, Strategy::even_reduced);
        for (int r = 2; r < static_cast<int>(t.groups.size()); ++r) {
            EXPECT_TRUE(t.at(r).is_finite()) << n << " " << r;
            EXPECT_TRUE(t.at(r).squarefree_exponent()) << n << " " << r;
        }
    }
}

TEST(RankDstar, Examples) {
    EXPECT_EQ(rank_dstar(9, 5, 3, DstarRoute::formula), 1);
    EXPECT_EQ(rank_dstar(9, 5, 3, DstarRoute::matrix), 1);
    EXPECT_EQ(rank_dstar(10, 5, 3, DstarRoute::formula), 0);
    EXPECT_EQ(rank_dstar(10, 5, 3, DstarRoute::matrix), 0);
    for (int p : {2, 3, 5}) EXPECT_EQ(rank_dstar(7, 0, p, DstarRoute::matrix), 0);
    EXPECT_THROW(rank_dstar(5, 2, 4, DstarRoute::formula), std::invalid_argument);
}

TEST(RankDstar, RoutesAgree) {
    for (int p : {2, 3, 5})
        for (int n = 1; n <= 12; ++n)
            for (int r = 0; r <= n; ++r)
                ASSERT_EQ(rank_dstar(n, r, p, DstarRoute::matrix), rank_dstar(n, r, p, DstarRoute::formula))
                    << p << " " << n << " " << r;
}

TEST(Bockstein, CohomologyIsOneAndYZero) {
    auto rep = bockstein_cohomology(24, 3);
    for (int r = 0; r < static_cast<int>(rep.per_degree.size()); ++r)
        EXPECT_EQ(rep.per_degree[r].bh, r <= 1 ? 1 : 0) << r;
    for (int n = 0; n <= 14; ++n)
        for (int p : {2, 3, 5}) {
            auto small = bockstein_cohomology(n, p);
            for (const auto& d : small.per_degree) EXPECT_EQ(d.bh, d.ker - d.im);
        }
}

TEST(Bockstein, VanishesWhenNothingFits) {
    for (int p : {3, 5, 7})
        for (int n = 0; n < 2 * p; ++n)
            for (int rk : bockstein_cohomology(n, p).rank) EXPECT_EQ(rk, 0) << p << " " << n;
}

TEST(TorsionTable, TwentyFourPointsModThree) {
    auto t = torsion_table(24, 3);
    const std::set<int> nonzero{5, 6, 9, 10, 13, 14, 17, 18, 21, 22};
    for (int r = 0; r < static_cast<int>(t.size()); ++r) {
        if (r == 17) {
            // two generators (y_2 and x_1^3 y_1) land in degree 17
            EXPECT_EQ(t[r], 2);
        } else {
            EXPECT_EQ(t[r], nonzero.count(r) ? 1 : 0) << r;
        }
    }
    EXPECT_EQ(t[21], 1);
}

TEST(TorsionTable, SmallExamples) {
    for (int v : torsion_table(4, 3)) EXPECT_EQ(v, 0);
    EXPECT_EQ(torsion_table(6, 3)[5], 1);
}

TEST(TorsionTable, MatchesSmithNormalForm) {
    for (int p : {2, 3})
        for (int n = 0; n <= 12; ++n) {
            auto t = torsion_table(n, p);
            auto z = cohomology_plane(n, kZ, Strategy::matrix);
            for (int r = 0; r < static_cast<int>(t.size()); ++r) ASSERT_EQ(t[r], z.at(r).p_rank(p)) << p << " " << n << " " << r;
        }
}

TEST(Strategies, UnsupportedCombinations) {
    EXPECT_THROW(cohomology_plane(5, kZ, Strategy::closed_form), UnsupportedQuery);
    EXPECT_THROW(cohomology_plane(5, Coefficients::mod(3), Strategy::reconstructed), UnsupportedQuery);
    EXPECT_THROW(cohomology_sphere(5, kZ, Strategy::even_reduced), UnsupportedQuery);
    EXPECT_EQ(cohomology_plane(20, Coefficients::mod(3), Strategy::automatic).strategy, Strategy::even_reduced);
    EXPECT_EQ(cohomology_plane(8, Coefficients::mod(3), Strategy::automatic).strategy, Strategy::matrix);
}

TEST(Strategies, NameParsing) {
    EXPECT_EQ(parse_strategy("even-reduced"), Strategy::even_reduced);
    EXPECT_EQ(parse_strategy("evenReduced"), Strategy::even_reduced);
    EXPECT_EQ(parse_strategy("closed-form"), Strategy::closed_form);
    EXPECT_EQ(parse_strategy("auto"), Strategy::automatic);
    EXPECT_THROW(parse_strategy("fast"), std::invalid_argument);
    EXPECT_EQ(parse_space("sphere"), Space::sphere);
    EXPECT_THROW(parse_space("torus"), std::invalid_argument);
}

TEST(EngineMemo, ReturnsStableAnswers) {
    Engine e;
    auto a = e.compute(Space::sphere, 6, kZ, Strategy::matrix);
    auto b = e.compute(Space::sphere, 6, kZ, Strategy::matrix);
    EXPECT_EQ(a.groups, b.groups);
}

TEST(Suites, AllPassAtDefaultBounds) {
    for (const auto& name : suite_names()) {
        auto rep = run_suite(name);
        EXPECT_TRUE(rep.passed) << name << ": " << rep.counterexample;
        EXPECT_GT(rep.cases, 0) << name;
    }
}

TEST(Suites, NamesAndAliases) {
    EXPECT_EQ(canonical_suite_name("delta-squared"), "dSquared");
    EXPECT_EQ(canonical_suite_name("lemmaE1"), "lemmaE1");
    EXPECT_EQ(canonical_suite_name("split-no-p-squared"), "splitNoPSquared");
    EXPECT_THROW(canonical_suite_name("nope"), std::invalid_argument);
}
