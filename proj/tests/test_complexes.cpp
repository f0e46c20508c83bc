#include <gtest/gtest.h>

#include "confspace/complexes.hpp"
#include "confspace/engine.hpp"

using namespace confspace;

namespace {

const Coefficients kZ = Coefficients::integers();

int ncr(int n, int k) {
    if (k < 0 || k > n) return 0;
    long v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return static_cast<int>(v);
}

}  // namespace

TEST(PlaneComplex, SmallestCase) {
    GradedComplex a2 = build_plane(2);
    ASSERT_EQ(a2.dim(0), 1);
    ASSERT_EQ(a2.dim(1), 1);
    EXPECT_EQ(a2.basis(0)[0].composition, Composition({1, 1}));
    EXPECT_EQ(a2.basis(1)[0].composition, Composition({2}));
    EXPECT_TRUE(a2.differential(0).is_zero());
    auto h = complex_cohomology(a2, kZ);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0], AbelianGroup::free(1));
    EXPECT_EQ(h[1], AbelianGroup::free(1));
}

TEST(PlaneComplex, DimensionsAreBinomials) {
    for (int n = 1; n <= 14; ++n) {
        GradedComplex a = build_plane(n);
        EXPECT_EQ(a.max_degree(), n - 1);
        for (int r = 0; r < n; ++r) EXPECT_EQ(a.dim(r), ncr(n - 1, r)) << n << " " << r;
        EXPECT_EQ(a.dim(n), 0);
        EXPECT_EQ(a.dim(-1), 0);
    }
    GradedComplex a0 = build_plane(0);
    EXPECT_EQ(a0.dims(), std::vector<int>({1}));
}

TEST(PlaneComplex, BasisInLexOrder) {
    GradedComplex a = build_plane(7);
    for (int r = 0; r <= a.max_degree(); ++r) {
        const auto& b = a.basis(r);
        for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i - 1].composition, b[i].composition);
    }
    EXPECT_EQ(a.index_of(1, Cell{0, Composition{1, 1, 1, 1, 1, 2}}), 0);
    EXPECT_EQ(a.index_of(1, Cell{0, Composition{2, 1, 1, 1, 1, 1}}), static_cast<int>(a.basis(1).size()) - 1);
}

TEST(PlaneComplex, MatrixEntriesAreDeltaCoefficients) {
    GradedComplex a = build_plane(6);
    // [2,4] -> [6] with P(2,4) = 3
    const int src = a.index_of(4, Cell{0, Composition{2, 4}});
    const int dst = a.index_of(5, Cell{0, Composition{6}});
    ASSERT_GE(src, 0);
    ASSERT_GE(dst, 0);
    EXPECT_EQ(a.differential(4).at(dst, src), 3);
}

TEST(Complexes, CompositeZeroEverywhere) {
    for (int n = 1; n <= 12; ++n) {
        GradedComplex a = build_plane(n), b = build_sphere(n);
        for (int r = -1; r <= a.max_degree(); ++r) EXPECT_TRUE(a.differential(r + 1).multiply(a.differential(r)).is_zero());
        for (int r = -1; r <= b.max_degree(); ++r) EXPECT_TRUE(b.differential(r + 1).multiply(b.differential(r)).is_zero());
    }
    for (int m = 0; m <= 16; m += 2) {
        GradedComplex e = build_plane_even(m);
        for (int r = -1; r <= e.max_degree(); ++r) EXPECT_TRUE(e.differential(r + 1).multiply(e.differential(r)).is_zero());
    }
}

TEST(SphereComplex, BlockLayout) {
    for (int n = 1; n <= 9; ++n) {
        GradedComplex b = build_sphere(n);
        GradedComplex an = build_plane(n), an1 = build_plane(n - 1);
        EXPECT_EQ(b.max_degree(), std::max(n, 2));
        for (int r = 0; r <= b.max_degree(); ++r) {
            EXPECT_EQ(b.dim(r), an.dim(r) + an1.dim(r - 2));
            const auto& cells = b.basis(r);
            for (int i = 0; i < an.dim(r); ++i) EXPECT_EQ(cells[i], (Cell{0, an.basis(r)[i].composition}));
            for (int i = 0; i < an1.dim(r - 2); ++i)
                EXPECT_EQ(cells[an.dim(r) + i], (Cell{1, an1.basis(r - 2)[i].composition}));
        }
    }
}

TEST(SphereComplex, DBlockOnTwoPoints) {
    GradedComplex b = build_sphere(2);
    // degree 1: [2] in block 0 maps to delta = 0 plus (-1)^{2-1} D[2] = -2 [1] in block 1
    const auto& d = b.differential(1);
    ASSERT_EQ(d.nnz(), 1u);
    EXPECT_EQ(abs(d.entries()[0].value), 2);
    EXPECT_EQ(complex_cohomology_at(b, 2, kZ), AbelianGroup::parse("Z/2"));
    EXPECT_TRUE(complex_cohomology_at(b, 1, kZ).is_trivial());
}

TEST(SphereComplex, SmallGroups) {
    EXPECT_EQ(complex_cohomology_at(build_sphere(3), 2, kZ), AbelianGroup::parse("Z/4"));
    auto h1 = complex_cohomology(build_sphere(1), kZ);
    ASSERT_EQ(h1.size(), 3u);
    EXPECT_EQ(h1[0], AbelianGroup::free(1));
    EXPECT_TRUE(h1[1].is_trivial());
    EXPECT_EQ(h1[2], AbelianGroup::free(1));
    auto h5 = complex_cohomology(build_sphere(5), kZ);
    EXPECT_EQ(h5[2], AbelianGroup::parse("Z/8"));
    EXPECT_EQ(h5[3], AbelianGroup::parse("Z + Z/2"));
    EXPECT_EQ(h5[5], AbelianGroup::parse("Z/2"));
}

TEST(SphereComplex, ThreePrimaryPartAtTen) {
    auto h6 = complex_cohomology_at(build_sphere(10), 6, kZ);
    EXPECT_EQ(h6.p_rank(3), 1);
    for (const auto& [p, es] : h6.primary_decomposition())
        if (p == 3) {
            EXPECT_EQ(es, std::vector<int>({1}));
        }
}

TEST(EvenComplex, GeneratorOfTheSmallestPiece) {
    GradedComplex e2 = build_plane_even(2);
    ASSERT_EQ(e2.dim(1), 1);
    EXPECT_EQ(e2.basis(1)[0].composition, Composition({2}));
    auto h = complex_cohomology(e2, kZ);
    EXPECT_EQ(h[1], AbelianGroup::free(1));
    EXPECT_TRUE(h[0].is_trivial());
}

TEST(EvenComplex, TotalCellCount) {
    for (int m = 2; m <= 20; m += 2) {
        int total = 0;
        for (int d : build_plane_even(m).dims()) total += d;
        EXPECT_EQ(total, 1 << (m / 2 - 1));
    }
}

TEST(EvenComplex, SplittingMatchesFullComplex) {
    std::vector<Coefficients> rings{kZ, Coefficients::mod(2), Coefficients::mod(3), Coefficients::mod(5)};
    for (int n = 0; n <= 12; ++n)
        for (const auto& k : rings) {
            auto full = complex_cohomology(build_plane(n), k);
            auto split = sum_pieces(n, decompose_plane(n, k));
            EXPECT_EQ(full, split) << "n=" << n << " " << k.str();
        }
}

TEST(EvenComplex, TableOneDimensionsAtTwentyFour) {
    auto h = sum_pieces(24, decompose_plane(24, Coefficients::mod(3)));
    EXPECT_EQ(h[17].p_rank(3), 3);
    EXPECT_EQ(h[9].p_rank(3), 2);
    EXPECT_EQ(h[2].p_rank(3), 0);
}

TEST(SphereComplex, ModTwoDimensionsSplit) {
    const Coefficients f2 = Coefficients::mod(2);
    for (int n = 1; n <= 12; ++n) {
        auto b = complex_cohomology(build_sphere(n), f2);
        auto a = complex_cohomology(build_plane(n), f2);
        auto a1 = complex_cohomology(build_plane(n - 1), f2);
        for (int r = 0; r < static_cast<int>(b.size()); ++r) {
            int rhs = (r < static_cast<int>(a.size()) ? a[r].p_rank(2) : 0) +
                      (r - 2 >= 0 && r - 2 < static_cast<int>(a1.size()) ? a1[r - 2].p_rank(2) : 0);
            EXPECT_EQ(b[r].p_rank(2), rhs) << "n=" << n << " r=" << r;
        }
    }
}

// The long exact sequence of the mapping cone, with D* ranks measured on
// cocycle representatives.
TEST(SphereComplex, LongExactSequenceDimensions) {
    for (int p : {2, 3, 5}) {
        const Coefficients k = Coefficients::mod(p);
        for (int n = 1; n <= 9; ++n) {
            auto b = complex_cohomology(build_sphere(n), k);
            auto a = complex_cohomology(build_plane(n), k);
            auto a1 = complex_cohomology(build_plane(n - 1), k);
            auto dim = [p](const std::vector<AbelianGroup>& g, int r) {
                return r >= 0 && r < static_cast<int>(g.size()) ? g[r].p_rank(p) : 0;
            };
            for (int r = 0; r < static_cast<int>(b.size()); ++r) {
                const int expected = dim(a, r) + dim(a1, r - 2) - rank_dstar(n, r, p, DstarRoute::matrix) -
                                     rank_dstar(n, r - 1, p, DstarRoute::matrix);
                EXPECT_EQ(dim(b, r), expected) << "p=" << p << " n=" << n << " r=" << r;
            }
        }
    }
}

TEST(Complexes, RejectBadSizes) {
    EXPECT_THROW(build_plane(-1), std::invalid_argument);
    EXPECT_THROW(build_plane_even(3), std::invalid_argument);
    EXPECT_THROW(build_sphere(0), std::invalid_argument);
}
