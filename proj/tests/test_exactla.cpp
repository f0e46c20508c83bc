#include <gtest/gtest.h>

#include <random>

#include "confspace/complexes.hpp"
#include "confspace/exactla.hpp"

using namespace confspace;

namespace {

using Dense = std::vector<std::vector<BigInt>>;

Dense to_dense(const SparseIntMatrix& m) {
    Dense a(static_cast<std::size_t>(m.rows()), std::vector<BigInt>(static_cast<std::size_t>(m.cols()), 0));
    for (const auto& e : m.entries()) a[e.row][e.col] = e.value;
    return a;
}

// Textbook Smith form: move the smallest nonzero entry to the corner, clear
// its row and column by division with remainder, repeat until it divides
// the whole remaining block.
std::vector<BigInt> dense_snf(Dense a) {
    const std::size_t R = a.size(), C = R ? a[0].size() : 0;
    std::vector<BigInt> out;
    for (std::size_t t = 0; t < std::min(R, C); ++t) {
        while (true) {
            std::size_t pi = R, pj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (a[i][j] != 0 && (pi == R || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == R) return out;
            std::swap(a[t], a[pi]);
            for (auto& row : a) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                BigInt q = a[i][t] / a[t][t];
                if (q != 0)
                    for (std::size_t j = t; j < C; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                BigInt q = a[t][j] / a[t][t];
                if (q != 0)
                    for (std::size_t i = t; i < R; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad_i = R;
            for (std::size_t i = t + 1; i < R && bad_i == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad_i = i;
                        break;
                    }
            if (bad_i == R) break;
            for (std::size_t j = t; j < C; ++j) a[t][j] += a[bad_i][j];
        }
        out.push_back(abs(a[t][t]));
    }
    return out;
}

int dense_rank_mod_p(Dense a, long p) {
    const std::size_t R = a.size(), C = R ? a[0].size() : 0;
    for (auto& row : a)
        for (auto& v : row) v = mod_nonneg(v, BigInt(p));
    int rank = 0;
    for (std::size_t c = 0; c < C && static_cast<std::size_t>(rank) < R; ++c) {
        std::size_t s = static_cast<std::size_t>(rank);
        while (s < R && a[s][c] == 0) ++s;
        if (s == R) continue;
        std::swap(a[s], a[rank]);
        BigInt inv;
        mpz_invert(inv.get_mpz_t(), a[rank][c].get_mpz_t(), BigInt(p).get_mpz_t());
        for (std::size_t i = 0; i < R; ++i) {
            if (i == static_cast<std::size_t>(rank) || a[i][c] == 0) continue;
            BigInt f = a[i][c] * inv;
            for (std::size_t j = c; j < C; ++j) a[i][j] = mod_nonneg(a[i][j] - f * a[rank][j], BigInt(p));
        }
        ++rank;
    }
    return rank;
}

SparseIntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, double density, int bound) {
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(-bound, bound);
    std::vector<SparseIntMatrix::Entry> t;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (coin(rng) < density) t.push_back({i, j, BigInt(val(rng))});
    return SparseIntMatrix::from_triplets(rows, cols, std::move(t));
}

std::vector<BigInt> as_big(std::initializer_list<long> v) {
    std::vector<BigInt> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

void expect_snf_matches(const SparseIntMatrix& m, const std::string& label) {
    auto want = dense_snf(to_dense(m));
    auto got = smith_normal_form(m);
    ASSERT_EQ(got.divisors, want) << label;
    ASSERT_EQ(got.rank, static_cast<int>(want.size())) << label;
}

}  // namespace

TEST(Smith, Examples) {
    EXPECT_EQ(smith_normal_form(SparseIntMatrix::identity(3)).divisors, as_big({1, 1, 1}));
    EXPECT_EQ(smith_normal_form(SparseIntMatrix::from_dense({{2, 4}, {6, 8}})).divisors, as_big({2, 4}));
    auto zero = smith_normal_form(SparseIntMatrix::from_dense({{0, 0}, {0, 0}}));
    EXPECT_TRUE(zero.divisors.empty());
    EXPECT_EQ(zero.rank, 0);
    EXPECT_EQ(smith_normal_form(SparseIntMatrix(0, 5)).rank, 0);
}

TEST(Smith, RandomAgainstDenseOracle) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> dim(1, 30);
    std::uniform_real_distribution<double> dens(0.05, 0.6);
    for (int trial = 0; trial < 500; ++trial) {
        auto m = random_matrix(rng, dim(rng), dim(rng), dens(rng), 20);
        expect_snf_matches(m, "trial " + std::to_string(trial));
    }
}

TEST(Smith, RankDeficientProducts) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 80; ++trial) {
        auto a = random_matrix(rng, 14, 5, 0.6, 6);
        auto b = random_matrix(rng, 5, 12, 0.6, 6);
        expect_snf_matches(a.multiply(b), "product " + std::to_string(trial));
    }
}

TEST(Smith, EntriesBeyondSixtyFourBits) {
    BigInt big("123456789012345678901234567890");
    auto m = SparseIntMatrix::from_triplets(2, 2, {{0, 0, big * 6}, {0, 1, big * 4}, {1, 0, BigInt(9)}, {1, 1, BigInt(6)}});
    expect_snf_matches(m, "wide entries");
}

// Matrices without unit entries whose elimination grows coefficients push
// the solver onto its modular route; compare that route directly as well.
TEST(Smith, ModularRouteAgainstDenseOracle) {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(2, 14);
    for (int trial = 0; trial < 300; ++trial) {
        auto base = random_matrix(rng, dim(rng), dim(rng), 0.5, 30);
        std::vector<SparseIntMatrix::Entry> t;
        const long scale = std::vector<long>{2, 3, 4, 6, 9, 12}[trial % 6];
        for (const auto& e : base.entries()) t.push_back({e.row, e.col, e.value * scale + (e.row == e.col ? scale * scale : 0)});
        auto m = SparseIntMatrix::from_triplets(base.rows(), base.cols(), std::move(t));
        auto want = dense_snf(to_dense(m));
        auto got = detail::modular_smith(m);
        ASSERT_EQ(got.divisors, want) << "trial " << trial;
        ASSERT_EQ(got.rank, static_cast<int>(want.size()));
        expect_snf_matches(m, "full path " + std::to_string(trial));
    }
}

TEST(RankModP, Examples) {
    auto m = SparseIntMatrix::from_dense({{2, 4}, {6, 8}});
    EXPECT_EQ(rank_mod_p(m, 2), 0);
    EXPECT_EQ(rank_mod_p(m, 3), 2);
    for (int p : {2, 3, 5, 7, 101}) EXPECT_EQ(rank_mod_p(SparseIntMatrix::identity(6), p), 6);
}

TEST(RankModP, CountsDivisorsPrimeToP) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dim(1, 30);
    for (int trial = 0; trial < 500; ++trial) {
        auto m = random_matrix(rng, dim(rng), dim(rng), 0.3, 20);
        auto snf = smith_normal_form(m);
        for (int p : {2, 3, 5}) {
            int prime_to_p = 0;
            for (const auto& d : snf.divisors) prime_to_p += mod_u64(d, p) != 0;
            ASSERT_EQ(rank_mod_p(m, p), prime_to_p) << "trial " << trial << " p=" << p;
            ASSERT_EQ(rank_mod_p(m, p), dense_rank_mod_p(to_dense(m), p)) << "trial " << trial << " p=" << p;
        }
    }
}

TEST(CohomologyAt, Examples) {
    EXPECT_EQ(cohomology_at(SparseIntMatrix(4, 0), SparseIntMatrix(0, 4), Coefficients::integers()), AbelianGroup::free(4));
    GradedComplex a4 = build_plane(4);
    EXPECT_EQ(complex_cohomology_at(a4, 3, Coefficients::integers()), AbelianGroup::parse("Z/2"));
    GradedComplex b3 = build_sphere(3);
    EXPECT_EQ(complex_cohomology_at(b3, 2, Coefficients::integers()), AbelianGroup::parse("Z/4"));
}

TEST(CohomologyAt, RejectsNonComplex) {
    auto in = SparseIntMatrix::from_dense({{1}, {0}});
    auto out = SparseIntMatrix::from_dense({{1, 0}});
    EXPECT_THROW(cohomology_at(in, out, Coefficients::integers()), std::logic_error);
    EXPECT_THROW(cohomology_at(in, SparseIntMatrix::from_dense({{1, 0, 0}}), Coefficients::integers()), std::invalid_argument);
}

TEST(CohomologyAt, FieldCoefficients) {
    // Z --2--> Z: H^1 over F_2 is F_2, over F_3 it is 0.
    auto two = SparseIntMatrix::from_dense({{2}});
    EXPECT_EQ(cohomology_at(two, SparseIntMatrix(0, 1), Coefficients::mod(2)), AbelianGroup::elementary(2, 1));
    EXPECT_TRUE(cohomology_at(two, SparseIntMatrix(0, 1), Coefficients::mod(3)).is_trivial());
    EXPECT_EQ(cohomology_at(two, SparseIntMatrix(0, 1), Coefficients::integers()), AbelianGroup::parse("Z/2"));
}

TEST(Coefficients, Parse) {
    EXPECT_TRUE(Coefficients::parse("Z").integral());
    EXPECT_EQ(Coefficients::parse("Zp:3").prime, 3);
    EXPECT_EQ(Coefficients::parse("Z/5").prime, 5);
    EXPECT_EQ(Coefficients::parse("Zp:7").str(), "Zp:7");
    EXPECT_THROW(Coefficients::parse("Zp:4"), std::invalid_argument);
    EXPECT_THROW(Coefficients::parse("Q"), std::invalid_argument);
    EXPECT_THROW(Coefficients::parse("Zp:3x"), std::invalid_argument);
}

TEST(AbelianGroupType, CanonicalForm) {
    auto g = AbelianGroup::from_cyclic_orders(1, as_big({6, 4, 1, 0}));
    EXPECT_EQ(g.free_rank(), 2);
    EXPECT_EQ(g.invariant_factors(), as_big({2, 12}));
    EXPECT_EQ(g.str(), "Z^2 + Z/2 + Z/4 + Z/3");
    EXPECT_EQ(AbelianGroup::parse(g.str()), g);
    EXPECT_EQ(AbelianGroup::parse("Z_2^2 + Z_3"), AbelianGroup::from_cyclic_orders(0, as_big({2, 6})));
    EXPECT_EQ(AbelianGroup().str(), "0");
    EXPECT_EQ(AbelianGroup::parse("0"), AbelianGroup());
    EXPECT_EQ(AbelianGroup::parse("Z+Z/2").str(), "Z + Z/2");
    EXPECT_EQ(g.p_rank(2), 2);
    EXPECT_EQ(g.p_rank(3), 1);
    EXPECT_FALSE(g.squarefree_exponent());
    EXPECT_TRUE(AbelianGroup::parse("Z/6 + Z/30").squarefree_exponent());
    EXPECT_THROW(AbelianGroup::parse("Q"), std::invalid_argument);
}

TEST(EulerCharacteristic, ConservedOverRationals) {
    auto check = [](const GradedComplex& cx) {
        auto groups = complex_cohomology(cx, Coefficients::integers());
        long chi_cells = 0, chi_free = 0;
        for (int r = 0; r <= cx.max_degree(); ++r) chi_cells += (r % 2 ? -1 : 1) * cx.dim(r);
        for (int r = 0; r < static_cast<int>(groups.size()); ++r) chi_free += (r % 2 ? -1 : 1) * groups[r].free_rank();
        EXPECT_EQ(chi_cells, chi_free) << cx.label();
    };
    for (int n = 1; n <= 10; ++n) {
        check(build_plane(n));
        check(build_sphere(n));
    }
    for (int m = 2; m <= 16; m += 2) check(build_plane_even(m));
}
