#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "confspace/reproduce.hpp"

using namespace confspace;

TEST(GroupTableParser, ReadsRowsAndComments) {
    std::istringstream in("# comment\n1: Z\n\n4: Z | Z | 0 | Z_2\n6: Z | Z | 0 | Z_2 | Z_2 | Z_3\n");
    GroupTable t = parse_group_table(in);
    ASSERT_EQ(t.size(), 3u);
    ASSERT_EQ(t.at(4).size(), 4u);
    EXPECT_EQ(t.at(4)[3], AbelianGroup::parse("Z/2"));
    EXPECT_TRUE(t.at(4)[2].is_trivial());
    EXPECT_EQ(t.at(6)[5], AbelianGroup::parse("Z/3"));
}

TEST(GroupTableParser, RejectsMalformedInput) {
    std::istringstream dup("1: Z\n1: Z\n");
    EXPECT_THROW(parse_group_table(dup), std::runtime_error);
    std::istringstream nocolon("1 Z\n");
    EXPECT_THROW(parse_group_table(nocolon), std::runtime_error);
    EXPECT_THROW(read_group_table("/nonexistent/table.txt"), std::runtime_error);
}

TEST(MonomialParser, Forms) {
    EXPECT_EQ(parse_monomial(3, "x_1^3 y_1"), Monomial(3, {{1, 3}}, {1}));
    EXPECT_EQ(parse_monomial(3, "1"), Monomial(3));
    EXPECT_EQ(parse_monomial(3, "y_2 y_0"), Monomial(3, {}, {0, 2}));
    EXPECT_THROW(parse_monomial(3, "z_1"), std::invalid_argument);
    EXPECT_THROW(parse_monomial(3, "y_1^2"), std::invalid_argument);
    auto sum = parse_monomial_sum(3, "28 x_1 y_2 + x_2 y_1");
    ASSERT_EQ(sum.size(), 2u);
    EXPECT_EQ(sum.at(Monomial(3, {{1, 1}}, {2})), 28);
    EXPECT_EQ(sum.at(Monomial(3, {{2, 1}}, {1})), 1);
    EXPECT_EQ(parse_monomial_sum(3, "- y_0 y_1").at(Monomial(3, {}, {0, 1})), -1);
}

TEST(ChainParser, Forms) {
    Chain c = parse_chain("[2,6] - [6,2]");
    EXPECT_EQ(c.coefficient(Composition{2, 6}), 1);
    EXPECT_EQ(c.coefficient(Composition{6, 2}), -1);
    EXPECT_EQ(parse_chain("3 [6]"), Chain::of({6}, 3));
    EXPECT_EQ(parse_chain("[]"), Chain::of(Composition{}));
    EXPECT_THROW(parse_chain(""), std::invalid_argument);
    EXPECT_THROW(parse_chain("[2,6"), std::invalid_argument);
    EXPECT_THROW(parse_chain("[2] + [1,2]"), std::invalid_argument);
}

TEST(BasisTableParser, ShippedTables) {
    BasisTable t1 = read_basis_table(default_data_dir() + "/table1.txt");
    EXPECT_EQ(t1.n, 24);
    EXPECT_EQ(t1.p, 3);
    EXPECT_EQ(t1.count(17), 3);
    EXPECT_EQ(t1.count(9), 2);
    EXPECT_EQ(t1.count(2), 0);
    EXPECT_FALSE(t1.chains.empty());
    BasisTable t2 = read_basis_table(default_data_dir() + "/table2.txt");
    EXPECT_EQ(t2.count(21), 1);
    EXPECT_EQ(t2.generators.at(21)[0].size(), 2u);
    std::istringstream bad("5: y_1\n");
    EXPECT_THROW(parse_basis_table(bad), std::runtime_error);
}

TEST(Reproduce, TableOne) {
    auto rep = reproduce_table1();
    EXPECT_TRUE(rep.identical()) << (rep.diffs.empty() ? "" : rep.diffs.front());
    EXPECT_GT(rep.cells, 23);
}

TEST(Reproduce, TableTwo) {
    auto rep = reproduce_table2();
    EXPECT_TRUE(rep.identical()) << (rep.diffs.empty() ? "" : rep.diffs.front());
}

TEST(Reproduce, TableThree) {
    auto rep = reproduce_table3(14);
    EXPECT_TRUE(rep.identical()) << (rep.diffs.empty() ? "" : rep.diffs.front());
    EXPECT_GT(rep.cells, 100);
}

TEST(Reproduce, TableFour) {
    auto rep = reproduce_table4(12);
    EXPECT_TRUE(rep.identical()) << (rep.diffs.empty() ? "" : rep.diffs.front());
}

TEST(Reproduce, ReportsCellDifferences) {
    const auto dir = std::filesystem::temp_directory_path() / "confspace_golden_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "table3.txt");
        out << "4: Z | Z | 0 | Z_4\n5: Z | Z | 0 | Z_2\n";
    }
    auto rep = reproduce_table3(14, dir.string());
    ASSERT_EQ(rep.diffs.size(), 1u);
    EXPECT_EQ(rep.diffs[0], "n=4 i=3: expected Z/4, got Z/2");
    std::filesystem::remove_all(dir);
}

TEST(Reproduce, DispatchByName) {
    EXPECT_EQ(table_names().size(), 4u);
    EXPECT_EQ(reproduce_table("table3", 6).table, "table3");
    EXPECT_THROW(reproduce_table("table9"), std::invalid_argument);
}
