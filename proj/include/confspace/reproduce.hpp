#pragma once

// Recomputes the reference tables in data/ and reports cell-level differences.

#include <algorithm>
#include <string>
#include <vector>

#include "confspace/engine.hpp"
#include "confspace/golden.hpp"

#ifndef CONFSPACE_DATA_DIR
#define CONFSPACE_DATA_DIR "data"
#endif

namespace confspace {

inline std::string default_data_dir() { return CONFSPACE_DATA_DIR; }

struct ReproductionReport {
    std::string table;
    int cells = 0;  // number of compared entries
    std::vector<std::string> diffs;

    bool identical() const { return diffs.empty(); }
};

namespace detail {

inline std::string cell_diff(const std::string& where, const std::string& expected, const std::string& got) {
    return where + ": expected " + expected + ", got " + got;
}

inline void compare_group_rows(ReproductionReport& rep, int n, const std::vector<AbelianGroup>& expected,
                               const std::vector<AbelianGroup>& got) {
    const std::size_t len = std::max(expected.size(), got.size());
    static const AbelianGroup zero;
    for (std::size_t i = 0; i < len; ++i) {
        const AbelianGroup& e = i < expected.size() ? expected[i] : zero;
        const AbelianGroup& g = i < got.size() ? got[i] : zero;
        ++rep.cells;
        if (!(e == g))
            rep.diffs.push_back(cell_diff("n=" + std::to_string(n) + " i=" + std::to_string(i), e.str(), g.str()));
    }
}

inline ReproductionReport reproduce_group_table(const std::string& name, Space space, const std::string& path,
                                                int max_n) {
    ReproductionReport rep{name, 0, {}};
    const GroupTable table = read_group_table(path);
    for (const auto& [n, row] : table) {
        if (n > max_n) continue;
        CohomologyTable t = cohomology(space, n, Coefficients::integers(), Strategy::automatic);
        compare_group_rows(rep, n, row, t.groups);
    }
    return rep;
}

// Rank mod p of a set of monomial sums, written in a fixed monomial index.
inline int rank_of_sums(int p, const std::vector<MonomialSum>& rows) {
    std::map<Monomial, int> index;
    for (const auto& s : rows)
        for (const auto& kv : s) index.emplace(kv.first, 0);
    int next = 0;
    for (auto& kv : index) kv.second = next++;
    std::vector<SparseIntMatrix::Entry> t;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [m, c] : rows[i]) t.push_back({static_cast<int>(i), index.at(m), c});
    return rank_mod_p(SparseIntMatrix::from_triplets(static_cast<int>(rows.size()), next, std::move(t)), p);
}

}  // namespace detail

/// Integral cohomology of C_n(C), rows n = 1..max_n (the table stops at 17).
inline ReproductionReport reproduce_table3(int max_n = 14, const std::string& dir = default_data_dir()) {
    return detail::reproduce_group_table("table3", Space::plane, dir + "/table3.txt", max_n);
}

/// Integral cohomology of C_n(S^2), rows n = 1..max_n (the table stops at 16).
inline ReproductionReport reproduce_table4(int max_n = 12, const std::string& dir = default_data_dir()) {
    return detail::reproduce_group_table("table4", Space::sphere, dir + "/table4.txt", max_n);
}

/// Monomial basis of H^*(C_n(C); F_p): per-degree counts against the
/// complex, independence of the listed monomials, the cocycle property of
/// their chains, and the chains written out in full.
inline ReproductionReport reproduce_table1(const std::string& dir = default_data_dir()) {
    ReproductionReport rep{"table1", 0, {}};
    const BasisTable t = read_basis_table(dir + "/table1.txt");
    const Coefficients k = Coefficients::mod(t.p);
    CohomologyTable h = cohomology(Space::plane, t.n, k, Strategy::even_reduced);
    const GradedComplex cx = build_plane(t.n);
    for (int r = 0; r <= top_degree(Space::plane, t.n); ++r) {
        const std::string where = "r=" + std::to_string(r);
        ++rep.cells;
        if (t.count(r) != h.dim(r))
            rep.diffs.push_back(detail::cell_diff(where + " dim", std::to_string(t.count(r)), std::to_string(h.dim(r))));
        auto it = t.generators.find(r);
        if (it == t.generators.end()) continue;
        for (const auto& g : it->second) {
            ++rep.cells;
            if (g.size() != 1 || g.begin()->second != 1) {
                rep.diffs.push_back(where + ": generator is not a single monomial");
                continue;
            }
            const Monomial& m = g.begin()->first;
            if (m.degree() != r || m.size() > t.n) {
                rep.diffs.push_back(where + ": " + m.str() + " has the wrong degree or size");
                continue;
            }
            Chain c = monomial_chain(m, t.n);
            if (!delta(c).is_zero_mod(t.p)) rep.diffs.push_back(where + ": chain of " + m.str() + " is not a cocycle");
        }
        if (detail::rank_of_sums(t.p, it->second) != t.count(r))
            rep.diffs.push_back(where + ": listed generators are dependent");
    }
    for (const auto& [m, written] : t.chains) {
        ++rep.cells;
        Chain ours = perm_cycle(monomial_blocks(m, Y0Placement::canonical), t.p);
        if (!(ours == written))
            rep.diffs.push_back(detail::cell_diff("chain " + m.str(), written.str(), ours.str()));
    }
    return rep;
}

/// p-torsion of H^*(C_n(C); Z): per-degree counts against both the integral
/// groups and the Bockstein image, and each listed generator lying in that
/// image with the listed set independent.
inline ReproductionReport reproduce_table2(const std::string& dir = default_data_dir()) {
    ReproductionReport rep{"table2", 0, {}};
    const BasisTable t = read_basis_table(dir + "/table2.txt");
    CohomologyTable h = cohomology(Space::plane, t.n, Coefficients::integers(), Strategy::even_reduced);
    const std::vector<int> im = torsion_table(t.n, t.p);
    const int top = top_degree(Space::plane, t.n);
    for (int r = 0; r <= top; ++r) {
        const std::string where = "r=" + std::to_string(r);
        const int listed = t.count(r);
        ++rep.cells;
        if (listed != h.at(r).p_rank(t.p))
            rep.diffs.push_back(detail::cell_diff(where + " p-rank", std::to_string(listed),
                                                  std::to_string(h.at(r).p_rank(t.p))));
        ++rep.cells;
        if (listed != im[r])
            rep.diffs.push_back(detail::cell_diff(where + " Bockstein image", std::to_string(listed), std::to_string(im[r])));
        if (listed == 0) continue;
        std::vector<MonomialSum> image;
        for (const auto& m : monomials_of_degree(t.p, r - 1, t.n)) image.push_back(bockstein_monomial(m));
        const auto& gens = t.generators.at(r);
        const int base = detail::rank_of_sums(t.p, image);
        std::vector<MonomialSum> joined = image;
        joined.insert(joined.end(), gens.begin(), gens.end());
        ++rep.cells;
        if (detail::rank_of_sums(t.p, joined) != base)
            rep.diffs.push_back(where + ": a listed generator is not in the Bockstein image");
        ++rep.cells;
        if (detail::rank_of_sums(t.p, gens) != listed) rep.diffs.push_back(where + ": listed generators are dependent");
    }
    return rep;
}

inline std::vector<std::string> table_names() { return {"table1", "table2", "table3", "table4"}; }

/// max_n applies to the group tables; a non-positive value keeps the default.
inline ReproductionReport reproduce_table(const std::string& name, int max_n = 0,
                                          const std::string& dir = default_data_dir()) {
    if (name == "table1") return reproduce_table1(dir);
    if (name == "table2") return reproduce_table2(dir);
    if (name == "table3") return reproduce_table3(max_n > 0 ? max_n : 14, dir);
    if (name == "table4") return reproduce_table4(max_n > 0 ? max_n : 12, dir);
    throw std::invalid_argument("unknown table '" + name + "' (expected table1..table4)");
}

}  // namespace confspace
