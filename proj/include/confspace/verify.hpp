#pragma once

// Exhaustive checks of the chain-level identities and of the agreement
// between independent computations, packaged as named suites.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "confspace/chainalg.hpp"
#include "confspace/combinat.hpp"
#include "confspace/complexes.hpp"
#include "confspace/engine.hpp"

namespace confspace {

struct SuiteBounds {
    int max_size = 10;        // compositions / chain-level identities
    int max_n = 12;           // complexes
    int max_plane_n = 14;     // plane complexes in the torsion-shape checks
    int max_r = 8;            // degrees in the counting-function checks
    int max_period_n = 40;    // periodicity range
    std::vector<int> primes{2, 3, 5};
};

struct SuiteReport {
    std::string name;
    bool passed = true;
    long cases = 0;
    std::string counterexample;  // first failure, empty on success
};

namespace detail {

class Tally {
public:
    explicit Tally(std::string name) { report_.name = std::move(name); }

    /// Records one case; the message is only built for the first failure.
    template <class Describe>
    void check(bool ok, Describe&& describe) {
        ++report_.cases;
        if (!ok && report_.passed) {
            report_.passed = false;
            report_.counterexample = describe();
        }
    }

    SuiteReport done() { return report_; }

private:
    SuiteReport report_;
};

inline std::vector<Composition> all_compositions(int size) {
    std::vector<Composition> out;
    for (int q = (size == 0 ? 0 : 1); q <= size; ++q)
        for (auto& c : compositions(size, q)) out.push_back(std::move(c));
    return out;
}

inline std::string key(std::string s) {
    std::string k;
    for (char c : s)
        if (c != '-' && c != '_') k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return k;
}

inline SuiteReport suite_d_squared(const SuiteBounds& b) {
    Tally t("dSquared");
    for (int n = 0; n <= b.max_n; ++n)
        for (const auto& c : all_compositions(n)) {
            Chain x = Chain::of(c);
            t.check(delta(delta(x)).is_zero(), [&] { return "delta^2 " + c.str() + " != 0"; });
        }
    // Matrix form, including the mapping cone differential of the sphere.
    auto composite = [&](const GradedComplex& cx) {
        for (int r = 0; r < cx.max_degree(); ++r) {
            bool ok = true;
            try {
                ok = cx.differential(r + 1).multiply(cx.differential(r)).is_zero();
            } catch (const std::logic_error&) {
                ok = false;
            }
            t.check(ok, [&] { return cx.label() + ": d_" + std::to_string(r + 1) + " d_" + std::to_string(r) + " != 0"; });
        }
    };
    for (int n = 0; n <= b.max_n; ++n) composite(build_plane(n));
    for (int m = 0; m <= b.max_n; m += 2) composite(build_plane_even(m));
    for (int n = 1; n <= b.max_n; ++n) composite(build_sphere(n));
    return t.done();
}

inline SuiteReport suite_delta_commutes_d(const SuiteBounds& b) {
    Tally t("deltaCommutesD");
    for (int n = 1; n <= b.max_size; ++n)
        for (const auto& c : all_compositions(n)) {
            Chain x = Chain::of(c);
            t.check(op_d(delta(x)) == delta(op_d(x)), [&] { return "D delta != delta D on " + c.str(); });
        }
    return t.done();
}

inline SuiteReport suite_lemma_e1(const SuiteBounds& b) {
    Tally t("lemmaE1");
    for (int n = 1; n <= b.max_size; ++n)
        for (const auto& c : all_compositions(n)) {
            Chain e = homotopy_defect(Chain::of(c));
            Chain f = defect_insertion_sum(c);
            t.check(e == f, [&] { return "E" + c.str() + " = " + e.str() + ", expected " + f.str(); });
        }
    return t.done();
}

inline SuiteReport suite_ins_chain_map(const SuiteBounds& b) {
    Tally t("insChainMap");
    for (int n = 0; n <= b.max_n; ++n)
        for (int s = 0; s <= n; ++s)
            for (const auto& c : all_compositions(s)) {
                int k = n - s;
                Chain x = Chain::of(c);
                t.check(delta(ins_t(k, x)) == ins_t(k, delta(x)),
                        [&] { return "delta Ins_" + std::to_string(k) + " != Ins_" + std::to_string(k) + " delta on " + c.str(); });
            }
    return t.done();
}

/// E(Ins_t [c, 2]) = 2(t+1)(-1)^{t+1} Ins_{t+1}[c] on even compositions: the
/// defect of the null-homotopy on the odd-entry pieces.
inline SuiteReport suite_ins_homotopy(const SuiteBounds& b) {
    Tally t("insHomotopy");
    for (int m = 2; m <= b.max_n; m += 2)
        for (int q = 1; q <= m / 2; ++q)
            for (const auto& c : even_compositions(m, q)) {
                if (c.parts().back() != 2) continue;
                Composition prefix(std::vector<int>(c.parts().begin(), c.parts().end() - 1));
                for (int k = 0; m + k <= b.max_n; ++k) {
                    Chain lhs = homotopy_defect(ins_t(k, Chain::of(c)));
                    Chain rhs = BigInt(2 * (k + 1) * minus_one_pow(k + 1)) * ins_t(k + 1, Chain::of(prefix));
                    t.check(lhs == rhs, [&] { return "E Ins_" + std::to_string(k) + c.str() + " = " + lhs.str(); });
                }
            }
    return t.done();
}

/// For a monomial m containing y_0, realized with y_0 as the final block:
/// E(m) = 2(-1)^{n-|m|+1}(n-|m|+1) (m / y_0) in A_{n-1}.
inline SuiteReport suite_cor_e2(const SuiteBounds& b) {
    Tally t("corE2");
    for (int p : b.primes)
        for (int n = 0; n <= b.max_n; ++n)
            for (int r = 0; r <= n; ++r)
                for (const auto& m : monomials_of_degree(p, r, n, Y0Filter::require)) {
                    const long k = n - m.size() + 1;
                    Chain lhs = homotopy_defect(monomial_chain(m, n, Y0Placement::last));
                    Chain rhs = BigInt(2 * minus_one_pow(k) * k) * monomial_chain(m.without_y0(), n - 1);
                    t.check(lhs == rhs, [&] {
                        return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " m=" + m.str();
                    });
                }
    return t.done();
}

/// p = 2, monomial m with x_1 and without y_0:
/// E(m) = 2(-1)^{n-|m|+1}(n-|m|+1) (m y_0 / x_1) in A_{n-1}, y_0 last.
inline SuiteReport suite_cor_e3(const SuiteBounds& b) {
    Tally t("corE3");
    if (std::find(b.primes.begin(), b.primes.end(), 2) == b.primes.end()) return t.done();
    for (int n = 0; n <= b.max_n; ++n)
        for (int r = 0; r <= n; ++r)
            for (const auto& m : monomials_of_degree(2, r, n, Y0Filter::exclude)) {
                if (m.x_exponent(1) == 0) continue;
                auto x = m.x_exponents();
                x[1] -= 1;
                std::vector<int> y = m.y_indices();
                y.insert(y.begin(), 0);
                Monomial target(2, x, y);
                const long k = n - m.size() + 1;
                Chain lhs = homotopy_defect(monomial_chain(m, n));
                Chain rhs = BigInt(2 * minus_one_pow(k) * k) * monomial_chain(target, n - 1, Y0Placement::last);
                t.check(lhs == rhs, [&] { return "n=" + std::to_string(n) + " m=" + m.str(); });
            }
    return t.done();
}

/// Mapping-cone sequence over F_p:
/// dim H^r(B_n) = dim H^r(A_n) + dim H^{r-2}(A_{n-1}) - rk D*_r - rk D*_{r-1},
/// with both D* ranks from cocycle representatives, plus formula = matrix.
inline SuiteReport suite_les_ranks(const SuiteBounds& b) {
    Tally t("lesRanks");
    for (int p : b.primes) {
        Coefficients k = Coefficients::mod(p);
        for (int n = 1; n <= b.max_n; ++n) {
            auto sphere = cohomology_sphere(n, k, Strategy::matrix);
            auto plane = cohomology_plane(n, k, Strategy::matrix);
            auto lower = cohomology_plane(n - 1, k, Strategy::matrix);
            std::vector<int> rk;
            for (int r = 0; r <= n + 1; ++r) {
                int m = rank_dstar(n, r, p, DstarRoute::matrix);
                int f = rank_dstar(n, r, p, DstarRoute::formula);
                t.check(m == f, [&] {
                    return "rank D* p=" + std::to_string(p) + " n=" + std::to_string(n) + " r=" + std::to_string(r) +
                           ": matrix " + std::to_string(m) + ", formula " + std::to_string(f);
                });
                if (p == 2) t.check(m == 0, [&] { return "D* nonzero mod 2 at n=" + std::to_string(n); });
                rk.push_back(m);
            }
            for (int r = 0; r <= top_degree(Space::sphere, n); ++r) {
                int expect = plane.dim(r) + lower.dim(r - 2) - rk[r] - (r ? rk[r - 1] : 0);
                t.check(sphere.dim(r) == expect, [&] {
                    return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " r=" + std::to_string(r) +
                           ": dim H(B)=" + std::to_string(sphere.dim(r)) + ", sequence gives " + std::to_string(expect);
                });
            }
        }
    }
    return t.done();
}

inline SuiteReport suite_periodicity(const SuiteBounds& b) {
    Tally t("periodicity");
    for (int p : b.primes)
        for (int r = 0; r <= b.max_r; ++r)
            for (int n = 2 * r; n <= b.max_period_n; ++n) {
                auto lhs = dim_sphere_mod_p(p, n + p, r), rhs = dim_sphere_mod_p(p, n, r);
                t.check(lhs == rhs, [&] {
                    return "p=" + std::to_string(p) + " r=" + std::to_string(r) + " n=" + std::to_string(n) + ": " +
                           std::to_string(rhs) + " -> " + std::to_string(lhs);
                });
                auto bl = count_bp_prime(p, n + p, r), br = count_bp_prime(p, n, r);
                t.check(bl == br, [&] { return "B' not periodic at p=" + std::to_string(p) + " n=" + std::to_string(n); });
            }
    return t.done();
}

/// Integral stability H^i(C_n) = H^i(C_{n+1}) for n >= 2i-2 (and n >= 2 in
/// degree 1, where H^1 only becomes Z at two points), the recurrence
/// H^i(C_{2k+1}) = H^i(C_{2k}), and mod-p stability of B_p(n, r) for n >= 2r.
inline SuiteReport suite_stability(const SuiteBounds& b) {
    Tally t("stability");
    std::vector<CohomologyTable> z;
    for (int n = 0; n <= b.max_plane_n + 1; ++n)
        z.push_back(cohomology_plane(n, Coefficients::integers(), Strategy::even_reduced));
    for (int i = 0; i <= std::min(b.max_r, 5); ++i)
        for (int n = std::max({0, 2 * i - 2, i == 1 ? 2 : 0}); n <= b.max_plane_n; ++n)
            t.check(z[n].at(i) == z[n + 1].at(i), [&] {
                return "H^" + std::to_string(i) + " changes from n=" + std::to_string(n) + " (" + z[n].at(i).str() +
                       ") to n+1 (" + z[n + 1].at(i).str() + ")";
            });
    for (int k = 0; 2 * k + 1 <= b.max_plane_n + 1; ++k)
        for (int i = 0; i <= top_degree(Space::plane, 2 * k + 1); ++i)
            t.check(z[2 * k].at(i) == z[2 * k + 1].at(i), [&] {
                return "H^" + std::to_string(i) + "(C_" + std::to_string(2 * k + 1) + ") != H^" + std::to_string(i) +
                       "(C_" + std::to_string(2 * k) + ")";
            });
    for (int p : b.primes)
        for (int r = 0; r <= b.max_r; ++r)
            for (int n = 2 * r; n <= b.max_period_n; ++n)
                t.check(count_bp(p, n, r) == count_bp(p, n + 1, r), [&] {
                    return "B_" + std::to_string(p) + "(n," + std::to_string(r) + ") changes at n=" + std::to_string(n);
                });
    return t.done();
}

inline bool squarefree_from(const CohomologyTable& t, int from) {
    for (int r = from; r < static_cast<int>(t.groups.size()); ++r)
        if (!t.groups[r].squarefree_exponent()) return false;
    return true;
}

/// No element of order p^2: sphere degrees >= 4, plane degrees >= 2.
inline SuiteReport suite_split_no_p_squared(const SuiteBounds& b) {
    Tally t("splitNoPSquared");
    for (int n = 1; n <= b.max_n; ++n) {
        auto s = cohomology_sphere(n, Coefficients::integers(), Strategy::matrix);
        t.check(squarefree_from(s, 4), [&] { return "sphere n=" + std::to_string(n) + " has p^2-torsion"; });
    }
    for (int n = 0; n <= b.max_plane_n; ++n) {
        auto s = cohomology_plane(n, Coefficients::integers(), Strategy::matrix);
        t.check(squarefree_from(s, 2), [&] { return "plane n=" + std::to_string(n) + " has p^2-torsion"; });
    }
    return t.done();
}

/// Realized monomial chains are cocycles mod p and their classes span
/// H^r(A_n; F_p), whose dimension is B_p(n, r).
inline SuiteReport suite_cocycles(const SuiteBounds& b) {
    Tally t("cocycles");
    for (int p : b.primes)
        for (int n = 0; n <= b.max_n; ++n) {
            GradedComplex cx = build_plane(n);
            for (int r = 0; r <= cx.max_degree(); ++r) {
                const auto& basis = cx.basis(r);
                std::map<Composition, int> index;
                for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i].composition, static_cast<int>(i));
                std::vector<SparseIntMatrix::Entry> cols;
                int count = 0;
                for (const auto& m : monomials_of_degree(p, r, n)) {
                    Chain c = monomial_chain(m, n);
                    t.check(delta(c).is_zero_mod(p), [&] {
                        return "p=" + std::to_string(p) + " n=" + std::to_string(n) + ": delta(" + m.str() + ") != 0";
                    });
                    for (const auto& [comp, v] : c.terms()) cols.push_back({index.at(comp), count, v});
                    ++count;
                }
                const SparseIntMatrix& boundaries = cx.differential(r - 1);
                for (const auto& e : boundaries.entries()) cols.push_back({e.row, e.col + count, e.value});
                SparseIntMatrix joined =
                    SparseIntMatrix::from_triplets(cx.dim(r), count + boundaries.cols(), std::move(cols));
                int span = rank_mod_p(joined, p) - rank_mod_p(boundaries, p);
                auto expect = count_bp(p, n, r);
                t.check(span == expect && count == expect, [&] {
                    return "p=" + std::to_string(p) + " n=" + std::to_string(n) + " r=" + std::to_string(r) + ": " +
                           std::to_string(count) + " monomials span " + std::to_string(span) + ", B_p = " +
                           std::to_string(expect);
                });
            }
        }
    return t.done();
}

using SuiteFn = SuiteReport (*)(const SuiteBounds&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> reg{
        {"dSquared", suite_d_squared},
        {"deltaCommutesD", suite_delta_commutes_d},
        {"lemmaE1", suite_lemma_e1},
        {"insChainMap", suite_ins_chain_map},
        {"insHomotopy", suite_ins_homotopy},
        {"corE2", suite_cor_e2},
        {"corE3", suite_cor_e3},
        {"lesRanks", suite_les_ranks},
        {"periodicity", suite_periodicity},
        {"stability", suite_stability},
        {"splitNoPSquared", suite_split_no_p_squared},
        {"cocycles", suite_cocycles},
    };
    return reg;
}

}  // namespace detail

inline std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : detail::suite_registry()) names.push_back(name);
    return names;
}

/// Maps "delta-squared", "d_squared", "dSquared", ... to the canonical name.
inline std::string canonical_suite_name(const std::string& name) {
    static const std::map<std::string, std::string> aliases{
        {"deltasquared", "dSquared"}, {"deltadelta", "dSquared"},     {"dcommutes", "deltaCommutesD"},
        {"e1", "lemmaE1"},            {"e2", "corE2"},                {"e3", "corE3"},
        {"les", "lesRanks"},          {"nopsquared", "splitNoPSquared"}};
    std::string k = detail::key(name);
    for (const auto& [canon, fn] : detail::suite_registry())
        if (detail::key(canon) == k) return canon;
    if (auto it = aliases.find(k); it != aliases.end()) return it->second;
    throw std::invalid_argument("unknown suite '" + name + "'");
}

inline SuiteReport run_suite(const std::string& name, const SuiteBounds& bounds = {}) {
    std::string canon = canonical_suite_name(name);
    for (const auto& [n, fn] : detail::suite_registry())
        if (n == canon) return fn(bounds);
    throw std::logic_error("suite registry out of sync");
}

}  // namespace confspace
