#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "confspace/abelian_group.hpp"
#include "confspace/chainalg.hpp"
#include "confspace/combinat.hpp"
#include "confspace/complexes.hpp"
#include "confspace/exactla.hpp"

namespace confspace {

enum class Strategy { matrix, even_reduced, closed_form, reconstructed, automatic };

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::matrix: return "matrix";
        case Strategy::even_reduced: return "even-reduced";
        case Strategy::closed_form: return "closed-form";
        case Strategy::reconstructed: return "reconstructed";
        case Strategy::automatic: return "auto";
    }
    return {};
}

/// Accepts the kebab-case names and their camelCase spellings.
inline Strategy parse_strategy(std::string s) {
    std::string key;
    for (char c : s)
        if (c != '-' && c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "matrix") return Strategy::matrix;
    if (key == "evenreduced") return Strategy::even_reduced;
    if (key == "closedform") return Strategy::closed_form;
    if (key == "reconstructed") return Strategy::reconstructed;
    if (key == "auto" || key == "automatic") return Strategy::automatic;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

inline Space parse_space(const std::string& s) {
    if (s == "plane") return Space::plane;
    if (s == "sphere") return Space::sphere;
    throw std::invalid_argument("unknown space '" + s + "'");
}

/// A strategy that cannot answer the query (e.g. closed form over Z).
struct UnsupportedQuery : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Highest degree that can carry cohomology: n-1 for the plane (0 when
/// n = 0) and max(n, 2) for the sphere.
inline int top_degree(Space space, int n) { return space == Space::plane ? std::max(n - 1, 0) : std::max(n, 2); }

struct CohomologyTable {
    Space space = Space::plane;
    int n = 0;
    Coefficients coeff;
    Strategy strategy = Strategy::matrix;
    std::vector<AbelianGroup> groups;  // degree r at index r

    const AbelianGroup& at(int r) const {
        static const AbelianGroup trivial;
        return (r < 0 || r >= static_cast<int>(groups.size())) ? trivial : groups[r];
    }

    /// Field dimension over F_p (the free rank of the stored (Z/p)^k form).
    int dim(int r) const {
        if (coeff.integral()) throw std::logic_error("dim() needs field coefficients");
        return at(r).p_rank(coeff.prime);
    }

    bool same_groups(const CohomologyTable& o) const { return groups == o.groups; }
};

namespace detail {

inline std::vector<AbelianGroup> field_groups(int p, const std::vector<std::int64_t>& dims) {
    std::vector<AbelianGroup> g;
    for (auto d : dims) g.push_back(AbelianGroup::elementary(p, static_cast<int>(d)));
    return g;
}

inline std::vector<int> primes_up_to(int bound) {
    std::vector<int> ps;
    for (int p = 2; p <= bound; ++p)
        if (is_prime(p)) ps.push_back(p);
    return ps;
}

}  // namespace detail

/// Integral groups from the mod-p dimensions via universal coefficients,
/// assuming every torsion summand has prime order (true for the plane in
/// degrees >= 2 and for the sphere in degrees >= 4). The sphere's degrees
/// 0..3 come from the explicit low-degree answer.
inline CohomologyTable reconstruct_integral(Space space, int n) {
    if (n < 0 || (space == Space::sphere && n < 1)) throw std::invalid_argument("n out of range");
    const int top = top_degree(space, n);
    auto dim_p = [&](int p, int r) -> std::int64_t {
        return space == Space::plane ? count_bp(p, n, r) : dim_sphere_mod_p(p, n, r);
    };
    std::vector<int> free(static_cast<std::size_t>(top) + 2, 0);
    free[0] = 1;
    if (space == Space::plane && n >= 2) free[1] = 1;
    if (space == Space::sphere && n == 1) free[2] = 1;
    if (space == Space::sphere && n >= 3) free[3] = 1;

    std::vector<std::vector<BigInt>> torsion(static_cast<std::size_t>(top) + 2);
    std::vector<char> known(static_cast<std::size_t>(top) + 2, 0);
    if (space == Space::sphere) {
        // H^1 = 0, H^2 = Z/(2n-2) (Z for n = 1), H^3 = Z + Z/2 for n >= 4.
        known[0] = known[1] = known[2] = 1;
        if (n >= 2) torsion[2].push_back(BigInt(2 * n - 2));
        if (top >= 3) {
            known[3] = 1;
            if (n >= 4) torsion[3].push_back(2);
        }
    }

    for (int p : detail::primes_up_to(std::max(n, 2))) {
        std::vector<std::int64_t> t(static_cast<std::size_t>(top) + 2, 0);
        for (int r = top; r >= 0; --r) {
            if (known[r]) {
                t[r] = AbelianGroup::from_cyclic_orders(0, torsion[r]).p_rank(p);
                if (dim_p(p, r) != free[r] + t[r] + t[r + 1])
                    throw std::logic_error("universal coefficients fail for " + to_string(space) + " n=" +
                                           std::to_string(n) + " at degree " + std::to_string(r) +
                                           " mod " + std::to_string(p));
                continue;
            }
            t[r] = dim_p(p, r) - free[r] - t[r + 1];
            // Torsion primes are bounded by n/2; larger primes must not show up.
            if (t[r] < 0 || (2 * p > n && t[r] != 0))
                throw std::logic_error("no consistent torsion count for " + to_string(space) + " n=" +
                                       std::to_string(n) + " at degree " + std::to_string(r) + " mod " +
                                       std::to_string(p));
            for (std::int64_t k = 0; k < t[r]; ++k) torsion[r].push_back(p);
        }
        if (space == Space::plane && t[0] != 0) throw std::logic_error("torsion in degree 0");
    }
    CohomologyTable table{space, n, Coefficients::integers(), Strategy::reconstructed, {}};
    for (int r = 0; r <= top; ++r) table.groups.push_back(AbelianGroup::from_cyclic_orders(free[r], torsion[r]));
    return table;
}

inline CohomologyTable cohomology(Space space, int n, Coefficients k, Strategy strategy) {
    if (n < 0) throw std::invalid_argument("n must be non-negative");
    if (space == Space::sphere && n < 1) throw std::invalid_argument("the sphere complex needs n >= 1");
    if (strategy == Strategy::automatic)
        strategy = (space == Space::plane && n > 16) ? Strategy::even_reduced : Strategy::matrix;
    CohomologyTable table{space, n, k, strategy, {}};
    const int top = top_degree(space, n);
    switch (strategy) {
        case Strategy::matrix:
            table.groups = complex_cohomology(space == Space::plane ? build_plane(n) : build_sphere(n), k);
            break;
        case Strategy::even_reduced:
            if (space == Space::sphere)
                throw UnsupportedQuery("the even-reduced strategy exists only for the plane");
            table.groups = sum_pieces(n, decompose_plane(n, k));
            break;
        case Strategy::closed_form: {
            if (k.integral()) throw UnsupportedQuery("the closed-form strategy needs field coefficients");
            std::vector<std::int64_t> dims;
            for (int r = 0; r <= top; ++r)
                dims.push_back(space == Space::plane ? count_bp(k.prime, n, r) : dim_sphere_mod_p(k.prime, n, r));
            table.groups = detail::field_groups(k.prime, dims);
            break;
        }
        case Strategy::reconstructed:
            if (!k.integral()) throw UnsupportedQuery("the reconstructed strategy computes integral groups");
            table.groups = reconstruct_integral(space, n).groups;
            break;
        case Strategy::automatic: break;
    }
    table.groups.resize(static_cast<std::size_t>(top) + 1);
    return table;
}

inline CohomologyTable cohomology_plane(int n, Coefficients k, Strategy s) { return cohomology(Space::plane, n, k, s); }
inline CohomologyTable cohomology_sphere(int n, Coefficients k, Strategy s) {
    return cohomology(Space::sphere, n, k, s);
}

/// The independent route used to double-check a table: the closed form over
/// a field, reconstruction over Z. Returns a description of the first
/// disagreement, or nothing when the routes agree.
inline std::optional<std::string> cross_check(const CohomologyTable& t) {
    Strategy other = t.coeff.integral() ? Strategy::reconstructed : Strategy::closed_form;
    if (other == t.strategy) other = Strategy::matrix;
    CohomologyTable alt = cohomology(t.space, t.n, t.coeff, other);
    for (std::size_t r = 0; r < std::max(alt.groups.size(), t.groups.size()); ++r) {
        int rr = static_cast<int>(r);
        if (!(t.at(rr) == alt.at(rr)))
            return "degree " + std::to_string(r) + ": " + to_string(t.strategy) + " gives " + t.at(rr).str() +
                   " but " + to_string(other) + " gives " + alt.at(rr).str();
    }
    return std::nullopt;
}

/// Matrix of D: A_n^r -> A_{n-1}^{r-1} in the canonical bases.
inline SparseIntMatrix d_operator_matrix(int n, int r) {
    if (n < 1) throw std::invalid_argument("D needs n >= 1");
    GradedComplex src = build_plane(n), dst = build_plane(n - 1);
    const auto& from = src.basis(r);
    const auto& to = dst.basis(r - 1);
    std::map<Composition, int> index;
    for (std::size_t i = 0; i < to.size(); ++i) index.emplace(to[i].composition, static_cast<int>(i));
    std::vector<SparseIntMatrix::Entry> t;
    for (std::size_t j = 0; j < from.size(); ++j) {
        Chain image = op_d(Chain::of(from[j].composition));
        for (const auto& [comp, v] : image.terms()) t.push_back({index.at(comp), static_cast<int>(j), v});
    }
    return SparseIntMatrix::from_triplets(static_cast<int>(to.size()), static_cast<int>(from.size()), std::move(t));
}

enum class DstarRoute { formula, matrix };

/// Rank of the induced map D*: H^r(A_n; F_p) -> H^{r-1}(A_{n-1}; F_p).
inline int rank_dstar(int n, int r, int p, DstarRoute route) {
    if (!is_prime(p)) throw std::invalid_argument("rank_dstar needs a prime");
    if (r < 1 || n < 1) return 0;
    if (route == DstarRoute::formula) return static_cast<int>(count_bp_prime(p, n, r));
    GradedComplex a = build_plane(n), b = build_plane(n - 1);
    if (a.dim(r) == 0 || b.dim(r - 1) == 0) return 0;
    // Cocycle representatives, pushed through D, compared against the
    // coboundaries of the target.
    auto cocycles = kernel_basis_mod_p(a.differential(r), p);
    SparseIntMatrix d = d_operator_matrix(n, r);
    const SparseIntMatrix& boundaries = b.differential(r - 2);
    std::vector<std::vector<BigInt>> cols(cocycles.size(), std::vector<BigInt>(static_cast<std::size_t>(d.rows())));
    for (const auto& e : d.entries())
        for (std::size_t k = 0; k < cocycles.size(); ++k)
            if (cocycles[k][e.col]) cols[k][e.row] += e.value * cocycles[k][e.col];
    std::vector<SparseIntMatrix::Entry> t;
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t i = 0; i < cols[k].size(); ++i)
            if (cols[k][i] % p != 0) t.push_back({static_cast<int>(i), static_cast<int>(k), cols[k][i]});
    const int shift = static_cast<int>(cocycles.size());
    for (const auto& e : boundaries.entries()) t.push_back({e.row, e.col + shift, e.value});
    SparseIntMatrix joined = SparseIntMatrix::from_triplets(d.rows(), shift + boundaries.cols(), std::move(t));
    return rank_mod_p(joined, p) - rank_mod_p(boundaries, p);
}

struct BocksteinDegree {
    int ker = 0;
    int im = 0;
    int bh = 0;
};

struct BocksteinReport {
    int p = 0;
    int n = 0;
    std::vector<BocksteinDegree> per_degree;
    std::vector<int> rank;  // rank of beta out of degree r
};

/// The mod-p Bockstein on the monomial basis of H^*(A_n; F_p), i.e. on
/// monomials of size <= n, and its cohomology Ker / Im.
inline BocksteinReport bockstein_cohomology(int n, int p) {
    if (!is_prime(p)) throw std::invalid_argument("bockstein needs a prime");
    if (n < 0) throw std::invalid_argument("n must be non-negative");
    const int top = top_degree(Space::plane, n);
    std::vector<std::vector<Monomial>> basis;
    for (int r = 0; r <= top + 1; ++r) basis.push_back(monomials_of_degree(p, r, n));
    BocksteinReport rep{p, n, {}, {}};
    for (int r = 0; r <= top; ++r) {
        const auto& src = basis[r];
        const auto& dst = basis[r + 1];
        std::map<Monomial, int> index;
        for (std::size_t i = 0; i < dst.size(); ++i) index.emplace(dst[i], static_cast<int>(i));
        std::vector<SparseIntMatrix::Entry> t;
        for (std::size_t j = 0; j < src.size(); ++j)
            for (const auto& [m, c] : bockstein_monomial(src[j])) {
                auto it = index.find(m);
                if (it == index.end()) throw std::logic_error("Bockstein image " + m.str() + " left the basis");
                t.push_back({it->second, static_cast<int>(j), c});
            }
        rep.rank.push_back(rank_mod_p(
            SparseIntMatrix::from_triplets(static_cast<int>(dst.size()), static_cast<int>(src.size()), std::move(t)),
            p));
    }
    for (int r = 0; r <= top; ++r) {
        BocksteinDegree d;
        d.ker = static_cast<int>(basis[r].size()) - rep.rank[r];
        d.im = r > 0 ? rep.rank[r - 1] : 0;
        d.bh = d.ker - d.im;
        if (d.bh < 0) throw std::logic_error("Bockstein does not square to zero");
        rep.per_degree.push_back(d);
    }
    return rep;
}

/// Dimension of the p-torsion of H^r(C_n(C); Z) from the monomial route:
/// the rank of beta into degree r.
inline std::vector<int> torsion_table(int n, int p) {
    BocksteinReport rep = bockstein_cohomology(n, p);
    std::vector<int> t;
    for (const auto& d : rep.per_degree) t.push_back(d.im);
    return t;
}

/// Memoizing front end. Each (space, n, coefficients, strategy) query is
/// computed at most once per instance and the stored answer never changes.
class Engine {
public:
    CohomologyTable compute(Space space, int n, Coefficients k, Strategy s) {
        auto key = std::make_tuple(space, n, k.prime, s);
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        CohomologyTable t = cohomology(space, n, k, s);
        std::lock_guard lock(mutex_);
        return memo_.emplace(key, std::move(t)).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<Space, int, int, Strategy>, CohomologyTable> memo_;
};

}  // namespace confspace
