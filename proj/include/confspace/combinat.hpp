#pragma once

// Compositions, Vainshtein monomials and the closed-form counting functions
// for the mod-p cohomology of configuration spaces of the plane and sphere.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confspace/bigint.hpp"

namespace confspace {

/// An ordered tuple of positive integers [n_1, ..., n_s]; labels one cell of
/// the plane complex. The empty composition is the single cell of size 0.
class Composition {
public:
    Composition() = default;

    explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (int x : parts_) {
            if (x < 1) throw std::invalid_argument("composition parts must be positive");
            size_ += x;
        }
    }

    Composition(std::initializer_list<int> parts) : Composition(std::vector<int>(parts)) {}

    const std::vector<int>& parts() const { return parts_; }
    int operator[](std::size_t i) const { return parts_[i]; }

    /// Sum of the parts.
    int size() const { return size_; }
    int length() const { return static_cast<int>(parts_.size()); }
    /// Cohomological degree of the cell in the plane complex.
    int degree() const { return size_ - length(); }
    bool empty() const { return parts_.empty(); }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s + "]";
    }

    // Lexicographic on parts; size_ is derived so it never decides.
    std::strong_ordering operator<=>(const Composition& o) const { return parts_ <=> o.parts_; }
    bool operator==(const Composition& o) const { return parts_ == o.parts_; }

private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Comb(n, q) in lexicographic order of parts.
inline std::vector<Composition> compositions(int n, int q) {
    std::vector<Composition> out;
    if (n < 0 || q < 0) return out;
    if (q == 0) {
        if (n == 0) out.emplace_back();
        return out;
    }
    if (q > n) return out;
    std::vector<int> parts(q);
    std::function<void(int, int)> rec = [&](int pos, int remaining) {
        if (pos == q - 1) {
            parts[pos] = remaining;
            out.emplace_back(parts);
            return;
        }
        int slots = q - pos - 1;
        for (int x = 1; x <= remaining - slots; ++x) {
            parts[pos] = x;
            rec(pos + 1, remaining - x);
        }
    };
    rec(0, n);
    return out;
}

/// Compositions of m into q even parts, lex order.
inline std::vector<Composition> even_compositions(int m, int q) {
    std::vector<Composition> out;
    if (m % 2 != 0) return out;
    for (const auto& c : compositions(m / 2, q)) {
        std::vector<int> parts = c.parts();
        for (int& x : parts) x *= 2;
        out.emplace_back(std::move(parts));
    }
    return out;
}

/// A basis monomial x_1^{a_1} ... x_k^{a_k} y_{j_1} ... y_{j_l} of the mod-p
/// cohomology of C_n(C). x_i (i >= 1) has degree 2p^i - 2, y_j (j >= 0) has
/// degree 2p^j - 1; both have size 2p^i.
class Monomial {
public:
    Monomial(int p, std::map<int, int> x_exponents = {}, std::vector<int> y_indices = {})
        : p_(p), x_(std::move(x_exponents)), y_(std::move(y_indices)) {
        if (!is_prime(p_)) throw std::invalid_argument("monomial prime must be prime");
        for (auto it = x_.begin(); it != x_.end();) {
            if (it->first < 1) throw std::invalid_argument("x index must be >= 1");
            if (it->second < 0) throw std::invalid_argument("x exponent must be >= 0");
            it = it->second == 0 ? x_.erase(it) : std::next(it);
        }
        for (std::size_t i = 0; i < y_.size(); ++i) {
            if (y_[i] < 0) throw std::invalid_argument("y index must be >= 0");
            if (i && y_[i] <= y_[i - 1])
                throw std::invalid_argument("y indices must be strictly increasing");
        }
    }

    int prime() const { return p_; }
    const std::map<int, int>& x_exponents() const { return x_; }
    const std::vector<int>& y_indices() const { return y_; }

    int x_exponent(int i) const {
        auto it = x_.find(i);
        return it == x_.end() ? 0 : it->second;
    }
    bool has_y(int j) const { return std::binary_search(y_.begin(), y_.end(), j); }

    std::int64_t degree() const {
        std::int64_t d = 0;
        for (auto [i, a] : x_) d += a * (2 * ipow(p_, i) - 2);
        for (int j : y_) d += 2 * ipow(p_, j) - 1;
        return d;
    }

    std::int64_t size() const {
        std::int64_t s = 0;
        for (auto [i, a] : x_) s += a * 2 * ipow(p_, i);
        for (int j : y_) s += 2 * ipow(p_, j);
        return s;
    }

    /// The same monomial with y_0 removed (or itself if y_0 is absent).
    Monomial without_y0() const {
        std::vector<int> y;
        for (int j : y_)
            if (j != 0) y.push_back(j);
        return Monomial(p_, x_, std::move(y));
    }

    /// Text form "x_1^2 y_0", "1" for the unit monomial.
    std::string str() const {
        std::string s;
        auto sep = [&] {
            if (!s.empty()) s += ' ';
        };
        for (auto [i, a] : x_) {
            sep();
            s += "x_" + std::to_string(i);
            if (a > 1) s += "^" + std::to_string(a);
        }
        for (int j : y_) {
            sep();
            s += "y_" + std::to_string(j);
        }
        return s.empty() ? "1" : s;
    }

    auto operator<=>(const Monomial&) const = default;

private:
    int p_;
    std::map<int, int> x_;
    std::vector<int> y_;
};

namespace detail {

// Depth-first enumeration over tuple pairs 1 <= a_1 <= ... <= a_g and
// b_min <= b_1 < ... < b_h; calls visit(sum_of_sizes, degree) for each pair.
// Both size and degree grow along every branch, which bounds the search.
template <class Visit>
void enumerate_tuples(int p, std::int64_t size_bound, std::int64_t degree_bound, int b_min,
                      Visit&& visit) {
    std::vector<std::int64_t> pw;  // pw[i] = 2 p^i while <= size_bound
    for (int i = 0;; ++i) {
        std::int64_t v = 2 * ipow(p, i);
        if (v > size_bound) break;
        pw.push_back(v);
    }
    std::function<void(int, std::int64_t, std::int64_t)> rec_b = [&](int b, std::int64_t s,
                                                                     std::int64_t d) {
        visit(s, d);
        for (int j = b; j < static_cast<int>(pw.size()); ++j) {
            if (s + pw[j] > size_bound) break;
            if (d + pw[j] - 1 > degree_bound) break;
            rec_b(j + 1, s + pw[j], d + pw[j] - 1);
        }
    };
    std::function<void(int, std::int64_t, std::int64_t)> rec_a = [&](int a, std::int64_t s,
                                                                     std::int64_t d) {
        rec_b(b_min, s, d);
        for (int i = a; i < static_cast<int>(pw.size()); ++i) {
            if (s + pw[i] > size_bound) break;
            if (d + pw[i] - 2 > degree_bound) break;
            rec_a(i, s + pw[i], d + pw[i] - 2);
        }
    };
    rec_a(1, 0, 0);
}

}  // namespace detail

/// B_p(n, r): number of tuple pairs with 2 sum p^a + 2 sum p^b - 2g - h = r and
/// 2 sum p^a + 2 sum p^b <= n, a_i >= 1, b_j >= 0.
inline std::int64_t count_bp(int p, int n, int r) {
    if (n < 0 || r < 0) return 0;
    std::int64_t count = 0;
    detail::enumerate_tuples(p, n, r, 0, [&](std::int64_t, std::int64_t d) {
        if (d == r) ++count;
    });
    return count;
}

/// B'_p(n, r): tuples with b_j >= 1, degree S + 1 - 2g - h = r, S + 2 <= n and
/// p not dividing 2(n - S - 1), where S = 2 sum p^a + 2 sum p^b.
inline std::int64_t count_bp_prime(int p, int n, int r) {
    if (n < 2 || r < 1) return 0;
    std::int64_t count = 0;
    detail::enumerate_tuples(p, n - 2, r - 1, 1, [&](std::int64_t s, std::int64_t d) {
        if (d + 1 != r) return;
        if ((2 * (n - s - 1)) % p == 0) return;
        ++count;
    });
    return count;
}

enum class Y0Filter { any, require, exclude };

/// All monomials of degree r and size <= max_size, built generator by
/// generator (independent of the tuple enumeration behind count_bp).
inline std::vector<Monomial> monomials_of_degree(int p, int r, int max_size,
                                                 Y0Filter filter = Y0Filter::any) {
    struct Gen {
        bool is_x;
        int index;
        std::int64_t deg, size;
    };
    std::vector<Gen> gens;
    for (int i = 1; 2 * ipow(p, i) <= max_size; ++i)
        gens.push_back({true, i, 2 * ipow(p, i) - 2, 2 * ipow(p, i)});
    for (int j = 0; 2 * ipow(p, j) <= max_size; ++j)
        gens.push_back({false, j, 2 * ipow(p, j) - 1, 2 * ipow(p, j)});

    std::vector<Monomial> out;
    std::map<int, int> x;
    std::vector<int> y;
    std::function<void(std::size_t, std::int64_t, std::int64_t)> rec =
        [&](std::size_t g, std::int64_t deg, std::int64_t size) {
            if (deg > r || size > max_size) return;
            if (g == gens.size()) {
                if (deg != r) return;
                bool y0 = !y.empty() && y.front() == 0;
                if (filter == Y0Filter::require && !y0) return;
                if (filter == Y0Filter::exclude && y0) return;
                out.emplace_back(p, x, y);
                return;
            }
            const Gen& gen = gens[g];
            if (gen.is_x) {
                for (int a = 0; deg + a * gen.deg <= r && size + a * gen.size <= max_size; ++a) {
                    if (a) x[gen.index] = a;
                    rec(g + 1, deg + a * gen.deg, size + a * gen.size);
                }
                x.erase(gen.index);
            } else {
                rec(g + 1, deg, size);
                y.push_back(gen.index);
                rec(g + 1, deg + gen.deg, size + gen.size);
                y.pop_back();
            }
        };
    rec(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// dim H^r(C_n(S^2), Z/p) = B_p(n,r) + B_p(n-1,r-2) - B'_p(n,r) - B'_p(n,r-1).
inline std::int64_t dim_sphere_mod_p(int p, int n, int r) {
    std::int64_t v = count_bp(p, n, r) + count_bp(p, n - 1, r - 2) - count_bp_prime(p, n, r) -
                     count_bp_prime(p, n, r - 1);
    if (v < 0)
        throw std::logic_error("sphere dimension formula negative at p=" + std::to_string(p) +
                               " n=" + std::to_string(n) + " r=" + std::to_string(r));
    return v;
}

enum class Space { plane, sphere };

inline std::string to_string(Space s) { return s == Space::plane ? "plane" : "sphere"; }

/// Coefficients of a truncated power series in (w, z); table[r][n] is the
/// coefficient of w^r z^n.
using SeriesTable = std::vector<std::vector<BigInt>>;

namespace detail {

struct Series {
    int max_w, max_z;
    SeriesTable c;

    Series(int mw, int mz) : max_w(mw), max_z(mz), c(mw + 1, std::vector<BigInt>(mz + 1)) {}

    static Series one(int mw, int mz) {
        Series s(mw, mz);
        s.c[0][0] = 1;
        return s;
    }

    // *= (1 + coef * w^a z^b)
    void mul_binomial(int a, int b, int coef = 1) {
        for (int r = max_w; r >= a; --r)
            for (int n = max_z; n >= b; --n) c[r][n] += coef * c[r - a][n - b];
    }

    // /= (1 - w^a z^b), i.e. multiply by the geometric series.
    void div_geometric(int a, int b) {
        if (a == 0 && b == 0) throw std::invalid_argument("degenerate geometric factor");
        for (int r = a; r <= max_w; ++r)
            for (int n = b; n <= max_z; ++n) c[r][n] += c[r - a][n - b];
    }

    // *= w^a z^b
    void shift(int a, int b) {
        Series s(max_w, max_z);
        for (int r = a; r <= max_w; ++r)
            for (int n = b; n <= max_z; ++n) s.c[r][n] = c[r - a][n - b];
        c = std::move(s.c);
    }

    Series& operator+=(const Series& o) {
        for (int r = 0; r <= max_w; ++r)
            for (int n = 0; n <= max_z; ++n) c[r][n] += o.c[r][n];
        return *this;
    }

    Series operator*(const Series& o) const {
        Series s(max_w, max_z);
        for (int r1 = 0; r1 <= max_w; ++r1)
            for (int n1 = 0; n1 <= max_z; ++n1) {
                if (c[r1][n1] == 0) continue;
                for (int r2 = 0; r1 + r2 <= max_w; ++r2)
                    for (int n2 = 0; n1 + n2 <= max_z; ++n2)
                        s.c[r1 + r2][n1 + n2] += c[r1][n1] * o.c[r2][n2];
            }
        return s;
    }
};

// prod_{i>0} (1 + w^{2p^i-1} z^{2p^i}) / (1 - w^{2p^i-2} z^{2p^i})
inline Series stable_product(int p, int max_w, int max_z) {
    Series q = Series::one(max_w, max_z);
    for (int i = 1; 2 * ipow(p, i) <= max_z; ++i) {
        int size = static_cast<int>(2 * ipow(p, i));
        q.mul_binomial(size - 1, size);
        q.div_geometric(size - 2, size);
    }
    return q;
}

}  // namespace detail

/// Truncated generating series for the mod-p Betti numbers of C_n(C) or
/// C_n(S^2). The sphere series for p = 2 is the plane series times (1 + w^2 z),
/// which encodes dim H^r(C_n(S^2)) = B_2(n,r) + B_2(n-1,r-2).
inline SeriesTable series_coefficients(int p, Space space, int max_w, int max_z) {
    if (!is_prime(p)) throw std::invalid_argument("series prime must be prime");
    if (max_w < 0 || max_z < 0) throw std::invalid_argument("negative truncation");
    using detail::Series;
    Series q = detail::stable_product(p, max_w, max_z);
    if (space == Space::plane || p == 2) {
        Series s = q;
        s.mul_binomial(1, 2);
        s.div_geometric(0, 1);
        if (space == Space::sphere) s.mul_binomial(2, 1);
        return s.c;
    }
    // 1/(1-z) + w z^{p+1}/(1-z^p) + w^3 z^3/(1-z) + w^2 z/(1-z^p)
    Series f(max_w, max_z);
    auto term = [&](int a, int b, int period) {
        Series t = Series::one(max_w, max_z);
        t.shift(a, b);
        t.div_geometric(0, period);
        f += t;
    };
    term(0, 0, 1);
    term(1, p + 1, p);
    term(3, 3, 1);
    term(2, 1, p);
    return (f * q).c;
}

}  // namespace confspace
