#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "confspace/abelian_group.hpp"
#include "confspace/bigint.hpp"
#include "confspace/sparse_matrix.hpp"

namespace confspace {

/// Coefficient ring: the integers (prime == 0) or the prime field F_p.
struct Coefficients {
    int prime = 0;

    static Coefficients integers() { return {0}; }
    static Coefficients mod(int p) {
        if (!is_prime(p)) throw std::invalid_argument("coefficient modulus " + std::to_string(p) + " is not prime");
        return {p};
    }
    bool integral() const { return prime == 0; }
    std::string str() const { return integral() ? "Z" : "Zp:" + std::to_string(prime); }

    /// Accepts "Z", "Zp:P", "Z/P" and "Fp:P".
    static Coefficients parse(const std::string& s) {
        if (s == "Z") return integers();
        for (const char* prefix : {"Zp:", "Z/", "Fp:", "F"}) {
            std::string pre(prefix);
            if (s.size() > pre.size() && s.compare(0, pre.size(), pre) == 0) {
                std::size_t used = 0;
                int p = 0;
                try {
                    p = std::stoi(s.substr(pre.size()), &used);
                } catch (const std::exception&) {
                    break;
                }
                if (used != s.size() - pre.size()) break;
                return mod(p);
            }
        }
        throw std::invalid_argument("unrecognised coefficients '" + s + "'");
    }

    bool operator==(const Coefficients&) const = default;
};

struct SnfResult {
    std::vector<BigInt> divisors;  // nonzero diagonal, positive, d_1 | d_2 | ...
    int rank = 0;
};

namespace detail {

struct IntOverflow {};
struct GrowthLimit {};

/// Rows grouped by their current number of nonzeros, so pivot searches can
/// visit short rows first without sorting.
class LengthBuckets {
public:
    explicit LengthBuckets(std::size_t n) : len_(n, 0), pos_(n, -1) {}

    void update(int r, std::size_t len) {
        if (pos_[r] >= 0) {
            auto& b = buckets_[len_[r]];
            int last = b.back();
            b[static_cast<std::size_t>(pos_[r])] = last;
            pos_[last] = pos_[r];
            b.pop_back();
            pos_[r] = -1;
        }
        len_[r] = len;
        if (len == 0) return;
        if (buckets_.size() <= len) buckets_.resize(len + 1);
        pos_[r] = static_cast<int>(buckets_[len].size());
        buckets_[len].push_back(r);
    }

    /// Visits rows in order of increasing length until visit returns false.
    template <class Visit>
    void scan(Visit&& visit) const {
        for (std::size_t l = 1; l < buckets_.size(); ++l)
            for (int r : buckets_[l])
                if (!visit(r)) return;
    }

private:
    std::vector<std::vector<int>> buckets_;
    std::vector<std::size_t> len_;
    std::vector<int> pos_;
};

// Rows inspected per pivot once a unit pivot candidate is in hand, and the
// hard cap when none has been seen.
inline constexpr int kPivotSearchRows = 16;
inline constexpr int kPivotSearchCap = 512;

struct CheckedI64 {
    using T = std::int64_t;
    static T add(T a, T b) {
        T r;
        if (__builtin_add_overflow(a, b, &r)) throw IntOverflow{};
        return r;
    }
    static T mul(T a, T b) {
        T r;
        if (__builtin_mul_overflow(a, b, &r)) throw IntOverflow{};
        return r;
    }
    static T neg(T a) {
        if (a == std::numeric_limits<T>::min()) throw IntOverflow{};
        return -a;
    }
    static T abs(T a) { return a < 0 ? neg(a) : a; }
    static bool is_zero(T a) { return a == 0; }
    static bool is_unit(T a) { return a == 1 || a == -1; }
    static bool divides(T a, T b) { return a == -1 || b % a == 0; }
    static T quot(T b, T a) { return a == -1 ? neg(b) : b / a; }
    // g = x*a + y*b with g = gcd(a, b) > 0.
    static T gcdext(T a, T b, T& x, T& y) {
        __int128 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            __int128 q = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
            std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
            std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
        }
        if (r0 < 0) r0 = -r0, s0 = -s0, t0 = -t0;
        auto fit = [](__int128 v) {
            if (v > std::numeric_limits<T>::max() || v < std::numeric_limits<T>::min()) throw IntOverflow{};
            return static_cast<T>(v);
        };
        x = fit(s0);
        y = fit(t0);
        return fit(r0);
    }
    static T from_big(const BigInt& v) {
        if (!v.fits_slong_p()) throw IntOverflow{};
        return static_cast<T>(v.get_si());
    }
    static BigInt to_big(T v) { return BigInt(static_cast<long>(v)); }
    static bool cost_less(T a, T b) { return abs(a) < abs(b); }
    static std::size_t bits(T) { return 0; }
};

struct Big {
    using T = BigInt;
    static T add(const T& a, const T& b) { return a + b; }
    static T mul(const T& a, const T& b) { return a * b; }
    static T neg(const T& a) { return -a; }
    static T abs(const T& a) { return ::abs(a); }
    static bool is_zero(const T& a) { return a == 0; }
    static bool is_unit(const T& a) { return a == 1 || a == -1; }
    static bool divides(const T& a, const T& b) { return mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0; }
    static T quot(const T& b, const T& a) {
        T q;
        mpz_divexact(q.get_mpz_t(), b.get_mpz_t(), a.get_mpz_t());
        return q;
    }
    static T gcdext(const T& a, const T& b, T& x, T& y) {
        T g;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return g;
    }
    static T from_big(const BigInt& v) { return v; }
    static BigInt to_big(const T& v) { return v; }
    static bool cost_less(const T& a, const T& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
    static std::size_t bits(const T& a) { return mpz_sizeinbase(a.get_mpz_t(), 2); }
};

/// Arithmetic in Z/NZ on symmetric representatives, for one modulus per
/// thread. Divisibility is the ring's own: a | b iff gcd(a, N) | b.
struct ModN {
    using T = BigInt;
    static BigInt& modulus() {
        thread_local BigInt n;
        return n;
    }
    static T norm(T a) {
        const BigInt& n = modulus();
        mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        if (2 * a > n) a -= n;
        return a;
    }
    static T add(const T& a, const T& b) { return norm(a + b); }
    static T mul(const T& a, const T& b) { return norm(a * b); }
    static T neg(const T& a) { return norm(-a); }
    static T abs(const T& a) { return ::abs(a); }
    static bool is_zero(const T& a) { return a == 0; }
    static bool is_unit(const T& a) { return gcd(a, modulus()) == 1; }
    static bool divides(const T& a, const T& b) {
        T g = gcd(a, modulus());
        return mpz_divisible_p(b.get_mpz_t(), g.get_mpz_t()) != 0;
    }
    // Some x with a * x = b in Z/N, assuming divides(a, b). Exact integer
    // quotients are kept as they are, so the 2x2 gcd steps stay unimodular.
    static T quot(const T& b, const T& a) {
        if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) return norm(Big::quot(b, a));
        T g = gcd(a, modulus());
        T m = modulus() / g, inv;
        T ag = a / g;
        mpz_invert(inv.get_mpz_t(), ag.get_mpz_t(), m.get_mpz_t());
        return norm((b / g) * inv);
    }
    static T gcdext(const T& a, const T& b, T& x, T& y) {
        T g;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return g;
    }
    static T from_big(const BigInt& v) { return norm(v); }
    static BigInt to_big(const T& v) { return v; }
    static bool cost_less(const T& a, const T& b) { return Big::cost_less(gcd(a, modulus()), gcd(b, modulus())); }
    static std::size_t bits(const T&) { return 0; }
};

/// Sparse unimodular elimination to a diagonal. Pivots are chosen by
/// (unit first, Markowitz cost, smallest magnitude). Non-divisible entries
/// are handled with 2x2 extended-gcd row or column operations.
template <class Ops>
class DiagonalEliminator {
    using T = typename Ops::T;
    using Row = std::vector<std::pair<int, T>>;

public:
    explicit DiagonalEliminator(const SparseIntMatrix& m)
        : rows_(static_cast<std::size_t>(m.rows())),
          col_rows_(static_cast<std::size_t>(m.cols())),
          col_count_(static_cast<std::size_t>(m.cols()), 0),
          alive_(static_cast<std::size_t>(m.rows()), 1),
          buckets_(static_cast<std::size_t>(m.rows())) {
        for (const auto& e : m.entries()) {
            T v = Ops::from_big(e.value);
            if (Ops::is_zero(v)) continue;  // vanishes in a quotient ring
            rows_[e.row].emplace_back(e.col, std::move(v));
            col_rows_[e.col].push_back(e.row);
            ++col_count_[e.col];
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) buckets_.update(static_cast<int>(r), rows_[r].size());
    }

    /// Diagonal entries produced so far. With units_only the run stops as soon
    /// as no entry is a unit; residual() then holds what is left. A nonzero
    /// bit cap aborts with GrowthLimit once an entry outgrows it.
    std::vector<T> run(bool units_only = false, std::size_t bit_cap = 0) {
        bit_cap_ = bit_cap;
        std::vector<T> pivots;
        while (true) {
            auto choice = choose_pivot(units_only);
            if (!choice) break;
            auto [pr, pc] = *choice;
            pivots.push_back(reduce_pivot(pr, pc));
        }
        return pivots;
    }

    /// The rows still in play, renumbered, over the columns they touch.
    SparseIntMatrix residual() const {
        std::vector<int> col_id(col_count_.size(), -1);
        int rows = 0, cols = 0;
        std::vector<SparseIntMatrix::Entry> t;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r] || rows_[r].empty()) continue;
            for (const auto& [c, v] : rows_[r]) {
                if (col_id[c] < 0) col_id[c] = cols++;
                t.push_back({rows, col_id[c], Ops::to_big(v)});
            }
            ++rows;
        }
        return SparseIntMatrix::from_triplets(rows, cols, std::move(t));
    }

private:
    std::optional<std::pair<int, int>> choose_pivot(bool units_only) const {
        std::optional<std::pair<int, int>> best;
        std::tuple<int, long long> best_key{2, 0};
        const T* best_val = nullptr;
        int seen = 0;
        buckets_.scan([&](int r) {
            long long rl = static_cast<long long>(rows_[r].size()) - 1;
            for (const auto& [c, v] : rows_[r]) {
                std::tuple<int, long long> key{Ops::is_unit(v) ? 0 : 1, rl * (col_count_[c] - 1)};
                if (!best || key < best_key || (key == best_key && Ops::cost_less(v, *best_val))) {
                    best = {r, c};
                    best_key = key;
                    best_val = &v;
                }
            }
            ++seen;
            if (std::get<0>(best_key) == 0 && std::get<1>(best_key) == 0) return false;
            if (std::get<0>(best_key) == 0 && seen >= kPivotSearchRows) return false;
            return units_only || seen < kPivotSearchCap;
        });
        if (units_only && best && std::get<0>(best_key) != 0) return std::nullopt;
        return best;
    }

    T reduce_pivot(int pr, int pc) {
        while (true) {
            for (int k : live_rows(pc)) {
                if (k == pr) continue;
                T a = entry(pr, pc);
                T b = entry(k, pc);
                if (Ops::divides(a, b)) {
                    set_row(k, combine(T(1), rows_[k], Ops::neg(Ops::quot(b, a)), rows_[pr]));
                } else {
                    T x, y;
                    T g = Ops::gcdext(a, b, x, y);
                    Row np = combine(x, rows_[pr], y, rows_[k]);
                    Row nk = combine(Ops::neg(Ops::quot(b, g)), rows_[pr], Ops::quot(a, g), rows_[k]);
                    set_row(pr, std::move(np));
                    set_row(k, std::move(nk));
                }
            }
            T a = entry(pr, pc);
            std::optional<std::pair<int, T>> bad;
            for (const auto& [c, v] : rows_[pr])
                if (c != pc && !Ops::divides(a, v)) {
                    bad = std::make_pair(c, v);
                    break;
                }
            if (!bad) {
                // Remaining entries of the pivot row are multiples of the pivot;
                // column operations clear them without touching other rows.
                retire_row(pr);
                return a;
            }
            // Column operation mixing columns pc and l. Column pc is already
            // zero outside the pivot row.
            int l = bad->first;
            T c = bad->second;
            T x, y;
            T g = Ops::gcdext(a, c, x, y);
            T a_g = Ops::quot(a, g);
            for (int k : live_rows(l)) {
                if (k == pr) continue;
                T v = entry(k, l);
                set_two(k, pc, Ops::mul(y, v), l, Ops::mul(a_g, v));
            }
            set_two(pr, pc, g, l, T(0));
        }
    }

    T entry(int r, int c) const {
        const Row& row = rows_[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const std::pair<int, T>& e, int col) { return e.first < col; });
        return (it != row.end() && it->first == c) ? it->second : T(0);
    }

    std::vector<int> live_rows(int c) {
        auto& list = col_rows_[c];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        std::erase_if(list, [&](int r) { return !alive_[r] || Ops::is_zero(entry(r, c)); });
        return list;
    }

    Row combine(const T& s, const Row& a, const T& t, const Row& b) {
        Row out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                T v = Ops::mul(s, a[i].second);
                if (!Ops::is_zero(v)) out.emplace_back(a[i].first, std::move(v));
                ++i;
            } else if (i == a.size() || b[j].first < a[i].first) {
                T v = Ops::mul(t, b[j].second);
                if (!Ops::is_zero(v)) out.emplace_back(b[j].first, std::move(v));
                ++j;
            } else {
                T v = Ops::add(Ops::mul(s, a[i].second), Ops::mul(t, b[j].second));
                if (bit_cap_ && Ops::bits(v) > bit_cap_) throw GrowthLimit{};
                if (!Ops::is_zero(v)) out.emplace_back(a[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    }

    void set_two(int r, int c1, T v1, int c2, T v2) {
        Row row = rows_[r];
        for (auto [c, v] : {std::make_pair(c1, v1), std::make_pair(c2, v2)}) {
            auto it = std::lower_bound(row.begin(), row.end(), c,
                                       [](const std::pair<int, T>& e, int col) { return e.first < col; });
            bool present = it != row.end() && it->first == c;
            if (Ops::is_zero(v)) {
                if (present) row.erase(it);
            } else if (present) {
                it->second = v;
            } else {
                row.insert(it, {c, v});
            }
        }
        set_row(r, std::move(row));
    }

    void set_row(int r, Row next) {
        const Row& prev = rows_[r];
        std::size_t i = 0, j = 0;
        while (i < prev.size() || j < next.size()) {
            if (j == next.size() || (i < prev.size() && prev[i].first < next[j].first)) {
                --col_count_[prev[i].first];
                ++i;
            } else if (i == prev.size() || next[j].first < prev[i].first) {
                ++col_count_[next[j].first];
                col_rows_[next[j].first].push_back(r);
                ++j;
            } else {
                ++i;
                ++j;
            }
        }
        rows_[r] = std::move(next);
        buckets_.update(r, rows_[r].size());
    }

    void retire_row(int r) {
        for (const auto& e : rows_[r]) --col_count_[e.first];
        rows_[r].clear();
        alive_[r] = 0;
        buckets_.update(r, 0);
    }

    std::vector<Row> rows_;
    std::vector<std::vector<int>> col_rows_;
    std::vector<long long> col_count_;
    std::vector<char> alive_;
    LengthBuckets buckets_;
    std::size_t bit_cap_ = 0;
};

inline bool fits_i64(const SparseIntMatrix& m) {
    return std::all_of(m.entries().begin(), m.entries().end(), [](const auto& e) { return e.value.fits_slong_p(); });
}

}  // namespace detail

namespace detail {

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
}

inline std::uint32_t reduce_mod(const BigInt& v, std::uint32_t p) { return static_cast<std::uint32_t>(mod_u64(v, p)); }

}  // namespace detail

namespace detail {

/// Sparse Gaussian elimination over F_p with Markowitz pivoting. Returns the
/// rank and, if asked, the (row, column) of every pivot.
inline int eliminate_mod_p(const SparseIntMatrix& m, std::uint32_t p, std::vector<std::pair<int, int>>* pivots) {
    using Row = std::vector<std::pair<int, std::uint32_t>>;
    const std::uint32_t P = p;
    std::vector<Row> rows(static_cast<std::size_t>(m.rows()));
    std::vector<long long> col_count(static_cast<std::size_t>(m.cols()), 0);
    std::vector<std::vector<int>> col_rows(static_cast<std::size_t>(m.cols()));
    for (const auto& e : m.entries()) {
        auto v = detail::reduce_mod(e.value, P);
        if (!v) continue;
        rows[e.row].emplace_back(e.col, v);
        ++col_count[e.col];
        col_rows[e.col].push_back(e.row);
    }
    std::vector<char> alive(rows.size(), 1);
    detail::LengthBuckets buckets(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) buckets.update(static_cast<int>(r), rows[r].size());
    auto find = [](const Row& row, int c) -> std::uint32_t {
        auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int col) { return e.first < col; });
        return (it != row.end() && it->first == c) ? it->second : 0;
    };
    int rank = 0;
    while (true) {
        int pr = -1, pc = -1;
        long long best = std::numeric_limits<long long>::max();
        int seen = 0;
        buckets.scan([&](int r) {
            long long rl = static_cast<long long>(rows[r].size()) - 1;
            for (const auto& e : rows[r]) {
                long long cost = rl * (col_count[e.first] - 1);
                if (cost < best) {
                    best = cost;
                    pr = r;
                    pc = e.first;
                }
            }
            return best > 0 && ++seen < detail::kPivotSearchRows;
        });
        if (pr < 0) break;
        ++rank;
        if (pivots) pivots->emplace_back(pr, pc);
        const Row prow = rows[pr];
        for (const auto& e : prow) --col_count[e.first];
        rows[pr].clear();
        alive[pr] = 0;
        buckets.update(pr, 0);
        std::uint32_t inv = detail::inv_mod(find(prow, pc), P);
        auto& list = col_rows[pc];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        for (int k : list) {
            if (!alive[k]) continue;
            std::uint32_t b = find(rows[k], pc);
            if (!b) continue;
            std::uint64_t f = (P - static_cast<std::uint64_t>(b) * inv % P) % P;
            Row out;
            const Row& a = rows[k];
            out.reserve(a.size() + prow.size());
            std::size_t i = 0, j = 0;
            while (i < a.size() || j < prow.size()) {
                if (j == prow.size() || (i < a.size() && a[i].first < prow[j].first)) {
                    out.push_back(a[i++]);
                } else if (i == a.size() || prow[j].first < a[i].first) {
                    auto v = static_cast<std::uint32_t>(f * prow[j].second % P);
                    ++col_count[prow[j].first];
                    col_rows[prow[j].first].push_back(k);
                    out.emplace_back(prow[j].first, v);
                    ++j;
                } else {
                    auto v = static_cast<std::uint32_t>((a[i].second + f * prow[j].second) % P);
                    if (v) out.emplace_back(a[i].first, v);
                    else --col_count[a[i].first];
                    ++i;
                    ++j;
                }
            }
            rows[k] = std::move(out);
            buckets.update(k, rows[k].size());
        }
        list.clear();
    }
    return rank;
}

}  // namespace detail

/// Rank over F_p by sparse Gaussian elimination with Markowitz pivoting.
inline int rank_mod_p(const SparseIntMatrix& m, int p) {
    return detail::eliminate_mod_p(m, static_cast<std::uint32_t>(p), nullptr);
}

namespace detail {

/// log2 of a bound on the absolute value of every minor of m: the smaller of
/// the products of row norms and of column norms (Hadamard).
inline double log2_minor_bound(const SparseIntMatrix& m) {
    std::vector<double> row_sq(static_cast<std::size_t>(m.rows()), 0.0), col_sq(static_cast<std::size_t>(m.cols()), 0.0);
    for (const auto& e : m.entries()) {
        double v = mpz_get_d(e.value.get_mpz_t());
        row_sq[e.row] += v * v;
        col_sq[e.col] += v * v;
    }
    auto total = [](const std::vector<double>& sq) {
        double s = 0;
        for (double x : sq)
            if (x > 1) s += 0.5 * std::log2(x);
        return s;
    };
    return std::min(total(row_sq), total(col_sq)) + 1.0;
}

/// Exact rank over Q with a set of pivot positions realising it. A rank
/// drop modulo a prime q means q divides every maximal minor, so once the
/// product of the primes tried exceeds the minor bound, the largest rank
/// seen is the rational rank.
inline int certified_rank(const SparseIntMatrix& m, std::vector<std::pair<int, int>>& pivots) {
    const int full = std::min(m.rows(), m.cols());
    const double need = log2_minor_bound(m);
    double have = 0;
    int best = -1;
    for (std::uint32_t q = (1u << 31) - 1; q > 2; q -= 2) {
        if (!is_prime(q)) continue;
        std::vector<std::pair<int, int>> piv;
        int r = eliminate_mod_p(m, q, &piv);
        if (r > best) {
            best = r;
            pivots = std::move(piv);
        }
        have += std::log2(static_cast<double>(q));
        if (best == full || have > need) return best;
    }
    throw std::logic_error("ran out of primes certifying a rank");
}

inline std::uint32_t det_mod_p(std::vector<std::vector<std::uint32_t>> a, std::uint32_t p) {
    const std::size_t n = a.size();
    std::uint64_t det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = (p - det) % p;
        }
        det = det * a[k][k] % p;
        const std::uint64_t inv = inv_mod(a[k][k], p);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            const std::uint64_t f = (p - a[i][k] * inv % p) % p;
            for (std::size_t j = k; j < n; ++j)
                if (a[k][j]) a[i][j] = static_cast<std::uint32_t>((a[i][j] + f * a[k][j]) % p);
        }
    }
    return static_cast<std::uint32_t>(det);
}

/// Exact determinant of the square submatrix of m on the given pivot rows
/// and columns, by Chinese remaindering over word-sized primes past the
/// Hadamard bound.
inline BigInt minor_determinant(const SparseIntMatrix& m, const std::vector<std::pair<int, int>>& pivots) {
    const int r = static_cast<int>(pivots.size());
    std::vector<int> row_pos(static_cast<std::size_t>(m.rows()), -1), col_pos(static_cast<std::size_t>(m.cols()), -1);
    for (int i = 0; i < r; ++i) {
        row_pos[pivots[i].first] = i;
        col_pos[pivots[i].second] = i;
    }
    std::vector<SparseIntMatrix::Entry> t;
    for (const auto& e : m.entries())
        if (row_pos[e.row] >= 0 && col_pos[e.col] >= 0) t.push_back({row_pos[e.row], col_pos[e.col], e.value});
    SparseIntMatrix sub = SparseIntMatrix::from_triplets(r, r, std::move(t));
    const double need = log2_minor_bound(sub) + 1.0;  // room for the sign
    BigInt x = 0, modulus = 1;
    double have = 0;
    for (std::uint32_t q = (1u << 31) - 1; have <= need; q -= 2) {
        if (!is_prime(q)) continue;
        std::vector<std::vector<std::uint32_t>> a(static_cast<std::size_t>(r), std::vector<std::uint32_t>(static_cast<std::size_t>(r), 0));
        for (const auto& e : sub.entries()) a[e.row][e.col] = reduce_mod(e.value, q);
        const std::uint64_t d = det_mod_p(std::move(a), q);
        // x <- x + modulus * ((d - x) / modulus mod q)
        const std::uint64_t xq = mod_u64(x, q), mq = mod_u64(modulus, q);
        const std::uint64_t k = (d + q - xq) % q * inv_mod(static_cast<std::uint32_t>(mq), q) % q;
        x += modulus * BigInt(static_cast<unsigned long>(k));
        modulus *= q;
        have += std::log2(static_cast<double>(q));
    }
    if (2 * x > modulus) x -= modulus;
    return x;
}

/// Pivots of a maximal nonsingular minor other than the usual one: the
/// elimination is rerun with rows and columns in reverse order, which sends
/// Markowitz ties elsewhere. Empty if no prime below finds the full rank.
inline std::vector<std::pair<int, int>> alternate_pivots(const SparseIntMatrix& m, int rank) {
    std::vector<SparseIntMatrix::Entry> t;
    for (const auto& e : m.entries()) t.push_back({m.rows() - 1 - e.row, m.cols() - 1 - e.col, e.value});
    SparseIntMatrix flipped = SparseIntMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
    int tries = 0;
    for (std::uint32_t q = (1u << 30) + 3; tries < 4; q += 2) {
        if (!is_prime(q)) continue;
        ++tries;
        std::vector<std::pair<int, int>> piv;
        if (eliminate_mod_p(flipped, q, &piv) != rank) continue;
        for (auto& [r, c] : piv) r = m.rows() - 1 - r, c = m.cols() - 1 - c;
        return piv;
    }
    return {};
}

/// Arithmetic in Z/p^k with p^k < 2^31, on symmetric 64-bit representatives.
/// The ring is local, so units are the entries prime to p and a divides b
/// exactly when its p-adic valuation is no larger.
struct LocalWord {
    using T = std::int64_t;
    struct Params {
        T p = 2;
        T modulus = 2;
    };
    static Params& params() {
        thread_local Params prm;
        return prm;
    }
    static T norm(T a) {
        const T n = params().modulus;
        a %= n;
        if (a < 0) a += n;
        if (2 * a > n) a -= n;
        return a;
    }
    static int valuation(T a) {
        int v = 0;
        while (a % params().p == 0) a /= params().p, ++v;
        return v;
    }
    static T pow_p(int v) {
        T r = 1;
        while (v-- > 0) r *= params().p;
        return r;
    }
    static T add(T a, T b) { return norm(a + b); }
    static T mul(T a, T b) { return norm(a * b); }
    static T neg(T a) { return norm(-a); }
    static T abs(T a) { return a < 0 ? -a : a; }
    static bool is_zero(T a) { return a == 0; }
    static bool is_unit(T a) { return a % params().p != 0; }
    static bool divides(T a, T b) { return b == 0 || valuation(a) <= valuation(b); }
    static T quot(T b, T a) {
        if (b % a == 0) return norm(b / a);
        const T s = pow_p(valuation(a));
        const auto inv = static_cast<T>(inv_mod(static_cast<std::uint32_t>(norm(a / s) + params().modulus) %
                                                    static_cast<std::uint32_t>(params().modulus),
                                                static_cast<std::uint32_t>(params().modulus)));
        return mul(norm(b / s), inv);
    }
    static T gcdext(T a, T b, T& x, T& y) { return CheckedI64::gcdext(a, b, x, y); }
    static T from_big(const BigInt& v) {
        return norm(static_cast<T>(mod_u64(v, static_cast<std::uint64_t>(params().modulus))));
    }
    static BigInt to_big(T v) { return BigInt(static_cast<long>(v)); }
    static bool cost_less(T a, T b) { return valuation(a) < valuation(b); }
    static std::size_t bits(T) { return 0; }
};

/// p-adic valuations of the invariant factors of m that are below k, in
/// increasing order; p^k must fit in 31 bits.
inline std::vector<int> local_valuations(const SparseIntMatrix& m, int p, int k) {
    auto& prm = LocalWord::params();
    prm.p = p;
    prm.modulus = LocalWord::pow_p(k);
    std::vector<int> vals;
    for (auto v : DiagonalEliminator<LocalWord>(m).run()) vals.push_back(LocalWord::valuation(v));
    std::sort(vals.begin(), vals.end());
    return vals;
}

/// Nontrivial invariant factors and rank of m, computed modulo N = 2g where
/// g is a gcd of nonsingular maximal minors. The product of the invariant
/// factors divides g, so each d_i is recovered as gcd(d_i, N) and none
/// collapses to 0.
inline SnfResult modular_smith(const SparseIntMatrix& m) {
    std::vector<std::pair<int, int>> pivots;
    const int r = certified_rank(m, pivots);
    SnfResult res;
    res.rank = r;
    if (r == 0) return res;
    // Any nonsingular maximal minor is a multiple of the product of the
    // invariant factors; the gcd of two of them is usually far smaller.
    BigInt det = abs(minor_determinant(m, pivots));
    if (det == 0) throw std::logic_error("pivot minor is singular over Z");
    if (mpz_sizeinbase(det.get_mpz_t(), 2) > 62) {
        auto other = alternate_pivots(m, r);
        if (!other.empty()) {
            BigInt d2 = minor_determinant(m, other);
            if (d2 != 0) det = gcd(det, d2);
        }
    }
    // Split off the small prime factors of det. Each of them is handled in
    // the local ring Z/p^k with word arithmetic, raising k until every one
    // of the r invariant factors has valuation below k.
    BigInt cofactor = det;
    std::vector<BigInt> elementary;
    for (int q = 2; q < (1 << 16) && cofactor != 1; ++q) {
        if (!is_prime(q)) continue;
        BigInt qq = q;
        const auto e = static_cast<int>(mpz_remove(cofactor.get_mpz_t(), cofactor.get_mpz_t(), qq.get_mpz_t()));
        if (e == 0) continue;
        int kmax = 0;
        for (std::int64_t pk = q; pk < (std::int64_t{1} << 31); pk *= q) ++kmax;
        std::vector<int> vals;
        int k = std::min(2, kmax);
        while (true) {
            vals = local_valuations(m, q, k);
            if (static_cast<int>(vals.size()) == r || k > e || k == kmax) break;
            k = std::min(kmax, 2 * k);
        }
        if (static_cast<int>(vals.size()) != r && k <= e) {
            // p^(e+1) does not fit a word: finish this prime with big integers.
            BigInt pe;
            mpz_pow_ui(pe.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(e + 1));
            ModN::modulus() = pe;
            vals.clear();
            for (const auto& v : DiagonalEliminator<ModN>(m).run()) {
                BigInt g = gcd(v, pe), rest = g;
                vals.push_back(static_cast<int>(mpz_remove(rest.get_mpz_t(), g.get_mpz_t(), qq.get_mpz_t())));
            }
        }
        if (static_cast<int>(vals.size()) != r) throw std::logic_error("local Smith form disagrees with the rank");
        for (int v : vals) {
            BigInt pv;
            mpz_pow_ui(pv.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(v));
            elementary.push_back(pv);
        }
    }
    if (cofactor == 1) {
        AbelianGroup g = AbelianGroup::from_cyclic_orders(0, elementary);
        const auto& f = g.invariant_factors();
        res.divisors.assign(static_cast<std::size_t>(r) - f.size(), BigInt(1));
        res.divisors.insert(res.divisors.end(), f.begin(), f.end());
        return res;
    }
    // A large prime factor survived: work modulo 2 det as a whole.
    const BigInt n = 2 * det;
    ModN::modulus() = n;
    std::vector<BigInt> diag;
    for (const auto& v : DiagonalEliminator<ModN>(m).run()) diag.push_back(gcd(v, n));
    AbelianGroup g = AbelianGroup::from_cyclic_orders(0, diag);
    std::vector<BigInt> factors;
    for (const auto& f : g.invariant_factors())
        if (f != n) factors.push_back(f);
    if (static_cast<int>(factors.size()) > r) throw std::logic_error("modular Smith form exceeds the rank");
    res.divisors.assign(static_cast<std::size_t>(r) - factors.size(), BigInt(1));
    res.divisors.insert(res.divisors.end(), factors.begin(), factors.end());
    return res;
}

// Bit length at which exact elimination hands over to the modular route.
inline constexpr std::size_t kGrowthBits = 64;

}  // namespace detail

/// Smith normal form invariants of an integer matrix. The common case runs
/// in checked 64-bit arithmetic. On overflow the unit pivots are eliminated
/// exactly and the leftover block is finished with GMP integers, or modulo a
/// determinant multiple when its entries keep growing.
inline SnfResult smith_normal_form(const SparseIntMatrix& m) {
    std::vector<BigInt> diag;
    bool done = false;
    if (detail::fits_i64(m)) {
        try {
            for (auto v : detail::DiagonalEliminator<detail::CheckedI64>(m).run())
                diag.push_back(detail::CheckedI64::to_big(v));
            done = true;
        } catch (const detail::IntOverflow&) {
            diag.clear();
        }
    }
    int units = 0;
    SnfResult tail;
    if (!done) {
        detail::DiagonalEliminator<detail::Big> unit_pass(m);
        units = static_cast<int>(unit_pass.run(true).size());
        SparseIntMatrix rest = unit_pass.residual();
        try {
            diag = detail::DiagonalEliminator<detail::Big>(rest).run(false, detail::kGrowthBits);
        } catch (const detail::GrowthLimit&) {
            tail = detail::modular_smith(rest);
            tail.rank += units;
            tail.divisors.insert(tail.divisors.begin(), static_cast<std::size_t>(units), BigInt(1));
            return tail;
        }
    }
    SnfResult res;
    res.rank = units + static_cast<int>(diag.size());
    AbelianGroup g = AbelianGroup::from_cyclic_orders(0, diag);
    res.divisors.assign(static_cast<std::size_t>(res.rank) - g.invariant_factors().size(), BigInt(1));
    res.divisors.insert(res.divisors.end(), g.invariant_factors().begin(), g.invariant_factors().end());
    return res;
}

/// Basis of the right kernel {v : M v = 0} over F_p, as dense vectors.
inline std::vector<std::vector<std::uint32_t>> kernel_basis_mod_p(const SparseIntMatrix& m, int p) {
    const auto P = static_cast<std::uint32_t>(p);
    const int R = m.rows(), C = m.cols();
    std::vector<std::vector<std::uint32_t>> a(static_cast<std::size_t>(R), std::vector<std::uint32_t>(C, 0));
    for (const auto& e : m.entries()) a[e.row][e.col] = detail::reduce_mod(e.value, P);
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < C && r < R; ++c) {
        int s = r;
        while (s < R && a[s][c] == 0) ++s;
        if (s == R) continue;
        std::swap(a[s], a[r]);
        std::uint64_t inv = detail::inv_mod(a[r][c], P);
        for (int j = c; j < C; ++j) a[r][j] = static_cast<std::uint32_t>(a[r][j] * inv % P);
        for (int i = 0; i < R; ++i) {
            if (i == r || a[i][c] == 0) continue;
            std::uint64_t f = a[i][c];
            for (int j = c; j < C; ++j)
                if (a[r][j]) a[i][j] = static_cast<std::uint32_t>((a[i][j] + (P - f) * a[r][j]) % P);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<char> is_pivot(static_cast<std::size_t>(C), 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<std::uint32_t>> basis;
    for (int f = 0; f < C; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::uint32_t> v(static_cast<std::size_t>(C), 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = (P - a[i][f]) % P;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Rank of an integer matrix over the given coefficients.
inline int rank_over(const SparseIntMatrix& m, Coefficients k) {
    return k.integral() ? smith_normal_form(m).rank : rank_mod_p(m, k.prime);
}

/// Cohomology at a single spot of C^{r-1} --d_in--> C^r --d_out--> C^{r+1}.
/// Matrices act on column vectors (rows = target). Over F_p the result is
/// reported as (Z/p)^dim.
inline AbelianGroup cohomology_at(const SparseIntMatrix& d_in, const SparseIntMatrix& d_out, Coefficients k) {
    if (d_in.rows() != d_out.cols())
        throw std::invalid_argument("differentials are not composable: " + std::to_string(d_in.rows()) + " vs " +
                                    std::to_string(d_out.cols()));
    if (!d_out.multiply(d_in).is_zero()) throw std::logic_error("composite of consecutive differentials is nonzero");
    const int dim = d_out.cols();
    if (k.integral()) {
        SnfResult in = smith_normal_form(d_in);
        int rank_out = rank_over(d_out, k);
        return AbelianGroup::from_cyclic_orders(dim - rank_out - in.rank, in.divisors);
    }
    int b = dim - rank_mod_p(d_out, k.prime) - rank_mod_p(d_in, k.prime);
    return AbelianGroup::elementary(k.prime, b);
}

}  // namespace confspace
