#pragma once

// Formal chain arithmetic on the cell complexes of C_n(C) and C_n(S^2).

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confspace/bigint.hpp"
#include "confspace/combinat.hpp"

namespace confspace {

/// Immutable integer linear combination of compositions of one size and one
/// degree. Zero coefficients are never stored.
class Chain {
public:
    using Terms = std::map<Composition, BigInt>;

    Chain(int size, int degree) : size_(size), degree_(degree) {}

    /// Builds a chain, dropping zero coefficients. Throws if a composition
    /// has the wrong size or length.
    static Chain from_terms(int size, int degree, Terms terms) {
        Chain c(size, degree);
        for (auto it = terms.begin(); it != terms.end();) {
            if (it->second == 0) {
                it = terms.erase(it);
                continue;
            }
            if (it->first.size() != size || it->first.length() != size - degree)
                throw std::invalid_argument("chain term " + it->first.str() +
                                            " does not match size " + std::to_string(size) +
                                            " degree " + std::to_string(degree));
            ++it;
        }
        c.terms_ = std::move(terms);
        return c;
    }

    static Chain of(const Composition& c, const BigInt& coeff = 1) {
        return from_terms(c.size(), c.degree(), {{c, coeff}});
    }

    int size() const { return size_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    BigInt coefficient(const Composition& c) const {
        auto it = terms_.find(c);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    /// Coefficients reduced to [0, p); zero residues dropped.
    Chain reduced(long p) const {
        Terms t;
        for (const auto& [c, v] : terms_) t.emplace(c, mod_nonneg(v, BigInt(p)));
        return from_terms(size_, degree_, std::move(t));
    }

    bool is_zero_mod(long p) const { return reduced(p).is_zero(); }

    Chain operator+(const Chain& o) const {
        check_compatible(o);
        Terms t = terms_;
        for (const auto& [c, v] : o.terms_) t[c] += v;
        return from_terms(size_, degree_, std::move(t));
    }

    Chain operator-() const {
        Terms t = terms_;
        for (auto& [c, v] : t) v = -v;
        return from_terms(size_, degree_, std::move(t));
    }

    Chain operator-(const Chain& o) const { return *this + (-o); }

    friend Chain operator*(const BigInt& k, const Chain& c) {
        Terms t = c.terms_;
        for (auto& [comp, v] : t) v *= k;
        return from_terms(c.size_, c.degree_, std::move(t));
    }

    bool operator==(const Chain& o) const {
        return size_ == o.size_ && degree_ == o.degree_ && terms_ == o.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [c, v] : terms_) {
            if (!s.empty()) s += v < 0 ? " - " : " + ";
            else if (v < 0) s += "-";
            BigInt a = abs(v);
            if (a != 1) s += a.get_str() + "*";
            s += c.str();
        }
        return s;
    }

private:
    void check_compatible(const Chain& o) const {
        if (size_ != o.size_ || degree_ != o.degree_)
            throw std::invalid_argument("adding chains of different size or degree");
    }

    int size_;
    int degree_;
    Terms terms_;
};

/// Coefficient of the plane differential: 0 when x and y are both odd,
/// otherwise binom(floor(x/2 + y/2), floor(x/2)).
inline BigInt coeff_p(int x, int y) {
    if (x < 0 || y < 0) throw std::invalid_argument("coeff_p takes non-negative arguments");
    if (x % 2 == 1 && y % 2 == 1) return 0;
    return binomial(static_cast<unsigned long>((x + y) / 2), static_cast<unsigned long>(x / 2));
}

/// Coefficient of the sphere operator D: 0 for odd m, 2 for even m.
inline int coeff_q(int m) {
    if (m < 1) throw std::invalid_argument("coeff_q takes a positive argument");
    return m % 2 == 0 ? 2 : 0;
}

namespace detail {

// Applies a per-composition rule linearly. The rule receives a composition
// and an emit(composition, coefficient) callback.
template <class Rule>
Chain apply_linear(const Chain& c, int out_size, int out_degree, Rule&& rule) {
    Chain::Terms acc;
    for (const auto& [comp, coeff] : c.terms()) {
        rule(comp, [&](Composition image, const BigInt& k) {
            if (k != 0) acc[std::move(image)] += coeff * k;
        });
    }
    return Chain::from_terms(out_size, out_degree, std::move(acc));
}

inline Composition with_parts(std::vector<int> parts) { return Composition(std::move(parts)); }

}  // namespace detail

/// delta [n_1..n_s] = sum_l (-1)^{l-1} P(n_l, n_{l+1}) [.., n_l + n_{l+1}, ..]
inline Chain delta(const Chain& c) {
    return detail::apply_linear(c, c.size(), c.degree() + 1, [](const Composition& comp, auto emit) {
        const auto& n = comp.parts();
        for (std::size_t l = 0; l + 1 < n.size(); ++l) {
            BigInt k = coeff_p(n[l], n[l + 1]);
            if (k == 0) continue;
            std::vector<int> parts;
            parts.reserve(n.size() - 1);
            parts.insert(parts.end(), n.begin(), n.begin() + l);
            parts.push_back(n[l] + n[l + 1]);
            parts.insert(parts.end(), n.begin() + l + 2, n.end());
            emit(detail::with_parts(std::move(parts)), minus_one_pow(l) * k);
        }
    });
}

/// D [n_1..n_s] = sum_i Q(n_i) (-1)^{n_1 + .. + n_{i-1}} [.., n_i - 1, ..].
/// Maps A_n^r to A_{n-1}^{r-1}; the length is preserved.
inline Chain op_d(const Chain& c) {
    return detail::apply_linear(c, c.size() - 1, c.degree() - 1,
                                [](const Composition& comp, auto emit) {
                                    const auto& n = comp.parts();
                                    long prefix = 0;
                                    for (std::size_t i = 0; i < n.size(); ++i) {
                                        int q = coeff_q(n[i]);
                                        if (q != 0) {
                                            std::vector<int> parts = n;
                                            parts[i] -= 1;
                                            emit(detail::with_parts(std::move(parts)),
                                                 BigInt(q * minus_one_pow(prefix)));
                                        }
                                        prefix += n[i];
                                    }
                                });
}

/// The near null-homotopy S: A_n^r -> A_{n-1}^{r-2},
/// S[n_1..n_s] = sum_{k <= i} (-1)^{k+1+n_1+..+n_{k-1}}
///               [n_1..n_{k-1}, 1, n_k..n_{i-1}, n_i - 2, n_{i+1}..n_s],
/// omitting summands with n_i - 2 <= 0.
inline Chain op_s(const Chain& c) {
    return detail::apply_linear(
        c, c.size() - 1, c.degree() - 2, [](const Composition& comp, auto emit) {
            const auto& n = comp.parts();
            const int s = comp.length();
            long prefix = 0;  // n_1 + .. + n_{k-1}
            for (int k = 1; k <= s; ++k) {
                int sign = minus_one_pow(k + 1 + prefix);
                for (int i = k; i <= s; ++i) {
                    if (n[i - 1] - 2 <= 0) continue;
                    std::vector<int> parts;
                    parts.reserve(s + 1);
                    parts.insert(parts.end(), n.begin(), n.begin() + (k - 1));
                    parts.push_back(1);
                    parts.insert(parts.end(), n.begin() + (k - 1), n.end());
                    parts[i] -= 2;  // n_i sits one slot to the right after the insertion
                    emit(detail::with_parts(std::move(parts)), BigInt(sign));
                }
                prefix += n[k - 1];
            }
        });
}

struct SignedComposition {
    int sign;
    Composition composition;

    bool operator==(const SignedComposition&) const = default;
};

/// Ins_I: insert 1's at the (1-based, strictly increasing) output positions in
/// I, with sign (-1)^{sum of I}.
inline SignedComposition ins_i(const std::vector<int>& positions, const Composition& c) {
    const int total = c.length() + static_cast<int>(positions.size());
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (positions[j] < 1 || positions[j] > total)
            throw std::out_of_range("insertion position out of range");
        if (j && positions[j] <= positions[j - 1])
            throw std::invalid_argument("insertion positions must be strictly increasing");
    }
    std::vector<int> parts;
    parts.reserve(total);
    long sum = 0;
    std::size_t next = 0, src = 0;
    for (int pos = 1; pos <= total; ++pos) {
        if (next < positions.size() && positions[next] == pos) {
            parts.push_back(1);
            sum += pos;
            ++next;
        } else {
            parts.push_back(c[src++]);
        }
    }
    return {minus_one_pow(sum), Composition(std::move(parts))};
}

namespace detail {

template <class Visit>
void for_each_subset(int universe, int k, Visit&& visit) {
    std::vector<int> subset;
    subset.reserve(k);
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(subset.size()) == k) {
            visit(subset);
            return;
        }
        int need = k - static_cast<int>(subset.size());
        for (int x = start; x <= universe - need + 1; ++x) {
            subset.push_back(x);
            self(self, x + 1);
            subset.pop_back();
        }
    };
    rec(rec, 1);
}

}  // namespace detail

/// Ins_t = (-1)^{st} sum_{|I| = t} Ins_I, applied termwise (s is the length of
/// each term). Raises the size by t and keeps the degree.
inline Chain ins_t(int t, const Chain& c) {
    if (t < 0) throw std::invalid_argument("ins_t needs t >= 0");
    return detail::apply_linear(c, c.size() + t, c.degree(), [t](const Composition& comp, auto emit) {
        const int s = comp.length();
        const int global = minus_one_pow(static_cast<long long>(s) * t);
        detail::for_each_subset(s + t, t, [&](const std::vector<int>& positions) {
            auto [sign, image] = ins_i(positions, comp);
            emit(std::move(image), BigInt(global * sign));
        });
    });
}

/// Signed sum over the permutations of c that keep the relative order of
/// every pair of parts i < j with n_i = n_j or P(n_i, n_j) = 0 mod p.
inline Chain perm_cycle(const Composition& c, int p) {
    const auto& n = c.parts();
    const int s = c.length();
    std::vector<std::vector<int>> before(s);  // before[j]: indices that must precede j
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (n[i] == n[j] || mod_u64(coeff_p(n[i], n[j]), p) == 0) before[j].push_back(i);

    Chain::Terms terms;
    std::vector<int> order;
    std::vector<bool> used(s, false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(order.size()) == s) {
            int inversions = 0;
            for (int a = 0; a < s; ++a)
                for (int b = a + 1; b < s; ++b)
                    if (order[a] > order[b]) ++inversions;
            std::vector<int> parts(s);
            for (int k = 0; k < s; ++k) parts[k] = n[order[k]];
            terms[Composition(std::move(parts))] += minus_one_pow(inversions);
            return;
        }
        for (int j = 0; j < s; ++j) {
            if (used[j]) continue;
            bool ready = true;
            for (int i : before[j]) ready = ready && used[i];
            if (!ready) continue;
            used[j] = true;
            order.push_back(j);
            self(self);
            order.pop_back();
            used[j] = false;
        }
    };
    rec(rec);
    return Chain::from_terms(c.size(), c.degree(), std::move(terms));
}

/// Where the y_0 block goes in a monomial's block list. The canonical order
/// lists y's by increasing index; the mapping-cone computations write the
/// monomial as (...) y_0 and need y_0 as the final block.
enum class Y0Placement { canonical, last };

/// The block list realizing a monomial before padding: each x_i contributes
/// the pair [2p^{i-1}, 2p^{i-1}(p-1)], each y_j the single part 2p^j.
inline Composition monomial_blocks(const Monomial& m, Y0Placement y0 = Y0Placement::canonical) {
    const int p = m.prime();
    std::vector<int> parts;
    for (auto [i, a] : m.x_exponents()) {
        int base = static_cast<int>(2 * ipow(p, i - 1));
        for (int k = 0; k < a; ++k) {
            parts.push_back(base);
            parts.push_back(base * (p - 1));
        }
    }
    for (int j : m.y_indices())
        if (j != 0 || y0 == Y0Placement::canonical) parts.push_back(static_cast<int>(2 * ipow(p, j)));
    if (y0 == Y0Placement::last && m.has_y(0)) parts.push_back(2);
    return Composition(std::move(parts));
}

/// Ins_{n - size(m)} Perm[blocks of m]: a degree-deg(m) chain in A_n that is a
/// cocycle mod p.
inline Chain monomial_chain(const Monomial& m, int n, Y0Placement y0 = Y0Placement::canonical) {
    if (m.size() > n)
        throw std::invalid_argument("monomial " + m.str() + " does not fit in size " +
                                    std::to_string(n));
    Chain base = perm_cycle(monomial_blocks(m, y0), m.prime());
    return ins_t(n - static_cast<int>(m.size()), base);
}

/// Formal sum of monomials sharing one prime.
using MonomialSum = std::map<Monomial, BigInt>;

/// The mod-p Bockstein on a basis monomial: replace one x_i by y_i. The new
/// y_i is moved past the y_j with j < i, which costs a sign per odd-degree
/// factor crossed; terms with y_i already present vanish.
inline MonomialSum bockstein_monomial(const Monomial& m) {
    MonomialSum out;
    for (auto [i, a] : m.x_exponents()) {
        if (m.has_y(i)) continue;
        std::map<int, int> x = m.x_exponents();
        x[i] = a - 1;
        std::vector<int> y = m.y_indices();
        auto pos = std::lower_bound(y.begin(), y.end(), i);
        int crossed = static_cast<int>(pos - y.begin());
        y.insert(pos, i);
        out[Monomial(m.prime(), std::move(x), std::move(y))] += minus_one_pow(crossed);
    }
    return out;
}

inline MonomialSum bockstein(const MonomialSum& sum) {
    MonomialSum out;
    for (const auto& [m, k] : sum)
        for (const auto& [image, c] : bockstein_monomial(m)) out[image] += k * c;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

/// E = D - 2 delta S - 2 S delta.
inline Chain homotopy_defect(const Chain& c) {
    return op_d(c) - BigInt(2) * delta(op_s(c)) - BigInt(2) * op_s(delta(c));
}

/// The closed form of E on a single cell: zero unless the last part is 2, and
/// for [n_1..n_{s-1}, 2] the insertion sum
/// 2 sum_k (-1)^{s+k+n_1+..+n_{k-1}} [n_1..n_{k-1}, 1, n_k..n_{s-1}].
inline Chain defect_insertion_sum(const Composition& c) {
    Chain zero(c.size() - 1, c.degree() - 1);
    if (c.empty() || c.parts().back() != 2) return zero;
    const auto& n = c.parts();
    const int s = c.length();
    Chain::Terms t;
    long prefix = 0;
    for (int k = 1; k <= s; ++k) {
        std::vector<int> parts;
        parts.insert(parts.end(), n.begin(), n.begin() + (k - 1));
        parts.push_back(1);
        parts.insert(parts.end(), n.begin() + (k - 1), n.end() - 1);
        t[Composition(std::move(parts))] += 2 * minus_one_pow(s + k + prefix);
        prefix += n[k - 1];
    }
    return Chain::from_terms(c.size() - 1, c.degree() - 1, std::move(t));
}

}  // namespace confspace
