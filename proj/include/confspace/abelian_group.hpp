#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confspace/bigint.hpp"

namespace confspace {

/// Finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_k in invariant
/// factor form: every d_i >= 2 and d_1 | d_2 | ... | d_k.
class AbelianGroup {
public:
    AbelianGroup() = default;

    static AbelianGroup free(int rank) { return from_cyclic_orders(rank, {}); }

    /// Any list of cyclic orders; 1's are dropped and an order 0 (Z/0 = Z)
    /// counts as a free summand.
    static AbelianGroup from_cyclic_orders(int free_rank, std::vector<BigInt> orders) {
        if (free_rank < 0) throw std::invalid_argument("negative free rank");
        AbelianGroup g;
        g.free_rank_ = free_rank;
        std::vector<BigInt> d;
        for (auto& o : orders) {
            BigInt a = abs(o);
            if (a == 0) ++g.free_rank_;
            else if (a != 1) d.push_back(std::move(a));
        }
        // Pairwise (gcd, lcm) sweeps leave a divisibility chain.
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j) {
                BigInt g0 = gcd(d[i], d[j]);
                BigInt l0 = d[i] / g0 * d[j];
                d[i] = std::move(g0);
                d[j] = std::move(l0);
            }
        std::erase_if(d, [](const BigInt& x) { return x == 1; });
        g.factors_ = std::move(d);
        return g;
    }

    /// (Z/p)^k
    static AbelianGroup elementary(long p, int k) {
        return from_cyclic_orders(0, std::vector<BigInt>(static_cast<std::size_t>(k), BigInt(p)));
    }

    int free_rank() const { return free_rank_; }
    const std::vector<BigInt>& invariant_factors() const { return factors_; }
    bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
    bool is_finite() const { return free_rank_ == 0; }

    /// Number of cyclic p-primary summands (p prime).
    int p_rank(long p) const {
        int k = 0;
        for (const auto& d : factors_)
            if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p))) ++k;
        return k;
    }

    /// True when no element has order p^2 for any prime p.
    bool squarefree_exponent() const { return factors_.empty() || is_squarefree(factors_.back()); }

    /// prime -> list of exponents (ascending), one per cyclic summand.
    std::map<BigInt, std::vector<int>> primary_decomposition() const {
        std::map<BigInt, std::vector<int>> out;
        for (const auto& d : factors_)
            for (auto [p, e] : factorize(d)) out[p].push_back(e);
        for (auto& [p, es] : out) std::sort(es.begin(), es.end());
        return out;
    }

    AbelianGroup operator+(const AbelianGroup& o) const {
        std::vector<BigInt> d = factors_;
        d.insert(d.end(), o.factors_.begin(), o.factors_.end());
        return from_cyclic_orders(free_rank_ + o.free_rank_, std::move(d));
    }

    bool operator==(const AbelianGroup&) const = default;

    /// Primary-decomposition text: "0", "Z", "Z^2 + Z/2", "(Z/2)^2 + Z/3 + Z/8".
    std::string str() const {
        std::vector<std::string> parts;
        if (free_rank_ == 1) parts.push_back("Z");
        else if (free_rank_ > 1) parts.push_back("Z^" + std::to_string(free_rank_));
        for (const auto& [p, es] : primary_decomposition()) {
            std::size_t i = 0;
            while (i < es.size()) {
                std::size_t j = i;
                while (j < es.size() && es[j] == es[i]) ++j;
                BigInt q;
                mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(es[i]));
                std::string cyc = "Z/" + q.get_str();
                parts.push_back(j - i == 1 ? cyc : "(" + cyc + ")^" + std::to_string(j - i));
                i = j;
            }
        }
        if (parts.empty()) return "0";
        std::string s = parts.front();
        for (std::size_t k = 1; k < parts.size(); ++k) s += " + " + parts[k];
        return s;
    }

    /// Parses "0", "Z", "Z^k", "Z/m", "(Z/m)^k", "Z_m", "Z_m^k" joined by '+'.
    static AbelianGroup parse(std::string_view text) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        if (s.empty()) throw std::invalid_argument("empty group text");
        int free = 0;
        std::vector<BigInt> orders;
        std::size_t pos = 0;
        auto fail = [&] { throw std::invalid_argument("cannot parse group '" + std::string(text) + "'"); };
        auto read_int = [&]() -> std::string {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) fail();
            return s.substr(start, pos - start);
        };
        auto read_power = [&]() -> int {
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                return std::stoi(read_int());
            }
            return 1;
        };
        while (pos < s.size()) {
            if (s[pos] == '0') {
                ++pos;
            } else if (s[pos] == '(') {
                ++pos;
                if (s.compare(pos, 2, "Z/") != 0) fail();
                pos += 2;
                BigInt m(read_int());
                if (pos >= s.size() || s[pos] != ')') fail();
                ++pos;
                int k = read_power();
                for (int i = 0; i < k; ++i) orders.push_back(m);
            } else if (s[pos] == 'Z') {
                ++pos;
                if (pos < s.size() && (s[pos] == '/' || s[pos] == '_')) {
                    ++pos;
                    BigInt m(read_int());
                    int k = read_power();
                    for (int i = 0; i < k; ++i) orders.push_back(m);
                } else {
                    free += read_power();
                }
            } else {
                fail();
            }
            if (pos < s.size()) {
                if (s[pos] != '+') fail();
                ++pos;
                if (pos == s.size()) fail();
            }
        }
        return from_cyclic_orders(free, std::move(orders));
    }

private:
    static std::vector<std::pair<BigInt, int>> factorize(BigInt d) {
        std::vector<std::pair<BigInt, int>> out;
        for (BigInt p = 2; p * p <= d; ++p) {
            int e = 0;
            while (mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
                d /= p;
                ++e;
            }
            if (e) out.emplace_back(p, e);
        }
        if (d > 1) out.emplace_back(d, 1);
        return out;
    }

    static bool is_squarefree(const BigInt& d) {
        for (auto [p, e] : factorize(d))
            if (e > 1) return false;
        return true;
    }

    int free_rank_ = 0;
    std::vector<BigInt> factors_;
};

}  // namespace confspace
