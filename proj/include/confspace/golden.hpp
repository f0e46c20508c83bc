#pragma once

// Readers for the reference tables shipped in data/.

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "confspace/abelian_group.hpp"
#include "confspace/chainalg.hpp"
#include "confspace/combinat.hpp"

namespace confspace {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline std::ifstream open_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference table " + path);
    return in;
}

}  // namespace detail

/// n -> groups H^0, H^1, ... as printed (missing trailing degrees are zero).
using GroupTable = std::map<int, std::vector<AbelianGroup>>;

inline GroupTable parse_group_table(std::istream& in) {
    GroupTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto colon = line.find(':');
        if (colon == std::string::npos) throw std::runtime_error("line " + std::to_string(lineno) + ": missing ':'");
        int n = std::stoi(line.substr(0, colon));
        std::vector<AbelianGroup> row;
        for (const auto& cell : detail::split(line.substr(colon + 1), '|')) row.push_back(AbelianGroup::parse(cell));
        if (!t.emplace(n, std::move(row)).second)
            throw std::runtime_error("line " + std::to_string(lineno) + ": duplicate row n=" + std::to_string(n));
    }
    return t;
}

inline GroupTable read_group_table(const std::string& path) {
    auto in = detail::open_table(path);
    return parse_group_table(in);
}

/// "x_1^2 y_0", "y_2", "1".
inline Monomial parse_monomial(int p, const std::string& text) {
    std::map<int, int> x;
    std::vector<int> y;
    std::istringstream ss(text);
    std::string tok;
    bool any = false;
    while (ss >> tok) {
        any = true;
        if (tok == "1") continue;
        if (tok.size() < 3 || (tok[0] != 'x' && tok[0] != 'y') || tok[1] != '_')
            throw std::invalid_argument("bad monomial factor '" + tok + "'");
        auto caret = tok.find('^');
        int idx = std::stoi(tok.substr(2, caret == std::string::npos ? std::string::npos : caret - 2));
        int exp = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
        if (tok[0] == 'x') {
            x[idx] += exp;
        } else {
            if (exp != 1) throw std::invalid_argument("y factors are exterior: '" + tok + "'");
            y.push_back(idx);
        }
    }
    if (!any) throw std::invalid_argument("empty monomial");
    std::sort(y.begin(), y.end());
    return Monomial(p, std::move(x), std::move(y));
}

/// "28 x_1 y_2 + x_2 y_1", "- y_0 y_1".
inline MonomialSum parse_monomial_sum(int p, const std::string& text) {
    MonomialSum sum;
    std::string s = detail::trim(text);
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-' || std::isspace(static_cast<unsigned char>(s[pos])))) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = detail::trim(s.substr(pos, end - pos));
        pos = end;
        if (term.empty()) throw std::invalid_argument("dangling sign in '" + text + "'");
        BigInt coeff = sign;
        std::istringstream ts(term);
        std::string first;
        ts >> first;
        if (!first.empty() && std::all_of(first.begin(), first.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
            term.find(' ') != std::string::npos) {
            coeff *= BigInt(first);
            term = detail::trim(term.substr(first.size()));
        }
        sum[parse_monomial(p, term)] += coeff;
    }
    std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
    return sum;
}

/// "[2,6] - [6,2]" or "3[1,2]"; all terms must share size and length.
inline Chain parse_chain(const std::string& text) {
    Chain::Terms terms;
    int size = -1, degree = -1;
    std::size_t pos = 0;
    const std::string& s = text;
    while (true) {
        int sign = 1;
        std::string digits;
        while (pos < s.size() && s[pos] != '[') {
            char c = s[pos++];
            if (c == '-') sign = -sign;
            else if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
            else if (c != '+' && c != '*' && !std::isspace(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad chain text '" + text + "'");
        }
        if (pos >= s.size()) {
            if (!digits.empty()) throw std::invalid_argument("coefficient without composition in '" + text + "'");
            break;
        }
        auto close = s.find(']', pos);
        if (close == std::string::npos) throw std::invalid_argument("unclosed '[' in '" + text + "'");
        std::vector<int> parts;
        std::string inner = s.substr(pos + 1, close - pos - 1);
        if (!detail::trim(inner).empty())
            for (const auto& p : detail::split(inner, ',')) parts.push_back(std::stoi(p));
        pos = close + 1;
        Composition c(std::move(parts));
        if (size < 0) {
            size = c.size();
            degree = c.degree();
        }
        BigInt k = digits.empty() ? BigInt(1) : BigInt(digits);
        terms[c] += sign * k;
    }
    if (size < 0) throw std::invalid_argument("empty chain text");
    return Chain::from_terms(size, degree, std::move(terms));
}

/// A basis-style table: generators per degree, optional written-out chains.
struct BasisTable {
    int n = 0;
    int p = 0;
    std::map<int, std::vector<MonomialSum>> generators;
    std::vector<std::pair<Monomial, Chain>> chains;

    int count(int r) const {
        auto it = generators.find(r);
        return it == generators.end() ? 0 : static_cast<int>(it->second.size());
    }
};

inline BasisTable parse_basis_table(std::istream& in) {
    BasisTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
        if (line[0] == '@') {
            std::istringstream ss(line.substr(1));
            std::string key;
            int value = 0;
            ss >> key >> value;
            if (key == "n") t.n = value;
            else if (key == "p") t.p = value;
            else throw std::runtime_error(where() + "unknown directive @" + key);
            continue;
        }
        if (t.p == 0) throw std::runtime_error(where() + "@p must precede the entries");
        if (line.rfind("chain ", 0) == 0) {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw std::runtime_error(where() + "chain line without '='");
            t.chains.emplace_back(parse_monomial(t.p, line.substr(6, eq - 6)), parse_chain(line.substr(eq + 1)));
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) throw std::runtime_error(where() + "missing ':'");
        int r = std::stoi(line.substr(0, colon));
        auto& gens = t.generators[r];
        std::string body = detail::trim(line.substr(colon + 1));
        if (body == "-" || body.empty()) continue;
        for (const auto& g : detail::split(body, ';')) gens.push_back(parse_monomial_sum(t.p, g));
    }
    return t;
}

inline BasisTable read_basis_table(const std::string& path) {
    auto in = detail::open_table(path);
    return parse_basis_table(in);
}

}  // namespace confspace
