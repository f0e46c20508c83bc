#pragma once

// Result envelopes (JSON form of a cohomology table) and the on-disk cache.

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "confspace/engine.hpp"
#include "json.hpp"

namespace confspace {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Bumped whenever cell order, sign conventions or group rendering change,
/// so stale cache entries stop matching.
inline constexpr const char* kBasisContract = "compositions-lex/v1";

struct Query {
    Space space = Space::plane;
    int n = 0;
    Coefficients coeff;
    Strategy strategy = Strategy::automatic;

    bool operator==(const Query&) const = default;
};

struct ResultRow {
    int degree = 0;
    AbelianGroup group;

    bool operator==(const ResultRow&) const = default;
};

struct ResultEnvelope {
    int schema_version = kSchemaVersion;
    Query query;
    Strategy strategy_used = Strategy::matrix;
    std::vector<ResultRow> rows;
    double seconds = 0.0;
    bool cache_hit = false;

    bool operator==(const ResultEnvelope&) const = default;
};

inline Json group_to_json(const AbelianGroup& g) {
    Json torsion = Json::array();
    for (const auto& d : g.invariant_factors()) {
        if (d.fits_ulong_p())
            torsion.push_back(d.get_ui());
        else
            torsion.push_back(d.get_str());
    }
    return Json{{"free_rank", g.free_rank()}, {"torsion", torsion}};
}

inline AbelianGroup group_from_json(const Json& j) {
    std::vector<BigInt> orders;
    for (const auto& d : j.at("torsion")) {
        if (d.is_string())
            orders.emplace_back(d.get<std::string>());
        else
            orders.emplace_back(static_cast<unsigned long>(d.get<std::uint64_t>()));
    }
    return AbelianGroup::from_cyclic_orders(j.at("free_rank").get<int>(), orders);
}

inline Json query_to_json(const Query& q) {
    return Json{{"space", to_string(q.space)}, {"n", q.n}, {"coeff", q.coeff.str()}, {"strategy", to_string(q.strategy)}};
}

inline Query query_from_json(const Json& j) {
    return Query{parse_space(j.at("space").get<std::string>()), j.at("n").get<int>(),
                 Coefficients::parse(j.at("coeff").get<std::string>()), parse_strategy(j.at("strategy").get<std::string>())};
}

inline Json envelope_to_json(const ResultEnvelope& e) {
    Json rows = Json::array();
    for (const auto& r : e.rows) rows.push_back(Json{{"degree", r.degree}, {"group", group_to_json(r.group)}});
    return Json{{"schema_version", e.schema_version},
                {"query", query_to_json(e.query)},
                {"strategy_used", to_string(e.strategy_used)},
                {"rows", rows},
                {"timing", Json{{"seconds", e.seconds}}},
                {"cache_hit", e.cache_hit}};
}

inline ResultEnvelope envelope_from_json(const Json& j) {
    ResultEnvelope e;
    e.schema_version = j.at("schema_version").get<int>();
    if (e.schema_version != kSchemaVersion)
        throw std::runtime_error("unsupported schema_version " + std::to_string(e.schema_version));
    e.query = query_from_json(j.at("query"));
    e.strategy_used = parse_strategy(j.at("strategy_used").get<std::string>());
    for (const auto& r : j.at("rows")) e.rows.push_back({r.at("degree").get<int>(), group_from_json(r.at("group"))});
    e.seconds = j.at("timing").at("seconds").get<double>();
    e.cache_hit = j.at("cache_hit").get<bool>();
    return e;
}

inline ResultEnvelope make_envelope(const Query& q, const CohomologyTable& t, double seconds, bool cache_hit) {
    ResultEnvelope e;
    e.query = q;
    e.strategy_used = t.strategy;
    for (int r = 0; r < static_cast<int>(t.groups.size()); ++r) e.rows.push_back({r, t.groups[r]});
    e.seconds = seconds;
    e.cache_hit = cache_hit;
    return e;
}

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

/// Directory of finished results, one JSON file per query. Entries are
/// written to a temporary name and renamed into place, so readers in other
/// processes see either nothing or a complete file.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }

    static std::string key(const Query& q) {
        return sha256_hex(std::string(kBasisContract) + "|" + query_to_json(q).dump());
    }

    std::filesystem::path path_for(const Query& q) const { return dir_ / (key(q) + ".json"); }

    /// Stored envelope for q, flagged as a cache hit. Unreadable or foreign
    /// files are treated as misses.
    std::optional<ResultEnvelope> load(const Query& q) const {
        std::ifstream in(path_for(q));
        if (!in) return std::nullopt;
        try {
            ResultEnvelope e = envelope_from_json(Json::parse(in));
            if (!(e.query == q)) return std::nullopt;
            e.cache_hit = true;
            return e;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    void store(const ResultEnvelope& e) const {
        std::filesystem::create_directories(dir_);
        ResultEnvelope stored = e;
        stored.cache_hit = false;
        const auto target = path_for(e.query);
        std::random_device rd;
        const auto tmp = dir_ / (".tmp-" + key(e.query).substr(0, 16) + "-" + std::to_string(rd()));
        {
            std::ofstream out(tmp);
            out << envelope_to_json(stored).dump(2) << "\n";
            if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        }
        std::filesystem::rename(tmp, target);
    }

    struct Entry {
        std::filesystem::path path;
        Query query;
    };

    std::vector<Entry> list() const {
        std::vector<Entry> out;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) return out;
        for (const auto& f : std::filesystem::directory_iterator(dir_)) {
            if (f.path().extension() != ".json") continue;
            try {
                std::ifstream in(f.path());
                out.push_back({f.path(), query_from_json(Json::parse(in).at("query"))});
            } catch (const std::exception&) {
                // not one of ours
            }
        }
        std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.path < b.path; });
        return out;
    }

    /// Removes every cache entry (and stray temporaries); returns how many.
    int clear() const {
        int removed = 0;
        std::error_code ec;
        if (!std::filesystem::is_directory(dir_, ec)) return 0;
        std::vector<std::filesystem::path> doomed;
        for (const auto& f : std::filesystem::directory_iterator(dir_)) {
            const auto name = f.path().filename().string();
            if (f.path().extension() == ".json" || name.rfind(".tmp-", 0) == 0) doomed.push_back(f.path());
        }
        for (const auto& p : doomed)
            if (std::filesystem::remove(p, ec)) ++removed;
        return removed;
    }

private:
    std::filesystem::path dir_;
};

/// Runs a query through the cache when one is given.
inline ResultEnvelope run_query(const Query& q, const ResultCache* cache) {
    if (cache)
        if (auto hit = cache->load(q)) return *hit;
    const auto start = std::chrono::steady_clock::now();
    CohomologyTable t = cohomology(q.space, q.n, q.coeff, q.strategy);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ResultEnvelope e = make_envelope(q, t, seconds, false);
    if (cache) cache->store(e);
    return e;
}

}  // namespace confspace
