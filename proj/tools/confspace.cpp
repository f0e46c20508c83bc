// confspace: command-line front end for the cohomology engine.
//
//   confspace compute   --space sphere --n 5 --coeff Z
//   confspace verify    --suite lemmaE1 --max-size 10
//   confspace reproduce --table table3 --max-n 14
//   confspace dump      --space plane --n 4 --out dir
//   confspace cache     list|clear --cache-dir dir
//
// Exit codes: 0 success, 1 failure or mismatch, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "confspace/confspace.hpp"

namespace cs = confspace;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeRange {
    int lo = 0;
    int hi = std::numeric_limits<int>::max();
};

// "A..B", "A..", "..B" or a single degree "A".
DegreeRange parse_degrees(const std::string& text) {
    DegreeRange d;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw UsageError("bad --degrees value '" + text + "'");
        }
        if (used != s.size() || v < 0) throw UsageError("bad --degrees value '" + text + "'");
        return v;
    };
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        d.lo = d.hi = to_int(text);
        return d;
    }
    std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    if (!a.empty()) d.lo = to_int(a);
    if (!b.empty()) d.hi = to_int(b);
    if (d.lo > d.hi) throw UsageError("empty --degrees range '" + text + "'");
    return d;
}

std::optional<cs::ResultCache> open_cache(const std::string& flag) {
    std::string dir = flag;
    if (dir.empty())
        if (const char* env = std::getenv("CONFSPACE_CACHE_DIR")) dir = env;
    if (dir.empty()) return std::nullopt;
    return cs::ResultCache(dir);
}

cs::Space space_arg(const std::string& s) {
    try {
        return cs::parse_space(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

struct ComputeArgs {
    std::string space = "plane";
    int n = -1;
    std::string coeff = "Z";
    std::string strategy = "auto";
    std::string format = "text";
    std::string cache_dir;
    std::string degrees;
};

int run_compute(const ComputeArgs& a) {
    cs::Query q;
    q.space = space_arg(a.space);
    if (a.n < 0) throw UsageError("--n must be a non-negative integer");
    if (q.space == cs::Space::sphere && a.n < 1) throw UsageError("the sphere needs --n >= 1");
    q.n = a.n;
    try {
        q.coeff = cs::Coefficients::parse(a.coeff);
        q.strategy = cs::parse_strategy(a.strategy);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    DegreeRange range;
    if (!a.degrees.empty()) range = parse_degrees(a.degrees);

    auto cache = open_cache(a.cache_dir);
    cs::ResultEnvelope env;
    try {
        env = cs::run_query(q, cache ? &*cache : nullptr);
    } catch (const cs::UnsupportedQuery& e) {
        throw UsageError(e.what());
    }
    if (q.strategy == cs::Strategy::automatic && !env.cache_hit) {
        cs::CohomologyTable t{q.space, q.n, q.coeff, env.strategy_used, {}};
        for (const auto& r : env.rows) t.groups.push_back(r.group);
        if (auto mismatch = cs::cross_check(t)) {
            std::cerr << "strategy disagreement: " << *mismatch << "\n";
            if (cache) std::filesystem::remove(cache->path_for(q));
            return kFailure;
        }
    }
    std::erase_if(env.rows, [&](const cs::ResultRow& r) { return r.degree < range.lo || r.degree > range.hi; });
    if (a.format == "json") {
        std::cout << cs::envelope_to_json(env).dump(2) << "\n";
    } else {
        for (const auto& r : env.rows) std::cout << r.degree << ": " << r.group.str() << "\n";
    }
    return kOk;
}

struct VerifyArgs {
    std::vector<std::string> suites;
    int max_size = -1;
    int max_n = -1;
    int max_plane_n = -1;
    int max_r = -1;
    int max_period_n = -1;
    std::vector<int> primes;
};

int run_verify(const VerifyArgs& a) {
    cs::SuiteBounds b;
    if (a.max_size >= 0) b.max_size = a.max_size;
    if (a.max_n >= 0) b.max_n = a.max_n;
    if (a.max_plane_n >= 0) b.max_plane_n = a.max_plane_n;
    if (a.max_r >= 0) b.max_r = a.max_r;
    if (a.max_period_n >= 0) b.max_period_n = a.max_period_n;
    if (!a.primes.empty()) {
        for (int p : a.primes)
            if (!cs::is_prime(p)) throw UsageError("--p " + std::to_string(p) + " is not prime");
        b.primes = a.primes;
    }
    std::vector<std::string> names = a.suites.empty() ? cs::suite_names() : a.suites;
    for (auto& n : names) {
        try {
            n = cs::canonical_suite_name(n);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    bool all = true;
    for (const auto& n : names) {
        cs::SuiteReport rep = cs::run_suite(n, b);
        std::cout << rep.name << ": " << (rep.passed ? "PASS" : "FAIL") << " (" << rep.cases << " cases)\n";
        if (!rep.passed) {
            std::cout << "  counterexample: " << rep.counterexample << "\n";
            all = false;
        }
    }
    return all ? kOk : kFailure;
}

struct ReproduceArgs {
    std::vector<std::string> tables;
    int max_n = 0;
    std::string data_dir = cs::default_data_dir();
};

int run_reproduce(const ReproduceArgs& a) {
    std::vector<std::string> tables = a.tables;
    if (tables.empty() || (tables.size() == 1 && tables[0] == "all")) tables = cs::table_names();
    for (const auto& t : tables) {
        const auto names = cs::table_names();
        if (std::find(names.begin(), names.end(), t) == names.end())
            throw UsageError("unknown table '" + t + "' (expected table1..table4 or all)");
    }
    bool all = true;
    for (const auto& t : tables) {
        cs::ReproductionReport rep = cs::reproduce_table(t, a.max_n, a.data_dir);
        if (rep.identical()) {
            std::cout << rep.table << ": identical (" << rep.cells << " cells)\n";
        } else {
            all = false;
            std::cout << rep.table << ": " << rep.diffs.size() << " of " << rep.cells << " cells differ\n";
            for (const auto& d : rep.diffs) std::cout << "  " << d << "\n";
        }
    }
    return all ? kOk : kFailure;
}

struct DumpArgs {
    std::string space = "plane";
    int n = -1;
    std::string out = "dump";
};

// One file per degree r holding the differential out of degree r with one
// row per source cell (so the header is "dim_r dim_{r+1} nnz"), the ordered
// bases, and a manifest describing all of it.
int run_dump(const DumpArgs& a) {
    const cs::Space space = space_arg(a.space);
    if (a.n < 0 || (space == cs::Space::sphere && a.n < 1)) throw UsageError("--n out of range for " + a.space);
    const cs::GradedComplex cx = space == cs::Space::plane ? cs::build_plane(a.n) : cs::build_sphere(a.n);
    namespace fs = std::filesystem;
    const fs::path dir(a.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create " << dir << ": " << ec.message() << "\n";
        return kFailure;
    }
    cs::Json manifest{{"space", cs::to_string(space)},
                      {"n", a.n},
                      {"max_degree", cx.max_degree()},
                      {"dims", cx.dims()},
                      {"orientation", "rows index degree-r cells, columns index degree-(r+1) cells"},
                      {"differentials", cs::Json::array()},
                      {"bases", cs::Json::array()}};
    auto write = [&](const fs::path& p, auto&& body) {
        std::ofstream out(p);
        body(out);
        if (!out) throw std::runtime_error("cannot write " + p.string());
    };
    for (int r = 0; r <= cx.max_degree(); ++r) {
        const cs::SparseIntMatrix m = cx.differential(r).transposed();
        const std::string name = "d" + std::to_string(r) + ".txt";
        write(dir / name, [&](std::ostream& os) { cs::write_triplets(os, m); });
        manifest["differentials"].push_back(
            {{"degree", r}, {"file", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"nnz", m.nnz()}});
        const std::string bname = "basis" + std::to_string(r) + ".txt";
        write(dir / bname, [&](std::ostream& os) {
            for (const auto& c : cx.basis(r)) os << c.str() << "\n";
        });
        manifest["bases"].push_back({{"degree", r}, {"file", bname}, {"size", cx.dim(r)}});
    }
    write(dir / "manifest.json", [&](std::ostream& os) { os << manifest.dump(2) << "\n"; });
    std::cout << "wrote " << cx.max_degree() + 1 << " differentials for " << cx.label() << " to " << dir.string() << "\n";
    return kOk;
}

int run_cache(const std::string& action, const std::string& flag) {
    auto cache = open_cache(flag);
    if (!cache) throw UsageError("no cache directory (use --cache-dir or CONFSPACE_CACHE_DIR)");
    if (action == "list") {
        for (const auto& e : cache->list())
            std::cout << e.path.filename().string() << "  " << cs::to_string(e.query.space) << " n=" << e.query.n
                      << " coeff=" << e.query.coeff.str() << " strategy=" << cs::to_string(e.query.strategy) << "\n";
        return kOk;
    }
    std::cout << "removed " << cache->clear() << " entries\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cohomology of configuration spaces of the plane and the 2-sphere"};
    app.require_subcommand(1);

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "Compute H^*(C_n(X)) for X = plane or sphere");
    compute->add_option("--space", ca.space, "plane or sphere")->check(CLI::IsMember({"plane", "sphere"}));
    compute->add_option("--n", ca.n, "number of points")->required();
    compute->add_option("--coeff", ca.coeff, "Z or Zp:P");
    compute->add_option("--strategy", ca.strategy, "matrix, even-reduced, closed-form, reconstructed or auto");
    compute->add_option("--format", ca.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    compute->add_option("--cache-dir", ca.cache_dir, "result cache directory (default: $CONFSPACE_CACHE_DIR)");
    compute->add_option("--degrees", ca.degrees, "degree range A..B");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run property suites");
    verify->add_option("--suite", va.suites, "suite name (repeatable; default: all)");
    verify->add_option("--max-size", va.max_size, "largest composition size for chain identities");
    verify->add_option("--max-n", va.max_n, "largest n for complexes");
    verify->add_option("--max-plane-n", va.max_plane_n, "largest plane n for torsion-shape checks");
    verify->add_option("--max-r", va.max_r, "largest degree for counting checks");
    verify->add_option("--max-period-n", va.max_period_n, "largest n for periodicity checks");
    verify->add_option("--p", va.primes, "prime(s) to use (repeatable)");

    ReproduceArgs ra;
    auto* reproduce = app.add_subcommand("reproduce", "Recompute a reference table and diff it");
    reproduce->add_option("--table,table", ra.tables, "table1..table4 or all");
    reproduce->add_option("--max-n", ra.max_n, "largest n for table3/table4");
    reproduce->add_option("--data-dir", ra.data_dir, "directory holding the reference tables");

    DumpArgs da;
    auto* dump = app.add_subcommand("dump", "Write the differentials as sparse triplet files");
    dump->add_option("--space", da.space, "plane or sphere")->check(CLI::IsMember({"plane", "sphere"}));
    dump->add_option("--n", da.n, "number of points")->required();
    dump->add_option("--out", da.out, "output directory");

    std::string cache_action, cache_dir;
    auto* cache = app.add_subcommand("cache", "Inspect or clear the result cache");
    cache->add_option("action", cache_action, "list or clear")->required()->check(CLI::IsMember({"list", "clear"}));
    cache->add_option("--cache-dir", cache_dir, "result cache directory (default: $CONFSPACE_CACHE_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*compute) return run_compute(ca);
        if (*verify) return run_verify(va);
        if (*reproduce) return run_reproduce(ra);
        if (*dump) return run_dump(da);
        if (*cache) return run_cache(cache_action, cache_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
