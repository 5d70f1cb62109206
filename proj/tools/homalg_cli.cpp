// Batch front end: parse a JSON problem config, run homology / spectral
// computations or the verification battery, emit a deterministic JSON report.
// Timing goes to stderr only, so report bytes are identical across reruns.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "homalg/models.hpp"
#include "homalg/spectral.hpp"
#include "verify_suite.hpp"

using nlohmann::json;
using namespace homalg;

namespace {

constexpr const char* kEngineVersion = "homalg/1.0.0";
constexpr const char* kConfigSchema = "homalg-config/1";
constexpr const char* kReportSchema = "homalg-report/1";
constexpr const char* kCacheSchema = "homalg-cache/1";

// ---------- config parsing (strict: unknown fields rejected) ----------

void expect_fields(const json& j, const std::string& path,
                   const std::vector<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(path + ": unknown field '" + key + "'");
    }
}

long get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<long>();
}

Rat get_rational(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) throw ConfigError(path + ": expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

struct RangeSpec {
    long lo = 0;
    long hi = 0;
};

RangeSpec get_range(const json& j, const std::string& path, long def_lo, long def_hi) {
    if (j.is_null()) return {def_lo, def_hi};
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(path + ": expected a two-element [lo, hi] range");
    RangeSpec r{get_int(j[0], path + "[0]"), get_int(j[1], path + "[1]")};
    if (r.lo > r.hi) throw ConfigError(path + ": empty range");
    return r;
}

struct RequestSpec {
    std::string kind;
    RangeSpec degrees;
    RangeSpec weights;
    std::vector<int> classes;  // empty = all
    int depth = 1;
    json echo;
};

struct ProblemConfig {
    json echo;
    std::string algebra_name;
    CrossedPtr model;
    bool filtered = false;
    std::vector<RequestSpec> requests;
};

AlgebraPtr build_algebra(const json& a, std::string& name_out) {
    expect_fields(a, "algebra", {"name", "vars", "order", "pairs", "cutoff", "low", "high"});
    if (!a.contains("name")) throw ConfigError("algebra.name: missing");
    std::string name = a["name"].is_string() ? a["name"].get<std::string>() : "";
    name_out = name;
    if (name == "polynomial") {
        long n = get_int(a.value("vars", json(1)), "algebra.vars");
        if (n < 0) throw ConfigError("algebra.vars: must be nonnegative");
        return std::make_shared<PolynomialAlgebra>(static_cast<int>(n));
    }
    if (name == "truncated_polynomial") {
        long n = get_int(a.value("vars", json(1)), "algebra.vars");
        long order = get_int(a.value("order", json(4)), "algebra.order");
        if (n < 0 || order < 1) throw ConfigError("algebra.order: must be positive");
        return std::make_shared<TruncatedPolynomialAlgebra>(static_cast<int>(n),
                                                            static_cast<int>(order));
    }
    if (name == "weyl") {
        long n = get_int(a.value("pairs", json(1)), "algebra.pairs");
        if (n < 1) throw ConfigError("algebra.pairs: must be positive");
        return std::make_shared<WeylAlgebra>(static_cast<int>(n));
    }
    if (name == "symbol_model") {
        long cutoff = get_int(a.value("cutoff", json(4)), "algebra.cutoff");
        long low = get_int(a.value("low", json(-4)), "algebra.low");
        long high = get_int(a.value("high", json(4)), "algebra.high");
        return std::make_shared<SymbolAlgebra>(cutoff, low, high);
    }
    throw ConfigError("algebra.name: unknown constructor '" + name + "'");
}

ProblemConfig parse_config(const json& j) {
    expect_fields(j, "(config)", {"schema", "algebra", "group", "action", "requests"});
    if (!j.contains("schema") || j["schema"] != kConfigSchema)
        throw ConfigError("schema: expected \"" + std::string(kConfigSchema) + "\"");
    if (!j.contains("algebra")) throw ConfigError("algebra: missing");
    ProblemConfig cfg;
    cfg.echo = j;
    AlgebraPtr base = build_algebra(j["algebra"], cfg.algebra_name);
    cfg.filtered = base->filtered();
    if (j.contains("group")) {
        expect_fields(j["group"], "group", {"generators"});
        const json& gens = j["group"].value("generators", json::array());
        if (!gens.is_array() || gens.empty())
            throw ConfigError("group.generators: expected a nonempty list of matrices");
        int n = base->vars();
        std::vector<DenseMat> mats;
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            std::string path = "group.generators[" + std::to_string(gi) + "]";
            const json& flat = gens[gi];
            if (!flat.is_array() || static_cast<int>(flat.size()) != n * n)
                throw ConfigError(path + ": expected a row-major list of " + std::to_string(n * n) +
                                  " entries");
            DenseMat m(n, std::vector<Rat>(n));
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c)
                    m[r][c] = get_rational(flat[r * n + c],
                                           path + "[" + std::to_string(r * n + c) + "]");
            mats.push_back(std::move(m));
        }
        if (j.contains("action") && j["action"] != "linear")
            throw ConfigError("action: only the builtin \"linear\" action is available");
        FiniteMatrixGroup grp = FiniteMatrixGroup::close(mats);
        cfg.model = std::make_shared<CrossedAlgebra>(base, std::make_shared<LinearAction>(base, grp));
    } else {
        if (j.contains("action")) throw ConfigError("action: given without a group");
        cfg.model = std::make_shared<CrossedAlgebra>(base);
    }
    const json& reqs = j.value("requests", json::array());
    if (!reqs.is_array()) throw ConfigError("requests: expected a list");
    for (size_t i = 0; i < reqs.size(); ++i) {
        std::string path = "requests[" + std::to_string(i) + "]";
        const json& r = reqs[i];
        expect_fields(r, path, {"kind", "degrees", "weights", "classes", "depth"});
        RequestSpec spec;
        spec.echo = r;
        if (!r.contains("kind") || !r["kind"].is_string())
            throw ConfigError(path + ".kind: missing");
        spec.kind = r["kind"].get<std::string>();
        static const std::vector<std::string> kinds = {"hh", "hc", "hp", "twisted", "spectral",
                                                       "verify"};
        if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
            throw ConfigError(path + ".kind: unknown kind '" + spec.kind + "'");
        spec.degrees = get_range(r.value("degrees", json()), path + ".degrees", 0, 2);
        spec.weights = get_range(r.value("weights", json()), path + ".weights", cfg.filtered ? -2 : 0,
                                 cfg.filtered ? 2 : 3);
        spec.depth = static_cast<int>(get_int(r.value("depth", json(1)), path + ".depth"));
        if (spec.depth < 0) throw ConfigError(path + ".depth: must be nonnegative");
        if (r.contains("classes") && r["classes"] != "all") {
            if (!r["classes"].is_array()) throw ConfigError(path + ".classes: expected \"all\" or a list");
            int ncls = static_cast<int>(cfg.model->classes().size());
            for (const auto& c : r["classes"]) {
                long v = get_int(c, path + ".classes[]");
                if (v < 0 || v >= ncls)
                    throw ConfigError(path + ".classes: class index " + std::to_string(v) +
                                      " out of range");
                spec.classes.push_back(static_cast<int>(v));
            }
        }
        cfg.requests.push_back(std::move(spec));
    }
    return cfg;
}

// ---------- report helpers ----------

json matrix_json(const DenseMat& m) {
    json flat = json::array();
    for (const auto& row : m)
        for (const auto& v : row) flat.push_back(rational_str(v));
    return flat;
}

std::vector<int> request_classes(const ProblemConfig& cfg, const RequestSpec& req) {
    if (!req.classes.empty()) return req.classes;
    std::vector<int> all;
    for (int c = 0; c < static_cast<int>(cfg.model->classes().size()); ++c) all.push_back(c);
    return all;
}

// ---------- request execution ----------

json run_homology(const ProblemConfig& cfg, const RequestSpec& req, bool cyclic) {
    HochschildComplex hoch(cfg.model);
    json table = json::array();
    for (int cls : request_classes(cfg, req)) {
        const auto& cc = cfg.model->classes()[cls];
        for (long k = std::max<long>(0, req.degrees.lo); k <= req.degrees.hi; ++k)
            for (long w = req.weights.lo; w <= req.weights.hi; ++w) {
                json row;
                row["class"] = cls;
                row["representative"] = matrix_json(cfg.model->group().matrix(cc.representative));
                row["k"] = k;
                row["w"] = w;
                if (cfg.filtered) {
                    StabilizedCount c =
                        cyclic ? hc_filtered(hoch, static_cast<int>(k), w, req.depth, cls)
                               : hh_filtered(hoch, static_cast<int>(k), w, req.depth, cls);
                    row["dim"] = c.value;
                    row["stable"] = c.stable;
                } else {
                    row["dim"] = cyclic ? hoch.hc(static_cast<int>(k), w, kNoCap, cls)
                                        : hoch.hh(static_cast<int>(k), w, kNoCap, cls);
                }
                table.push_back(row);
            }
    }
    return json{{"kind", cyclic ? "hc" : "hh"}, {"table", table}};
}

// periodic homology per parity: scan HC upward within each parity until two
// consecutive values agree, report that stabilized value
json run_periodic(const ProblemConfig& cfg, const RequestSpec& req) {
    HochschildComplex hoch(cfg.model);
    json table = json::array();
    for (int cls : request_classes(cfg, req)) {
        for (long w = req.weights.lo; w <= req.weights.hi; ++w)
            for (int parity = 0; parity <= 1; ++parity) {
                int start = static_cast<int>(std::max<long>(parity, req.degrees.hi));
                if (start % 2 != parity) ++start;
                int prev = -1, value = -1;
                bool periodic = false, stable = true;
                for (int k = start; k <= start + 6; k += 2) {
                    int cur;
                    if (cfg.filtered) {
                        StabilizedCount c = hc_filtered(hoch, k, w, req.depth, cls);
                        cur = c.value;
                        stable = stable && c.stable;
                    } else {
                        cur = hoch.hc(k, w, kNoCap, cls);
                    }
                    if (prev >= 0 && cur == prev) {
                        value = cur;
                        periodic = true;
                        break;
                    }
                    prev = cur;
                }
                if (!periodic) value = prev;
                json row;
                row["class"] = cls;
                row["w"] = w;
                row["parity"] = parity;
                row["dim"] = value;
                row["periodic"] = periodic;
                if (cfg.filtered) row["stable"] = stable;
                table.push_back(row);
            }
    }
    return json{{"kind", "hp"}, {"table", table}};
}

json run_twisted(const ProblemConfig& cfg, const RequestSpec& req) {
    json table = json::array();
    for (int cls : request_classes(cfg, req)) {
        const auto& cc = cfg.model->classes()[cls];
        TwistedComplex tw(cfg.model, cc.representative);
        for (long k = std::max<long>(0, req.degrees.lo); k <= req.degrees.hi; ++k)
            for (long w = req.weights.lo; w <= req.weights.hi; ++w) {
                json row;
                row["class"] = cls;
                row["representative"] = matrix_json(cfg.model->group().matrix(cc.representative));
                row["k"] = k;
                row["w"] = w;
                if (cfg.filtered) {
                    long filcap = std::max<long>(w, -w) + 2 * req.depth;
                    row["dim"] = tw.hh(static_cast<int>(k), w, filcap);
                    row["filtration_cap"] = filcap;
                } else {
                    row["dim"] = tw.hh(static_cast<int>(k), w);
                }
                row["invariant_dim"] =
                    cfg.filtered
                        ? tw.invariant_hh(static_cast<int>(k), w, cc.centralizer,
                                          std::max<long>(w, -w) + 2 * req.depth)
                        : tw.invariant_hh(static_cast<int>(k), w, cc.centralizer);
                table.push_back(row);
            }
    }
    return json{{"kind", "twisted"}, {"table", table}};
}

json run_spectral(const ProblemConfig& cfg, const RequestSpec& req) {
    if (!cfg.filtered)
        throw std::runtime_error("spectral requests need a filtered algebra (weyl or symbol_model)");
    bool weyl = cfg.algebra_name == "weyl";
    json entries = json::array();
    bool d1_ok = true, d2_ok = true;
    for (int cls : request_classes(cfg, req)) {
        std::unique_ptr<WeylFormBridge> bridge;
        if (weyl) bridge = std::make_unique<WeylFormBridge>(cfg.model, cls);
        for (long w = req.weights.lo; w <= req.weights.hi; ++w) {
            long lmin = std::max<long>(0, -w);
            long cap = lmin + req.depth;
            int kmax = static_cast<int>(std::max<long>(1, req.degrees.hi));
            FilteredSS ss(cfg.model, kmax, w, cap, cls);
            for (int k = 0; k <= kmax; ++k)
                for (long l = lmin; l <= cap; ++l) {
                    json row;
                    row["class"] = cls;
                    row["w"] = w;
                    row["k"] = k;
                    row["l"] = l;
                    row["e1"] = ss.page_dim(1, k, l);
                    row["e2"] = ss.page_dim(2, k, l);
                    auto [einf, st] = ss.einf_dim(k, l, static_cast<int>(cap) + 2);
                    row["einf"] = einf;
                    row["stable"] = st;
                    row["exact"] = ss.entry_is_exact(2, l);
                    if (weyl && ss.entry_is_exact(1, l)) {
                        try {
                            verify_e1_dims(ss, *bridge, k, l);
                        } catch (const E1MismatchError&) {
                            d1_ok = false;
                        }
                    }
                    if (ss.entry_is_exact(2, l) && !ss.page_differential(2, k, l).is_zero())
                        d2_ok = false;
                    entries.push_back(row);
                }
        }
    }
    json out{{"kind", "spectral"}, {"entries", entries}, {"d2_zero", d2_ok}};
    if (weyl) out["e1_matches_invariant_forms"] = d1_ok;
    return out;
}

json checks_json(const std::vector<verify::CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return arr;
}

// ---------- cache ----------

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class Cache {
public:
    explicit Cache(const std::string& dir) : dir_(dir) {
        if (dir_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        std::string probe = dir_ + "/.probe";
        std::ofstream f(probe);
        if (!f) {
            std::cerr << "warning: cache directory '" << dir_ << "' is not writable, proceeding uncached\n";
            dir_.clear();
            return;
        }
        f.close();
        std::filesystem::remove(probe, ec);
        enabled_ = true;
    }

    bool enabled() const { return enabled_; }

    std::string key_for(const json& request_identity) const {
        std::ostringstream os;
        os << kEngineVersion << "\n" << request_identity.dump();
        std::ostringstream hex;
        hex << std::hex << fnv1a(os.str());
        return hex.str();
    }

    std::optional<json> load(const std::string& key) {
        if (!enabled_) return std::nullopt;
        std::ifstream f(dir_ + "/" + key + ".json");
        if (!f) return std::nullopt;
        try {
            json j = json::parse(f);
            if (j.value("schema", "") != kCacheSchema || j.value("key", "") != key ||
                !j.contains("result"))
                throw std::runtime_error("cache entry malformed");
            ++hits_;
            return j["result"];
        } catch (const std::exception&) {
            std::cerr << "warning: CacheCorrupt in '" << key << ".json', recomputing\n";
            return std::nullopt;
        }
    }

    void store(const std::string& key, const json& result) {
        if (!enabled_) return;
        json j{{"schema", kCacheSchema}, {"key", key}, {"engine", kEngineVersion},
               {"result", result}};
        std::ofstream f(dir_ + "/" + key + ".json");
        if (!f) {
            std::cerr << "warning: cache directory became unwritable, entry dropped\n";
            return;
        }
        f << j.dump(2) << "\n";
    }

    int hits() const { return hits_; }

private:
    std::string dir_;
    bool enabled_ = false;
    int hits_ = 0;
};

// ---------- drivers ----------

struct Flags {
    std::string config_path;
    std::string out_path;
    std::string cache_dir;
    int jobs = 1;
    std::optional<long> max_weight;
    std::optional<long> max_degree;
    std::optional<int> depth;
};

void emit_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot write report to '" + out_path + "'");
        f << report.dump(2) << "\n";
    }
}

json load_config_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const std::exception& e) {
        throw ConfigError("config: invalid JSON: " + std::string(e.what()));
    }
}

int run_requests(const Flags& flags, const std::string& only_kind) {
    ProblemConfig cfg = parse_config(load_config_json(flags.config_path));
    Cache cache(flags.cache_dir);
    json results = json::array();
    int failures = 0;
    // the subcommand selects matching requests; hp rides with hc, and a
    // config without a matching request gets one synthesized from the flags
    std::vector<RequestSpec> selected;
    for (const auto& spec_in : cfg.requests) {
        if (only_kind.empty() || spec_in.kind == only_kind ||
            (only_kind == "hc" && spec_in.kind == "hp"))
            selected.push_back(spec_in);
    }
    if (selected.empty() && !only_kind.empty()) {
        RequestSpec def;
        def.kind = only_kind;
        def.degrees = {0, 2};
        def.weights = cfg.filtered ? RangeSpec{-2, 2} : RangeSpec{0, 3};
        selected.push_back(def);
    }
    for (const auto& spec_in : selected) {
        RequestSpec spec = spec_in;
        if (flags.max_degree) spec.degrees.hi = std::min(spec.degrees.hi, *flags.max_degree);
        if (flags.max_weight) spec.weights.hi = std::min(spec.weights.hi, *flags.max_weight);
        if (flags.depth) spec.depth = *flags.depth;
        json identity{{"config", cfg.echo},
                      {"kind", spec.kind},
                      {"degrees", {spec.degrees.lo, spec.degrees.hi}},
                      {"weights", {spec.weights.lo, spec.weights.hi}},
                      {"depth", spec.depth},
                      {"classes", spec.classes}};
        std::string key = cache.key_for(identity);
        auto cached = cache.load(key);
        auto t0 = std::chrono::steady_clock::now();
        json result;
        if (cached) {
            result = *cached;
        } else {
            try {
                if (spec.kind == "hh")
                    result = run_homology(cfg, spec, false);
                else if (spec.kind == "hc")
                    result = run_homology(cfg, spec, true);
                else if (spec.kind == "hp")
                    result = run_periodic(cfg, spec);
                else if (spec.kind == "twisted")
                    result = run_twisted(cfg, spec);
                else if (spec.kind == "spectral")
                    result = run_spectral(cfg, spec);
                else if (spec.kind == "verify")
                    result = json{{"kind", "verify"},
                                  {"checks", checks_json(verify::run_all(verify::Window::quick()))}};
            } catch (const std::exception& e) {
                // computation errors are per-request; siblings still run
                result = json{{"kind", "error"}, {"request", spec.kind}, {"message", e.what()}};
            }
            if (result.value("kind", "") != "error") cache.store(key, result);
        }
        auto t1 = std::chrono::steady_clock::now();
        std::cerr << "request " << spec.kind << ": "
                  << std::chrono::duration<double>(t1 - t0).count() << "s"
                  << (cached ? " (cache hit)" : "") << "\n";
        if (result.value("kind", "") == "error") ++failures;
        if (result.contains("checks"))
            for (const auto& c : result["checks"])
                if (!c.value("pass", false)) ++failures;
        if (result.value("e1_matches_invariant_forms", true) == false) ++failures;
        if (result.value("d2_zero", true) == false) ++failures;
        results.push_back(result);
    }
    json report{{"schema", kReportSchema},
                {"engine", kEngineVersion},
                {"config", cfg.echo},
                {"results", results},
                {"summary", {{"requests", results.size()}, {"failures", failures}}}};
    emit_report(report, flags.out_path);
    return failures == 0 ? 0 : 1;
}

int run_verify(const Flags& flags, bool symplectic_only) {
    verify::Window win = verify::Window::quick();
    if (flags.max_weight) {
        win.c1_wmax = std::min(win.c1_wmax, *flags.max_weight);
        win.c2_wmax = std::min(win.c2_wmax, *flags.max_weight);
        win.c3_wmax = std::min(win.c3_wmax, *flags.max_weight);
        win.c4_wmax = std::min(win.c4_wmax, *flags.max_weight);
        win.c5_wmax = std::min(win.c5_wmax, *flags.max_weight);
        win.c6_wmax = std::min(win.c6_wmax, *flags.max_weight);
        win.c8_wmax = std::min(win.c8_wmax, *flags.max_weight);
        win.c9_wmax = std::min(win.c9_wmax, *flags.max_weight);
        win.c11_wmax_graded = std::min(win.c11_wmax_graded, *flags.max_weight);
    }
    if (flags.max_degree) {
        win.c1_kmax = static_cast<int>(std::min<long>(win.c1_kmax, *flags.max_degree));
        win.c2_kmax = static_cast<int>(std::min<long>(win.c2_kmax, *flags.max_degree));
        win.c3_kmax = static_cast<int>(std::min<long>(win.c3_kmax, *flags.max_degree));
        win.c4_kmax = static_cast<int>(std::min<long>(win.c4_kmax, *flags.max_degree));
        win.c9_kmax = static_cast<int>(std::min<long>(win.c9_kmax, *flags.max_degree));
        win.c10_kmax = static_cast<int>(std::min<long>(win.c10_kmax, *flags.max_degree));
        win.c11_kmax_graded = static_cast<int>(std::min<long>(win.c11_kmax_graded, *flags.max_degree));
    }
    if (flags.depth) {
        win.c10_plain_depth = *flags.depth;
        win.c10_crossed_depth = *flags.depth;
    }
    Cache cache(flags.cache_dir);
    json win_id{{"c1", {win.c1_kmax, win.c1_wmax, win.c1_cap}},
                {"c2", {win.c2_kmax, win.c2_wmax, win.c2_cap}},
                {"c3", {win.c3_nmax, win.c3_kmax, win.c3_wmax}},
                {"c4", {win.c4_kmax, win.c4_wmax}},
                {"c5", {win.c5_nmax, win.c5_wmax}},
                {"c6", {win.c6_nmax, win.c6_wmax}},
                {"c8", {win.c8_wmax, win.c8_form_mass}},
                {"c9", {win.c9_wmax, win.c9_kmax}},
                {"c10", {win.c10_kmax, win.c10_plain_depth, win.c10_crossed_depth}},
                {"c11", {win.c11_kmax_graded, win.c11_wmax_graded, win.c11_wmax_crossed,
                         win.c11_deep}},
                {"symplectic_only", symplectic_only}};
    using Check = verify::CheckResult (*)(const verify::Window&);
    std::vector<std::pair<std::string, Check>> battery;
    if (symplectic_only) {
        battery = {{"star", verify::check_star}, {"euler", verify::check_euler}};
    } else {
        battery = {{"simplicial", verify::check_simplicial},
                   {"comparison", verify::check_comparison},
                   {"hkr", verify::check_hkr},
                   {"twisted", verify::check_twisted_pipelines},
                   {"koszul", verify::check_koszul},
                   {"star", verify::check_star},
                   {"euler", verify::check_euler},
                   {"first_page", verify::check_first_page},
                   {"degeneration", verify::check_degeneration},
                   {"weyl_homology", verify::check_weyl_homology},
                   {"cyclic_sums", verify::check_cyclic_sums}};
    }
    json checks = json::array();
    int failures = 0;
    for (const auto& [label, fn] : battery) {
        json identity{{"window", win_id}, {"check", label}};
        std::string key = cache.key_for(identity);
        auto cached = cache.load(key);
        auto t0 = std::chrono::steady_clock::now();
        json entry;
        if (cached) {
            entry = *cached;
        } else {
            verify::CheckResult r = fn(win);
            entry = json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
            if (r.pass) cache.store(key, entry);
        }
        auto t1 = std::chrono::steady_clock::now();
        std::cerr << "check " << label << ": " << std::chrono::duration<double>(t1 - t0).count()
                  << "s" << (cached ? " (cache hit)" : "") << "\n";
        if (!entry.value("pass", false)) ++failures;
        checks.push_back(entry);
    }
    json report{{"schema", kReportSchema},
                {"engine", kEngineVersion},
                {"mode", symplectic_only ? "verify symplectic" : "verify"},
                {"checks", checks},
                {"summary", {{"checks", checks.size()}, {"failures", failures}}}};
    emit_report(report, flags.out_path);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-rational homology engine for crossed products"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", flags.config_path, "problem config JSON");
        if (needs_config) opt->required();
        sub->add_option("--out", flags.out_path, "write the report here instead of stdout");
        sub->add_option("--cache", flags.cache_dir, "cache directory");
        sub->add_option("--jobs", flags.jobs, "worker count (validated; execution is sequential)")
            ->check(CLI::PositiveNumber);
        sub->add_option_function<long>("--max-weight", [&](long v) { flags.max_weight = v; },
                                       "clamp the weight window");
        sub->add_option_function<long>("--max-degree", [&](long v) { flags.max_degree = v; },
                                       "clamp the homological degree window");
        sub->add_option_function<int>("--depth", [&](int v) { flags.depth = v; },
                                      "filtration depth / level cap");
    };

    std::string verify_what;
    CLI::App* hh = app.add_subcommand("hh", "Hochschild homology tables");
    CLI::App* hc = app.add_subcommand("hc", "cyclic homology tables");
    CLI::App* tw = app.add_subcommand("twisted", "twisted complex homology tables");
    CLI::App* sp = app.add_subcommand("spectral", "filtration spectral sequence pages");
    CLI::App* ve = app.add_subcommand("verify", "run the verification battery");
    for (CLI::App* sub : {hh, hc, tw, sp}) add_common(sub, true);
    add_common(ve, false);
    ve->add_option("what", verify_what, "optional sub-battery (symplectic)")
        ->check(CLI::IsMember({"symplectic"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (ve->parsed()) return run_verify(flags, verify_what == "symplectic");
        std::string kind;
        if (hh->parsed()) kind = "hh";
        if (hc->parsed()) kind = "hc";
        if (tw->parsed()) kind = "twisted";
        if (sp->parsed()) kind = "spectral";
        return run_requests(flags, kind);
    } catch (const ConfigError& e) {
        std::cerr << "ConfigError: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
