#pragma once

#include "liejet/enveloping.hpp"
#include "liejet/filtration.hpp"
#include "liejet/instance.hpp"
#include "liejet/jets.hpp"
#include "liejet/lie.hpp"
#include "liejet/tensor_module.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace liejet {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

struct RunOptions {
    bool with_env = true;   // enveloping-side spans and comparisons
    bool with_jets = true;  // big-cell Taylor oracle
    bool with_timings = false;
    std::string command = "verify";
};

namespace detail {

inline std::string join_plus(const json& arr) {
    std::string s;
    for (const auto& x : arr) {
        if (!s.empty()) s += '+';
        s += x.dump();
    }
    return s;
}

inline json weight_multiset_json(const std::map<std::vector<long>, std::int64_t>& m) {
    json arr = json::array();
    for (const auto& [w, r] : m) {
        json row;
        row["weight"] = w;
        row["dim"] = r;
        arr.push_back(row);
    }
    return arr;
}

inline void add_verdict(json& verdicts, const std::string& theorem, int k,
                        const std::string& status, const std::string& detail) {
    json v;
    v["theorem"] = theorem;
    if (k >= 0) v["k"] = k;
    v["status"] = status;
    v["detail"] = detail;
    verdicts.push_back(v);
}

}  // namespace detail

// Runs one instance end to end and returns the schema-versioned report.
// Throws std::invalid_argument on a malformed spec and ResourceError when a
// cap is exceeded; both map to exit code 2 at the CLI.
inline json run_instance(const InstanceSpec& spec, const RunOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    {
        auto errs = spec.validate();
        if (!errs.empty()) {
            std::string msg = "invalid instance:";
            for (const auto& e : errs) msg += " " + e + ";";
            throw std::invalid_argument(msg);
        }
    }
    FlagType flag(spec.d);
    Weight wt(spec.l);
    const long min_l = spec.min_l();

    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = opt.command;
    report["instance"] = {{"N", spec.N}, {"d", spec.d}, {"l", spec.l}, {"kmax", spec.kmax}};
    report["caps"] = {{"max_ambient_dim", spec.caps.max_ambient_dim},
                      {"max_env_degree", spec.caps.max_env_degree},
                      {"max_env_span_dim", spec.caps.max_env_span_dim}};
    json warnings = json::array();
    if (min_l < 1)
        warnings.push_back(
            "some l_i = 0: the stabilizer of the highest weight line may strictly contain "
            "the parabolic; geometric (jet) checks are skipped");

    Module mod = generate_module(flag, wt, spec.caps.max_ambient_dim);
    ModuleActions act(mod);
    Int weyl = weyl_dimension(flag, wt);
    const std::int64_t D = mod.par.D();
    const int dim_g = mod.par.dim_g();
    const int n_lambda = mod.n_lambda;
    const int k_user = spec.kmax == -1 ? std::max<int>(n_lambda, static_cast<int>(min_l) + 1)
                                       : spec.kmax;
    const int k_report = std::max<int>(k_user, static_cast<int>(min_l) + 1);

    report["sizes"] = {{"D", D},
                       {"dim_g", dim_g},
                       {"ambient_dim", mod.space.dim()},
                       {"module_dim", mod.dim()},
                       {"weyl_dim", weyl.fits_slong_p() ? json(weyl.get_si()) : json(weyl.get_str())},
                       {"n_lambda", n_lambda},
                       {"min_l", min_l},
                       {"k_report", k_report}};

    std::optional<EnvAlgebra> alg;
    if (opt.with_env) alg.emplace(mod.par, spec.caps.max_env_degree);

    json verdicts = json::array();

    // --- filtration rows ---------------------------------------------------
    json rows = json::array();
    for (int k = 0; k <= k_report; ++k) {
        json row;
        row["k"] = k;
        const std::int64_t dim = filtration_dim(mod, k);
        const std::int64_t formula = binomial_i64(static_cast<long>(D) + k, k);
        row["dim"] = dim;
        row["formula"] = formula;
        row["formula_matches"] = (dim == formula);
        row["pbw_independent"] = (dim == formula);
        std::string range = k == 0                 ? "base"
                            : k <= min_l           ? "guaranteed"
                            : k == min_l + 1       ? "boundary"
                                                   : "beyond";
        row["range"] = range;
        if (range == "boundary" && dim != formula)
            row["note"] = "formula mismatch (informational)";

        AnnihilatorDims ann = annihilator_dimensions(mod, act, alg ? &*alg : nullptr, k,
                                                     spec.caps.max_env_span_dim);
        row["env_dim"] = ann.env_dim;
        row["ann_dim"] = ann.ann_dim;
        if (ann.char_rank) row["char_rank"] = *ann.char_rank;
        if (ann.dixmier_rank) row["dixmier_rank"] = *ann.dixmier_rank;
        if (ann.dixmier_equals_char) row["dixmier_equals_char"] = *ann.dixmier_equals_char;
        if (ann.ann_equals_char) row["ann_equals_char"] = *ann.ann_equals_char;

        if (alg && k >= 1 && k <= spec.caps.max_env_degree &&
            binomial_i64(dim_g + k, k) <= spec.caps.max_env_span_dim) {
            DecompositionCheck dc = check_decomposition(*alg, wt, k);
            row["decomposition"] = dc.holds;
            row["decomposition_ranks"] = {dc.rank_n_minus, dc.rank_char, dc.total};
        }
        rows.push_back(row);
    }
    report["filtration"] = rows;

    // --- jet oracle rows ----------------------------------------------------
    std::optional<BigCellExpansion> exp;
    if (opt.with_jets && min_l >= 1 && flag.steps() >= 1) {
        const int jet_cap = std::max(1, std::min(k_report, n_lambda));
        exp.emplace(mod, jet_cap, /*keep_coefficients=*/false);
        json jets = json::array();
        for (int k = 0; k <= jet_cap; ++k) {
            json row;
            row["k"] = k;
            row["rank"] = exp->rank_at(k);
            row["matches_filtration"] = (exp->rank_at(k) == filtration_dim(mod, k));
            if (k <= min_l) {
                bool wm = exp->weight_multiset_at(k) == filtration_weight_multiset(mod, k);
                row["weights_match"] = wm;
            }
            row["vanishing_dim"] = mod.dim() - exp->rank_at(k);
            jets.push_back(row);
        }
        report["jets"] = jets;
    }

    // --- verdicts ------------------------------------------------------------
    for (int k = 1; k <= k_report; ++k) {
        const std::int64_t dim = filtration_dim(mod, k);
        const std::int64_t formula = binomial_i64(static_cast<long>(D) + k, k);
        std::ostringstream os;
        os << "dim=" << dim << " formula=" << formula;
        if (k <= min_l) {
            detail::add_verdict(verdicts, "dimension-formula", k,
                                dim == formula ? "pass" : "fail", os.str());
        } else if (k == min_l + 1) {
            os << (dim == formula ? " (boundary probe: matches)"
                                  : " formula mismatch (informational)");
            detail::add_verdict(verdicts, "dimension-formula", k, "informational", os.str());
        } else {
            detail::add_verdict(verdicts, "dimension-formula", k, "out-of-range", os.str());
        }
    }

    // Cross-check that monomials in the full basis span no more than the
    // n_- monomials do; gated to small algebras and low degree.
    if (dim_g <= 15) {
        for (int k = 1; k <= std::min(3, k_report); ++k) {
            std::int64_t full = full_basis_span_dim(mod, act, k);
            std::ostringstream os;
            os << "full-basis span=" << full << " n_minus span=" << filtration_dim(mod, k);
            detail::add_verdict(verdicts, "pbw-factorization", k,
                                full == filtration_dim(mod, k) ? "pass" : "fail", os.str());
        }
    }

    // Exact independence of the PBW images, enumerated monomial by monomial.
    for (int k = 1; k <= std::min<int>(k_report, static_cast<int>(min_l)); ++k) {
        if (binomial(static_cast<long>(D) + k, k) > 20000) {
            detail::add_verdict(verdicts, "pbw-basis", k, "out-of-range",
                                "image count above enumeration limit");
            continue;
        }
        PBWImageSet imgs = pbw_basis_vectors(mod, act, k);
        std::ostringstream os;
        os << "count=" << imgs.count << " rank=" << imgs.rank;
        detail::add_verdict(verdicts, "pbw-basis", k, imgs.independent ? "pass" : "fail",
                            os.str());
    }

    for (int k = 1; k <= k_report; ++k) {
        const json& row = rows[static_cast<std::size_t>(k)];
        if (row.contains("decomposition")) {
            std::ostringstream os;
            os << "ranks " << row["decomposition_ranks"][0] << "+" << row["decomposition_ranks"][1]
               << " of " << row["decomposition_ranks"][2];
            detail::add_verdict(verdicts, "decomposition", k,
                                row["decomposition"].get<bool>() ? "pass" : "fail", os.str());
        } else if (alg) {
            detail::add_verdict(verdicts, "decomposition", k, "out-of-range",
                                "enveloping span above resource cap");
        }
        if (row.contains("dixmier_equals_char")) {
            bool ok = row["dixmier_equals_char"].get<bool>() && row["ann_equals_char"].get<bool>();
            std::ostringstream os;
            os << "char_rank=" << row["char_rank"] << " dixmier_rank=" << row["dixmier_rank"]
               << " ann_dim=" << row["ann_dim"];
            if (k <= min_l)
                detail::add_verdict(verdicts, "annihilator-equality", k, ok ? "pass" : "fail",
                                    os.str());
            else
                detail::add_verdict(verdicts, "annihilator-equality", k, "informational",
                                    os.str() + (ok ? " (still equal)" : " (ideals differ)"));
        } else if (alg) {
            detail::add_verdict(verdicts, "annihilator-equality", k, "out-of-range",
                                "enveloping span above resource cap");
        }
    }

    if (exp) {
        for (int k = 1; k <= exp->degree_cap(); ++k) {
            bool ok = exp->rank_at(k) == filtration_dim(mod, k);
            std::ostringstream os;
            os << "taylor_rank=" << exp->rank_at(k) << " dim=" << filtration_dim(mod, k);
            detail::add_verdict(verdicts, "jet-dimension", k, ok ? "pass" : "fail", os.str());
            if (k <= min_l) {
                bool wm = exp->weight_multiset_at(k) == filtration_weight_multiset(mod, k);
                detail::add_verdict(verdicts, "jet-weights", k, wm ? "pass" : "fail",
                                    wm ? "weight multisets agree" : "weight multisets differ");
            }
        }
    } else if (opt.with_jets) {
        detail::add_verdict(verdicts, "jet-dimension", -1, "out-of-range",
                            "requires l_i >= 1 for all i");
    }

    {
        bool ok = weyl.fits_slong_p() && mod.dim() == weyl.get_si();
        std::ostringstream os;
        os << "generated=" << mod.dim() << " weyl=" << weyl.get_str();
        detail::add_verdict(verdicts, "weyl-dimension", -1, ok ? "pass" : "fail", os.str());
    }

    if (flag.steps() >= 1 && wt.l.back() != 0) {
        LieElement x = splitting_element(flag, wt);
        RatVec xv = ambient_action(mod.space, x, mod.hwv);
        bool ok = xv == scaled(mod.hwv, Rat(wt.l.back()));
        std::ostringstream os;
        os << "x(v) = " << wt.l.back() << " v";
        detail::add_verdict(verdicts, "splitting-element", -1, ok ? "pass" : "fail", os.str());
    } else {
        detail::add_verdict(verdicts, "splitting-element", -1, "out-of-range",
                            "degenerate character (l_k = 0)");
    }

    {
        bool ok = true;
        std::ostringstream os;
        for (int i = 0; i < spec.N - 1 && ok; ++i) {
            long m = m_beta(flag, wt, i);
            if (m != wt.on_cartan(flag, i) + 1) ok = false;
            // minimality of the killing power on the module side
            RatVec w = mod.hwv;
            const LieElement f = LieElement::matrix_unit(spec.N, i + 1, i);
            for (long r = 0; r < m - 1; ++r) w = ambient_action(mod.space, f, w);
            if (w.is_zero()) ok = false;
            w = ambient_action(mod.space, f, w);
            if (!w.is_zero()) ok = false;
            os << "m_" << (i + 1) << "=" << m << " ";
        }
        detail::add_verdict(verdicts, "m-beta", -1, ok ? "pass" : "fail", os.str());
    }

    report["verdicts"] = verdicts;
    report["warnings"] = warnings;

    if (opt.with_timings) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        report["timings"] = {{"total_ms", ms}};
    }
    return report;
}

inline int exit_code_from(const json& report) {
    for (const auto& v : report["verdicts"])
        if (v["status"] == "fail") return 1;
    return 0;
}

// --- CSV emission -----------------------------------------------------------

inline const char* kCsvHeader =
    "N,d,l,k,D,dim_g,ambient_dim,module_dim,n_lambda,dim,formula,formula_matches,"
    "pbw_independent,jet_rank,jet_matches,ann_dim,char_rank,dixmier_equals_char,"
    "decomposition,range,status";

inline void write_csv_rows(const json& report, std::ostream& out) {
    const json& inst = report["instance"];
    const json& sizes = report["sizes"];
    std::map<int, json> jets;
    if (report.contains("jets"))
        for (const auto& j : report["jets"]) jets[j["k"].get<int>()] = j;

    // worst verdict status at each k
    std::map<int, int> severity;  // 0 pass, 1 informational, 2 fail
    for (const auto& v : report["verdicts"]) {
        if (!v.contains("k")) continue;
        int k = v["k"].get<int>();
        int s = v["status"] == "fail"            ? 2
                : v["status"] == "informational" ? 1
                                                 : 0;
        auto it = severity.find(k);
        if (it == severity.end() || s > it->second) severity[k] = s;
    }

    for (const auto& row : report["filtration"]) {
        int k = row["k"].get<int>();
        out << inst["N"] << ',' << detail::join_plus(inst["d"]) << ','
            << detail::join_plus(inst["l"]) << ',' << k << ',' << sizes["D"] << ','
            << sizes["dim_g"] << ',' << sizes["ambient_dim"] << ',' << sizes["module_dim"] << ','
            << sizes["n_lambda"] << ',' << row["dim"] << ',' << row["formula"] << ','
            << (row["formula_matches"].get<bool>() ? "1" : "0") << ','
            << (row["pbw_independent"].get<bool>() ? "1" : "0") << ',';
        auto jt = jets.find(k);
        if (jt != jets.end())
            out << jt->second["rank"] << ','
                << (jt->second["matches_filtration"].get<bool>() ? "1" : "0") << ',';
        else
            out << ",,";
        out << row["ann_dim"] << ',';
        out << (row.contains("char_rank") ? row["char_rank"].dump() : "") << ',';
        out << (row.contains("dixmier_equals_char")
                    ? (row["dixmier_equals_char"].get<bool>() ? "1" : "0")
                    : "")
            << ',';
        out << (row.contains("decomposition") ? (row["decomposition"].get<bool>() ? "1" : "0")
                                              : "")
            << ',';
        out << row["range"].get<std::string>() << ',';
        auto sv = severity.find(k);
        std::string status = k == 0 ? "pass"
                             : sv == severity.end()
                                 ? "pass"
                                 : (sv->second == 2   ? "fail"
                                    : sv->second == 1 ? "informational"
                                                      : "pass");
        out << status << '\n';
    }
}

// --- scan with on-disk cache --------------------------------------------------

struct ScanSpec {
    int N_min = 2;
    int N_max = 3;
    long l_min = 1;
    long l_max = 2;
    int kmax = -1;
    Caps caps;
    std::string cache_dir;                  // empty: caching disabled
    std::optional<std::vector<int>> only_d;  // restrict to one composition
    int jobs = 0;                            // 0: one worker per hardware thread
};

struct ScanStats {
    int hits = 0;
    int misses = 0;
    int failures = 0;
};

inline std::string cache_key(const InstanceSpec& spec) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a64(spec.canonical_string(kSchemaVersion))));
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& data) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << data;
    }
    std::filesystem::rename(tmp, path);
}

// Rows are computed by a worker pool over instances; assembly stays
// single-threaded in enumeration order, so the CSV is identical to a
// sequential run. Cache files are written atomically per instance.
inline int run_scan(const ScanSpec& scan, std::ostream& csv, std::ostream& diag,
                    ScanStats* stats_out = nullptr) {
    ScanStats stats;
    csv << kCsvHeader << '\n';
    std::vector<InstanceSpec> instances;
    for (auto& spec : sweep_instances(scan.N_min, scan.N_max, scan.l_min, scan.l_max, scan.caps)) {
        spec.kmax = scan.kmax;
        if (scan.only_d && spec.d != *scan.only_d) continue;
        instances.push_back(std::move(spec));
    }
    if (!scan.cache_dir.empty()) std::filesystem::create_directories(scan.cache_dir);

    struct Outcome {
        json report;
        bool cached = false;
    };
    auto work = [&](const InstanceSpec& spec) {
        Outcome out;
        std::filesystem::path file;
        if (!scan.cache_dir.empty()) {
            file = std::filesystem::path(scan.cache_dir) / (cache_key(spec) + ".json");
            if (std::filesystem::exists(file)) {
                std::ifstream in(file);
                out.report = json::parse(in);
                out.cached = true;
                return out;
            }
        }
        RunOptions opt;
        opt.command = "verify";
        out.report = run_instance(spec, opt);
        if (!scan.cache_dir.empty()) atomic_write(file, out.report.dump(2) + "\n");
        return out;
    };

    unsigned jobs = scan.jobs > 0 ? static_cast<unsigned>(scan.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(instances.size(), 1));

    std::vector<Outcome> outcomes(instances.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < instances.size(); ++i) outcomes[i] = work(instances[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::mutex fail_mutex;
        std::exception_ptr first_error;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= instances.size()) return;
                    try {
                        outcomes[i] = work(instances[i]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(fail_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (const auto& out : outcomes) {
        out.cached ? ++stats.hits : ++stats.misses;
        if (exit_code_from(out.report) != 0) ++stats.failures;
        write_csv_rows(out.report, csv);
    }
    diag << "scan: " << stats.hits << " cache hits, " << stats.misses << " computed, "
         << stats.failures << " instances with guaranteed-range failures\n";
    if (stats_out) *stats_out = stats;
    return stats.failures == 0 ? 0 : 1;
}

}  // namespace liejet
