// Command line front end: single-instance reports (filtration, verify, jets)
// and batch scans with an on-disk cache.
//
// Exit codes: 0 = all guaranteed-range verdicts pass, 1 = a guaranteed-range
// failure, 2 = usage or resource error.

#include "liejet/driver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    int N = 0;
    std::string d_str, l_str;
    int kmax = -1;
    std::string format = "json";
    std::string output;
    std::string instance_file;
    liejet::Caps caps;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--N", a.N, "ambient dimension N of sl_N");
    cmd->add_option("--d", a.d_str, "flag type as comma list, e.g. 1,1,2");
    cmd->add_option("--l", a.l_str, "weight coefficients as comma list, e.g. 2,1");
    cmd->add_option("--kmax", a.kmax, "largest filtration degree to report");
    cmd->add_option("--format", a.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("-o,--output", a.output, "write the report to a file instead of stdout");
    cmd->add_option("--instance", a.instance_file,
                    "key=value instance file; explicit flags override file values");
    cmd->add_option("--max-ambient-dim", a.caps.max_ambient_dim,
                    "reject instances whose tensor space exceeds this dimension");
    cmd->add_option("--max-env-degree", a.caps.max_env_degree,
                    "degree cap for enveloping-algebra normal forms");
    cmd->add_option("--max-env-span-dim", a.caps.max_env_span_dim,
                    "skip enveloping-side spans above this coordinate dimension");
    cmd->add_flag("--timings", a.timings,
                  "include wall-clock timings in the report (breaks byte-for-byte "
                  "reproducibility)");
}

liejet::InstanceSpec build_spec(const CommonArgs& a, const CLI::App* cmd) {
    liejet::InstanceSpec spec;
    spec.caps = a.caps;
    if (!a.instance_file.empty())
        liejet::apply_key_values(spec, liejet::read_key_value_file(a.instance_file));
    if (cmd->count("--N")) spec.N = a.N;
    if (cmd->count("--d")) spec.d = liejet::parse_int_list(a.d_str);
    if (cmd->count("--l")) spec.l = liejet::parse_long_list(a.l_str);
    if (cmd->count("--kmax")) spec.kmax = a.kmax;
    if (spec.N == 0 && !spec.d.empty()) {
        int sum = 0;
        for (int di : spec.d) sum += di;
        spec.N = sum;
    }
    auto errs = spec.validate();
    if (!errs.empty()) {
        std::string msg = "invalid instance:";
        for (const auto& e : errs) msg += " " + e + ";";
        throw std::invalid_argument(msg);
    }
    return spec;
}

int emit(const liejet::json& report, const CommonArgs& a) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "error: cannot open output file " << a.output << "\n";
            return 2;
        }
        out = &file;
    }
    if (a.format == "csv") {
        *out << liejet::kCsvHeader << '\n';
        liejet::write_csv_rows(report, *out);
    } else {
        *out << report.dump(2) << '\n';
    }
    return liejet::exit_code_from(report);
}

int run_single(const CommonArgs& a, const CLI::App* cmd, const liejet::RunOptions& opt) {
    liejet::InstanceSpec spec = build_spec(a, cmd);
    liejet::RunOptions o = opt;
    o.with_timings = a.timings;
    liejet::json report = liejet::run_instance(spec, o);
    return emit(report, a);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of canonical filtrations, annihilator ideals and jet "
                 "fiber ranks for irreducible sl_N modules"};
    app.require_subcommand(1);

    CommonArgs fa, va, ja;
    CLI::App* filtration = app.add_subcommand(
        "filtration", "filtration dimensions, PBW counts and annihilator dimensions");
    add_common(filtration, fa);
    CLI::App* verify = app.add_subcommand(
        "verify", "full verification: filtration, decomposition, annihilators, jets");
    add_common(verify, va);
    CLI::App* jets =
        app.add_subcommand("jets", "big-cell Taylor expansion ranks and weight data");
    add_common(jets, ja);

    CLI::App* scan = app.add_subcommand("scan", "batch verification sweep, CSV output");
    int n_min = 2, n_max = 3, s_kmax = -1;
    long l_min = 1, l_max = 2;
    std::string s_d, s_output, cache_dir;
    liejet::Caps s_caps;
    scan->add_option("--N-min", n_min, "smallest N");
    scan->add_option("--N-max", n_max, "largest N");
    scan->add_option("--l-min", l_min, "smallest weight coefficient");
    scan->add_option("--l-max", l_max, "largest weight coefficient");
    scan->add_option("--d", s_d, "restrict to one flag type (comma list)");
    scan->add_option("--kmax", s_kmax, "largest filtration degree per instance");
    scan->add_option("-o,--output", s_output, "write CSV to a file instead of stdout");
    scan->add_option("--cache-dir", cache_dir, "directory for resumable per-instance cache")
        ->envname("LIEJET_CACHE_DIR");
    scan->add_option("--max-ambient-dim", s_caps.max_ambient_dim, "tensor space cap");
    scan->add_option("--max-env-degree", s_caps.max_env_degree, "enveloping degree cap");
    scan->add_option("--max-env-span-dim", s_caps.max_env_span_dim, "enveloping span cap");
    int s_jobs = 0;
    scan->add_option("--jobs", s_jobs, "worker threads for instance computation (0 = auto)");

    try {
        app.parse(argc, argv);

        if (filtration->parsed()) {
            liejet::RunOptions opt;
            opt.command = "filtration";
            opt.with_jets = false;
            return run_single(fa, filtration, opt);
        }
        if (verify->parsed()) {
            liejet::RunOptions opt;
            opt.command = "verify";
            return run_single(va, verify, opt);
        }
        if (jets->parsed()) {
            liejet::RunOptions opt;
            opt.command = "jets";
            opt.with_env = false;
            return run_single(ja, jets, opt);
        }
        if (scan->parsed()) {
            liejet::ScanSpec s;
            s.N_min = n_min;
            s.N_max = n_max;
            s.l_min = l_min;
            s.l_max = l_max;
            s.kmax = s_kmax;
            s.caps = s_caps;
            s.cache_dir = cache_dir;
            s.jobs = s_jobs;
            if (!s_d.empty()) s.only_d = liejet::parse_int_list(s_d);
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!s_output.empty()) {
                file.open(s_output, std::ios::binary | std::ios::trunc);
                if (!file) {
                    std::cerr << "error: cannot open output file " << s_output << "\n";
                    return 2;
                }
                out = &file;
            }
            return liejet::run_scan(s, *out, std::cerr);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const liejet::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
