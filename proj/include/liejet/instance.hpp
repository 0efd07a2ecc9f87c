#pragma once

#include "liejet/rational.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace liejet {

struct Caps {
    std::int64_t max_ambient_dim = 200000;
    int max_env_degree = 6;
    std::int64_t max_env_span_dim = 512;
};

// A single problem instance: sl_N, flag type d, weight coefficients l, and
// the filtration depth to report.
struct InstanceSpec {
    int N = 0;
    std::vector<int> d;
    std::vector<long> l;
    int kmax = -1;  // -1: up to max(N(lambda), min l + 1)
    Caps caps;

    std::vector<std::string> validate() const {
        std::vector<std::string> errs;
        if (N < 2) errs.push_back("N must be >= 2");
        if (d.size() < 2) errs.push_back("d must have at least 2 parts");
        long sum = 0;
        for (int di : d) {
            if (di < 1) errs.push_back("every d_i must be >= 1");
            sum += di;
        }
        if (!d.empty() && sum != N) errs.push_back("sum of d must equal N");
        if (l.size() + 1 != d.size()) errs.push_back("l must have |d| - 1 entries");
        for (long li : l)
            if (li < 0) errs.push_back("every l_i must be >= 0");
        if (kmax != -1 && kmax < 1) errs.push_back("kmax must be >= 1");
        return errs;
    }

    long min_l() const {
        long m = l.empty() ? 0 : l.front();
        for (long x : l) m = std::min(m, x);
        return m;
    }

    std::string label() const {
        std::ostringstream os;
        os << "N=" << N << " d=" << join(d) << " l=" << join(l);
        return os.str();
    }

    // Canonical encoding used for cache keys; includes everything that can
    // change the report.
    std::string canonical_string(const std::string& schema_version) const {
        std::ostringstream os;
        os << "schema=" << schema_version << ";N=" << N << ";d=" << join(d) << ";l=" << join(l)
           << ";kmax=" << kmax << ";max_ambient_dim=" << caps.max_ambient_dim
           << ";max_env_degree=" << caps.max_env_degree
           << ";max_env_span_dim=" << caps.max_env_span_dim;
        return os.str();
    }

    template <typename T>
    static std::string join(const std::vector<T>& v) {
        std::ostringstream os;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << v[i];
        }
        return os.str();
    }
};

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty entry in list '" + s + "'");
        out.push_back(std::stoi(tok));
    }
    return out;
}

inline std::vector<long> parse_long_list(const std::string& s) {
    std::vector<long> out;
    for (int x : parse_int_list(s)) out.push_back(x);
    return out;
}

// key=value instance file; '#' starts a comment. Recognized keys:
// N, d, l, kmax, max_ambient_dim, max_env_degree, max_env_span_dim.
inline std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open instance file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("instance file line is not key=value: " + line);
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return kv;
}

inline void apply_key_values(InstanceSpec& spec, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "N")
            spec.N = std::stoi(value);
        else if (key == "d")
            spec.d = parse_int_list(value);
        else if (key == "l")
            spec.l = parse_long_list(value);
        else if (key == "kmax")
            spec.kmax = std::stoi(value);
        else if (key == "max_ambient_dim")
            spec.caps.max_ambient_dim = std::stoll(value);
        else if (key == "max_env_degree")
            spec.caps.max_env_degree = std::stoi(value);
        else if (key == "max_env_span_dim")
            spec.caps.max_env_span_dim = std::stoll(value);
        else
            throw std::invalid_argument("unknown instance file key: " + key);
    }
}

// All compositions of N with at least two parts, lexicographic.
inline std::vector<std::vector<int>> flag_compositions(int N) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    struct Rec {
        int N;
        std::vector<std::vector<int>>& out;
        void go(int remaining, std::vector<int>& cur) {
            if (remaining == 0) {
                if (cur.size() >= 2) out.push_back(cur);
                return;
            }
            for (int p = 1; p <= remaining; ++p) {
                cur.push_back(p);
                go(remaining - p, cur);
                cur.pop_back();
            }
        }
    } rec{N, out};
    rec.go(N, cur);
    return out;
}

// The desk-scale verification sweep: every flag type for N in [N_min, N_max]
// and every weight with l_min <= l_i <= l_max.
inline std::vector<InstanceSpec> sweep_instances(int N_min, int N_max, long l_min, long l_max,
                                                 const Caps& caps = {}) {
    std::vector<InstanceSpec> out;
    for (int N = N_min; N <= N_max; ++N) {
        for (const auto& d : flag_compositions(N)) {
            std::size_t k = d.size() - 1;
            std::vector<long> l(k, l_min);
            while (true) {
                InstanceSpec spec;
                spec.N = N;
                spec.d = d;
                spec.l = l;
                spec.caps = caps;
                out.push_back(spec);
                std::size_t i = 0;
                while (i < k && l[i] == l_max) {
                    l[i] = l_min;
                    ++i;
                }
                if (i == k) break;
                ++l[i];
            }
        }
    }
    return out;
}

}  // namespace liejet
