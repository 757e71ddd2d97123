#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stripspec/assemble.hpp"
#include "stripspec/curvature.hpp"
#include "stripspec/errors.hpp"
#include "stripspec/transverse.hpp"

namespace stripspec {

/// Plain-text "key = value" file with [section] headers and # comments.
struct ConfigFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    static ConfigFile parse(std::istream& in) {
        ConfigFile cf;
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                cf.sections[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
            if (cf.sections[section].count(key))
                throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
            cf.sections[section][key] = val;
        }
        return cf;
    }

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in.is_open()) throw ConfigError("cannot open config file: " + path);
        return parse(in);
    }
};

namespace detail {

inline double parse_num(const std::string& v, const std::string& what) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a number: " + v);
    }
    if (pos != v.size()) throw ConfigError(what + ": trailing characters in number: " + v);
    return out;
}

inline long parse_int(const std::string& v, const std::string& what) {
    std::size_t pos = 0;
    long out;
    try {
        out = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not an integer: " + v);
    }
    if (pos != v.size()) throw ConfigError(what + ": trailing characters in integer: " + v);
    return out;
}

class SectionReader {
  public:
    SectionReader(const ConfigFile& cf, const std::string& name) : name_(name) {
        auto it = cf.sections.find(name);
        if (it != cf.sections.end()) kv_ = &it->second;
    }

    bool exists() const { return kv_ != nullptr; }
    bool has(const std::string& key) const { return kv_ && kv_->count(key); }

    std::string str(const std::string& key) {
        used_.insert(key);
        if (!has(key)) throw ConfigError("[" + name_ + "] missing key: " + key);
        return kv_->at(key);
    }
    std::string str_or(const std::string& key, const std::string& dflt) {
        used_.insert(key);
        return has(key) ? kv_->at(key) : dflt;
    }
    double num(const std::string& key) { return parse_num(str(key), "[" + name_ + "] " + key); }
    double num_or(const std::string& key, double dflt) {
        used_.insert(key);
        return has(key) ? parse_num(kv_->at(key), "[" + name_ + "] " + key) : dflt;
    }
    long integer(const std::string& key) { return parse_int(str(key), "[" + name_ + "] " + key); }
    long int_or(const std::string& key, long dflt) {
        used_.insert(key);
        return has(key) ? parse_int(kv_->at(key), "[" + name_ + "] " + key) : dflt;
    }
    bool bool_or(const std::string& key, bool dflt) {
        used_.insert(key);
        if (!has(key)) return dflt;
        const std::string v = kv_->at(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("[" + name_ + "] " + key + ": expected a boolean, got " + v);
    }

    void reject_unknown() const {
        if (!kv_) return;
        for (const auto& [k, v] : *kv_)
            if (!used_.count(k)) throw ConfigError("[" + name_ + "] unknown key: " + k);
    }

  private:
    std::string name_;
    const std::map<std::string, std::string>* kv_ = nullptr;
    std::set<std::string> used_;
};

} // namespace detail

/// Recursive profile construction from [profile] (or [profile.<child>]).
inline CurvatureProfile parse_profile(const ConfigFile& cf, const std::string& section,
                                      std::set<std::string>* visited_sections) {
    if (!cf.sections.count(section)) throw ConfigError("missing section [" + section + "]");
    visited_sections->insert(section);
    detail::SectionReader r(cf, section);
    const std::string type = r.str("type");
    CurvatureProfile out;
    if (type == "zero") {
        out = CurvatureProfile::zero();
    } else if (type == "compact-bump") {
        const double amp = r.num("amplitude");
        const double center = r.num_or("center", 0.0);
        const double hw = r.num("half_width");
        const int order = int(r.int_or("order", 2));
        out = CurvatureProfile::compact_bump(amp, center, hw, order);
    } else if (type == "piecewise-linear") {
        // knots = s:k s:k ...
        std::vector<std::pair<double, double>> knots;
        std::stringstream ss(r.str("knots"));
        std::string tok;
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw ConfigError("[" + section + "] knots: expected s:k pairs");
            knots.push_back({detail::parse_num(tok.substr(0, colon), "knot s"),
                             detail::parse_num(tok.substr(colon + 1), "knot k")});
        }
        out = CurvatureProfile::piecewise_linear(std::move(knots));
    } else if (type == "periodic-cosine") {
        out = CurvatureProfile::periodic_cosine(r.num("amplitude"), r.num("period"));
    } else if (type == "scaled") {
        const double beta = r.num("beta");
        out = CurvatureProfile::scaled(beta, parse_profile(cf, section + ".base", visited_sections));
    } else if (type == "sum") {
        const long n = r.integer("terms");
        if (n < 1 || n > 64) throw ConfigError("[" + section + "] terms out of range");
        std::vector<CurvatureProfile> terms;
        for (long i = 1; i <= n; ++i)
            terms.push_back(
                parse_profile(cf, section + ".term" + std::to_string(i), visited_sections));
        out = CurvatureProfile::sum(std::move(terms));
    } else {
        throw ConfigError("[" + section + "] unknown profile type: " + type);
    }
    r.reject_unknown();
    return out;
}

/// Fully validated run configuration; unknown keys and sections are rejected.
struct RunConfig {
    CurvatureProfile profile;
    double d = 1.0;
    double S = 5.0;
    int n_s = 100;
    int n_u = 16;
    BoundaryType iota = BoundaryType::D;
    EndBC end_bc = EndBC::DirichletEnds;

    int m = 4;
    double tol = 1e-9;
    std::uint64_t seed = kDefaultSeed_value;
    double margin = 1e-3;
    int resolution = 600;
    bool bracket = false;
    bool dump_matrices = false;
    bool dump_eigenvector = false;

    // sweep
    std::string sweep_axis;  // beta | d | S
    double sweep_min = 0.0, sweep_max = 0.0;
    int sweep_count = 0;
    bool sweep_log = true;

    // verify
    std::vector<int> criteria;
    double strict_factor = 1.0;

    // plot
    std::string plot_input;

    std::string out_dir = "out";

    static constexpr std::uint64_t kDefaultSeed_value = 0x5EED;
};

inline RunConfig load_run_config(const std::string& path) {
    const ConfigFile cf = ConfigFile::parse_file(path);
    RunConfig rc;
    std::set<std::string> visited;

    if (cf.sections.count("profile")) {
        rc.profile = parse_profile(cf, "profile", &visited);
    } else {
        visited.insert("profile");
        rc.profile = CurvatureProfile::zero();
    }

    detail::SectionReader strip(cf, "strip");
    if (strip.exists()) {
        rc.d = strip.num_or("d", rc.d);
        rc.S = strip.num_or("S", rc.S);
        rc.iota = boundary_from_string(strip.str_or("iota", "D"));
        rc.end_bc = end_bc_from_string(strip.str_or("end_bc", "dirichlet-ends"));
        strip.reject_unknown();
    }
    if (rc.d <= 0.0 || rc.S <= 0.0) throw ConfigError("[strip] d and S must be positive");

    detail::SectionReader grid(cf, "grid");
    if (grid.exists()) {
        rc.n_s = int(grid.int_or("n_s", rc.n_s));
        rc.n_u = int(grid.int_or("n_u", rc.n_u));
        grid.reject_unknown();
    }
    if (rc.n_s < 4 || rc.n_u < 2) throw ConfigError("[grid] n_s >= 4 and n_u >= 2 required");

    detail::SectionReader solver(cf, "solver");
    if (solver.exists()) {
        rc.m = int(solver.int_or("m", rc.m));
        rc.tol = solver.num_or("tol", rc.tol);
        rc.seed = std::uint64_t(solver.int_or("seed", long(rc.seed)));
        rc.margin = solver.num_or("margin", rc.margin);
        rc.resolution = int(solver.int_or("resolution", rc.resolution));
        rc.bracket = solver.bool_or("bracket", rc.bracket);
        rc.dump_matrices = solver.bool_or("dump_matrices", rc.dump_matrices);
        rc.dump_eigenvector = solver.bool_or("dump_eigenvector", rc.dump_eigenvector);
        solver.reject_unknown();
    }
    if (rc.m < 1 || rc.tol <= 0.0) throw ConfigError("[solver] m >= 1 and tol > 0 required");

    detail::SectionReader sweep(cf, "sweep");
    if (sweep.exists()) {
        rc.sweep_axis = sweep.str("axis");
        if (rc.sweep_axis != "beta" && rc.sweep_axis != "d" && rc.sweep_axis != "S")
            throw ConfigError("[sweep] axis must be beta, d, or S");
        rc.sweep_min = sweep.num("min");
        rc.sweep_max = sweep.num("max");
        rc.sweep_count = int(sweep.integer("count"));
        rc.sweep_log = sweep.bool_or("log", true);
        if (!(rc.sweep_min > 0.0) || !(rc.sweep_max > rc.sweep_min) || rc.sweep_count < 2)
            throw ConfigError("[sweep] need 0 < min < max and count >= 2");
        sweep.reject_unknown();
    }

    detail::SectionReader verify(cf, "verify");
    if (verify.exists()) {
        const std::string list = verify.str_or("criteria", "");
        if (!list.empty()) {
            std::stringstream ss(list);
            std::string tok;
            while (std::getline(ss, tok, ','))
                rc.criteria.push_back(int(detail::parse_int(ConfigFile::trim(tok), "criteria")));
        }
        rc.strict_factor = verify.num_or("strict_factor", 1.0);
        verify.reject_unknown();
    }

    detail::SectionReader plot(cf, "plot");
    if (plot.exists()) {
        rc.plot_input = plot.str_or("input", "");
        plot.reject_unknown();
    }

    detail::SectionReader output(cf, "output");
    if (output.exists()) {
        rc.out_dir = output.str_or("dir", rc.out_dir);
        output.reject_unknown();
    }

    // reject unknown sections (profile children are tracked during parsing)
    static const std::set<std::string> known{"strip", "grid", "solver", "sweep",
                                             "verify", "plot", "output"};
    for (const auto& [name, kv] : cf.sections) {
        if (name.empty() && kv.empty()) continue;
        if (known.count(name) || visited.count(name)) continue;
        if (name.empty()) throw ConfigError("keys outside any section");
        throw ConfigError("unknown section [" + name + "]");
    }
    return rc;
}

} // namespace stripspec
