#include "crimewave/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace crimewave {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double parse_number(const std::string& v, int line_no) {
    const char* begin = v.c_str();
    char* end = nullptr;
    double out = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        std::ostringstream os;
        os << "line " << line_no << ": unparsable number '" << v << "'";
        throw ConfigError(os.str());
    }
    return out;
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line_no << ": " << msg;
    throw ConfigError(os.str());
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_kv_lines(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "classify",   "wave-speed", "critical-length", "simulate",
        "bisect-gap", "split-gap",  "decay-rates",     "steady-profile"};
    return names;
}

Scenario parse_config(const std::string& text) {
    Scenario sc;
    bool have_beta = false, have_sb = false, have_dt = false;
    std::string gap_kind = "none";
    std::optional<double> gap_L, gap_L1, gap_L2, gap_d;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "beta") {
            sc.beta = parse_number(value, line_no);
            have_beta = true;
        } else if (key == "s_b") {
            sc.s_b = parse_number(value, line_no);
            have_sb = true;
        } else if (key == "alpha") {
            sc.alpha = parse_number(value, line_no);
        } else if (key == "gap.kind") {
            if (value != "none" && value != "single" && value != "double")
                fail(line_no, "gap.kind must be none, single, or double");
            gap_kind = value;
        } else if (key == "gap.L") {
            gap_L = parse_number(value, line_no);
        } else if (key == "gap.L1") {
            gap_L1 = parse_number(value, line_no);
        } else if (key == "gap.L2") {
            gap_L2 = parse_number(value, line_no);
        } else if (key == "gap.d") {
            gap_d = parse_number(value, line_no);
        } else if (key == "dx") {
            sc.solver.dx = parse_number(value, line_no);
            if (!(sc.solver.dx > 0.0)) fail(line_no, "dx must be > 0");
        } else if (key == "dt") {
            sc.solver.dt = parse_number(value, line_no);
            if (!(sc.solver.dt > 0.0)) fail(line_no, "dt must be > 0");
            have_dt = true;
        } else if (key == "x_min") {
            sc.solver.x_min = parse_number(value, line_no);
        } else if (key == "x_max") {
            sc.solver.x_max = parse_number(value, line_no);
        } else if (key == "t_end") {
            sc.solver.t_end = parse_number(value, line_no);
            if (!(sc.solver.t_end > 0.0)) fail(line_no, "t_end must be > 0");
        } else if (key == "mode") {
            if (value == "system")
                sc.solver.mode = SolveMode::System;
            else if (value == "scalar")
                sc.solver.mode = SolveMode::Scalar;
            else
                fail(line_no, "mode must be system or scalar");
        } else if (key == "experiment") {
            const auto& names = experiment_names();
            if (std::find(names.begin(), names.end(), value) == names.end())
                fail(line_no, "unknown experiment '" + value + "'");
            sc.experiment = value;
        } else if (key == "out") {
            sc.out_dir = value;
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (!have_beta) throw ConfigError("missing required key 'beta'");
    if (!have_sb) throw ConfigError("missing required key 's_b'");
    if (!(sc.solver.x_min < 0.0 && sc.solver.x_max > 0.0))
        throw ConfigError("domain must satisfy x_min < 0 < x_max");
    if (!have_dt) sc.solver.dt = 0.0;  // resolved to dx at run time

    if (gap_kind == "none") {
        sc.layout = GapLayout::none();
    } else if (gap_kind == "single") {
        if (!gap_L) throw ConfigError("gap.kind=single requires key 'gap.L'");
        if (*gap_L < 0.0) throw ConfigError("gap.L must be >= 0");
        sc.layout = GapLayout::single(*gap_L);
    } else {
        if (!gap_L1) throw ConfigError("gap.kind=double requires key 'gap.L1'");
        if (!gap_L2) throw ConfigError("gap.kind=double requires key 'gap.L2'");
        if (!gap_d) throw ConfigError("gap.kind=double requires key 'gap.d'");
        if (*gap_L1 < 0.0 || *gap_L2 < 0.0 || *gap_d < 0.0)
            throw ConfigError("gap.L1, gap.L2, gap.d must be >= 0");
        sc.layout = GapLayout::split(*gap_L1, *gap_L2, *gap_d);
    }
    return sc;
}

KineticsParams Scenario::params() const {
    if (alpha) return KineticsParams::with_alpha(*alpha, beta, s_b);
    return KineticsParams::normalized(beta, s_b);
}

}  // namespace crimewave
