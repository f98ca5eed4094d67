#include "hcb/config.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hcb/errors.hpp"

namespace hcb {

namespace {

struct Entry {
    std::string value;
    int line;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

double to_double(const std::string& key, const Entry& e) {
    double v = 0.0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        fail("line " + std::to_string(e.line) + ": " + key + " expects a number, got '" + e.value + "'");
    return v;
}

template <class Int>
Int to_int(const std::string& key, const Entry& e) {
    Int v{};
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        fail("line " + std::to_string(e.line) + ": " + key + " expects an integer, got '" + e.value + "'");
    return v;
}

ScanAxis to_axis(ScanVariable var, const std::string& key, const Entry& e) {
    std::vector<std::string> parts;
    std::stringstream ss(e.value);
    for (std::string p; std::getline(ss, p, ':');) parts.emplace_back(trim(p));
    if (parts.size() != 3)
        fail("line " + std::to_string(e.line) + ": " + key + " expects start:stop:step, got '" + e.value + "'");
    ScanAxis a;
    a.variable = var;
    a.start = to_double(key, {parts[0], e.line});
    a.stop = to_double(key, {parts[1], e.line});
    a.step = to_double(key, {parts[2], e.line});
    try {
        (void)a.values();
    } catch (const std::invalid_argument& ex) {
        fail(key + ": " + ex.what());
    }
    return a;
}

const std::vector<std::string>& plain_keys() {
    static const std::vector<std::string> keys = {
        "ensemble", "L", "c2", "t_over_V", "mu_over_V", "rho", "therm_sweeps", "meas_sweeps", "samples",
        "measure_interval", "seed", "init_policy", "init_pattern", "init_rho", "init_chi", "eps_rho",
        "theta_s", "theta_f", "theta_layer", "out", "workers",
    };
    return keys;
}

std::string axis_text(const ScanAxis& a) {
    return format_double(a.start) + ":" + format_double(a.stop) + ":" + format_double(a.step);
}

bool scans(const ScanSpec& s, ScanVariable v) {
    return (s.axis1 && s.axis1->variable == v) || (s.axis2 && s.axis2->variable == v);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.scan == b.scan && a.thresholds == b.thresholds && a.out_dir == b.out_dir && a.workers == b.workers;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> kv;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("line " + std::to_string(line_no) + ": expected key=value");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) fail("line " + std::to_string(line_no) + ": empty key");
        if (value.empty()) fail("line " + std::to_string(line_no) + ": empty value for " + key);
        bool known = std::find(plain_keys().begin(), plain_keys().end(), key) != plain_keys().end();
        for (const char* prefix : {"scan_", "scan2_"}) {
            const std::string_view p(prefix);
            if (key.starts_with(p) && parse_scan_variable(key.substr(p.size()))) known = true;
        }
        if (!known) fail("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (kv.count(key)) fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        kv[key] = {value, line_no};
    }
    auto has = [&](const std::string& k) { return kv.count(k) > 0; };

    RunConfig c;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    auto& s = c.scan;
    auto& b = s.base;

    if (has("ensemble")) {
        const auto& v = kv["ensemble"].value;
        if (v == "grand")
            b.ensemble = Ensemble::grand;
        else if (v == "canonical")
            b.ensemble = Ensemble::canonical;
        else
            fail("ensemble must be grand or canonical (got '" + v + "')");
    }
    const bool grand = b.ensemble == Ensemble::grand;

    if (has("L")) {
        b.L = to_int<int>("L", kv["L"]);
        if (b.L < 3 || b.L % 3 != 0) fail("L must be a positive multiple of 3 (got " + kv["L"].value + ")");
    }

    for (const char* prefix : {"scan_", "scan2_"}) {
        std::optional<ScanAxis> axis;
        for (const auto& [key, e] : kv) {
            if (!key.starts_with(prefix)) continue;
            if (std::string_view(prefix) == "scan_" && key.starts_with("scan2_")) continue;
            if (axis) fail("line " + std::to_string(e.line) + ": only one " + prefix + "<var> key is allowed");
            axis = to_axis(*parse_scan_variable(key.substr(std::string_view(prefix).size())), key, e);
        }
        (std::string_view(prefix) == "scan_" ? s.axis1 : s.axis2) = axis;
    }
    if (s.axis2 && !s.axis1) fail("scan2_<var> requires a scan_<var> axis");
    if (s.axis1 && s.axis2 && s.axis1->variable == s.axis2->variable) fail("scan_ and scan2_ use the same variable");
    for (const auto* ax : {&s.axis1, &s.axis2}) {
        if (!*ax) continue;
        const auto v = (*ax)->variable;
        if (v == ScanVariable::rho && grand) fail("scan of rho is only valid for ensemble=canonical");
        if (v == ScanVariable::mu_over_V && !grand) fail("scan of mu_over_V is only valid for ensemble=grand");
    }

    auto fixed = [&](const char* key, ScanVariable var, double& target) {
        if (!has(key)) return;
        if (scans(s, var)) fail(std::string(key) + " is scanned and cannot also be fixed");
        target = to_double(key, kv[key]);
    };
    fixed("c2", ScanVariable::c2, s.c2);
    fixed("t_over_V", ScanVariable::t_over_V, s.t_over_V);
    if (has("mu_over_V") && !grand) fail("mu_over_V is only valid for ensemble=grand");
    if (has("rho") && grand) fail("rho is only valid for ensemble=canonical");
    fixed("mu_over_V", ScanVariable::mu_over_V, s.mu_over_V);
    fixed("rho", ScanVariable::rho, s.rho);
    if (!(s.c2 > 0.0)) fail("c2 must be > 0");
    if (!(s.t_over_V >= 0.0)) fail("t_over_V must be >= 0");
    if (!(s.rho >= 0.0 && s.rho <= 1.0)) fail("rho must lie in [0,1]");
    b.target_rho = s.rho;

    auto count = [&](const char* key, std::uint64_t& target) {
        if (!has(key)) return;
        target = to_int<std::uint64_t>(key, kv[key]);
        if (target == 0) fail(std::string(key) + " must be positive");
    };
    count("therm_sweeps", b.therm_sweeps);
    count("meas_sweeps", b.meas_sweeps);
    count("samples", b.samples);
    count("measure_interval", b.measure_interval);
    if (b.samples < 2) fail("samples must be >= 2 (error bars need two repetitions)");
    if (b.measure_interval > b.meas_sweeps) fail("measure_interval must not exceed meas_sweeps");
    if (has("seed")) b.seed = to_int<std::uint64_t>("seed", kv["seed"]);

    if (has("init_policy")) {
        const auto p = parse_init_policy(kv["init_policy"].value);
        if (!p) fail("init_policy must be chain_previous, fresh_random or fresh_ideal (got '" + kv["init_policy"].value + "')");
        s.init_policy = *p;
    }
    if (has("init_pattern")) {
        const auto k = parse_pattern_kind(kv["init_pattern"].value);
        if (!k) fail("init_pattern must be empty, full, solid13, solid23, uniform or random (got '" + kv["init_pattern"].value + "')");
        IdealPattern pat;
        pat.kind = *k;
        if (*k == IdealPattern::Kind::uniform) {
            if (!has("init_rho")) fail("init_pattern=uniform requires init_rho");
            pat.rho0 = to_double("init_rho", kv["init_rho"]);
            if (!(pat.rho0 >= 0.0 && pat.rho0 <= 1.0)) fail("init_rho must lie in [0,1]");
            if (has("init_chi")) {
                pat.chi0 = to_double("init_chi", kv["init_chi"]);
                if (!(pat.chi0 >= 0.0 && pat.chi0 < two_pi)) fail("init_chi must lie in [0, 2pi)");
            }
        }
        b.init = pat;
    }
    if ((has("init_rho") || has("init_chi")) && !(b.init && b.init->kind == IdealPattern::Kind::uniform))
        fail("init_rho and init_chi require init_pattern=uniform");
    if (s.init_policy == InitPolicy::fresh_ideal && !b.init) fail("init_policy=fresh_ideal requires init_pattern");
    if (s.init_policy == InitPolicy::fresh_random && b.init) fail("init_policy=fresh_random does not take init_pattern");

    auto threshold = [&](const char* key, double& target) {
        if (!has(key)) return;
        target = to_double(key, kv[key]);
        if (!(target > 0.0 && target < 1.0)) fail(std::string(key) + " must lie in (0,1)");
    };
    threshold("eps_rho", c.thresholds.eps_rho);
    threshold("theta_s", c.thresholds.theta_s);
    threshold("theta_f", c.thresholds.theta_f);
    threshold("theta_layer", c.thresholds.theta_layer);

    if (has("out")) c.out_dir = kv["out"].value;
    if (has("workers")) {
        c.workers = to_int<unsigned>("workers", kv["workers"]);
        if (c.workers == 0) fail("workers must be positive");
    }

    try {
        s.validate();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    return c;
}

namespace {

// Every setting that can change the numbers a run produces.
std::string physics_text(const RunConfig& c) {
    const auto& s = c.scan;
    const auto& b = s.base;
    const bool grand = b.ensemble == Ensemble::grand;
    std::ostringstream o;
    o << "ensemble=" << (grand ? "grand" : "canonical") << '\n';
    o << "L=" << b.L << '\n';
    if (!scans(s, ScanVariable::c2)) o << "c2=" << format_double(s.c2) << '\n';
    if (!scans(s, ScanVariable::t_over_V)) o << "t_over_V=" << format_double(s.t_over_V) << '\n';
    if (grand && !scans(s, ScanVariable::mu_over_V)) o << "mu_over_V=" << format_double(s.mu_over_V) << '\n';
    if (!grand && !scans(s, ScanVariable::rho)) o << "rho=" << format_double(s.rho) << '\n';
    if (s.axis1) o << "scan_" << to_string(s.axis1->variable) << '=' << axis_text(*s.axis1) << '\n';
    if (s.axis2) o << "scan2_" << to_string(s.axis2->variable) << '=' << axis_text(*s.axis2) << '\n';
    o << "therm_sweeps=" << b.therm_sweeps << '\n';
    o << "meas_sweeps=" << b.meas_sweeps << '\n';
    o << "samples=" << b.samples << '\n';
    o << "measure_interval=" << b.measure_interval << '\n';
    o << "seed=" << b.seed << '\n';
    o << "init_policy=" << to_string(s.init_policy) << '\n';
    if (b.init) {
        o << "init_pattern=" << to_string(b.init->kind) << '\n';
        if (b.init->kind == IdealPattern::Kind::uniform) {
            o << "init_rho=" << format_double(b.init->rho0) << '\n';
            o << "init_chi=" << format_double(b.init->chi0) << '\n';
        }
    }
    o << "eps_rho=" << format_double(c.thresholds.eps_rho) << '\n';
    o << "theta_s=" << format_double(c.thresholds.theta_s) << '\n';
    o << "theta_f=" << format_double(c.thresholds.theta_f) << '\n';
    o << "theta_layer=" << format_double(c.thresholds.theta_layer) << '\n';
    return o.str();
}

}  // namespace

std::string to_text(const RunConfig& c) {
    return physics_text(c) + "out=" + c.out_dir + '\n' + "workers=" + std::to_string(c.workers) + '\n';
}

std::string config_hash(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : physics_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace hcb
