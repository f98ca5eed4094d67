#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hcb/classify.hpp"
#include "hcb/scan.hpp"

namespace hcb {

/// Everything a `run` invocation needs.
///
/// Text form: one key=value per line, '#' starts a comment. Keys:
///   ensemble            grand | canonical
///   L                   positive multiple of 3
///   c2, t_over_V        fixed couplings (c2 > 0, t_over_V >= 0)
///   mu_over_V           fixed chemical potential (grand only)
///   rho                 fixed density (canonical only)
///   scan_<var>          inner axis start:stop:step, var in
///                       mu_over_V | t_over_V | c2 | rho
///   scan2_<var>         outer axis, same syntax
///   therm_sweeps, meas_sweeps, samples, measure_interval, seed
///   init_policy         chain_previous | fresh_random | fresh_ideal
///   init_pattern        empty | full | solid13 | solid23 | uniform | random
///   init_rho, init_chi  parameters of the uniform pattern
///   eps_rho, theta_s, theta_f, theta_layer   classification thresholds
///   out, workers
struct RunConfig {
    ScanSpec scan;
    Thresholds thresholds;
    std::string out_dir = "out";
    unsigned workers = 1;

    friend bool operator==(const RunConfig& a, const RunConfig& b);
};

/// Parses and validates. Syntax errors carry the line number; validation
/// errors name the key and the violated constraint. Throws ConfigError.
RunConfig parse_config(std::string_view text);

/// Canonical text form listing every setting, defaults included;
/// parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

/// 64-bit FNV-1a of the canonical text without `out` and `workers`, as 16
/// hex digits; runtime-only settings leave it unchanged.
std::string config_hash(const RunConfig& config);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace hcb
