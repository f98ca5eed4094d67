#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hcb/classify.hpp"
#include "hcb/model.hpp"
#include "hcb/observables.hpp"
#include "hcb/sampler.hpp"

namespace hcb {

enum class ScanVariable { mu_over_V, t_over_V, c2, rho };

std::string to_string(ScanVariable v);
std::optional<ScanVariable> parse_scan_variable(const std::string& s);

/// Range start:stop:step; stop is included when (stop - start)/step is an
/// integer within 1e-9. Negative steps scan downwards.
struct ScanAxis {
    ScanVariable variable = ScanVariable::mu_over_V;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    /// Throws std::invalid_argument for a zero step or an empty range.
    std::vector<double> values() const;

    friend bool operator==(const ScanAxis&, const ScanAxis&) = default;
};

enum class InitPolicy { fresh_random, fresh_ideal, chain_previous };

std::string to_string(InitPolicy p);
std::optional<InitPolicy> parse_init_policy(const std::string& s);

struct ScanSpec {
    RunSpec base;
    std::optional<ScanAxis> axis1;  // inner
    std::optional<ScanAxis> axis2;  // outer
    double c2 = 50.0;
    double t_over_V = 0.1;
    double mu_over_V = 0.0;  // grand only
    double rho = 0.5;        // canonical only
    InitPolicy init_policy = InitPolicy::chain_previous;

    /// Throws std::invalid_argument for a variable that does not belong to
    /// the ensemble, a repeated variable or out-of-range point values.
    void validate() const;

    friend bool operator==(const ScanSpec&, const ScanSpec&) = default;
};

struct ScanPoint {
    std::size_t index = 0;
    std::size_t row = 0;     // position along axis 2
    std::size_t column = 0;  // position along axis 1
    ModelParams params;
    RunSpec run;
    double t_over_V = 0.0;
    std::optional<double> mu_over_V;
};

/// Points in axis-2-outer, axis-1-inner order with dense indices. Grand:
/// c1 = c2 t/V, m = c2 mu/V. Canonical: c1 = c2 t/V, m = 0, target rho set.
std::vector<ScanPoint> enumerate_points(const ScanSpec& spec);

/// Runs every point. With chain_previous, repetition r of a point starts
/// from the final state of repetition r of the previous point in the same
/// row; rows and repetitions are independent tasks spread over `workers`
/// threads. Records come back sorted by point index, and are bit-identical
/// for any worker count. Failures are rethrown as ScanPointError.
std::vector<PointRecord> run_scan(const ScanSpec& spec, const Thresholds& th = {}, unsigned workers = 1);

}  // namespace hcb
