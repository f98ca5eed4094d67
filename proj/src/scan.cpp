#include "hcb/scan.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "hcb/errors.hpp"

namespace hcb {

namespace {

// Grid values are snapped to 1e-12 so that e.g. -0.5 + 5 * 0.1 prints as 0.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

struct Task {
    std::size_t row;
    std::size_t rep;
    std::size_t point;  // only for unchained tasks
};

}  // namespace

std::string to_string(ScanVariable v) {
    switch (v) {
        case ScanVariable::mu_over_V: return "mu_over_V";
        case ScanVariable::t_over_V: return "t_over_V";
        case ScanVariable::c2: return "c2";
        case ScanVariable::rho: return "rho";
    }
    return "?";
}

std::optional<ScanVariable> parse_scan_variable(const std::string& s) {
    for (auto v : {ScanVariable::mu_over_V, ScanVariable::t_over_V, ScanVariable::c2, ScanVariable::rho})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::string to_string(InitPolicy p) {
    switch (p) {
        case InitPolicy::fresh_random: return "fresh_random";
        case InitPolicy::fresh_ideal: return "fresh_ideal";
        case InitPolicy::chain_previous: return "chain_previous";
    }
    return "?";
}

std::optional<InitPolicy> parse_init_policy(const std::string& s) {
    for (auto p : {InitPolicy::fresh_random, InitPolicy::fresh_ideal, InitPolicy::chain_previous})
        if (to_string(p) == s) return p;
    return std::nullopt;
}

std::vector<double> ScanAxis::values() const {
    if (!(step != 0.0) || !std::isfinite(step)) throw std::invalid_argument("scan step must be nonzero");
    const double span = (stop - start) / step;
    if (!(span > -1e-9)) throw std::invalid_argument("scan range " + to_string(variable) + " is empty");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t k = 0; k < count; ++k) v[k] = snap(start + static_cast<double>(k) * step);
    return v;
}

void ScanSpec::validate() const {
    base.validate();
    auto check_axis = [&](const ScanAxis& a) {
        if (a.variable == ScanVariable::rho && base.ensemble != Ensemble::canonical)
            throw std::invalid_argument("rho can only be scanned in the canonical ensemble");
        if (a.variable == ScanVariable::mu_over_V && base.ensemble != Ensemble::grand)
            throw std::invalid_argument("mu_over_V can only be scanned in the grand-canonical ensemble");
        (void)a.values();
    };
    if (axis2 && !axis1) throw std::invalid_argument("a second scan axis requires a first one");
    if (axis1) check_axis(*axis1);
    if (axis2) {
        check_axis(*axis2);
        if (axis2->variable == axis1->variable) throw std::invalid_argument("both scan axes use the same variable");
    }
    if (init_policy == InitPolicy::fresh_ideal && !base.init)
        throw std::invalid_argument("init_policy=fresh_ideal requires an init pattern");
    for (const auto& pt : enumerate_points(*this)) {
        pt.params.validate();
        if (!(pt.params.c2 > 0.0)) throw std::invalid_argument("c2 must be > 0 at every point");
        if (!(pt.t_over_V >= 0.0)) throw std::invalid_argument("t_over_V must be >= 0 at every point");
        pt.run.validate();
    }
}

std::vector<ScanPoint> enumerate_points(const ScanSpec& spec) {
    const std::vector<double> v1 = spec.axis1 ? spec.axis1->values() : std::vector<double>{0.0};
    const std::vector<double> v2 = spec.axis2 ? spec.axis2->values() : std::vector<double>{0.0};
    std::vector<ScanPoint> out;
    out.reserve(v1.size() * v2.size());
    for (std::size_t r = 0; r < v2.size(); ++r) {
        for (std::size_t c = 0; c < v1.size(); ++c) {
            double c2 = spec.c2, t = spec.t_over_V, mu = spec.mu_over_V, rho = spec.rho;
            auto apply = [&](const std::optional<ScanAxis>& axis, double value) {
                if (!axis) return;
                switch (axis->variable) {
                    case ScanVariable::mu_over_V: mu = value; break;
                    case ScanVariable::t_over_V: t = value; break;
                    case ScanVariable::c2: c2 = value; break;
                    case ScanVariable::rho: rho = value; break;
                }
            };
            apply(spec.axis2, v2[r]);
            apply(spec.axis1, v1[c]);

            ScanPoint p;
            p.index = out.size();
            p.row = r;
            p.column = c;
            p.run = spec.base;
            p.t_over_V = t;
            p.params.c2 = c2;
            p.params.c1 = c2 * t;
            if (spec.base.ensemble == Ensemble::grand) {
                p.params.m = c2 * mu;
                p.mu_over_V = mu;
            } else {
                p.params.m = 0.0;
                p.run.target_rho = rho;
            }
            if (spec.init_policy == InitPolicy::fresh_random) p.run.init.reset();
            out.push_back(p);
        }
    }
    return out;
}

std::vector<PointRecord> run_scan(const ScanSpec& spec, const Thresholds& th, unsigned workers) {
    spec.validate();
    th.validate();
    const auto points = enumerate_points(spec);
    const auto R = static_cast<std::size_t>(spec.base.samples);
    if (R < 2) throw InsufficientSamples("scan needs samples >= 2");
    const std::size_t columns = spec.axis1 ? spec.axis1->values().size() : 1;
    const std::size_t rows = points.size() / columns;
    const bool chained = spec.init_policy == InitPolicy::chain_previous;
    const LatticeGeom geom(spec.base.L);

    // results[point][rep]
    std::vector<std::vector<RepetitionResult>> results(points.size(), std::vector<RepetitionResult>(R));
    std::vector<std::vector<std::exception_ptr>> errors(points.size(), std::vector<std::exception_ptr>(R));

    std::vector<Task> tasks;
    if (chained) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t rep = 0; rep < R; ++rep) tasks.push_back({r, rep, 0});
    } else {
        for (std::size_t p = 0; p < points.size(); ++p)
            for (std::size_t rep = 0; rep < R; ++rep) tasks.push_back({points[p].row, rep, p});
    }

    auto run_one = [&](std::size_t p, std::size_t rep, const Configuration* start) -> bool {
        try {
            results[p][rep] = run_repetition(points[p].run, points[p].params, geom, p, rep, start);
            return true;
        } catch (...) {
            errors[p][rep] = std::current_exception();
            return false;
        }
    };

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
            const auto& task = tasks[t];
            if (!chained) {
                run_one(task.point, task.rep, nullptr);
                continue;
            }
            const Configuration* start = nullptr;
            for (std::size_t c = 0; c < columns; ++c) {
                const auto p = task.row * columns + c;
                if (!run_one(p, task.rep, start)) break;
                if (start && task.rep != 0) results[p - 1][task.rep].final_config = Configuration{};
                start = &results[p][task.rep].final_config;
            }
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        for (const auto& e : errors[p]) {
            if (!e) continue;
            try {
                std::rethrow_exception(e);
            } catch (const std::exception& ex) {
                throw ScanPointError(p, ex.what());
            }
        }
    }

    std::vector<PointRecord> records;
    records.reserve(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        auto rec = assemble_record(points[p].run, points[p].params, p, results[p], th);
        rec.t_over_V = points[p].t_over_V;
        rec.mu_over_V = points[p].mu_over_V;
        records.push_back(std::move(rec));
        results[p].clear();
    }
    return records;
}

}  // namespace hcb
