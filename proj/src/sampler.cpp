#include "hcb/sampler.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hcb/errors.hpp"

namespace hcb {

namespace {

double tune_one(double width, double rate, double max_width) {
    if (rate > 0.6)
        width *= 1.1;
    else if (rate < 0.4)
        width *= 0.9;
    return std::clamp(width, ProposalWindows::min_width, max_width);
}

void check_energy(Configuration& config, const ModelParams& p, const LatticeGeom& geom, double& max_drift) {
    const double exact = classical_energy(config, p, geom);
    const double drift = std::abs(config.cached_energy() - exact) / std::max(1.0, std::abs(exact));
    max_drift = std::max(max_drift, drift);
    if (drift > energy_drift_tolerance)
        throw BookkeepingError("cached energy drifted by " + std::to_string(drift) + " (relative)");
    config.set_cached_energy(exact);
}

SweepStats sweep(Ensemble e, Configuration& c, const ModelParams& p, const LatticeGeom& g,
                 const ProposalWindows& w, Rng& rng) {
    return e == Ensemble::grand ? metropolis_sweep_grand(c, p, g, w, rng) : metropolis_sweep_canonical(c, p, g, w, rng);
}

}  // namespace

ProposalWindows tune_windows(const ProposalWindows& current, const AcceptanceRates& rates) {
    ProposalWindows w = current;
    if (rates.occupation) w.occupation = tune_one(w.occupation, *rates.occupation, ProposalWindows::max_occupation);
    if (rates.phase) w.phase = tune_one(w.phase, *rates.phase, ProposalWindows::max_phase);
    if (rates.transfer) w.transfer = tune_one(w.transfer, *rates.transfer, ProposalWindows::max_transfer);
    return w;
}

AcceptanceRates rates_for(Ensemble ensemble, const SweepStats& block) {
    if (ensemble == Ensemble::grand) return {block.local.rate(), block.local.rate(), std::nullopt};
    return {std::nullopt, block.phase.rate(), block.transfer.rate()};
}

void RunSpec::validate() const {
    if (L < 3 || L % 3 != 0) throw IncommensurateSize("L must be a positive multiple of 3");
    if (therm_sweeps == 0 || meas_sweeps == 0 || samples == 0 || measure_interval == 0)
        throw std::invalid_argument("sweep counts, samples and measure_interval must be positive");
    if (measure_interval > meas_sweeps) throw std::invalid_argument("measure_interval exceeds meas_sweeps");
    if (ensemble == Ensemble::canonical && !(target_rho >= 0.0 && target_rho <= 1.0))
        throw std::invalid_argument("target_rho must lie in [0,1]");
}

void match_density(Configuration& config, double target) {
    const double N = static_cast<double>(config.size());
    const double rho = config.total_occupation() / N;
    if (rho == target) return;
    if (target > rho) {
        const double l = (target - rho) / (1.0 - rho);
        for (std::size_t i = 0; i < config.size(); ++i) {
            const double n = config.occupation(i);
            config.set(i, {std::min(1.0, n + l * (1.0 - n)), config.phase(i)});
        }
    } else {
        const double f = target / rho;
        for (std::size_t i = 0; i < config.size(); ++i) config.set(i, {config.occupation(i) * f, config.phase(i)});
    }
}

Configuration initial_config(const RunSpec& spec, const LatticeGeom& geom, Rng& rng) {
    if (spec.ensemble == Ensemble::grand) {
        return ideal_config(spec.init.value_or(IdealPattern::random(rng.bits())), geom);
    }
    Configuration c;
    if (spec.init) {
        auto pat = *spec.init;
        if (pat.kind == IdealPattern::Kind::random) pat.seed = rng.bits();
        c = ideal_config(pat, geom);
    } else {
        c = ideal_config(IdealPattern::uniform(spec.target_rho, 0.0), geom);
        for (std::size_t i = 0; i < c.size(); ++i) c.set(i, {c.occupation(i), two_pi * rng.uniform()});
    }
    match_density(c, spec.target_rho);
    return c;
}

RepetitionResult run_repetition(const RunSpec& spec, const ModelParams& p, const LatticeGeom& geom,
                                std::size_t point, std::size_t rep, const Configuration* start) {
    Rng rng(derive_seed(spec.seed, point, rep));
    RepetitionResult out;
    Configuration config;
    if (start) {
        config = *start;
        if (spec.ensemble == Ensemble::canonical) match_density(config, spec.target_rho);
    } else {
        config = initial_config(spec, geom, rng);
    }
    refresh_energy(config, p, geom);

    ProposalWindows w;
    SweepStats block;
    for (std::uint64_t s = 1; s <= spec.therm_sweeps; ++s) {
        block += sweep(spec.ensemble, config, p, geom, w, rng);
        if (s % tune_interval == 0) {
            w = tune_windows(w, rates_for(spec.ensemble, block));
            block = {};
        }
        if (s % energy_check_interval == 0) check_energy(config, p, geom, out.max_energy_drift);
    }

    MeasurementAccumulator acc(geom);
    for (std::uint64_t s = 1; s <= spec.meas_sweeps; ++s) {
        out.measurement_stats += sweep(spec.ensemble, config, p, geom, w, rng);
        if (s % energy_check_interval == 0) check_energy(config, p, geom, out.max_energy_drift);
        if (s % spec.measure_interval == 0) acc.add(config);
    }
    check_energy(config, p, geom, out.max_energy_drift);

    out.means = acc.means();
    out.windows = w;
    out.final_config = std::move(config);
    return out;
}

PointRecord assemble_record(const RunSpec& spec, const ModelParams& p, std::size_t point,
                            std::vector<RepetitionResult>& reps, const Thresholds& th) {
    PointRecord rec;
    rec.point_index = point;
    rec.params = p;
    rec.L = spec.L;
    rec.ensemble = spec.ensemble;
    rec.t_over_V = p.c2 > 0.0 ? p.c1 / p.c2 : 0.0;
    if (spec.ensemble == Ensemble::grand) {
        if (p.c2 > 0.0) rec.mu_over_V = p.m / p.c2;
    } else {
        rec.rho_target = spec.target_rho;
    }

    std::vector<RepetitionMeans> means;
    AcceptanceCount acc;
    for (auto& r : reps) {
        means.push_back(r.means);
        acc += r.measurement_stats.total();
    }
    finalize(means, rec);
    rec.accept_rate = acc.rate();
    rec.phase = classify_phase(rec, th);
    if (!reps.empty()) rec.snapshot = reps.front().final_config;
    return rec;
}

PointRecord run_point(const RunSpec& spec, const ModelParams& p, const LatticeGeom& geom, const Thresholds& th,
                      std::size_t point, unsigned workers) {
    spec.validate();
    p.validate();
    if (spec.samples < 2) throw InsufficientSamples("run_point needs samples >= 2");
    const auto R = static_cast<std::size_t>(spec.samples);
    std::vector<RepetitionResult> reps(R);
    std::vector<std::exception_ptr> errors(R);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r; (r = next.fetch_add(1)) < R;) {
            try {
                reps[r] = run_repetition(spec, p, geom, point, r);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(R)));
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return assemble_record(spec, p, point, reps, th);
}

}  // namespace hcb
