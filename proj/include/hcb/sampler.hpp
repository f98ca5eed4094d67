#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "hcb/classify.hpp"
#include "hcb/lattice.hpp"
#include "hcb/model.hpp"
#include "hcb/observables.hpp"
#include "hcb/rng.hpp"

namespace hcb {

/// Half-widths of the symmetric proposal distributions.
struct ProposalWindows {
    static constexpr double min_width = 1e-6;
    static constexpr double max_occupation = 1.0;
    static constexpr double max_phase = std::numbers::pi;
    static constexpr double max_transfer = 1.0;

    double occupation = 0.2;
    double phase = 1.0;
    double transfer = 0.2;

    friend bool operator==(const ProposalWindows&, const ProposalWindows&) = default;
};

struct AcceptanceCount {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;

    double rate() const noexcept {
        return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
    }
    AcceptanceCount& operator+=(const AcceptanceCount& o) noexcept {
        proposed += o.proposed;
        accepted += o.accepted;
        return *this;
    }
};

/// Grand sweeps fill `local` (joint occupation + phase moves); canonical
/// sweeps fill `transfer` and `phase`.
struct SweepStats {
    AcceptanceCount local, transfer, phase;

    AcceptanceCount total() const noexcept {
        AcceptanceCount t = local;
        t += transfer;
        t += phase;
        return t;
    }
    SweepStats& operator+=(const SweepStats& o) noexcept {
        local += o.local;
        transfer += o.transfer;
        phase += o.phase;
        return *this;
    }
};

namespace detail {

/// chi + d wrapped to [0, 2 pi) for chi in [0, 2 pi) and |d| <= pi.
inline double shift_phase(double chi, double d) noexcept {
    double v = chi + d;
    if (v < 0.0) v += two_pi;
    if (v >= two_pi) v -= two_pi;
    return v < two_pi && v >= 0.0 ? v : 0.0;
}

}  // namespace detail

inline bool metropolis_accept(double delta, Rng& rng) noexcept {
    return delta <= 0.0 || rng.uniform() < std::exp(-delta);
}

/// N single-site proposals at uniformly drawn sites. Each draws
/// n' = n + U(-dn, dn) (rejected outside [0,1]) and chi' = chi + U(-dchi, dchi).
template <BondGraph G>
SweepStats metropolis_sweep_grand(Configuration& config, const ModelParams& p, const G& graph,
                                  const ProposalWindows& w, Rng& rng) {
    SweepStats st;
    const auto N = graph.size();
    for (std::size_t k = 0; k < N; ++k) {
        const auto i = rng.index(N);
        const double n_new = config.occupation(i) + w.occupation * rng.symmetric();
        const double chi_new = detail::shift_phase(config.phase(i), w.phase * rng.symmetric());
        ++st.local.proposed;
        if (n_new < 0.0 || n_new > 1.0) continue;
        const double a = hop_amplitude(n_new);
        const double fx = a * std::cos(chi_new);
        const double fy = a * std::sin(chi_new);
        const double d = delta_energy_fields(config, p, graph, i, n_new, fx, fy);
        if (metropolis_accept(d, rng)) {
            config.assign(i, n_new, chi_new, fx, fy);
            config.add_energy(d);
            ++st.local.accepted;
        }
    }
    return st;
}

/// N phase-only proposals interleaved with floor(N/2) occupation transfers
/// between two distinct uniformly drawn sites. Sum of n is conserved.
template <BondGraph G>
SweepStats metropolis_sweep_canonical(Configuration& config, const ModelParams& p, const G& graph,
                                      const ProposalWindows& w, Rng& rng) {
    SweepStats st;
    const auto N = graph.size();
    for (std::size_t k = 0; k < N; ++k) {
        {
            const auto i = rng.index(N);
            const double chi_new = detail::shift_phase(config.phase(i), w.phase * rng.symmetric());
            ++st.phase.proposed;
            const double a = hop_amplitude(config.occupation(i));
            const double fx = a * std::cos(chi_new);
            const double fy = a * std::sin(chi_new);
            const double d = delta_energy_fields(config, p, graph, i, config.occupation(i), fx, fy);
            if (metropolis_accept(d, rng)) {
                config.assign(i, config.occupation(i), chi_new, fx, fy);
                config.add_energy(d);
                ++st.phase.accepted;
            }
        }
        if (k % 2 == 1 && N >= 2) {
            const auto i = rng.index(N);
            auto j = rng.index(N - 1);
            if (j >= i) ++j;
            const double delta = w.transfer * rng.symmetric();
            ++st.transfer.proposed;
            const auto d = delta_energy_pair(config, p, graph, i, j, delta);
            if (d && metropolis_accept(*d, rng)) {
                config.set(i, {config.occupation(i) + delta, config.phase(i)});
                config.set(j, {config.occupation(j) - delta, config.phase(j)});
                config.add_energy(*d);
                ++st.transfer.accepted;
            }
        }
    }
    return st;
}

/// Acceptance rates observed since the previous tuning step; absent
/// entries leave the corresponding window alone.
struct AcceptanceRates {
    std::optional<double> occupation, phase, transfer;
};

/// Scales each window by 1.1 above 60% acceptance and by 0.9 below 40%,
/// clamped to [min_width, max].
ProposalWindows tune_windows(const ProposalWindows& current, const AcceptanceRates& rates);

/// Rates to feed tune_windows for a block of sweeps of the given ensemble.
AcceptanceRates rates_for(Ensemble ensemble, const SweepStats& block);

struct RunSpec {
    Ensemble ensemble = Ensemble::grand;
    int L = 12;
    std::uint64_t therm_sweeps = 5000;
    std::uint64_t meas_sweeps = 30000;
    std::uint64_t samples = 10;
    std::uint64_t measure_interval = 10;
    std::uint64_t seed = 0;
    /// Fresh initial state. When absent: random for grand, uniform at
    /// target_rho with random phases for canonical.
    std::optional<IdealPattern> init;
    double target_rho = 0.5;  // canonical only

    /// Throws std::invalid_argument on nonpositive counts or bad density.
    void validate() const;

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

inline constexpr std::uint64_t energy_check_interval = 1000;
inline constexpr std::uint64_t tune_interval = 10;
inline constexpr double energy_drift_tolerance = 1e-10;

/// Maps occupations so that their mean equals `target` exactly while
/// staying inside [0,1]: n -> n + l (1 - n) to raise, n -> n * target/rho
/// to lower. Phases are untouched; cached_energy is not refreshed.
void match_density(Configuration& config, double target);

/// Outcome of one independent Markov chain.
struct RepetitionResult {
    RepetitionMeans means;
    SweepStats measurement_stats;
    ProposalWindows windows;
    Configuration final_config;
    double max_energy_drift = 0.0;  // relative, over all checkpoints
};

/// Fresh initial configuration of repetition `rep` at point `point`.
Configuration initial_config(const RunSpec& spec, const LatticeGeom& geom, Rng& rng);

/// Thermalizes with window tuning, then measures every measure_interval
/// sweeps. Starts from `start` when given (density-matched in the canonical
/// ensemble), otherwise from the fresh start selected by spec.init. The
/// chain uses derive_seed(spec.seed, point, rep). Throws BookkeepingError on
/// energy drift.
RepetitionResult run_repetition(const RunSpec& spec, const ModelParams& p, const LatticeGeom& geom,
                                std::size_t point, std::size_t rep, const Configuration* start = nullptr);

/// Assembles a record from per-repetition results (in repetition order).
PointRecord assemble_record(const RunSpec& spec, const ModelParams& p, std::size_t point,
                            std::vector<RepetitionResult>& reps, const Thresholds& th);

/// All repetitions of one parameter point, run on up to `workers` threads.
PointRecord run_point(const RunSpec& spec, const ModelParams& p, const LatticeGeom& geom,
                      const Thresholds& th = {}, std::size_t point = 0, unsigned workers = 1);

}  // namespace hcb
