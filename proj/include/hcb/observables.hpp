#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "hcb/classify.hpp"
#include "hcb/lattice.hpp"
#include "hcb/model.hpp"

namespace hcb {

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

/// Index 0 is the in-plane a1 direction, index 1 the stacking direction.
inline constexpr std::array<Axis, 2> correlator_axes = {Axis::in_plane_a1, Axis::stacking};

struct Correlators {
    std::vector<double> n_r;  // (1/N) sum_i n_i n_{i+r}
    std::vector<double> G_r;  // (1/N) sum_i phi_i . phi_{i+r}
};

struct LayerProfile {
    std::vector<double> rho;
    std::vector<double> ms;
    std::vector<double> phi;
};

struct ScalarSample {
    double energy = 0.0;  // beta*H
    double rho = 0.0;
};

/// beta*H from the cached energy and the mean occupation.
ScalarSample measure_scalars(const Configuration& config, const LatticeGeom& geom);

/// |sum_i n_i omega^s(i)| / N.
double structure_factor(const Configuration& config, const LatticeGeom& geom);

/// |(1/N) sum_i sqrt(n_i(1-n_i)) exp(i chi_i)|.
double sf_order(const Configuration& config);

/// n(r) and G(r) for r = 0..L/2 along one axis, averaged over all sites.
Correlators corr_functions(const Configuration& config, const LatticeGeom& geom, Axis axis);

/// rho, m_s and Phi restricted to each layer z = 0..L-1.
LayerProfile layer_profile(const Configuration& config, const LatticeGeom& geom);

/// Time averages of one repetition.
struct RepetitionMeans {
    double energy = 0.0;       // <beta H> / N
    double heat = 0.0;         // (<(beta H)^2> - <beta H>^2) / N
    double rho = 0.0;
    double ms = 0.0;
    double phi = 0.0;
    std::array<std::vector<double>, 2> corr_n;
    std::array<std::vector<double>, 2> corr_G;
    LayerProfile layers;
    std::size_t count = 0;
};

/// Running sums for one chain. Energies are accumulated relative to the
/// first sample to keep the variance well conditioned.
class MeasurementAccumulator {
public:
    explicit MeasurementAccumulator(const LatticeGeom& geom);

    void add(const Configuration& config);
    std::size_t count() const noexcept { return count_; }
    RepetitionMeans means() const;

private:
    const LatticeGeom* geom_;
    std::size_t count_ = 0;
    double e_ref_ = 0.0;
    double e_sum_ = 0.0, e2_sum_ = 0.0;
    double rho_sum_ = 0.0, ms_sum_ = 0.0, phi_sum_ = 0.0;
    std::array<std::vector<double>, 2> n_sum_, g_sum_;
    std::vector<double> lrho_sum_, lms_sum_, lphi_sum_;
};

struct PointRecord {
    std::size_t point_index = 0;
    ModelParams params;
    double t_over_V = 0.0;
    std::optional<double> mu_over_V;   // grand only
    std::optional<double> rho_target;  // canonical only
    int L = 0;
    Ensemble ensemble = Ensemble::grand;

    Estimate E, C, rho, m_s, phi;
    std::array<std::vector<Estimate>, 2> corr_n;
    std::array<std::vector<Estimate>, 2> corr_G;
    /// Time-averaged layer profile of repetition 0, consistent with the
    /// snapshot; averaging across repetitions would wash out layered
    /// structures that form at different heights.
    LayerProfile layers;

    PhaseLabel phase = PhaseLabel::Disordered;
    double accept_rate = 0.0;
    Configuration snapshot;
};

/// Combines repetition means into grand means with standard errors
/// (cross-repetition standard deviation / sqrt(R)). Fills the observable
/// fields of `record`. Throws InsufficientSamples for fewer than two
/// repetitions.
void finalize(const std::vector<RepetitionMeans>& reps, PointRecord& record);

/// Mean and standard error of a sample; error needs at least two values.
Estimate mean_and_error(const std::vector<double>& values);

}  // namespace hcb
