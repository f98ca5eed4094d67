#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcb/lattice.hpp"

namespace hcb {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Ensemble { grand, canonical };

/// Maps any angle onto [0, 2 pi).
inline double wrap_phase(double chi) noexcept {
    double w = chi - two_pi * std::floor(chi / two_pi);
    return (w >= two_pi || w < 0.0) ? 0.0 : w;
}

/// Classical state of one site: occupation n in [0,1] and phase chi in
/// [0, 2 pi). The boson field is sqrt(n (1-n)) exp(i chi).
struct SiteState {
    double n = 0.0;
    double chi = 0.0;

    friend bool operator==(const SiteState&, const SiteState&) = default;
};

inline double hop_amplitude(double n) noexcept { return std::sqrt(n * (1.0 - n)); }

/// Dimensionless couplings: c1 = beta t, c2 = beta V, m = beta mu.
struct ModelParams {
    double c1 = 0.0;
    double c2 = 0.0;
    double m = 0.0;

    /// Throws std::invalid_argument for c1 < 0 or c2 < 0.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Site states together with the cached field components
/// sqrt(n(1-n)) cos chi, sqrt(n(1-n)) sin chi and the running total beta*H.
/// Sites are stored as packed records so a neighbor lookup touches a single
/// cache line.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::size_t n_sites) : sites_(n_sites) {}

    std::size_t size() const noexcept { return sites_.size(); }

    SiteState state(std::size_t i) const noexcept { return {sites_[i].n, sites_[i].chi}; }
    double occupation(std::size_t i) const noexcept { return sites_[i].n; }
    double phase(std::size_t i) const noexcept { return sites_[i].chi; }
    double field_x(std::size_t i) const noexcept { return sites_[i].fx; }
    double field_y(std::size_t i) const noexcept { return sites_[i].fy; }

    /// Overwrites site i (phase is wrapped); leaves cached_energy untouched.
    void set(std::size_t i, SiteState s) noexcept {
        const double chi = wrap_phase(s.chi);
        const double a = hop_amplitude(s.n);
        sites_[i] = {a * std::cos(chi), a * std::sin(chi), s.n, chi};
    }

    /// Stores precomputed values; chi must already be wrapped and (fx, fy)
    /// must equal sqrt(n(1-n)) (cos chi, sin chi).
    void assign(std::size_t i, double n, double chi, double fx, double fy) noexcept { sites_[i] = {fx, fy, n, chi}; }

    double cached_energy() const noexcept { return energy_; }
    void set_cached_energy(double e) noexcept { energy_ = e; }
    void add_energy(double de) noexcept { energy_ += de; }

    double total_occupation() const noexcept;

private:
    struct Site {
        double fx = 0.0, fy = 0.0, n = 0.0, chi = 0.0;
    };
    std::vector<Site> sites_;
    double energy_ = 0.0;
};

/// beta*H = -2 c1 sum_hop sqrt(n_i(1-n_i) n_j(1-n_j)) cos(chi_i - chi_j)
///          + c2 sum_rep n_i n_j - m sum_i n_i,
/// each undirected bond counted once. Evaluated directly from (n, chi),
/// independent of the cached fields.
template <BondGraph G>
double classical_energy(const Configuration& config, const ModelParams& p, const G& graph) {
    double hop = 0.0, rep = 0.0, occ = 0.0;
    const auto N = graph.size();
    for (std::size_t i = 0; i < N; ++i) {
        const double ni = config.occupation(i);
        const double ai = hop_amplitude(ni);
        const double ci = config.phase(i);
        occ += ni;
        for (auto j : graph.hop_neighbors(i)) {
            const auto sj = static_cast<std::size_t>(j);
            if (sj <= i) continue;
            hop += ai * hop_amplitude(config.occupation(sj)) * std::cos(wrap_phase(ci - config.phase(sj)));
        }
        for (auto j : graph.rep_neighbors(i)) {
            const auto sj = static_cast<std::size_t>(j);
            if (sj <= i) continue;
            rep += ni * config.occupation(sj);
        }
    }
    return -2.0 * p.c1 * hop + p.c2 * rep - p.m * occ;
}

namespace detail {

template <class Range>
inline void local_fields(const Configuration& c, const Range& hop, double& hx, double& hy) noexcept {
    hx = 0.0;
    hy = 0.0;
    for (auto j : hop) {
        hx += c.field_x(static_cast<std::size_t>(j));
        hy += c.field_y(static_cast<std::size_t>(j));
    }
}

template <class Range>
inline double rep_field(const Configuration& c, const Range& rep) noexcept {
    double r = 0.0;
    for (auto j : rep) r += c.occupation(static_cast<std::size_t>(j));
    return r;
}

}  // namespace detail

/// Change of beta*H when site i takes occupation n_new and field
/// components (fx_new, fy_new).
template <BondGraph G>
double delta_energy_fields(const Configuration& config, const ModelParams& p, const G& graph, std::size_t i,
                           double n_new, double fx_new, double fy_new) noexcept {
    double hx, hy;
    detail::local_fields(config, graph.hop_neighbors(i), hx, hy);
    const double dn = n_new - config.occupation(i);
    const double dhop = (fx_new - config.field_x(i)) * hx + (fy_new - config.field_y(i)) * hy;
    double d = -2.0 * p.c1 * dhop;
    if (dn != 0.0) d += (p.c2 * detail::rep_field(config, graph.rep_neighbors(i)) - p.m) * dn;
    return d;
}

/// Change of beta*H when site i is replaced by `proposed`.
template <BondGraph G>
double delta_energy_site(const Configuration& config, const ModelParams& p, const G& graph, std::size_t i,
                         SiteState proposed) {
    const double a_new = hop_amplitude(proposed.n);
    const double chi_new = wrap_phase(proposed.chi);
    return delta_energy_fields(config, p, graph, i, proposed.n, a_new * std::cos(chi_new),
                               a_new * std::sin(chi_new));
}

/// Change of beta*H when occupation delta moves from site j to site i
/// (n_i += delta, n_j -= delta, phases fixed). Returns nullopt when either
/// occupation would leave [0,1]; the caller rejects such a proposal.
template <BondGraph G>
std::optional<double> delta_energy_pair(const Configuration& config, const ModelParams& p, const G& graph,
                                        std::size_t i, std::size_t j, double delta) {
    const double ni = config.occupation(i), nj = config.occupation(j);
    const double ni_new = ni + delta, nj_new = nj - delta;
    if (!(ni_new >= 0.0 && ni_new <= 1.0 && nj_new >= 0.0 && nj_new <= 1.0)) return std::nullopt;
    if (delta == 0.0) return 0.0;

    const double ci = std::cos(config.phase(i)), si = std::sin(config.phase(i));
    const double cj = std::cos(config.phase(j)), sj = std::sin(config.phase(j));
    const double dai = hop_amplitude(ni_new) - hop_amplitude(ni);
    const double daj = hop_amplitude(nj_new) - hop_amplitude(nj);

    double hx, hy;
    detail::local_fields(config, graph.hop_neighbors(i), hx, hy);
    double d = -2.0 * p.c1 * dai * (ci * hx + si * hy) + p.c2 * detail::rep_field(config, graph.rep_neighbors(i)) * delta;
    detail::local_fields(config, graph.hop_neighbors(j), hx, hy);
    d += -2.0 * p.c1 * daj * (cj * hx + sj * hy) - p.c2 * detail::rep_field(config, graph.rep_neighbors(j)) * delta;

    // Both endpoints moved: the bond term is bilinear, add the product of the
    // two increments once.
    for (auto k : graph.hop_neighbors(i))
        if (static_cast<std::size_t>(k) == j) d += -2.0 * p.c1 * dai * daj * (ci * cj + si * sj);
    for (auto k : graph.rep_neighbors(i))
        if (static_cast<std::size_t>(k) == j) d += -p.c2 * delta * delta;
    return d;
}

/// n -> 1-n at fixed phases together with m -> 6 c2 - m. On the stacked
/// triangular lattice
///   E(ph config, params) = E(config, ph params) + (3 c2 - m) N.
std::pair<Configuration, ModelParams> ph_transform(const Configuration& config, const ModelParams& p);

/// Additive constant of the particle-hole identity, (3 c2 - m) N.
inline double ph_energy_offset(const ModelParams& p, std::size_t n_sites) {
    return (3.0 * p.c2 - p.m) * static_cast<double>(n_sites);
}

struct IdealPattern {
    enum class Kind { empty, full, solid13, solid23, uniform, random };
    Kind kind = Kind::empty;
    double rho0 = 0.0;        // uniform only
    double chi0 = 0.0;        // uniform only
    std::uint64_t seed = 0;   // random only

    friend bool operator==(const IdealPattern&, const IdealPattern&) = default;

    static IdealPattern empty() { return {Kind::empty}; }
    static IdealPattern full() { return {Kind::full}; }
    static IdealPattern solid13() { return {Kind::solid13}; }
    static IdealPattern solid23() { return {Kind::solid23}; }
    static IdealPattern uniform(double rho, double chi) { return {Kind::uniform, rho, chi}; }
    static IdealPattern random(std::uint64_t seed) { return {Kind::random, 0.0, 0.0, seed}; }
};

std::string to_string(IdealPattern::Kind k);
/// Accepts empty, full, solid13, solid23, uniform, random.
std::optional<IdealPattern::Kind> parse_pattern_kind(const std::string& s);

/// Builds the pattern on the lattice; the solids occupy sublattice A
/// (solid13) or B and C (solid23). cached_energy is left at zero.
Configuration ideal_config(const IdealPattern& pattern, const LatticeGeom& geom);

/// Recomputes and stores cached_energy.
template <BondGraph G>
void refresh_energy(Configuration& config, const ModelParams& p, const G& graph) {
    config.set_cached_energy(classical_energy(config, p, graph));
}

struct QuadratureGrid {
    int n_points = 64;
    int chi_points = 32;
};

struct QuadratureAverages {
    double energy = 0.0;      // <beta H>
    double energy_sq = 0.0;   // <(beta H)^2>
    std::vector<double> n_mean;
    std::vector<double> n2_mean;

    double energy_variance() const { return energy_sq - energy * energy; }
};

/// Midpoint-rule Boltzmann averages over the flat measure
/// prod_i dn_i dchi_i / (2 pi) on [0,1] x [0, 2 pi). The integrand only
/// depends on phase differences, so the first phase is pinned to a grid
/// point; on a periodic midpoint grid this leaves the sum unchanged.
/// Throws std::invalid_argument for more than three sites.
QuadratureAverages brute_force_average(const TestGraph& graph, const ModelParams& p, const QuadratureGrid& grid);

}  // namespace hcb
