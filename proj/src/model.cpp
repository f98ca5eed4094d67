#include "hcb/model.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "hcb/rng.hpp"

namespace hcb {

void ModelParams::validate() const {
    if (!(c1 >= 0.0)) throw std::invalid_argument("c1 must be >= 0");
    if (!(c2 >= 0.0)) throw std::invalid_argument("c2 must be >= 0");
    if (!std::isfinite(m)) throw std::invalid_argument("m must be finite");
}

double Configuration::total_occupation() const noexcept {
    double s = 0.0;
    for (const auto& site : sites_) s += site.n;
    return s;
}

std::pair<Configuration, ModelParams> ph_transform(const Configuration& config, const ModelParams& p) {
    Configuration out(config.size());
    for (std::size_t i = 0; i < config.size(); ++i) out.set(i, {1.0 - config.occupation(i), config.phase(i)});
    ModelParams q = p;
    q.m = 6.0 * p.c2 - p.m;
    return {std::move(out), q};
}

std::string to_string(IdealPattern::Kind k) {
    switch (k) {
        case IdealPattern::Kind::empty: return "empty";
        case IdealPattern::Kind::full: return "full";
        case IdealPattern::Kind::solid13: return "solid13";
        case IdealPattern::Kind::solid23: return "solid23";
        case IdealPattern::Kind::uniform: return "uniform";
        case IdealPattern::Kind::random: return "random";
    }
    return "?";
}

std::optional<IdealPattern::Kind> parse_pattern_kind(const std::string& s) {
    for (auto k : {IdealPattern::Kind::empty, IdealPattern::Kind::full, IdealPattern::Kind::solid13,
                   IdealPattern::Kind::solid23, IdealPattern::Kind::uniform, IdealPattern::Kind::random})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

Configuration ideal_config(const IdealPattern& pattern, const LatticeGeom& geom) {
    const auto N = geom.size();
    Configuration c(N);
    using K = IdealPattern::Kind;
    if (pattern.kind == K::uniform && !(pattern.rho0 >= 0.0 && pattern.rho0 <= 1.0))
        throw std::invalid_argument("uniform pattern density must lie in [0,1]");
    Rng rng(pattern.seed);
    for (std::size_t i = 0; i < N; ++i) {
        const bool on_a = geom.sublattice(i) == Sublattice::A;
        switch (pattern.kind) {
            case K::empty: break;
            case K::full: c.set(i, {1.0, 0.0}); break;
            case K::solid13: c.set(i, {on_a ? 1.0 : 0.0, 0.0}); break;
            case K::solid23: c.set(i, {on_a ? 0.0 : 1.0, 0.0}); break;
            case K::uniform: c.set(i, {pattern.rho0, pattern.chi0}); break;
            case K::random: {
                const double n = rng.uniform();
                c.set(i, {n, two_pi * rng.uniform()});
                break;
            }
        }
    }
    return c;
}

QuadratureAverages brute_force_average(const TestGraph& graph, const ModelParams& p, const QuadratureGrid& grid) {
    const std::size_t S = graph.size();
    if (S == 0 || S > 3) throw std::invalid_argument("brute_force_average supports 1 to 3 sites");
    if (grid.n_points < 1 || grid.chi_points < 1) throw std::invalid_argument("quadrature grid must be positive");

    const int P = grid.n_points;
    const int X = grid.chi_points;
    std::vector<double> nodes(static_cast<std::size_t>(P)), amp(static_cast<std::size_t>(P));
    for (int k = 0; k < P; ++k) {
        nodes[k] = (k + 0.5) / P;
        amp[k] = hop_amplitude(nodes[k]);
    }
    std::vector<double> cosk(static_cast<std::size_t>(X));
    for (int k = 0; k < X; ++k) cosk[k] = std::cos(two_pi * k / X);

    // Site pairs (0,1), (0,2), (1,2); phase differences are k1, k2, k2-k1.
    constexpr std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
    std::array<bool, 3> hop{}, rep{};
    auto pair_slot = [&](SiteIndex a, SiteIndex b) {
        const int lo = std::min(a, b), hi = std::max(a, b);
        for (int q = 0; q < 3; ++q)
            if (pairs[q].first == lo && pairs[q].second == hi) return q;
        return -1;
    };
    for (auto [a, b] : graph.hop_bonds()) hop[pair_slot(a, b)] = true;
    for (auto [a, b] : graph.rep_bonds()) rep[pair_slot(a, b)] = true;

    const int K1 = S >= 2 ? X : 1;
    const int K2 = S >= 3 ? X : 1;
    const int P1 = S >= 2 ? P : 1;
    const int P2 = S >= 3 ? P : 1;

    auto static_part = [&](const std::array<int, 3>& idx, std::array<double, 3>& h) {
        double e = 0.0;
        for (std::size_t s = 0; s < S; ++s) e -= p.m * nodes[idx[s]];
        for (int q = 0; q < 3; ++q) {
            const auto [a, b] = pairs[q];
            h[q] = 0.0;
            if (static_cast<std::size_t>(b) >= S) continue;
            if (rep[q]) e += p.c2 * nodes[idx[a]] * nodes[idx[b]];
            if (hop[q]) h[q] = -2.0 * p.c1 * amp[idx[a]] * amp[idx[b]];
        }
        return e;
    };

    // Reference for overflow-free exponentials: a lower bound on beta*H.
    double e_min = std::numeric_limits<double>::infinity();
    for (int i0 = 0; i0 < P; ++i0)
        for (int i1 = 0; i1 < P1; ++i1)
            for (int i2 = 0; i2 < P2; ++i2) {
                std::array<double, 3> h;
                const double e0 = static_part({i0, i1, i2}, h);
                e_min = std::min(e_min, e0 - std::abs(h[0]) - std::abs(h[1]) - std::abs(h[2]));
            }

    double Z = 0.0, sumE = 0.0, sumE2 = 0.0;
    std::vector<double> sumN(S, 0.0), sumN2(S, 0.0);
    std::array<std::vector<double>, 3> table;
    for (auto& t : table) t.resize(static_cast<std::size_t>(X));

    for (int i0 = 0; i0 < P; ++i0)
        for (int i1 = 0; i1 < P1; ++i1)
            for (int i2 = 0; i2 < P2; ++i2) {
                const std::array<int, 3> idx = {i0, i1, i2};
                std::array<double, 3> h;
                const double e0 = static_part(idx, h);
                for (int q = 0; q < 3; ++q)
                    for (int k = 0; k < X; ++k) table[q][k] = std::exp(-h[q] * cosk[k]);

                // Sums over the free phases of w, w*E_hop, w*E_hop^2.
                double zc = 0.0, ec = 0.0, e2c = 0.0;
                for (int k1 = 0; k1 < K1; ++k1) {
                    const double w1 = table[0][k1];
                    const double e1 = h[0] * cosk[k1];
                    for (int k2 = 0; k2 < K2; ++k2) {
                        const int k21 = ((k2 - k1) % X + X) % X;
                        const double w = w1 * table[1][k2] * table[2][k21];
                        const double eh = e1 + h[1] * cosk[k2] + h[2] * cosk[k21];
                        zc += w;
                        ec += w * eh;
                        e2c += w * eh * eh;
                    }
                }
                const double base = std::exp(-(e0 - e_min));
                const double z = base * zc;
                Z += z;
                sumE += base * (e0 * zc + ec);
                sumE2 += base * (e0 * e0 * zc + 2.0 * e0 * ec + e2c);
                for (std::size_t s = 0; s < S; ++s) {
                    sumN[s] += z * nodes[idx[s]];
                    sumN2[s] += z * nodes[idx[s]] * nodes[idx[s]];
                }
            }

    QuadratureAverages out;
    out.energy = sumE / Z;
    out.energy_sq = sumE2 / Z;
    out.n_mean.resize(S);
    out.n2_mean.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        out.n_mean[s] = sumN[s] / Z;
        out.n2_mean[s] = sumN2[s] / Z;
    }
    return out;
}

}  // namespace hcb
