#include "hcb/observables.hpp"

#include <cmath>
#include <algorithm>

#include "hcb/errors.hpp"

namespace hcb {

namespace {

// |sa + sb w + sc w^2| in real arithmetic, exactly zero for equal sums.
double three_sublattice_modulus(double sa, double sb, double sc) {
    const double q = sa * sa + sb * sb + sc * sc - sa * sb - sb * sc - sa * sc;
    return std::sqrt(std::max(0.0, q));
}

}  // namespace

ScalarSample measure_scalars(const Configuration& config, const LatticeGeom& geom) {
    return {config.cached_energy(), config.total_occupation() / static_cast<double>(geom.size())};
}

double structure_factor(const Configuration& config, const LatticeGeom& geom) {
    double s[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < geom.size(); ++i) s[static_cast<int>(geom.sublattice(i))] += config.occupation(i);
    return three_sublattice_modulus(s[0], s[1], s[2]) / static_cast<double>(geom.size());
}

double sf_order(const Configuration& config) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        sx += config.field_x(i);
        sy += config.field_y(i);
    }
    return std::hypot(sx, sy) / static_cast<double>(config.size());
}

Correlators corr_functions(const Configuration& config, const LatticeGeom& geom, Axis axis) {
    const int L = geom.L();
    const int R = L / 2;
    Correlators out{std::vector<double>(R + 1, 0.0), std::vector<double>(R + 1, 0.0)};
    for (int z = 0; z < L; ++z)
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                const auto i = geom.index(x, y, z);
                for (int r = 0; r <= R; ++r) {
                    const auto j = axis == Axis::in_plane_a1 ? geom.index((x + r) % L, y, z)
                                                             : geom.index(x, y, (z + r) % L);
                    out.n_r[r] += config.occupation(i) * config.occupation(j);
                    out.G_r[r] += config.field_x(i) * config.field_x(j) + config.field_y(i) * config.field_y(j);
                }
            }
    const double inv = 1.0 / static_cast<double>(geom.size());
    for (int r = 0; r <= R; ++r) {
        out.n_r[r] *= inv;
        out.G_r[r] *= inv;
    }
    return out;
}

LayerProfile layer_profile(const Configuration& config, const LatticeGeom& geom) {
    const int L = geom.L();
    const auto per_layer = geom.layer_size();
    LayerProfile out{std::vector<double>(L), std::vector<double>(L), std::vector<double>(L)};
    for (int z = 0; z < L; ++z) {
        double occ = 0.0, sx = 0.0, sy = 0.0;
        double s[3] = {0.0, 0.0, 0.0};
        const auto begin = static_cast<std::size_t>(z) * per_layer;
        for (auto i = begin; i < begin + per_layer; ++i) {
            occ += config.occupation(i);
            s[static_cast<int>(geom.sublattice(i))] += config.occupation(i);
            sx += config.field_x(i);
            sy += config.field_y(i);
        }
        const double inv = 1.0 / static_cast<double>(per_layer);
        out.rho[z] = occ * inv;
        out.ms[z] = three_sublattice_modulus(s[0], s[1], s[2]) * inv;
        out.phi[z] = std::hypot(sx, sy) * inv;
    }
    return out;
}

MeasurementAccumulator::MeasurementAccumulator(const LatticeGeom& geom) : geom_(&geom) {
    const auto R = static_cast<std::size_t>(geom.L() / 2 + 1);
    for (auto& v : n_sum_) v.assign(R, 0.0);
    for (auto& v : g_sum_) v.assign(R, 0.0);
    const auto L = static_cast<std::size_t>(geom.L());
    lrho_sum_.assign(L, 0.0);
    lms_sum_.assign(L, 0.0);
    lphi_sum_.assign(L, 0.0);
}

void MeasurementAccumulator::add(const Configuration& config) {
    const auto s = measure_scalars(config, *geom_);
    if (count_ == 0) e_ref_ = s.energy;
    const double de = s.energy - e_ref_;
    e_sum_ += de;
    e2_sum_ += de * de;
    rho_sum_ += s.rho;
    ms_sum_ += structure_factor(config, *geom_);
    phi_sum_ += sf_order(config);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto c = corr_functions(config, *geom_, correlator_axes[a]);
        for (std::size_t r = 0; r < c.n_r.size(); ++r) {
            n_sum_[a][r] += c.n_r[r];
            g_sum_[a][r] += c.G_r[r];
        }
    }
    const auto lp = layer_profile(config, *geom_);
    for (std::size_t z = 0; z < lp.rho.size(); ++z) {
        lrho_sum_[z] += lp.rho[z];
        lms_sum_[z] += lp.ms[z];
        lphi_sum_[z] += lp.phi[z];
    }
    ++count_;
}

RepetitionMeans MeasurementAccumulator::means() const {
    RepetitionMeans m;
    m.count = count_;
    if (count_ == 0) return m;
    const double k = static_cast<double>(count_);
    const double N = static_cast<double>(geom_->size());
    const double de = e_sum_ / k;
    m.energy = (e_ref_ + de) / N;
    m.heat = std::max(0.0, e2_sum_ / k - de * de) / N;
    m.rho = rho_sum_ / k;
    m.ms = ms_sum_ / k;
    m.phi = phi_sum_ / k;
    for (std::size_t a = 0; a < 2; ++a) {
        m.corr_n[a].resize(n_sum_[a].size());
        m.corr_G[a].resize(g_sum_[a].size());
        for (std::size_t r = 0; r < n_sum_[a].size(); ++r) {
            m.corr_n[a][r] = n_sum_[a][r] / k;
            m.corr_G[a][r] = g_sum_[a][r] / k;
        }
    }
    const auto L = lrho_sum_.size();
    m.layers.rho.resize(L);
    m.layers.ms.resize(L);
    m.layers.phi.resize(L);
    for (std::size_t z = 0; z < L; ++z) {
        m.layers.rho[z] = lrho_sum_[z] / k;
        m.layers.ms[z] = lms_sum_[z] / k;
        m.layers.phi[z] = lphi_sum_[z] / k;
    }
    return m;
}

Estimate mean_and_error(const std::vector<double>& values) {
    const auto R = values.size();
    if (R < 2) throw InsufficientSamples("at least two repetitions are needed for error bars");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(R);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(R - 1));
    return {mean, sd / std::sqrt(static_cast<double>(R))};
}

void finalize(const std::vector<RepetitionMeans>& reps, PointRecord& record) {
    if (reps.size() < 2) throw InsufficientSamples("at least two repetitions are needed for error bars");
    auto collect = [&](auto getter) {
        std::vector<double> v;
        v.reserve(reps.size());
        for (const auto& r : reps) v.push_back(getter(r));
        return mean_and_error(v);
    };
    record.E = collect([](const RepetitionMeans& r) { return r.energy; });
    record.C = collect([](const RepetitionMeans& r) { return r.heat; });
    record.rho = collect([](const RepetitionMeans& r) { return r.rho; });
    record.m_s = collect([](const RepetitionMeans& r) { return r.ms; });
    record.phi = collect([](const RepetitionMeans& r) { return r.phi; });
    for (std::size_t a = 0; a < 2; ++a) {
        const auto R = reps.front().corr_n[a].size();
        record.corr_n[a].resize(R);
        record.corr_G[a].resize(R);
        for (std::size_t r = 0; r < R; ++r) {
            record.corr_n[a][r] = collect([&](const RepetitionMeans& x) { return x.corr_n[a][r]; });
            record.corr_G[a][r] = collect([&](const RepetitionMeans& x) { return x.corr_G[a][r]; });
        }
    }
    record.layers = reps.front().layers;
}

}  // namespace hcb
