#include "hcb/classify.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "hcb/observables.hpp"

namespace hcb {

namespace {

constexpr std::array<PhaseLabel, 9> all_labels = {
    PhaseLabel::Empty,      PhaseLabel::Full,       PhaseLabel::Solid13,
    PhaseLabel::Solid23,    PhaseLabel::SolidMixed, PhaseLabel::Superfluid,
    PhaseLabel::Supersolid, PhaseLabel::PhaseSeparated, PhaseLabel::Disordered,
};

double population_std(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

bool layers_split(const LayerProfile& lp, const Thresholds& th) {
    bool solid_like = false, fluid_like = false;
    for (std::size_t z = 0; z < lp.rho.size(); ++z) {
        if (lp.ms[z] > th.theta_s && lp.phi[z] < th.theta_f) solid_like = true;
        if (lp.phi[z] > th.theta_f) fluid_like = true;
    }
    return solid_like && fluid_like;
}

}  // namespace

std::string to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::Empty: return "Empty";
        case PhaseLabel::Full: return "Full";
        case PhaseLabel::Solid13: return "Solid13";
        case PhaseLabel::Solid23: return "Solid23";
        case PhaseLabel::SolidMixed: return "SolidMixed";
        case PhaseLabel::Superfluid: return "Superfluid";
        case PhaseLabel::Supersolid: return "Supersolid";
        case PhaseLabel::PhaseSeparated: return "PhaseSeparated";
        case PhaseLabel::Disordered: return "Disordered";
    }
    return "?";
}

std::optional<PhaseLabel> parse_phase_label(const std::string& s) {
    for (auto l : all_labels)
        if (to_string(l) == s) return l;
    return std::nullopt;
}

void Thresholds::validate() const {
    auto check = [](double v, const char* name) {
        if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
    };
    check(eps_rho, "eps_rho");
    check(theta_s, "theta_s");
    check(theta_f, "theta_f");
    check(theta_layer, "theta_layer");
}

PhaseLabel classify_phase(const PointRecord& record, const Thresholds& th) {
    const double rho = record.rho.value;
    const double ms = record.m_s.value;
    const double phi = record.phi.value;

    if (rho < th.eps_rho) return PhaseLabel::Empty;
    if (rho > 1.0 - th.eps_rho) return PhaseLabel::Full;
    if (population_std(record.layers.rho) > th.theta_layer && layers_split(record.layers, th))
        return PhaseLabel::PhaseSeparated;

    const bool solid = ms > th.theta_s;
    const bool fluid = phi > th.theta_f;
    if (solid && !fluid) {
        if (std::abs(rho - 1.0 / 3.0) < th.eps_rho) return PhaseLabel::Solid13;
        if (std::abs(rho - 2.0 / 3.0) < th.eps_rho) return PhaseLabel::Solid23;
        return PhaseLabel::SolidMixed;
    }
    if (fluid && !solid) return PhaseLabel::Superfluid;
    if (fluid && solid) return PhaseLabel::Supersolid;
    return PhaseLabel::Disordered;
}

}  // namespace hcb
