#include <doctest.h>

#include <vector>

#include "hcb/classify.hpp"
#include "hcb/observables.hpp"

using namespace hcb;

namespace {

PointRecord record(double rho, double ms, double phi, std::size_t layers = 12) {
    PointRecord r;
    r.rho = {rho, 0.0};
    r.m_s = {ms, 0.0};
    r.phi = {phi, 0.0};
    r.layers = {std::vector<double>(layers, rho), std::vector<double>(layers, ms), std::vector<double>(layers, phi)};
    return r;
}

/// Record transformation induced by n -> 1 - n: densities flip, order
/// parameters are unchanged.
PointRecord particle_hole(PointRecord r) {
    r.rho.value = 1.0 - r.rho.value;
    for (auto& v : r.layers.rho) v = 1.0 - v;
    return r;
}

}  // namespace

TEST_CASE("classify: reference records") {
    CHECK(classify_phase(record(0.334, 0.32, 0.01)) == PhaseLabel::Solid13);
    CHECK(classify_phase(record(0.50, 0.02, 0.30)) == PhaseLabel::Superfluid);
    CHECK(classify_phase(record(0.666, 0.30, 0.02)) == PhaseLabel::Solid23);
    CHECK(classify_phase(record(0.45, 0.30, 0.02)) == PhaseLabel::SolidMixed);
    CHECK(classify_phase(record(0.45, 0.20, 0.20)) == PhaseLabel::Supersolid);
    CHECK(classify_phase(record(0.45, 0.05, 0.05)) == PhaseLabel::Disordered);
    CHECK(classify_phase(record(0.01, 0.0, 0.0)) == PhaseLabel::Empty);
    CHECK(classify_phase(record(0.99, 0.0, 0.0)) == PhaseLabel::Full);
}

TEST_CASE("classify: layered phase separation") {
    auto r = record(0.25, 0.1, 0.15);
    for (std::size_t z = 0; z < 12; ++z) {
        const bool solid = z < 6;
        r.layers.rho[z] = solid ? 0.05 : 0.45;
        r.layers.ms[z] = solid ? 0.3 : 0.0;
        r.layers.phi[z] = solid ? 0.0 : 0.3;
    }
    CHECK(classify_phase(r) == PhaseLabel::PhaseSeparated);
    // Split layers without enough density contrast are not separated.
    for (std::size_t z = 0; z < 12; ++z) r.layers.rho[z] = 0.25 + (z % 2 ? 0.01 : -0.01);
    CHECK(classify_phase(r) != PhaseLabel::PhaseSeparated);
    // Density contrast without a solid/fluid split is not separated either.
    auto flat = record(0.5, 0.0, 0.4);
    for (std::size_t z = 0; z < 12; ++z) flat.layers.rho[z] = z < 6 ? 0.3 : 0.7;
    CHECK(classify_phase(flat) == PhaseLabel::Superfluid);
}

TEST_CASE("classify: thresholds move the decision") {
    const auto r = record(0.40, 0.12, 0.02);
    CHECK(classify_phase(r) == PhaseLabel::Disordered);
    Thresholds th;
    th.theta_s = 0.1;
    CHECK(classify_phase(r, th) == PhaseLabel::SolidMixed);
    th.eps_rho = 0.1;
    CHECK(classify_phase(r, th) == PhaseLabel::Solid13);
}

TEST_CASE("classify: particle-hole covariance") {
    const std::vector<PointRecord> records = {
        record(0.334, 0.32, 0.01), record(0.666, 0.3, 0.0), record(0.5, 0.0, 0.3), record(0.4, 0.2, 0.2),
        record(0.45, 0.02, 0.02), record(0.005, 0.0, 0.0), record(0.55, 0.3, 0.0),
    };
    for (const auto& r : records) {
        const auto a = classify_phase(r), b = classify_phase(particle_hole(r));
        if (a == PhaseLabel::Solid13)
            CHECK(b == PhaseLabel::Solid23);
        else if (a == PhaseLabel::Solid23)
            CHECK(b == PhaseLabel::Solid13);
        else if (a == PhaseLabel::Empty)
            CHECK(b == PhaseLabel::Full);
        else
            CHECK(b == a);
    }
}

TEST_CASE("classify: raising the superfluid order never produces a solid from a fluid") {
    for (double ms : {0.0, 0.1, 0.2, 0.3}) {
        bool fluid_seen = false;
        for (double phi = 0.0; phi <= 0.5; phi += 0.01) {
            const auto l = classify_phase(record(0.4, ms, phi));
            if (l == PhaseLabel::Superfluid || l == PhaseLabel::Supersolid) fluid_seen = true;
            if (fluid_seen)
                CHECK((l != PhaseLabel::Solid13 && l != PhaseLabel::Solid23 && l != PhaseLabel::SolidMixed));
        }
    }
}

TEST_CASE("classify: labels and threshold validation") {
    for (auto l : {PhaseLabel::Empty, PhaseLabel::Full, PhaseLabel::Solid13, PhaseLabel::Solid23,
                   PhaseLabel::SolidMixed, PhaseLabel::Superfluid, PhaseLabel::Supersolid,
                   PhaseLabel::PhaseSeparated, PhaseLabel::Disordered})
        CHECK(parse_phase_label(to_string(l)) == l);
    CHECK_FALSE(parse_phase_label("Liquid").has_value());
    Thresholds th;
    CHECK_NOTHROW(th.validate());
    th.theta_f = 0.0;
    CHECK_THROWS_WITH_AS(th.validate(), "theta_f must lie in (0,1)", std::invalid_argument);
    th = {};
    th.eps_rho = 1.0;
    CHECK_THROWS_AS(th.validate(), std::invalid_argument);
}
