#pragma once

#include <optional>
#include <string>

namespace hcb {

struct PointRecord;

enum class PhaseLabel {
    Empty,
    Full,
    Solid13,
    Solid23,
    SolidMixed,
    Superfluid,
    Supersolid,
    PhaseSeparated,
    Disordered,
};

std::string to_string(PhaseLabel label);
std::optional<PhaseLabel> parse_phase_label(const std::string& s);

/// Decision thresholds; all must lie in (0, 1).
struct Thresholds {
    double eps_rho = 0.02;      // density margin
    double theta_s = 0.15;      // solid order m_s
    double theta_f = 0.10;      // superfluid order Phi
    double theta_layer = 0.10;  // cross-layer std of rho_z

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// Decision tree, first match wins:
///   rho < eps                                   -> Empty
///   rho > 1 - eps                               -> Full
///   std(rho_z) > theta_layer and layers split
///     into solid-like and fluid-like            -> PhaseSeparated
///   m_s > theta_s, Phi <= theta_f               -> Solid13 / Solid23 / SolidMixed
///   Phi > theta_f, m_s <= theta_s               -> Superfluid
///   both above                                  -> Supersolid
///   otherwise                                   -> Disordered
/// A layer is solid-like when m_s^z > theta_s and Phi^z < theta_f, and
/// fluid-like when Phi^z > theta_f.
PhaseLabel classify_phase(const PointRecord& record, const Thresholds& th = {});

}  // namespace hcb
