#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hcb/config.hpp"
#include "hcb/lattice.hpp"
#include "hcb/model.hpp"
#include "hcb/observables.hpp"

namespace hcb {

/// First line of every output file.
std::string provenance_line(std::uint64_t seed, const std::string& hash);

/// point_index,c1,c2,beta_mu,t_over_V,mu_over_V,rho_target,L,ensemble,E,E_err,
/// C,C_err,rho,rho_err,m_s,m_s_err,phi,phi_err,accept_rate,phase
/// with 9 significant digits and NA for fields that do not apply.
/// Throws std::invalid_argument for an empty record list.
std::string points_csv(const std::vector<PointRecord>& records);

/// axis,r,n_r,n_r_err,G_r,G_r_err for both correlator axes.
std::string corr_csv(const PointRecord& record);

/// z,rho_z,ms_z,phi_z.
std::string layers_csv(const PointRecord& record);

/// One "# z=<k>" block per layer: L rows (y) of L occupations (x) in fixed
/// notation with 6 decimals, blocks separated by blank lines.
std::string snapshot_text(const Configuration& config, const LatticeGeom& geom);

/// Writes header + body; throws hcb::Error naming the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& header, const std::string& body);

/// Writes points.csv and per-point corr/layers/snapshot files plus
/// metadata.txt into config.out_dir (or `out_dir` when non-empty).
void write_run_outputs(const std::filesystem::path& out_dir, const RunConfig& config,
                       const std::vector<PointRecord>& records, double wall_seconds);

}  // namespace hcb
