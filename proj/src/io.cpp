#include "hcb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hcb/errors.hpp"
#include "hcb/scan.hpp"

namespace hcb {

namespace {

constexpr const char* version = "1.0.0";

std::string g9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string g9(const std::optional<double>& v) { return v ? g9(*v) : "NA"; }

std::string numbered(const char* stem, std::size_t index, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu.%s", stem, index, ext);
    return buf;
}

}  // namespace

std::string provenance_line(std::uint64_t seed, const std::string& hash) {
    return "# seed=" + std::to_string(seed) + " config_hash=" + hash + "\n";
}

std::string points_csv(const std::vector<PointRecord>& records) {
    if (records.empty()) throw std::invalid_argument("points_csv: no records");
    std::ostringstream o;
    o << "point_index,c1,c2,beta_mu,t_over_V,mu_over_V,rho_target,L,ensemble,E,E_err,C,C_err,rho,rho_err,"
         "m_s,m_s_err,phi,phi_err,accept_rate,phase\n";
    for (const auto& r : records) {
        const bool grand = r.ensemble == Ensemble::grand;
        o << r.point_index << ',' << g9(r.params.c1) << ',' << g9(r.params.c2) << ','
          << (grand ? g9(r.params.m) : "NA") << ',' << g9(r.t_over_V) << ',' << g9(r.mu_over_V) << ','
          << g9(r.rho_target) << ',' << r.L << ',' << (grand ? "grand" : "canonical") << ',' << g9(r.E.value)
          << ',' << g9(r.E.error) << ',' << g9(r.C.value) << ',' << g9(r.C.error) << ',' << g9(r.rho.value)
          << ',' << g9(r.rho.error) << ',' << g9(r.m_s.value) << ',' << g9(r.m_s.error) << ','
          << g9(r.phi.value) << ',' << g9(r.phi.error) << ',' << g9(r.accept_rate) << ',' << to_string(r.phase)
          << '\n';
    }
    return o.str();
}

std::string corr_csv(const PointRecord& record) {
    std::ostringstream o;
    o << "axis,r,n_r,n_r_err,G_r,G_r_err\n";
    static constexpr const char* names[2] = {"in_plane", "stacking"};
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t r = 0; r < record.corr_n[a].size(); ++r)
            o << names[a] << ',' << r << ',' << g9(record.corr_n[a][r].value) << ','
              << g9(record.corr_n[a][r].error) << ',' << g9(record.corr_G[a][r].value) << ','
              << g9(record.corr_G[a][r].error) << '\n';
    return o.str();
}

std::string layers_csv(const PointRecord& record) {
    std::ostringstream o;
    o << "z,rho_z,ms_z,phi_z\n";
    const auto& l = record.layers;
    for (std::size_t z = 0; z < l.rho.size(); ++z)
        o << z << ',' << g9(l.rho[z]) << ',' << g9(l.ms[z]) << ',' << g9(l.phi[z]) << '\n';
    return o.str();
}

std::string snapshot_text(const Configuration& config, const LatticeGeom& geom) {
    std::string out;
    const int L = geom.L();
    char buf[32];
    for (int z = 0; z < L; ++z) {
        if (z > 0) out += '\n';
        out += "# z=" + std::to_string(z) + '\n';
        for (int y = 0; y < L; ++y) {
            for (int x = 0; x < L; ++x) {
                std::snprintf(buf, sizeof buf, "%.6f", config.occupation(geom.index(x, y, z)));
                if (x > 0) out += ' ';
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& header, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << header << body;
    f.close();
    if (!f) throw Error("failed writing " + path.string());
}

void write_run_outputs(const std::filesystem::path& out_dir, const RunConfig& config,
                       const std::vector<PointRecord>& records, double wall_seconds) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

    const auto header = provenance_line(config.scan.base.seed, config_hash(config));
    write_text_file(out_dir / "points.csv", header, points_csv(records));
    const LatticeGeom geom(config.scan.base.L);
    for (const auto& r : records) {
        write_text_file(out_dir / numbered("corr", r.point_index, "csv"), header, corr_csv(r));
        write_text_file(out_dir / numbered("layers", r.point_index, "csv"), header, layers_csv(r));
        write_text_file(out_dir / numbered("snapshot", r.point_index, "txt"), header, snapshot_text(r.snapshot, geom));
    }

    std::ostringstream meta;
    meta << "# version=" << version << '\n';
    char wt[64];
    std::snprintf(wt, sizeof wt, "%.3f", wall_seconds);
    meta << "# wall_time_seconds=" << wt << '\n';
    for (const auto& pt : enumerate_points(config.scan)) {
        meta << "# point " << pt.index << ": c1=" << format_double(pt.params.c1)
             << " c2=" << format_double(pt.params.c2) << " beta_mu=" << format_double(pt.params.m)
             << " t_over_V=" << format_double(pt.t_over_V);
        if (pt.mu_over_V) meta << " mu_over_V=" << format_double(*pt.mu_over_V);
        if (config.scan.base.ensemble == Ensemble::canonical) meta << " rho=" << format_double(pt.run.target_rho);
        meta << '\n';
    }
    meta << to_text(config);
    write_text_file(out_dir / "metadata.txt", header, meta.str());
}

}  // namespace hcb
