#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcb/config.hpp"
#include "hcb/errors.hpp"
#include "hcb/io.hpp"
#include "hcb/lattice.hpp"
#include "hcb/model.hpp"
#include "hcb/scan.hpp"

namespace {

std::vector<hcb::TestGraph::Bond> parse_bonds(const std::string& text) {
    std::vector<hcb::TestGraph::Bond> out;
    if (text.empty() || text == "none") return out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("bond '" + item + "' is not of the form i-j");
        out.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
    }
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_override, unsigned workers_override) {
    std::ifstream f(config_path);
    if (!f) throw hcb::Error("cannot read " + config_path);
    std::stringstream buf;
    buf << f.rdbuf();
    auto config = hcb::parse_config(buf.str());
    if (!out_override.empty()) config.out_dir = out_override;
    if (workers_override > 0) config.workers = workers_override;

    const auto t0 = std::chrono::steady_clock::now();
    const auto records = hcb::run_scan(config.scan, config.thresholds, config.workers);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    hcb::write_run_outputs(config.out_dir, config, records, wall);
    std::cout << "wrote " << records.size() << " points to " << config.out_dir << " in " << wall << " s\n";
    return 0;
}

int cmd_oracle(int sites, double c1, double c2, double m, const std::string& hop, const std::string& rep,
               int n_points, int chi_points) {
    std::string hop_text = hop;
    if (hop_text.empty()) {
        for (int i = 0; i + 1 < sites; ++i) hop_text += (i ? "," : "") + std::to_string(i) + "-" + std::to_string(i + 1);
    }
    const hcb::TestGraph graph(static_cast<std::size_t>(sites), parse_bonds(hop_text), parse_bonds(rep));
    const hcb::ModelParams p{c1, c2, m};
    p.validate();
    const auto avg = hcb::brute_force_average(graph, p, {n_points, chi_points});
    std::printf("<H> = %.9f\n<H^2> = %.9f\nvar(H) = %.9f\n", avg.energy, avg.energy_sq, avg.energy_variance());
    for (std::size_t i = 0; i < avg.n_mean.size(); ++i)
        std::printf("<n_%zu> = %.9f\n<n_%zu^2> = %.9f\n", i, avg.n_mean[i], i, avg.n2_mean[i]);
    return 0;
}

int cmd_ideal(const std::string& pattern, int L, const std::string& out, double rho, double chi, std::uint64_t seed) {
    const auto kind = hcb::parse_pattern_kind(pattern);
    if (!kind) throw std::invalid_argument("unknown pattern '" + pattern + "'");
    hcb::IdealPattern pat;
    pat.kind = *kind;
    pat.rho0 = rho;
    pat.chi0 = chi;
    pat.seed = seed;
    const hcb::LatticeGeom geom(L);
    const auto config = hcb::ideal_config(pat, geom);
    const std::string header = "# seed=" + std::to_string(seed) + " config_hash=NA pattern=" + pattern +
                               " L=" + std::to_string(L) + "\n";
    hcb::write_text_file(out, header, hcb::snapshot_text(config, geom));
    std::printf("wrote %s (rho = %.9g)\n", out.c_str(), config.total_occupation() / static_cast<double>(geom.size()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classical Monte-Carlo for hard-core bosons on the stacked triangular lattice"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned workers = 0;
    auto* run = app.add_subcommand("run", "Run a parameter scan described by a key=value config file");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_option("--workers", workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);

    int sites = 1, n_points = 200, chi_points = 32;
    double c1 = 0.0, c2 = 0.0, m = 0.0;
    std::string hop, rep;
    auto* oracle = app.add_subcommand("oracle", "Quadrature averages on a graph of 1-3 sites");
    oracle->add_option("--sites", sites, "Number of sites")->required()->check(CLI::Range(1, 3));
    oracle->add_option("--c1", c1, "beta t");
    oracle->add_option("--c2", c2, "beta V");
    oracle->add_option("--m", m, "beta mu");
    oracle->add_option("--hop", hop, "Hopping bonds, e.g. 0-1,1-2 (default: a chain)");
    oracle->add_option("--rep", rep, "Repulsion bonds, e.g. 0-1 (default: none)");
    oracle->add_option("--n-points", n_points, "Midpoints per occupation")->check(CLI::PositiveNumber);
    oracle->add_option("--chi-points", chi_points, "Midpoints per phase")->check(CLI::PositiveNumber);

    std::string pattern, ideal_out = "snapshot.txt";
    int L = 0;
    double rho0 = 0.5, chi0 = 0.0;
    std::uint64_t seed = 0;
    auto* ideal = app.add_subcommand("ideal", "Write the snapshot of an ideal configuration");
    ideal->add_option("--pattern", pattern, "empty|full|solid13|solid23|uniform|random")->required();
    ideal->add_option("--L", L, "Linear size")->required();
    ideal->add_option("--out", ideal_out, "Output file");
    ideal->add_option("--rho", rho0, "Density of the uniform pattern");
    ideal->add_option("--chi", chi0, "Phase of the uniform pattern");
    ideal->add_option("--seed", seed, "Seed of the random pattern");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, workers);
        if (*oracle) return cmd_oracle(sites, c1, c2, m, hop, rep, n_points, chi_points);
        if (*ideal) return cmd_ideal(pattern, L, ideal_out, rho0, chi0, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
