#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hcb/config.hpp"
#include "hcb/errors.hpp"
#include "hcb/io.hpp"

using namespace hcb;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

PointRecord toy_record(Ensemble e) {
    PointRecord r;
    r.point_index = 3;
    r.params = {5.0, 50.0, e == Ensemble::grand ? 75.0 : 0.0};
    r.t_over_V = 0.1;
    if (e == Ensemble::grand)
        r.mu_over_V = 1.5;
    else
        r.rho_target = 0.5;
    r.L = 6;
    r.ensemble = e;
    r.E = {-0.123456789012, 0.001};
    r.rho = {1.0 / 3.0, 0.0};
    r.phase = PhaseLabel::Solid13;
    r.accept_rate = 0.5;
    for (std::size_t a = 0; a < 2; ++a) {
        r.corr_n[a] = {{0.5, 0.01}, {0.25, 0.02}};
        r.corr_G[a] = {{0.1, 0.0}, {0.0, 0.0}};
    }
    r.layers = {{0.5, 0.5}, {0.0, 0.0}, {0.5, 0.5}};
    return r;
}

}  // namespace

TEST_CASE("config: grand scan example") {
    const auto c = parse_config("ensemble=grand\nL=12\nc2=50\nt_over_V=0.1\nscan_mu_over_V=-0.5:6.5:0.1\nseed=42");
    CHECK(c.scan.base.ensemble == Ensemble::grand);
    CHECK(c.scan.base.L == 12);
    CHECK(c.scan.base.seed == 42);
    REQUIRE(c.scan.axis1.has_value());
    const auto pts = enumerate_points(c.scan);
    CHECK(pts.size() == 71);
    CHECK(pts[0].params.c1 == doctest::Approx(5.0));
    CHECK(pts[0].params.m == doctest::Approx(-25.0));
    CHECK(c.scan.base.meas_sweeps == 30000);
    CHECK(c.scan.base.samples == 10);
    CHECK(c.scan.init_policy == InitPolicy::chain_previous);
}

TEST_CASE("config: canonical temperature scan example") {
    const auto c = parse_config("ensemble=canonical\nrho=0.5\nt_over_V=0.1\nscan_c2=4:30:1");
    CHECK(c.scan.base.ensemble == Ensemble::canonical);
    CHECK(c.scan.base.target_rho == 0.5);
    const auto pts = enumerate_points(c.scan);
    CHECK(pts.size() == 27);
    CHECK(pts[4].params.c2 == 8.0);
    CHECK(pts[4].params.c1 == doctest::Approx(0.8));
}

TEST_CASE("config: errors") {
    CHECK(error_of("L=13") == "L must be a positive multiple of 3 (got 13)");
    CHECK(error_of("ensemble=grand\nbogus=1") == "line 2: unknown key 'bogus'");
    CHECK(error_of("# comment\n\nL 12") == "line 3: expected key=value");
    CHECK(error_of("c2=abc").find("line 1: c2 expects a number") == 0);
    CHECK(error_of("L=12\nL=12") == "line 2: duplicate key 'L'");
    CHECK(error_of("ensemble=grand\nscan_rho=0:1:0.5").find("rho") != std::string::npos);
    CHECK(error_of("ensemble=canonical\nmu_over_V=1").find("mu_over_V") != std::string::npos);
    CHECK(error_of("scan_c2=10:20:5\nc2=3") == "c2 is scanned and cannot also be fixed");
    CHECK(error_of("samples=1") == "samples must be >= 2 (error bars need two repetitions)");
    CHECK(error_of("theta_s=1.5") == "theta_s must lie in (0,1)");
    CHECK(error_of("scan_c2=10:5:1").find("empty") != std::string::npos);
    CHECK(error_of("scan_c2=10:5").find("start:stop:step") != std::string::npos);
    CHECK(error_of("init_policy=fresh_ideal").find("init_pattern") != std::string::npos);
    CHECK(error_of("ensemble=micro").find("ensemble") != std::string::npos);
    CHECK(error_of("c2=0").find("c2") != std::string::npos);
}

TEST_CASE("config: canonical text round trip") {
    const char* texts[] = {
        "ensemble=grand\nL=6\nc2=50\nt_over_V=0.1\nscan_mu_over_V=-0.5:6.5:0.1\nseed=42\nworkers=3\nout=x",
        "ensemble=canonical\nrho=0.25\nc2=50\nt_over_V=0.14\ninit_policy=fresh_ideal\ninit_pattern=uniform\n"
        "init_rho=0.3\ninit_chi=1.5\ntheta_layer=0.2",
        "ensemble=canonical\nscan_rho=0.1:0.9:0.1\nscan2_t_over_V=0.05:0.5:0.05\nsamples=3\nmeasure_interval=5",
        "ensemble=grand\nmu_over_V=1.5\ninit_pattern=solid13\ninit_policy=fresh_ideal",
    };
    for (const char* t : texts) {
        const auto c = parse_config(t);
        const auto echo = to_text(c);
        CHECK(parse_config(echo) == c);
        CHECK(to_text(parse_config(echo)) == echo);
    }
}

TEST_CASE("config: hash ignores runtime-only settings") {
    auto a = parse_config("seed=1\nworkers=1\nout=a");
    auto b = parse_config("seed=1\nworkers=8\nout=b");
    auto c = parse_config("seed=2\nworkers=1\nout=a");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-25.0) == "-25");
}

TEST_CASE("io: points table") {
    CHECK_THROWS_AS(points_csv({}), std::invalid_argument);
    const auto g = lines(points_csv({toy_record(Ensemble::grand)}));
    REQUIRE(g.size() == 2);
    CHECK(g[0] ==
          "point_index,c1,c2,beta_mu,t_over_V,mu_over_V,rho_target,L,ensemble,E,E_err,C,C_err,rho,rho_err,"
          "m_s,m_s_err,phi,phi_err,accept_rate,phase");
    CHECK(g[1] == "3,5,50,75,0.1,1.5,NA,6,grand,-0.123456789,0.001,0,0,0.333333333,0,0,0,0,0,0.5,Solid13");
    const auto c = lines(points_csv({toy_record(Ensemble::canonical)}));
    CHECK(c[1] == "3,5,50,NA,0.1,NA,0.5,6,canonical,-0.123456789,0.001,0,0,0.333333333,0,0,0,0,0,0.5,Solid13");
}

TEST_CASE("io: correlator and layer tables") {
    const auto r = toy_record(Ensemble::grand);
    const auto c = lines(corr_csv(r));
    REQUIRE(c.size() == 5);
    CHECK(c[0] == "axis,r,n_r,n_r_err,G_r,G_r_err");
    CHECK(c[1] == "in_plane,0,0.5,0.01,0.1,0");
    CHECK(c[4] == "stacking,1,0.25,0.02,0,0");
    const auto l = lines(layers_csv(r));
    REQUIRE(l.size() == 3);
    CHECK(l[0] == "z,rho_z,ms_z,phi_z");
    CHECK(l[2] == "1,0.5,0,0.5");

    const LatticeGeom g(6);
    PointRecord u;
    u.layers = layer_profile(ideal_config(IdealPattern::uniform(0.5, 0.0), g), g);
    const auto ul = lines(layers_csv(u));
    REQUIRE(ul.size() == 7);
    for (std::size_t k = 1; k < ul.size(); ++k) CHECK(ul[k] == std::to_string(k - 1) + ",0.5,0,0.5");

    const auto sc = corr_functions(ideal_config(IdealPattern::solid13(), g), g, Axis::in_plane_a1);
    CHECK(sc.n_r[0] == doctest::Approx(0.333333).epsilon(1e-6));
    CHECK(sc.n_r[3] == doctest::Approx(0.333333).epsilon(1e-6));
    CHECK(sc.n_r[1] == 0.0);
}

TEST_CASE("io: snapshot layout") {
    const LatticeGeom g(6);
    const auto text = snapshot_text(ideal_config(IdealPattern::solid13(), g), g);
    const auto ls = lines(text);
    // 6 blocks of header + 6 rows, separated by 5 blank lines.
    REQUIRE(ls.size() == 6 * 7 + 5);
    int ones = 0, zeros = 0, block = 0;
    for (const auto& l : ls) {
        if (l.empty()) continue;
        if (l[0] == '#') {
            CHECK(l == "# z=" + std::to_string(block++));
            CHECK(ones % 12 == 0);
            continue;
        }
        std::stringstream ss(l);
        int cols = 0;
        for (std::string tok; ss >> tok; ++cols) {
            if (tok == "1.000000") ++ones;
            else if (tok == "0.000000") ++zeros;
        }
        CHECK(cols == 6);
    }
    CHECK(ones == 12 * 6);
    CHECK(zeros == 24 * 6);
}

TEST_CASE("io: run outputs and metadata round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "hcb_io_test";
    std::filesystem::remove_all(dir);
    auto cfg = parse_config("ensemble=grand\nL=3\nc2=10\nt_over_V=0.1\nscan_mu_over_V=0:1:1\ntherm_sweeps=10\n"
                            "meas_sweeps=20\nsamples=2\nseed=9\nworkers=1");
    cfg.out_dir = dir.string();
    const auto recs = run_scan(cfg.scan, cfg.thresholds, cfg.workers);
    write_run_outputs(dir, cfg, recs, 1.25);
    const auto header = provenance_line(9, config_hash(cfg));
    CHECK(header == "# seed=9 config_hash=" + config_hash(cfg) + "\n");
    for (const char* f : {"points.csv", "corr_0000.csv", "corr_0001.csv", "layers_0001.csv", "snapshot_0000.txt",
                          "metadata.txt"}) {
        const auto body = read_file(dir / f);
        CHECK_MESSAGE(body.rfind(header, 0) == 0, f);
    }
    CHECK(lines(read_file(dir / "points.csv")).size() == 4);
    const auto meta = read_file(dir / "metadata.txt");
    CHECK(meta.find("# version=") != std::string::npos);
    CHECK(meta.find("# wall_time_seconds=1.250") != std::string::npos);
    CHECK(meta.find("# point 1: c1=1 c2=10 beta_mu=10 t_over_V=0.1 mu_over_V=1") != std::string::npos);
    CHECK(parse_config(meta) == cfg);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(write_text_file(dir / "missing" / "x.txt", "", ""), Error);
}
