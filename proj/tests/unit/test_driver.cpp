#include <doctest.h>

#include "sinhlab/driver.hpp"
#include "sinhlab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

using namespace sinhlab;
using nlohmann::json;

namespace {

json minimal_config() {
  return json::parse(R"({
    "domain": {"kind": "unit_disc"},
    "peaks": [{"seed": [0.02, 0.01], "sign": 1}],
    "rho_schedule": [0.25, 0.2, 0.15],
    "h": 0.015625,
    "eigen_count": 5,
    "write_fields": false
  })");
}

Errc config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("sinhlab_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("config parsing and validation") {
    const ExperimentConfig c = parse_config(minimal_config());
    CHECK(c.m() == 1);
    CHECK(c.rho_schedule.size() == 3);
    CHECK(c.h == 1.0 / 64);
    CHECK(c.domain.kind() == DomainKind::UnitDisc);

    json j = minimal_config();
    j["rho_schedule"] = {0.05, 0.1, 0.2};
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j["eigen_count"] = 2;
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j["eigen_cout"] = 9;
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j["tolerances"] = {{"newton", -1.0}};
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j["peaks"][0]["seed"] = {2.0, 0.0};
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j.erase("h");
    CHECK(config_error(j) == Errc::ConfigInvalid);

    j = minimal_config();
    j["h"] = "fine";
    CHECK(config_error(j) == Errc::ConfigInvalid);
  }

  TEST_CASE("config and domain round-trip through JSON") {
    json j = minimal_config();
    j["domain"] = {{"kind", "rectangle"}, {"width", 2.0}, {"height", 1.0}};
    j["peaks"][0]["seed"] = {1.0, 0.5};
    j["boundary_scheme"] = "shortley_weller";
    const ExperimentConfig a = parse_config(j);
    const ExperimentConfig b = parse_config(to_json(a));
    CHECK(to_json(a) == to_json(b));
    CHECK(b.domain.rectangle_shape().width == 2.0);
    CHECK(b.scheme == BoundaryScheme::ShortleyWeller);

    const Domain d = domain_from_json(to_json(Domain::disc(0.5, Vec2(0.25, -1.0))));
    CHECK(d.kind() == DomainKind::Disc);
    CHECK(d.disc_shape().center.y() == -1.0);
  }

  TEST_CASE("field files round-trip") {
    const MeshPtr mesh = build_mesh(Domain::unit_disc(), 1.0 / 32);
    Eigen::VectorXd v(mesh->size());
    for (int k = 0; k < mesh->size(); ++k) v[k] = std::sin(3 * mesh->node(k).x()) * mesh->node(k).y() + 1e-300 * k;
    const auto dir = scratch("field");
    write_field(GridField(mesh, v), dir / "f", {{"rho", 0.1}}, true);
    const FieldFile f = read_field(dir / "f.bin");
    CHECK(f.kind == DomainKind::UnitDisc);
    CHECK(f.h == 1.0 / 32);
    REQUIRE(f.nodes.size() == static_cast<size_t>(mesh->size()));
    CHECK(f.values == v);
    CHECK(f.nodes[7] == mesh->node(7));
    const json side = json::parse(slurp(dir / "f.json"));
    CHECK(side["format"] == "SPFIELD1");
    CHECK(side["meta"]["rho"] == 0.1);
    CHECK(slurp(dir / "f.csv").rfind("x,y,value\n", 0) == 0);

    std::ofstream(dir / "bad.bin") << "not a field";
    CHECK_THROWS_AS(read_field(dir / "bad.bin"), Error);
    CHECK_THROWS_AS(read_field(dir / "missing.bin"), Error);
  }

  TEST_CASE("pipeline is deterministic and its report round-trips") {
    const ExperimentConfig c = parse_config(minimal_config());
    const auto a = scratch("run_a"), b = scratch("run_b");
    const PipelineResult ra = run_pipeline(c, a);
    run_pipeline(c, b);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "report.csv") == slurp(b / "report.csv"));
    CHECK(slurp(a / "report.csv").rfind("rho,j,mu,regime,rate,residual\n", 0) == 0);

    const AsymptoticReport& r = ra.report;
    REQUIRE(r.runs.size() == 3);
    CHECK(r.runs.back().modes.size() == 4);
    CHECK(r.runs.back().morse.index == r.predicted_morse);

    // Exporting the same report twice is byte-identical, and parsing it back gives an equal report.
    CHECK(report_json_text(r) == report_json_text(r));
    const AsymptoticReport back = report_from_json(json::parse(slurp(a / "report.json")));
    CHECK(report_json_text(back) == report_json_text(r));
    CHECK(report_csv(back) == report_csv(r));
    CHECK(back.m == r.m);
    CHECK(back.etas == r.etas);
    CHECK(back.mu_pred == r.mu_pred);
    REQUIRE(back.regimes.size() == r.regimes.size());
    for (size_t i = 0; i < r.regimes.size(); ++i) {
      CHECK(same_double(back.regimes[i].extrapolated, r.regimes[i].extrapolated));
      CHECK(back.regimes[i].best_model == r.regimes[i].best_model);
    }
    const ModeRecord& m0 = r.runs[1].modes[0];
    const ModeRecord& m1 = back.runs[1].modes[0];
    CHECK(m1.mu == m0.mu);
    CHECK(same_double(m1.far_field, m0.far_field));
    CHECK(m1.fits[0][2].parameters == m0.fits[0][2].parameters);
    CHECK(m1.fits[0][1].relative_residual == m0.fits[0][1].relative_residual);
  }

  TEST_CASE("stage failures are labelled and keep earlier artifacts") {
    json j = minimal_config();
    // The rescaled disc around the peak (radius about 8 / rho) cannot hold a window of 40.
    j["fit"] = {{"window", 40.0}};
    j["rescale"] = {{"radius", 40.0}};
    const ExperimentConfig c = parse_config(j);
    const auto dir = scratch("partial");
    Errc code = Errc::Io;
    std::string msg;
    try {
      run_pipeline(c, dir);
    } catch (const Error& e) {
      code = e.code();
      msg = e.what();
    }
    CHECK(code == Errc::InsufficientSamples);
    CHECK(msg.find("profile stage") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "critical.json"));
    CHECK(std::filesystem::exists(dir / "solve.json"));
    CHECK(std::filesystem::exists(dir / "spectrum_rho0.15.json"));
    CHECK_FALSE(std::filesystem::exists(dir / "report.json"));
  }

  TEST_CASE("pipeline stops at the requested stage") {
    const ExperimentConfig c = parse_config(minimal_config());
    const auto dir = scratch("crit_only");
    const PipelineResult r = run_pipeline(c, dir, PipelineStage::Critical);
    CHECK(r.crit.config.points[0].norm() < 1e-8);
    CHECK(r.taus[0] == doctest::Approx(1 / std::sqrt(8.0)).epsilon(1e-10));
    CHECK(r.report.runs.empty());
    CHECK(std::filesystem::exists(dir / "critical.json"));
    CHECK_FALSE(std::filesystem::exists(dir / "solve.json"));
  }
}
