#include <doctest.h>

#include <sstream>

#include "entlaser/app.hpp"
#include "entlaser/config.hpp"
#include "entlaser/errors.hpp"
#include "support.hpp"

using namespace entlaser;

namespace {

constexpr double kPi = std::numbers::pi;

const char* kMinimal = R"(
[params]
g1 = 1
g2 = 1
omega3_mag = 25 ; drive
omega4_mag = 2
phi3 = pi/2
phi4 = 0
delta_a = 0
delta_b = 40
gamma1 = 5
gamma2 = 5
gamma3 = 5
gamma4 = 5
kappa1 = 1e-3
kappa2 = 1e-3
# comment line
[sim]
t_max = 100
samples = 11
)";

std::string csv_of(const RunConfig& cfg) {
  std::ostringstream os;
  write_csv(os, cfg, execute_run(cfg));
  return os.str();
}

PhysicalParams caption(double omega3, double omega4, double delta_b, double gamma,
                       double kappa) {
  PhysicalParams p;
  p.omega3_mag = omega3;
  p.omega4_mag = omega4;
  p.phi3 = kPi / 2;
  p.phi4 = 0.0;
  p.delta_a = 0.0;
  p.delta_b = delta_b;
  p.gamma1 = p.gamma2 = p.gamma3 = p.gamma4 = gamma;
  p.kappa1 = p.kappa2 = kappa;
  return p;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("parses sections, comments and defaults") {
    const RunConfig cfg = config_from_sections(parse_config_text(kMinimal));
    CHECK(cfg.params == testing::fig2_params());
    CHECK(cfg.sim.t_max == 100.0);
    CHECK(cfg.sim.samples == 11);
    CHECK(cfg.sim.method == SimMethod::Spectral);
    CHECK(cfg.initial.kind == InitialKind::Vacuum);
    CHECK(cfg.output.path == "-");
    CHECK(cfg.output.format == OutputFormat::Csv);
  }

  TEST_CASE("empty input lists every missing key") {
    try {
      config_from_sections(parse_config_text(""));
      FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
      const std::string msg = e.what();
      CHECK(msg.find("missing keys") != std::string::npos);
      CHECK(msg.find("omega3_mag") != std::string::npos);
      CHECK(msg.find("kappa2") != std::string::npos);
      CHECK(msg.find("t_max") != std::string::npos);
    }
  }

  TEST_CASE("malformed input is rejected with the offending field") {
    CHECK_THROWS_AS(parse_config_text("[params\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config_text("g1 = 1\n"), InvalidParameter);
    CHECK_THROWS_AS(parse_config_text("[params]\ng1 = 1\ng1 = 2\n"), InvalidParameter);
    ConfigSections s = parse_config_text(kMinimal);
    s["params"]["gamma2"] = "-5";
    try {
      config_from_sections(s);
      FAIL("expected InvalidParameter");
    } catch (const InvalidParameter& e) {
      CHECK(e.field() == "gamma2");
    }
    s = parse_config_text(kMinimal);
    s["sim"]["samples"] = "1";
    CHECK_THROWS_AS(config_from_sections(s), InvalidParameter);
    s = parse_config_text(kMinimal);
    s["sim"]["t_max"] = "0";
    CHECK_THROWS_AS(config_from_sections(s), InvalidParameter);
    s = parse_config_text(kMinimal);
    s["bogus"]["x"] = "1";
    CHECK_THROWS_AS(config_from_sections(s), InvalidParameter);
    s = parse_config_text(kMinimal);
    s["initial"]["state"] = "coherent";
    s["initial"]["beta1_re"] = "inf";
    CHECK_THROWS_AS(config_from_sections(s), InvalidParameter);
  }

  TEST_CASE("numbers with pi") {
    CHECK(parse_number("pi/2", "x") == kPi / 2);
    CHECK(parse_number("-pi", "x") == -kPi);
    CHECK(parse_number("3*pi/2", "x") == doctest::Approx(1.5 * kPi));
    CHECK(parse_number("0.5pi", "x") == doctest::Approx(0.5 * kPi));
    CHECK(parse_number("1e-3", "x") == 1e-3);
    CHECK_THROWS_AS(parse_number("pie", "x"), InvalidParameter);
    CHECK_THROWS_AS(parse_number("", "x"), InvalidParameter);
  }

  TEST_CASE("overrides") {
    ConfigSections s = parse_config_text(kMinimal);
    apply_override(s, "params.omega4_mag=9.8");
    apply_override(s, "sim.method = numeric");
    const RunConfig cfg = config_from_sections(s);
    CHECK(cfg.params.omega4_mag == 9.8);
    CHECK(cfg.sim.method == SimMethod::Numeric);
    CHECK_THROWS_AS(apply_override(s, "omega4_mag=1"), InvalidParameter);
  }

  TEST_CASE("initial states") {
    ConfigSections s = parse_config_text(kMinimal);
    s["initial"] = {{"state", "coherent"}, {"beta1_re", "100"}, {"beta2_re", "-100"}};
    MomentState m = config_from_sections(s).initial.state();
    CHECK(m.b1 == cplx(100));
    CHECK(m.b2 == cplx(-100));
    CHECK(m.m == cplx(-10000));
    s["initial"] = {{"state", "moments"}, {"n1", "2"}, {"n2", "3"}, {"m_re", "0.5"}};
    m = config_from_sections(s).initial.state();
    CHECK(m.n1 == 2.0);
    CHECK(m.n2 == 3.0);
    CHECK(m.m == cplx(0.5));
    s["initial"] = {{"state", "thermal"}};
    CHECK_THROWS_AS(config_from_sections(s), InvalidParameter);
  }

  TEST_CASE("presets carry the caption parameters") {
    const auto names = preset_names();
    for (const char* n : {"fig2", "fig3-I", "fig3-II", "fig4-I", "fig4-II"}) {
      CHECK(std::find(names.begin(), names.end(), n) != names.end());
    }
    CHECK(load_preset("fig2").params == caption(25, 2, 40, 5, 1e-3));
    CHECK(load_preset("fig3-I").params == caption(25, 9.8, 43, 5, 1e-3));
    CHECK(load_preset("fig3-II").params == caption(15, 6, 32.5, 5, 1e-3));
    CHECK(load_preset("fig4-I").params == caption(10, 5, 15, 2, 1e-2));
    CHECK(load_preset("fig4-II").params == caption(10, 2, 15, 2, 1e-2));
    for (const char* n : {"fig2", "fig3-I", "fig3-II"}) {
      CHECK(load_preset(n).initial.kind == InitialKind::Vacuum);
    }
    for (const char* n : {"fig4-I", "fig4-II"}) {
      const InitialSpec init = load_preset(n).initial;
      CHECK(init.kind == InitialKind::Coherent);
      CHECK(init.beta1 == cplx(100));
      CHECK(init.beta2 == cplx(-100));
    }
    CHECK_THROWS_AS(load_preset("fig9"), InvalidParameter);
  }

  TEST_CASE("CSV output is deterministic and well formed") {
    const RunConfig cfg = config_from_sections(parse_config_text(kMinimal));
    const std::string a = csv_of(cfg), b = csv_of(cfg);
    CHECK(a == b);
    std::istringstream in(a);
    std::string line, header;
    int meta = 0, rows = 0;
    while (std::getline(in, line)) {
      if (line.rfind("# ", 0) == 0) {
        ++meta;
        CHECK(line.find('=') != std::string::npos);
      } else if (header.empty()) {
        header = line;
      } else {
        ++rows;
      }
    }
    CHECK(meta > 14);
    CHECK(header == "t,variance_sum,photon_number,entangled");
    CHECK(rows == 11);
    CHECK(a.find("# regime=parametric-a") != std::string::npos);
    CHECK(format_double(0.1) == "0.10000000000000001");
  }

  TEST_CASE("single-value sweep equals run") {
    const RunConfig cfg = load_preset("fig2");
    const RunOutcome run = execute_run(cfg);
    const double v[] = {2.0};
    const auto rows = run_sweep(cfg, "omega4_mag", v, 1);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].report);
    CHECK(rows[0].report->windows == run.report.windows);
    CHECK(rows[0].report->max_entangled_photons == run.report.max_entangled_photons);
    CHECK(rows[0].report->v_min == run.report.v_min);
  }

  TEST_CASE("omega4 sweep: more photons, shorter window") {
    const double v[] = {2.0, 6.0, 9.8};
    RunConfig cfg = load_preset("fig2");
    cfg.sim.t_max = 1500;
    const auto rows = run_sweep(cfg, "omega4_mag", v, 2);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) REQUIRE(r.report);
    CHECK(rows[0].report->max_entangled_photons < rows[1].report->max_entangled_photons);
    CHECK(rows[1].report->max_entangled_photons < rows[2].report->max_entangled_photons);
    auto length = [](const EntanglementReport& r) {
      return r.windows.empty() ? 0.0 : r.windows[0].second - r.windows[0].first;
    };
    CHECK(length(*rows[2].report) < length(*rows[0].report));
  }

  TEST_CASE("parametric kappa sweep reaches the analytic floor") {
    RunConfig cfg = load_preset("fig2");
    cfg.sim.method = SimMethod::Parametric;
    cfg.sim.t_max = 6000;
    const double alpha = 0.002;
    const double v[] = {5e-4, 1e-3, 3e-3};
    const auto rows = run_sweep(cfg, "kappa", v, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      REQUIRE(rows[i].report);
      CHECK(rows[i].report->v_min == doctest::Approx(2 * v[i] / (alpha + v[i])).epsilon(1e-8));
    }
  }

  TEST_CASE("failing sweep rows are recorded") {
    const RunConfig cfg = load_preset("fig2");
    const double v[] = {5.0, -1.0};
    const auto rows = run_sweep(cfg, "gamma", v, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.empty());
    CHECK_FALSE(rows[1].error.empty());
    CHECK_FALSE(rows[1].report);
    PhysicalParams p;
    CHECK_THROWS_AS(set_sweep_parameter(p, "nu1", 1.0), InvalidParameter);
  }

  TEST_CASE("coefficient dump") {
    const std::string js = coefficients_json(load_preset("fig2"));
    CHECK(js.find("\"alpha12\"") != std::string::npos);
    CHECK(js.find("parametric-a") != std::string::npos);
  }
}
