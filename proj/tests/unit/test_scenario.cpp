#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "hlma/errors.hpp"
#include "hlma/output.hpp"
#include "hlma/scenario.hpp"

using namespace hlma;
using doctest::Approx;

namespace {

const char* kMinimal = R"({
  "disc": {"radius_m": 1.4e-3, "mass_kg": 3e-7},
  "coils": [{"diameter_m": 2e-3, "windings": 1, "pitch_m": 0, "z_top_m": 0, "current_rel": 1}],
  "electrodes": {"area_m2": 8e-7, "spacing_h_m": 1.19e-4},
  "levitation": {"height_m": 2e-4}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("parse minimal scenario with defaults") {
  const ActuatorScenario s = parse_scenario(kMinimal);
  CHECK(s.disc_radius == 1.4e-3);
  CHECK(s.grid_n == 71);
  CHECK(s.rule == MeshRule::CenterInside);
  CHECK(!s.thickness);
  CHECK(s.coils.size() == 1);
  CHECK(s.kappa() == Approx(0.595));
}

TEST_CASE("errors name the offending field") {
  const std::string base = kMinimal;
  CHECK(error_of(replace(base, R"("radius_m": 1.4e-3, )", "")).find("disc.radius_m") != std::string::npos);
  CHECK(error_of(replace(base, R"("diameter_m": 2e-3)", R"("diameter_m": "2")")) ==
        "coils[0].diameter_m: expected a number");
  CHECK(error_of(replace(base, R"("height_m": 2e-4)", R"("height_m": -2e-4)")).find("levitation.height_m") !=
        std::string::npos);
  CHECK(error_of("{") .find("malformed JSON") != std::string::npos);
  CHECK(error_of(replace(base, R"("disc")", R"("mesh": {"grid_n": 4}, "disc")")).find("grid_n") !=
        std::string::npos);
  CHECK(error_of(replace(base, R"("disc")", R"("mesh": {"rule": "edge"}, "disc")")).find("mesh.rule") !=
        std::string::npos);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), InputError);
}

TEST_CASE("canonical JSON round trip and hash") {
  for (const auto& rec : experiment_records()) {
    const ActuatorScenario s = experiment_scenario(rec, 51);
    const ActuatorScenario back = parse_scenario(scenario_json(s));
    CHECK(scenario_json(back) == scenario_json(s));
    CHECK(scenario_hash(back) == scenario_hash(s));
    CHECK(std::regex_match(scenario_hash(s), std::regex("[0-9a-f]{16}")));
  }
  ActuatorScenario a = preliminary_design();
  ActuatorScenario b = a;
  b.grid_n = 31;
  CHECK(scenario_hash(a) != scenario_hash(b));
}

TEST_CASE("shipped scenario files") {
  const std::filesystem::path dir = HLMA_SOURCE_DIR "/scenarios";
  const ActuatorScenario p = load_scenario(dir / "preliminary.json");
  CHECK(p.name == "preliminary");
  CHECK(scenario_json(p) == scenario_json([] {
          auto d = preliminary_design();
          d.name = "preliminary";
          return d;
        }()));
  const auto& recs = experiment_records();
  const char* files[] = {"disc_2.4mm.json", "disc_2.8mm.json", "disc_3.2mm_h64.json", "disc_3.2mm_h107.json"};
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ActuatorScenario f = load_scenario(dir / files[i]);
    ActuatorScenario e = experiment_scenario(recs[i]);
    f.name = e.name;
    CHECK(scenario_json(f) == scenario_json(e));
  }
}

TEST_CASE("embedded dataset is self-consistent") {
  const auto& recs = experiment_records();
  REQUIRE(recs.size() == 4);
  for (const auto& r : recs) {
    CHECK(r.mass > 0.0);
    CHECK(r.kappa == Approx(r.spacing / r.levitation_height).epsilon(0.02));
    CHECK(r.xi == Approx(r.levitation_height / 2e-3).epsilon(0.02));
  }
  CHECK(recs[1].measured.voltage == 60.8);
  CHECK(recs[1].quasi_fem.voltage == 60.76);
}

TEST_CASE("number format") {
  CHECK(format_number(0.0) == "0.000000000000e+00");
  CHECK(format_number(-0.0) == "0.000000000000e+00");
  CHECK(format_number(-1.5) == "-1.500000000000e+00");
}

TEST_CASE("outputs are deterministic and carry metadata") {
  const ActuatorScenario s = preliminary_design(1.55e-3, 15);
  const RunMetadata meta = metadata_for(s);
  CHECK(meta.elements == s.build_mesh().size());
  CHECK(meta.rule == "center-inside");
  const PullInRun a = run_pullin(PullInModel::QuasiFem, s, 7);
  const PullInRun b = run_pullin(PullInModel::QuasiFem, s, 7);
  CHECK(curve_csv(a.curve, s) == curve_csv(b.curve, s));
  const std::string ja = result_json(a.result, 0.0, meta);
  CHECK(ja == result_json(b.result, 0.0, meta));
  const auto j = nlohmann::json::parse(ja);
  for (const char* key : {"model", "lambda_p", "beta_p", "sqrt_beta_p", "U_p_V", "q_p_m", "eta0", "runtime_s",
                          "scenario_hash", "grid_n", "rule", "sign_convention", "version"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["scenario_hash"] == scenario_hash(s));
  std::istringstream csv(curve_csv(a.curve, s));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "lambda_abs,beta,sqrt_beta,U_volts,q3_m");
  CHECK(mesh_csv(s.build_mesh()).rfind("s,x1_m,x2_m,row,col\n", 0) == 0);
}

}
