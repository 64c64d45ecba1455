#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hlma/errors.hpp"
#include "hlma/output.hpp"
#include "hlma/scenario.hpp"
#include "hlma/validate.hpp"

namespace fs = std::filesystem;
using namespace hlma;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInput = 3;

struct Options {
  std::string scenario;
  std::string model = "all";
  int samples = 15;
  int grid_n = 0;
  std::string rule;
  bool fast = false;
  bool convergence = false;
  std::string out = ".";
  double r_max = 2.5e-3;
  double z_min = 50e-6;
  double z_max = 500e-6;
  int nr = 51;
  int nz = 46;
};

ActuatorScenario load(const Options& o) {
  if (o.scenario.empty()) throw InputError("--scenario is required");
  ActuatorScenario s = load_scenario(o.scenario);
  if (o.fast) s.grid_n = 31;
  if (o.grid_n > 0) s.grid_n = o.grid_n;
  if (!o.rule.empty()) {
    try {
      s.rule = parse_mesh_rule(o.rule);
    } catch (const GeometryError&) {
      throw InputError("--rule: expected center-inside or fully-inside");
    }
  }
  s.validate();
  return s;
}

int cmd_mesh(const Options& o) {
  const ActuatorScenario s = load(o);
  const Mesh mesh = s.build_mesh();
  write_file(fs::path(o.out) / "mesh.csv", mesh_csv(mesh));
  std::printf("n = %zu\nR_e = %.6e m\neps = %.6f\n", mesh.size(), mesh.element_radius, mesh.epsilon());
  return 0;
}

int cmd_eddy(const Options& o) {
  const ActuatorScenario s = load(o);
  const Mesh mesh = s.build_mesh();
  const CoilSystem coils = s.build_coils();
  const EddySystem sys = assemble(mesh, coils, Pose::at_height(s.levitation_height));
  Eigen::VectorXd ic(static_cast<Eigen::Index>(coils.size()));
  for (std::size_t j = 0; j < coils.size(); ++j) ic[static_cast<Eigen::Index>(j)] = coils.filaments[j].current;
  const EddySolution sol = solve(sys, ic);
  const CurrentMaps maps = current_maps(sol, mesh);
  const fs::path out(o.out);
  write_file(out / "eddy_currents.csv", grid_csv(maps.currents));
  write_file(out / "eddy_magnitude.csv", grid_csv(maps.magnitude));
  write_file(out / "eddy_meta.json", eddy_meta_json(metadata_for(s), sol, sys.elements->impedance()));
  std::printf("n = %zu\nresidual = %.3e\nsum of element currents = %.6e\n", mesh.size(), sol.residual,
              sol.total_current());
  return 0;
}

int cmd_pullin(const Options& o) {
  const ActuatorScenario s = load(o);
  std::vector<PullInModel> models;
  if (o.model == "all") {
    models = {PullInModel::QuasiFem, PullInModel::Analytical, PullInModel::Simplified};
  } else {
    models = {parse_pullin_model(o.model)};
  }
  if (o.samples < 5) throw InputError("n_samples ≥ 5");
  const RunMetadata meta = metadata_for(s);
  const fs::path out(o.out);
  std::printf("%-11s %10s %12s %12s %10s %10s\n", "model", "lambda_p", "beta_p", "sqrt_beta_p", "U_p (V)",
              "q_p (um)");
  for (PullInModel m : models) {
    const auto t0 = std::chrono::steady_clock::now();
    const PullInRun run = run_pullin(m, s, o.samples);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string tag(to_string(m));
    write_file(out / ("curve_" + tag + ".csv"), curve_csv(run.curve, s));
    write_file(out / ("result_" + tag + ".json"), result_json(run.result, dt, meta));
    const auto& r = run.result;
    std::printf("%-11s %10.5f %12.6e %12.6f %10.3f %10.3f\n", tag.c_str(), r.lambda_p, r.beta_p, r.sqrt_beta_p,
                r.voltage, r.displacement * 1e6);
  }
  return 0;
}

int cmd_field(const Options& o) {
  const ActuatorScenario s = load(o);
  if (o.nr < 1 || o.nz < 1) throw InputError("--nr and --nz must be positive");
  if (!(o.r_max >= 0.0) || !(o.z_max >= o.z_min)) throw InputError("field window is empty");
  std::vector<double> r(static_cast<std::size_t>(o.nr));
  std::vector<double> z(static_cast<std::size_t>(o.nz));
  for (int i = 0; i < o.nr; ++i) r[static_cast<std::size_t>(i)] = o.nr == 1 ? 0.0 : o.r_max * i / (o.nr - 1);
  for (int i = 0; i < o.nz; ++i) {
    z[static_cast<std::size_t>(i)] = o.nz == 1 ? o.z_min : o.z_min + (o.z_max - o.z_min) * i / (o.nz - 1);
  }
  const auto samples = loop_field(s.build_coils(), r, z);
  write_file(fs::path(o.out) / "field.csv", field_csv(samples));
  std::printf("%zu field samples written\n", samples.size());
  return 0;
}

int cmd_validate(const Options& o) {
  ValidationOptions v;
  v.fast = o.fast;
  if (o.grid_n > 0) v.grid_n = o.grid_n;
  v.samples = o.samples;
  v.convergence = o.convergence;
  const ValidationReport report = run_validation(v);
  const std::string text = report.text();
  std::fputs(text.c_str(), stdout);
  const fs::path out(o.out);
  write_file(out / "validation.csv", report.csv());
  write_file(out / "validation.txt", text);
  return report.passed() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid levitation micro-actuator toolkit"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool scenario) {
    if (scenario) sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    sub->add_option("--grid-n", o.grid_n, "Mesh grid size (odd)");
    sub->add_option("--rule", o.rule, "center-inside | fully-inside");
    sub->add_flag("--fast", o.fast, "Low-fidelity mesh (grid_n = 31)");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* mesh = app.add_subcommand("mesh", "Mesh the disc and export element centres");
  common(mesh, true);
  auto* eddy = app.add_subcommand("eddy", "Solve the eddy currents at the levitation height");
  common(eddy, true);
  auto* pullin = app.add_subcommand("pullin", "Pull-in curve and point");
  common(pullin, true);
  pullin->add_option("--model", o.model, "quasi-fem | analytical | simplified | all")
      ->check(CLI::IsMember({"quasi-fem", "analytical", "simplified", "all"}));
  pullin->add_option("--samples", o.samples, "Samples on the equilibrium curve");
  auto* field = app.add_subcommand("field", "Coil field and gradient of |B|^2 on an (r, z) grid");
  common(field, true);
  field->add_option("--r-max", o.r_max, "Largest radius (m)");
  field->add_option("--z-min", o.z_min, "Lowest height (m)");
  field->add_option("--z-max", o.z_max, "Highest height (m)");
  field->add_option("--nr", o.nr, "Radial samples");
  field->add_option("--nz", o.nz, "Axial samples");
  auto* validate = app.add_subcommand("validate", "Compare with the embedded experimental dataset");
  common(validate, false);
  validate->add_option("--samples", o.samples, "Samples on the equilibrium curve");
  validate->add_flag("--convergence", o.convergence, "Also compare grid_n 51 and 71");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*mesh) return cmd_mesh(o);
    if (*eddy) return cmd_eddy(o);
    if (*pullin) return cmd_pullin(o);
    if (*field) return cmd_field(o);
    return cmd_validate(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelValidityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
