#pragma once

// Scenario files and the embedded experimental dataset.
//
// Schema:
//   disc       {radius_m, mass_kg, thickness_m?}
//   mesh       {grid_n, rule}                       (optional; defaults 71, center-inside)
//   coils      [{diameter_m, windings, pitch_m, z_top_m, current_rel}]
//   electrodes {area_m2, spacing_h_m}
//   levitation {height_m}
//   name       (optional)

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hlma/pullin.hpp"

namespace hlma {

/// Throws InputError naming the offending path (e.g. "disc.radius_m").
ActuatorScenario parse_scenario(std::string_view json_text);
ActuatorScenario load_scenario(const std::filesystem::path& path);
/// Canonical JSON; parse_scenario(scenario_json(s)) reproduces s.
std::string scenario_json(const ActuatorScenario& s);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string scenario_hash(const ActuatorScenario& s);

struct PullInPoint {
  double displacement = 0.0;  // m
  double voltage = 0.0;       // V
};

struct ExperimentRecord {
  std::string name;
  double diameter = 0.0;  // m
  double mass = 0.0;      // kg
  double levitation_height = 0.0;
  double spacing = 0.0;
  double xi = 0.0;        // as tabulated
  double kappa = 0.0;     // as tabulated
  PullInPoint measured;
  PullInPoint analytical;  // single eddy-circuit model
  PullInPoint quasi_fem;
};

/// The four measured configurations (discs of 2.4, 2.8 and 3.2 mm).
const std::vector<ExperimentRecord>& experiment_records();

/// Levitation solenoid 2000 um x 20 windings (+1), stabilization solenoid
/// 3800 um x 12 windings (-1), pitch 25 um, top windings at z = 0.
std::vector<CoilSpec> experimental_coils();
ActuatorScenario experiment_scenario(const ExperimentRecord& record, int grid_n = 71);

/// Planar rig: single filaments r = 1.0 mm (+1) and 1.9 mm (-1) at z = 0,
/// h_l = 250 um, h = 10 um.
ActuatorScenario preliminary_design(double disc_radius = 1.55e-3, int grid_n = 71);

}  // namespace hlma
