#pragma once

// File formats. Numbers are written with a fixed format ("%.12e") so identical
// runs produce identical bytes.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hlma/levforce.hpp"
#include "hlma/pullin.hpp"

namespace hlma {

std::string_view version();
std::string format_number(double v);

/// s, x1_m, x2_m, row, col
std::string mesh_csv(const Mesh& mesh);
/// row, col, value; absent cells omitted.
std::string grid_csv(const GridMap& map);

struct RunMetadata {
  std::string scenario_hash;
  int grid_n = 0;
  std::string rule;
  std::size_t elements = 0;
};

RunMetadata metadata_for(const ActuatorScenario& scenario);

std::string eddy_meta_json(const RunMetadata& meta, const EddySolution& solution, const Impedance& impedance);
/// lambda_abs, beta, sqrt_beta, U_volts, q3_m over the samples that evaluated.
std::string curve_csv(const PullInCurve& curve, const ActuatorScenario& scenario);
std::string result_json(const PullInResult& result, double runtime_s, const RunMetadata& meta);
/// r_m, z_m, B_r, B_z, gradmag_r, gradmag_z
std::string field_csv(const std::vector<FieldSample>& samples);

void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace hlma
