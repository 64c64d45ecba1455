#include "hlma/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "hlma/errors.hpp"
#include "hlma/scenario.hpp"

namespace hlma {
namespace {

using nlohmann::ordered_json;

// nlohmann's shortest round-trip output is deterministic but hides the format; numbers
// go through format_number and are embedded as raw JSON tokens instead.
std::string json_number(double v) {
  return std::isfinite(v) ? format_number(v) : "null";
}

std::string quote(std::string_view s) { return ordered_json(std::string(s)).dump(); }

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

std::string meta_fields(const RunMetadata& meta) {
  return "  \"scenario_hash\": " + quote(meta.scenario_hash) + ",\n  \"grid_n\": " + std::to_string(meta.grid_n) +
         ",\n  \"rule\": " + quote(meta.rule) + ",\n  \"elements\": " + std::to_string(meta.elements) +
         ",\n  \"sign_convention\": " + quote(kSignConvention) + ",\n  \"version\": " + quote(version());
}

}  // namespace

std::string_view version() { return HLMA_VERSION; }

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string mesh_csv(const Mesh& mesh) {
  std::string out = "s,x1_m,x2_m,row,col\n";
  for (std::size_t s = 0; s < mesh.size(); ++s) {
    const Vec3 c = mesh.center(s);
    const auto [row, col] = mesh.grid_index(s);
    append_row(out, {std::to_string(s), format_number(c[0]), format_number(c[1]), std::to_string(row),
                     std::to_string(col)});
  }
  return out;
}

std::string grid_csv(const GridMap& map) {
  std::string out = "row,col,value\n";
  for (int row = 0; row < map.n; ++row) {
    for (int col = 0; col < map.n; ++col) {
      if (!map.has(row, col)) continue;
      append_row(out, {std::to_string(row), std::to_string(col), format_number(map.at(row, col))});
    }
  }
  return out;
}

RunMetadata metadata_for(const ActuatorScenario& scenario) {
  RunMetadata meta;
  meta.scenario_hash = scenario_hash(scenario);
  meta.grid_n = scenario.grid_n;
  meta.rule = std::string(to_string(scenario.rule));
  meta.elements = scenario.build_mesh().size();
  return meta;
}

std::string eddy_meta_json(const RunMetadata& meta, const EddySolution& solution, const Impedance& impedance) {
  return "{\n  \"n\": " + std::to_string(solution.currents.size()) + ",\n  \"residual\": " +
         json_number(solution.residual) + ",\n  \"impedance_mode\": " + quote(to_string(impedance.mode)) +
         ",\n  \"total_current\": " + json_number(solution.total_current()) + ",\n" + meta_fields(meta) + "\n}\n";
}

std::string curve_csv(const PullInCurve& curve, const ActuatorScenario& scenario) {
  std::string out = "lambda_abs,beta,sqrt_beta,U_volts,q3_m\n";
  for (const auto& s : curve.samples) {
    if (!s.ok) continue;
    const Dimensional d = dimensionalize(s.lambda, s.beta, scenario);
    append_row(out, {format_number(std::abs(s.lambda)), format_number(s.beta),
                     format_number(std::sqrt(std::max(s.beta, 0.0))), format_number(d.voltage),
                     format_number(s.lambda * scenario.spacing)});
  }
  return out;
}

std::string result_json(const PullInResult& r, double runtime_s, const RunMetadata& meta) {
  return "{\n  \"model\": " + quote(to_string(r.model)) + ",\n  \"lambda_p\": " + json_number(r.lambda_p) +
         ",\n  \"beta_p\": " + json_number(r.beta_p) + ",\n  \"sqrt_beta_p\": " + json_number(r.sqrt_beta_p) +
         ",\n  \"U_p_V\": " + json_number(r.voltage) + ",\n  \"q_p_m\": " + json_number(r.displacement) +
         ",\n  \"eta0\": " + (r.eta0 ? json_number(*r.eta0) : std::string("null")) +
         ",\n  \"runtime_s\": " + json_number(runtime_s) + ",\n" + meta_fields(meta) + "\n}\n";
}

std::string field_csv(const std::vector<FieldSample>& samples) {
  std::string out = "r_m,z_m,B_r,B_z,gradmag_r,gradmag_z\n";
  for (const auto& s : samples) {
    append_row(out, {format_number(s.r), format_number(s.z), format_number(s.b[0]), format_number(s.b[1]),
                     format_number(s.grad_b2[0]), format_number(s.grad_b2[1])});
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("cannot write " + path.string());
}

}  // namespace hlma
