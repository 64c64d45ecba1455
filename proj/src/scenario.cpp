#include "hlma/scenario.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hlma/errors.hpp"

namespace hlma {
namespace {

using nlohmann::json;

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing field \"" + (path.empty() ? key : path + "." + key) + "\"");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number()) throw InputError(join(path, key) + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number_integer()) throw InputError(join(path, key) + ": expected an integer");
  return v.get<int>();
}

}  // namespace

ActuatorScenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scenario: malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) throw InputError("scenario: expected a JSON object");

  ActuatorScenario s;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw InputError("name: expected a string");
    s.name = doc["name"].get<std::string>();
  }
  const json& disc = member(doc, "disc", "");
  s.disc_radius = number(disc, "radius_m", "disc");
  s.mass = number(disc, "mass_kg", "disc");
  if (disc.contains("thickness_m")) s.thickness = number(disc, "thickness_m", "disc");

  if (doc.contains("mesh")) {
    const json& mesh = doc["mesh"];
    if (!mesh.is_object()) throw InputError("mesh: expected an object");
    if (mesh.contains("grid_n")) s.grid_n = integer(mesh, "grid_n", "mesh");
    if (mesh.contains("rule")) {
      if (!mesh["rule"].is_string()) throw InputError("mesh.rule: expected a string");
      try {
        s.rule = parse_mesh_rule(mesh["rule"].get<std::string>());
      } catch (const GeometryError&) {
        throw InputError("mesh.rule: expected \"center-inside\" or \"fully-inside\"");
      }
    }
  }

  const json& coils = member(doc, "coils", "");
  if (!coils.is_array() || coils.empty()) throw InputError("coils: expected a nonempty array");
  for (std::size_t j = 0; j < coils.size(); ++j) {
    const std::string p = "coils[" + std::to_string(j) + "]";
    CoilSpec c;
    c.diameter = number(coils[j], "diameter_m", p);
    c.windings = integer(coils[j], "windings", p);
    c.pitch = number(coils[j], "pitch_m", p);
    c.z_top = number(coils[j], "z_top_m", p);
    c.current = number(coils[j], "current_rel", p);
    s.coils.push_back(c);
  }

  const json& el = member(doc, "electrodes", "");
  s.electrode_area = number(el, "area_m2", "electrodes");
  s.spacing = number(el, "spacing_h_m", "electrodes");
  s.levitation_height = number(member(doc, "levitation", ""), "height_m", "levitation");

  s.validate();
  return s;
}

ActuatorScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("scenario: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  ActuatorScenario s = parse_scenario(buf.str());
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

std::string scenario_json(const ActuatorScenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["disc"] = {{"radius_m", s.disc_radius}, {"mass_kg", s.mass}};
  if (s.thickness) doc["disc"]["thickness_m"] = *s.thickness;
  doc["mesh"] = {{"grid_n", s.grid_n}, {"rule", std::string(to_string(s.rule))}};
  doc["coils"] = json::array();
  for (const auto& c : s.coils) {
    doc["coils"].push_back({{"diameter_m", c.diameter},
                            {"windings", c.windings},
                            {"pitch_m", c.pitch},
                            {"z_top_m", c.z_top},
                            {"current_rel", c.current}});
  }
  doc["electrodes"] = {{"area_m2", s.electrode_area}, {"spacing_h_m", s.spacing}};
  doc["levitation"] = {{"height_m", s.levitation_height}};
  return doc.dump(2);
}

std::string scenario_hash(const ActuatorScenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : scenario_json(s)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

const std::vector<ExperimentRecord>& experiment_records() {
  static const std::vector<ExperimentRecord> records = {
      {"disc-2.4mm", 2.4e-3, 0.2e-6, 180e-6, 100e-6, 0.09, 0.55, {35e-6, 38.0}, {40e-6, 43.0}, {40e-6, 37.0}},
      {"disc-2.8mm", 2.8e-3, 0.3e-6, 200e-6, 119e-6, 0.1, 0.6, {43e-6, 60.8}, {49e-6, 69.0}, {48e-6, 60.76}},
      {"disc-3.2mm-h64", 3.2e-3, 0.7e-6, 144e-6, 64e-6, 0.072, 0.44, {18e-6, 32.0}, {24e-6, 44.0}, {22e-6, 33.0}},
      {"disc-3.2mm-h107", 3.2e-3, 0.7e-6, 187e-6, 107e-6, 0.0935, 0.57, {36e-6, 65.0}, {42e-6, 88.0}, {37e-6, 69.0}},
  };
  return records;
}

std::vector<CoilSpec> experimental_coils() {
  return {{2000e-6, 20, 25e-6, 0.0, 1.0}, {3800e-6, 12, 25e-6, 0.0, -1.0}};
}

ActuatorScenario experiment_scenario(const ExperimentRecord& record, int grid_n) {
  ActuatorScenario s;
  s.name = record.name;
  s.disc_radius = 0.5 * record.diameter;
  s.mass = record.mass;
  s.grid_n = grid_n;
  s.coils = experimental_coils();
  s.electrode_area = 8.0e-7;
  s.spacing = record.spacing;
  s.levitation_height = record.levitation_height;
  return s;
}

ActuatorScenario preliminary_design(double disc_radius, int grid_n) {
  ActuatorScenario s;
  s.name = "preliminary";
  s.disc_radius = disc_radius;
  s.mass = 0.5e-6;
  s.grid_n = grid_n;
  s.coils = {{2.0e-3, 1, 0.0, 0.0, 1.0}, {3.8e-3, 1, 0.0, 0.0, -1.0}};
  s.electrode_area = 8.0e-7;
  s.spacing = 10e-6;
  s.levitation_height = 250e-6;
  return s;
}

}  // namespace hlma
