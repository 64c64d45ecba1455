#include "hlma/geometry.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "hlma/errors.hpp"

namespace hlma {

double CoilSystem::reference_radius() const {
  if (filaments.empty()) throw GeometryError("coil system has no filaments");
  return filaments.front().radius;
}

std::vector<double> CoilSystem::currents() const {
  std::vector<double> out;
  out.reserve(filaments.size());
  for (const auto& f : filaments) out.push_back(f.current);
  return out;
}

void validate(const CoilSystem& coils) {
  if (coils.filaments.empty()) throw GeometryError("coil system has no filaments");
  for (std::size_t j = 0; j < coils.filaments.size(); ++j) {
    const auto& f = coils.filaments[j];
    if (!(f.radius > 0.0)) {
      throw GeometryError("filament " + std::to_string(j) + " has nonpositive radius");
    }
    if (f.orientation != Vec3{}) {
      throw GeometryError("filament " + std::to_string(j) + " is tilted; only coaxial filaments are modelled");
    }
  }
}

MeshRule parse_mesh_rule(std::string_view s) {
  if (s == "center-inside") return MeshRule::CenterInside;
  if (s == "fully-inside") return MeshRule::FullyInside;
  throw GeometryError("unknown mesh rule '" + std::string(s) + "'");
}

std::string_view to_string(MeshRule rule) {
  return rule == MeshRule::CenterInside ? "center-inside" : "fully-inside";
}

Vec3 Mesh::center(std::size_t s) const {
  const double pitch = 2.0 * element_radius;
  return {pitch * lattice[s][0], pitch * lattice[s][1], 0.0};
}

std::array<int, 2> Mesh::grid_index(std::size_t s) const {
  const int c = grid_n / 2;
  return {c - lattice[s][1], lattice[s][0] + c};
}

std::vector<Filament> build_solenoid(double diameter, int windings, double pitch, double z_top,
                                     double current) {
  if (!(diameter > 0.0)) throw GeometryError("solenoid diameter must be positive");
  if (windings < 1) throw GeometryError("solenoid needs at least one winding");
  if (!(pitch >= 0.0)) throw GeometryError("solenoid pitch must be nonnegative");
  std::vector<Filament> out;
  out.reserve(static_cast<std::size_t>(windings));
  for (int j = 0; j < windings; ++j) {
    Filament f;
    f.radius = 0.5 * diameter;
    f.position = {0.0, 0.0, z_top - j * pitch};
    f.current = current;
    out.push_back(f);
  }
  return out;
}

Mesh mesh_disc(double disc_radius, int grid_n, double thickness, MeshRule rule) {
  if (!(disc_radius > 0.0)) throw GeometryError("disc radius must be positive");
  if (grid_n < 1 || grid_n % 2 == 0) {
    throw GeometryError("grid_n must be an odd positive integer, got " + std::to_string(grid_n));
  }
  Mesh mesh;
  mesh.disc_radius = disc_radius;
  mesh.grid_n = grid_n;
  mesh.rule = rule;
  mesh.element_radius = disc_radius / grid_n;
  mesh.thickness = thickness;
  validate(mesh.ring());

  // In lattice units (spacing 2 R_e) the disc radius is grid_n / 2 and R_e is 1/2.
  const int c = grid_n / 2;
  const double limit = rule == MeshRule::CenterInside ? 0.5 * grid_n : 0.5 * grid_n - 0.5;
  const double limit2 = limit * limit;
  for (int j = c; j >= -c; --j) {
    for (int i = -c; i <= c; ++i) {
      if (static_cast<double>(i * i + j * j) <= limit2) mesh.lattice.push_back({i, j});
    }
  }
  return mesh;
}

RelativePlacement relative_placement(const Vec3& element_center, const Filament& filament,
                                     const Pose& pose, double element_radius) {
  if (pose.angles != Vec3{}) {
    throw GeometryError("relative_placement supports untilted poses only");
  }
  if (!(element_radius > 0.0) || !(filament.radius > 0.0)) {
    throw GeometryError("radii must be positive");
  }
  RelativePlacement p;
  p.x1 = (pose.translation[0] + element_center[0] - filament.position[0]) / element_radius;
  p.x2 = (pose.translation[1] + element_center[1] - filament.position[1]) / element_radius;
  p.x3 = (pose.translation[2] + element_center[2] - filament.position[2]) / element_radius;
  p.nu = element_radius / filament.radius;
  return p;
}

}  // namespace hlma
