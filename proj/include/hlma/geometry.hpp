#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hlma/filament.hpp"

namespace hlma {

using Vec3 = std::array<double, 3>;

/// One circular current loop coaxial with X3 (Bryan angles fixed at zero).
struct Filament {
  double radius = 0.0;  // R_cj (m)
  Vec3 position{};      // centre in the fixed frame (m)
  Vec3 orientation{};   // Bryan angles (rad); must be zero
  double current = 1.0; // dimensionless amplitude, relative to the first filament
};

struct CoilSystem {
  std::vector<Filament> filaments;
  std::optional<double> reference_current;  // I_c1 (A)
  std::optional<double> frequency;          // f (rad/s)

  std::size_t size() const { return filaments.size(); }
  /// R_c1, the radius that normalizes the coil weights.
  double reference_radius() const;
  std::vector<double> currents() const;
};

/// Throws GeometryError for an empty system, nonpositive radii or nonzero angles.
void validate(const CoilSystem& coils);

enum class MeshRule { CenterInside, FullyInside };

MeshRule parse_mesh_rule(std::string_view s);
std::string_view to_string(MeshRule rule);

/// Square-lattice discretization of a disc into touching circular elements.
struct Mesh {
  double disc_radius = 0.0;
  double element_radius = 0.0;  // R_e (m)
  double thickness = 0.0;       // th (m)
  int grid_n = 0;
  MeshRule rule = MeshRule::CenterInside;
  // Lattice offsets of each element from the disc centre (units of the 2 R_e spacing).
  std::vector<std::array<int, 2>> lattice;

  std::size_t size() const { return lattice.size(); }
  double epsilon() const { return thickness / (2.0 * element_radius); }
  /// Body-frame centre (m); third component is zero.
  Vec3 center(std::size_t s) const;
  /// (row, col) in the grid_n x grid_n map. Row 0 is the largest x2; columns follow x1.
  std::array<int, 2> grid_index(std::size_t s) const;
  RingGeometry ring() const { return {element_radius, thickness}; }
};

/// Translation of the disc centre of mass plus Bryan angles (zero in this model).
struct Pose {
  Vec3 translation{};
  Vec3 angles{};

  static Pose at_height(double z) { return {{0.0, 0.0, z}, {}}; }
};

/// Stacked filaments of a solenoid, top winding at z_top and the rest below it.
std::vector<Filament> build_solenoid(double diameter, int windings, double pitch, double z_top,
                                     double current);

/// Elements of radius R_e = disc_radius / grid_n on a lattice of spacing 2 R_e.
/// grid_n must be odd (grid_n = 1 yields the single-element mesh).
Mesh mesh_disc(double disc_radius, int grid_n, double thickness,
               MeshRule rule = MeshRule::CenterInside);

/// Coordinates of the element centre in the filament frame, in units of R_e, and
/// nu = R_e / R_cj.
RelativePlacement relative_placement(const Vec3& element_center, const Filament& filament,
                                     const Pose& pose, double element_radius);

}  // namespace hlma
