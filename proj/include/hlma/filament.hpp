#pragma once

// Self- and mutual-inductance kernels for thin circular filaments.
//
// The coupling between a primary filament (radius R_p) and a parallel secondary
// filament (radius R_s) is written in dimensionless form
//
//   M = mu0 * sqrt(R_p * R_s) * Mbar,
//   Mbar = (1/pi) * Int_0^{2pi} (1 + x1 cos phi + x2 sin phi) / rho^1.5 * Psi(k)/k dphi,
//
// where (x1, x2, x3) is the secondary centre in the primary frame in units of R_s,
// nu = R_s / R_p, rho^2 = 1 + 2(x1 cos phi + x2 sin phi) + x1^2 + x2^2 and
// k^2 = 4 nu rho / ((1 + nu rho)^2 + nu^2 x3^2).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace hlma {

inline constexpr double kMu0 = 4e-7 * std::numbers::pi;  // H/m

struct RingGeometry {
  double radius = 0.0;     // R_e (m)
  double thickness = 0.0;  // th (m)

  double epsilon() const { return thickness / (2.0 * radius); }
};

/// Throws GeometryError unless radius > 0, thickness > 0 and eps < 1; warns when eps > 0.1.
void validate(const RingGeometry& g);

/// Self-inductance (H) of a ring of circular cross-section.
double self_inductance_ring(const RingGeometry& g);

/// L / (mu0 R_e) as a function of eps = th / (2 R_e).
double self_inductance_ring_normalized(double eps);

/// Maxwell mutual inductance (H) of two coaxial filaments of radii r1, r2 at axial
/// separation s. Coincident filaments throw SingularGeometryError.
double mutual_maxwell_coaxial(double r1, double r2, double s);

/// Equal-radius form.
inline double mutual_maxwell_coaxial(double radius, double s) {
  return mutual_maxwell_coaxial(radius, radius, s);
}

struct RelativePlacement {
  double x1 = 0.0;  // secondary centre in the primary frame, units of the secondary radius
  double x2 = 0.0;
  double x3 = 0.0;
  double nu = 1.0;  // secondary radius / primary radius
};

struct KzValue {
  double m = 0.0;       // Mbar
  double dm_dx3 = 0.0;  // dMbar/dx3
};

/// Dimensionless mutual inductance Mbar. Throws SingularGeometryError for coincident
/// or intersecting filaments. Filaments that touch tangentially in a common plane
/// (lattice neighbours of the disc mesh) are integrable and accepted.
double mutual_kz(const RelativePlacement& p);

/// dMbar/dx3, same quadrature and errors as mutual_kz.
double dmutual_kz_dx3(const RelativePlacement& p);

/// Both at once; shares the elliptic evaluations.
KzValue mutual_kz_with_derivative(const RelativePlacement& p);

/// Lateral-distance form used by the caches (the integral depends on x1, x2 only
/// through their norm).
KzValue mutual_kz_lateral(double lateral, double x3, double nu);

/// M in henries from Mbar for primary radius r_primary and secondary radius r_secondary.
inline double dimensional_mutual(double m_bar, double r_primary, double r_secondary) {
  return kMu0 * std::sqrt(r_primary * r_secondary) * m_bar;
}

/// Quadrature diagnostics for the periodic rule (exposed for convergence tests).
struct KzQuadratureInfo {
  KzValue value;
  std::size_t nodes = 0;  // full-period node count of the accepted trapezoid estimate
  bool tanh_sinh = false; // near-contact path was used
};
KzQuadratureInfo mutual_kz_detailed(double lateral, double x3, double nu);

/// Fixed-resolution trapezoid estimate over the full period with n_nodes nodes
/// (n_nodes must be even). No convergence control.
KzValue mutual_kz_trapezoid(double lateral, double x3, double nu, std::size_t n_nodes);

/// Thread-safe memo of mutual_kz_lateral keyed on the inputs rounded to 40
/// significant bits (~1e-12 relative). The value stored for a key is computed from
/// the rounded inputs, so results do not depend on which caller filled the entry.
class KzCache {
 public:
  KzValue get(double lateral, double x3, double nu);
  std::size_t size() const;
  void clear();

  static double quantize(double v);

 private:
  struct Key {
    std::uint64_t a, b, c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  mutable std::mutex mutex_;
  std::unordered_map<Key, KzValue, KeyHash> map_;
};

}  // namespace hlma
