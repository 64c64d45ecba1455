#pragma once

// Induced eddy currents in the meshed disc.
//
// All inductances are divided by mu0 * R_e, so the element system reads
//   Lbar * I = -Mc * Ic
// with Lbar = L / (mu0 R_e), Mc_sj = M_sj / (mu0 R_e) = Mbar_sj / sqrt(nu_j), and
// currents normalized by the first coil current I_c1.

#include <complex>
#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hlma/geometry.hpp"

namespace hlma {

inline constexpr std::string_view kSignConvention = "I = -L^-1 * Mc * Ic";

struct Impedance {
  enum class Mode { Ideal, Resistive };
  Mode mode = Mode::Ideal;
  double resistance = 0.0;  // R (ohm)
  double frequency = 0.0;   // f (rad/s)

  static Impedance ideal() { return {}; }
  static Impedance resistive(double resistance, double frequency);
};

std::string_view to_string(Impedance::Mode mode);

/// The pose-independent element matrix Lbar and its factorization. Shared across pose
/// sweeps of one mesh.
class ElementMatrix {
 public:
  /// Assembles Lbar from the ring self-inductance (diagonal) and the coplanar
  /// filament coupling (off-diagonal, one quadrature per distinct lattice distance),
  /// then factorizes it. Throws SingularSystemError naming the failing pivot.
  static std::shared_ptr<const ElementMatrix> assemble(const Mesh& mesh,
                                                       Impedance impedance = Impedance::ideal());

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// R / (j f) / (mu0 R_e); zero in ideal mode.
  std::complex<double> diagonal_shift() const { return shift_; }
  const Impedance& impedance() const { return impedance_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  /// Number of quadratures evaluated for the off-diagonal entries.
  std::size_t distinct_couplings() const { return distinct_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  /// Lbar * x including the impedance shift.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;

 private:
  ElementMatrix() = default;

  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd cholesky_;  // ideal mode: lower factor
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;  // resistive mode
  std::complex<double> shift_{0.0, 0.0};
  Impedance impedance_;
  std::size_t distinct_ = 0;
};

/// Element-coil couplings at one pose, plus their axial derivative.
struct CouplingMatrix {
  Eigen::MatrixXd mc;      // n x N, M_sj / (mu0 R_e)
  Eigen::MatrixXd dmc_dx3; // n x N, d(mc)/d(x3 / R_e)
};

CouplingMatrix assemble_couplings(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                  KzCache* cache = nullptr);

struct EddySystem {
  std::shared_ptr<const ElementMatrix> elements;
  CouplingMatrix couplings;
  Pose pose;

  std::size_t elements_count() const { return elements ? elements->size() : 0; }
  std::size_t coil_count() const { return static_cast<std::size_t>(couplings.mc.cols()); }
};

/// Builds the system for one pose. Passing `reuse` skips the element assembly and
/// factorization.
EddySystem assemble(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                    Impedance impedance = Impedance::ideal(),
                    std::shared_ptr<const ElementMatrix> reuse = nullptr, KzCache* cache = nullptr);

struct EddySolution {
  Eigen::VectorXcd currents;  // per element, relative to I_c1
  double residual = 0.0;      // |L I + Mc Ic| / |Mc Ic|
  bool complex_valued = false;

  Eigen::VectorXd real() const { return currents.real(); }
  /// Sum of element currents.
  double total_current() const { return currents.real().sum(); }
};

EddySolution solve(const EddySystem& system, const Eigen::VectorXd& coil_currents);

/// grid_n x grid_n map, row-major; absent cells hold no value.
struct GridMap {
  int n = 0;
  std::vector<double> values;
  std::vector<bool> present;

  double at(int row, int col) const { return values[static_cast<std::size_t>(row * n + col)]; }
  bool has(int row, int col) const { return present[static_cast<std::size_t>(row * n + col)]; }
};

struct CurrentMaps {
  GridMap currents;
  GridMap magnitude;  // |grad| of the current map, unit grid spacing
};

CurrentMaps current_maps(const EddySolution& solution, const Mesh& mesh);

}  // namespace hlma
