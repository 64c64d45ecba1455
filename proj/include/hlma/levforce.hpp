#pragma once

// Ponderomotive force on the meshed disc and the dimensionless vertical force
// function used by the quasi-FEM pull-in model.
//
// Force units: mu0 * I_c1^2 (forces), mu0 * I_c1^2 * R_e (torques). Energies are in
// units of mu0 * R_e * I_c1^2. Currents are frozen at their pose values while
// differentiating the couplings.

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "hlma/eddy.hpp"

namespace hlma {

struct DimensionlessGroups {
  double kappa = 0.0;  // h / h_l
  double xi = 0.0;     // h_l / (2 R_l)
  double chi = 0.0;    // h_l / R_e

  static DimensionlessGroups from(double h, double h_l, double levitation_radius, double element_radius);
};

/// Quasi-FEM vertical force for a disc displaced by q3 = lambda * h from its
/// levitation height h_l. Holds the factorized element matrix and re-solves the eddy
/// currents at every lambda.
class VerticalForceModel {
 public:
  VerticalForceModel(Mesh mesh, CoilSystem coils, double levitation_height, double kappa,
                     std::shared_ptr<const ElementMatrix> elements = nullptr);

  struct Evaluation {
    double fm = 0.0;
    EddySolution solution;
    CouplingMatrix couplings;
  };

  /// Pose of the disc centre at lambda: (0, 0, h_l (1 + lambda kappa)).
  Pose pose(double lambda) const;

  /// F_m(lambda) = sum_s sum_j eta_sj dMbar_sj/dlambda,
  /// eta_sj = I_s I_cj sqrt(R_cj/R_c1) / chi, dMbar/dlambda = kappa chi dMbar/dx3.
  double fm(double lambda) const { return evaluate(lambda).fm; }
  Evaluation evaluate(double lambda) const;

  /// F_m with the currents held fixed (for the energy finite-difference check).
  double fm_frozen(double lambda, const Eigen::VectorXd& element_currents) const;
  /// sum_s sum_j eta_sj Mbar_sj with fixed currents; d/dlambda of this is fm_frozen.
  double weighted_energy(double lambda, const Eigen::VectorXd& element_currents) const;

  const Mesh& mesh() const { return mesh_; }
  const CoilSystem& coils() const { return coils_; }
  double chi() const { return chi_; }
  double kappa() const { return kappa_; }
  const std::shared_ptr<const ElementMatrix>& elements() const { return elements_; }

 private:
  double frozen_sum(const CouplingMatrix& c, const Eigen::VectorXd& currents, bool derivative) const;

  Mesh mesh_;
  CoilSystem coils_;
  double levitation_height_;
  double kappa_;
  double chi_;
  Eigen::VectorXd coil_currents_;
  Eigen::VectorXd coil_weights_;  // sqrt(R_cj / R_c1)
  std::shared_ptr<const ElementMatrix> elements_;
};

struct GeneralizedForce {
  std::array<double, 3> force{};   // F1, F2, F3
  std::array<double, 3> torque{};  // T1, T2, T3
  double force3_fd = 0.0;          // F3 by central differences, for cross-checking
};

/// Generalized forces and torques with frozen currents. F3 uses the analytic axial
/// derivative; F1, F2 and the torques use central differences of the couplings
/// (steps 1e-4 R_e and 1e-5 rad). Torques rotate the element centres about the
/// centre of mass; the element planes stay parallel to the coils.
GeneralizedForce generalized_force(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                   const EddySolution& solution);

/// Element-coil cross term of the stored energy, sum_s sum_j Mc_sj I_s I_cj.
double stored_interaction_energy(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                 const EddySolution& solution);

struct FieldSample {
  double r = 0.0;  // m
  double z = 0.0;  // m
  std::array<double, 2> b{};           // (B_r, B_z) per unit coil current (T/A)
  std::array<double, 2> grad_b2{};     // d|B|^2/dr, d|B|^2/dz (T^2/A^2/m)
};

/// Field of one filament of radius a at (r, dz) relative to its centre, per ampere.
std::array<double, 2> loop_field_point(double a, double r, double dz);

/// Superposed field of all filaments (weighted by their currents) on the
/// rectilinear grid r x z, with the gradient of |B|^2 from central differences on
/// the grid (one-sided at the edges). Samples lying on a filament throw
/// SingularGeometryError.
std::vector<FieldSample> loop_field(const CoilSystem& coils, std::span<const double> r,
                                    std::span<const double> z);

}  // namespace hlma
