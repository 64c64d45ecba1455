#include "hlma/levforce.hpp"

#include <cmath>
#include <numbers>

#include "hlma/ellint.hpp"
#include "hlma/errors.hpp"
#include "hlma/parallel.hpp"

namespace hlma {
namespace {

constexpr double kLateralStep = 1e-4;  // in units of R_e
constexpr double kAngleStep = 1e-5;    // rad

Eigen::VectorXd coil_current_vector(const CoilSystem& coils) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(coils.size()));
  for (std::size_t j = 0; j < coils.size(); ++j) out[static_cast<Eigen::Index>(j)] = coils.filaments[j].current;
  return out;
}

// sum_s sum_j I_s Ic_j Mc_sj for element centres given explicitly (metres, body frame).
double coupling_energy(const std::vector<Vec3>& centers, const CoilSystem& coils, const Pose& pose,
                       double element_radius, const Eigen::VectorXd& currents, KzCache& cache) {
  std::vector<double> per_element(centers.size(), 0.0);
  parallel_for(centers.size(), [&](std::size_t s) {
    double acc = 0.0;
    for (const auto& f : coils.filaments) {
      const auto p = relative_placement(centers[s], f, pose, element_radius);
      const KzValue v = cache.get(std::hypot(p.x1, p.x2), p.x3, p.nu);
      acc += f.current * v.m / std::sqrt(p.nu);
    }
    per_element[s] = currents[static_cast<Eigen::Index>(s)] * acc;
  });
  // fixed-order reduction
  double sum = 0.0;
  for (double v : per_element) sum += v;
  return sum;
}

std::vector<Vec3> mesh_centers(const Mesh& mesh) {
  std::vector<Vec3> out(mesh.size());
  for (std::size_t s = 0; s < mesh.size(); ++s) out[s] = mesh.center(s);
  return out;
}

std::vector<Vec3> rotated(const std::vector<Vec3>& centers, int axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Vec3> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto& p = centers[i];
    switch (axis) {
      case 0: out[i] = {p[0], c * p[1] - s * p[2], s * p[1] + c * p[2]}; break;
      case 1: out[i] = {c * p[0] + s * p[2], p[1], -s * p[0] + c * p[2]}; break;
      default: out[i] = {c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]}; break;
    }
  }
  return out;
}

}  // namespace

DimensionlessGroups DimensionlessGroups::from(double h, double h_l, double levitation_radius,
                                              double element_radius) {
  if (!(h > 0.0) || !(h_l > 0.0) || !(levitation_radius > 0.0) || !(element_radius > 0.0)) {
    throw GeometryError("dimensionless groups need positive h, h_l, R_l and R_e");
  }
  return {h / h_l, h_l / (2.0 * levitation_radius), h_l / element_radius};
}

VerticalForceModel::VerticalForceModel(Mesh mesh, CoilSystem coils, double levitation_height, double kappa,
                                       std::shared_ptr<const ElementMatrix> elements)
    : mesh_(std::move(mesh)),
      coils_(std::move(coils)),
      levitation_height_(levitation_height),
      kappa_(kappa),
      chi_(levitation_height / mesh_.element_radius),
      elements_(std::move(elements)) {
  validate(coils_);
  if (!(levitation_height > 0.0) || !(kappa > 0.0)) {
    throw GeometryError("levitation height and kappa must be positive");
  }
  if (!elements_) elements_ = ElementMatrix::assemble(mesh_);
  if (elements_->size() != mesh_.size()) throw GeometryError("element matrix does not match the mesh");
  coil_currents_ = coil_current_vector(coils_);
  coil_weights_.resize(coil_currents_.size());
  const double r1 = coils_.reference_radius();
  for (std::size_t j = 0; j < coils_.size(); ++j) {
    coil_weights_[static_cast<Eigen::Index>(j)] = std::sqrt(coils_.filaments[j].radius / r1);
  }
}

Pose VerticalForceModel::pose(double lambda) const {
  return Pose::at_height(levitation_height_ * (1.0 + lambda * kappa_));
}

double VerticalForceModel::frozen_sum(const CouplingMatrix& c, const Eigen::VectorXd& currents,
                                      bool derivative) const {
  // Mbar_sj = sqrt(nu_j) Mc_sj with nu_j = R_e / R_cj
  Eigen::VectorXd coil_factor(coil_currents_.size());
  for (Eigen::Index j = 0; j < coil_factor.size(); ++j) {
    const double nu = mesh_.element_radius / coils_.filaments[static_cast<std::size_t>(j)].radius;
    coil_factor[j] = coil_currents_[j] * coil_weights_[j] * std::sqrt(nu) / chi_;
  }
  const Eigen::MatrixXd& m = derivative ? c.dmc_dx3 : c.mc;
  const double scale = derivative ? kappa_ * chi_ : 1.0;
  const Eigen::VectorXd per_element = m * coil_factor;
  return scale * currents.dot(per_element);
}

VerticalForceModel::Evaluation VerticalForceModel::evaluate(double lambda) const {
  Evaluation out;
  EddySystem sys;
  sys.elements = elements_;
  sys.pose = pose(lambda);
  sys.couplings = assemble_couplings(mesh_, coils_, sys.pose);
  out.solution = solve(sys, coil_currents_);
  out.fm = frozen_sum(sys.couplings, out.solution.real(), true);
  out.couplings = std::move(sys.couplings);
  return out;
}

double VerticalForceModel::fm_frozen(double lambda, const Eigen::VectorXd& element_currents) const {
  return frozen_sum(assemble_couplings(mesh_, coils_, pose(lambda)), element_currents, true);
}

double VerticalForceModel::weighted_energy(double lambda, const Eigen::VectorXd& element_currents) const {
  return frozen_sum(assemble_couplings(mesh_, coils_, pose(lambda)), element_currents, false);
}

GeneralizedForce generalized_force(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                   const EddySolution& solution) {
  validate(coils);
  if (pose.angles != Vec3{}) throw GeometryError("generalized_force expects an untilted pose");
  if (static_cast<std::size_t>(solution.currents.size()) != mesh.size()) {
    throw GeometryError("solution does not match the mesh");
  }
  const Eigen::VectorXd currents = solution.real();
  const Eigen::VectorXd ic = coil_current_vector(coils);
  KzCache cache;

  GeneralizedForce out;
  const CouplingMatrix c = assemble_couplings(mesh, coils, pose, &cache);
  out.force[2] = currents.dot(c.dmc_dx3 * ic);

  const double re = mesh.element_radius;
  const auto centers = mesh_centers(mesh);
  auto energy_at = [&](const std::vector<Vec3>& pts, const Pose& p) {
    return coupling_energy(pts, coils, p, re, currents, cache);
  };
  for (int axis = 0; axis < 3; ++axis) {
    Pose plus = pose;
    Pose minus = pose;
    plus.translation[static_cast<std::size_t>(axis)] += kLateralStep * re;
    minus.translation[static_cast<std::size_t>(axis)] -= kLateralStep * re;
    const double d = (energy_at(centers, plus) - energy_at(centers, minus)) / (2.0 * kLateralStep);
    if (axis < 2) {
      out.force[static_cast<std::size_t>(axis)] = d;
    } else {
      out.force3_fd = d;
    }
  }
  for (int axis = 0; axis < 3; ++axis) {
    const double tp = energy_at(rotated(centers, axis, kAngleStep), pose);
    const double tm = energy_at(rotated(centers, axis, -kAngleStep), pose);
    out.torque[static_cast<std::size_t>(axis)] = (tp - tm) / (2.0 * kAngleStep);
  }
  return out;
}

double stored_interaction_energy(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                 const EddySolution& solution) {
  if (static_cast<std::size_t>(solution.currents.size()) != mesh.size()) {
    throw GeometryError("solution does not match the mesh");
  }
  const CouplingMatrix c = assemble_couplings(mesh, coils, pose);
  return solution.real().dot(c.mc * coil_current_vector(coils));
}

std::array<double, 2> loop_field_point(double a, double r, double dz) {
  if (!(a > 0.0)) throw GeometryError("loop radius must be positive");
  r = std::abs(r);
  if (r == 0.0) {
    const double q = a * a + dz * dz;
    return {0.0, kMu0 * a * a / (2.0 * q * std::sqrt(q))};
  }
  const double alpha2 = (a - r) * (a - r) + dz * dz;
  const double beta2 = (a + r) * (a + r) + dz * dz;
  if (alpha2 / beta2 <= 2e-12) {
    throw SingularGeometryError("field sample lies on a filament");
  }
  const double beta = std::sqrt(beta2);
  const double k = std::sqrt(4.0 * a * r) / beta;
  const auto [K, E] = detail::complete_elliptic_kc(k, std::sqrt(alpha2 / beta2));
  const double c = kMu0 / std::numbers::pi;
  const double br = c * dz / (2.0 * alpha2 * beta * r) * ((a * a + r * r + dz * dz) * E - alpha2 * K);
  const double bz = c / (2.0 * alpha2 * beta) * ((a * a - r * r - dz * dz) * E + alpha2 * K);
  return {br, bz};
}

std::vector<FieldSample> loop_field(const CoilSystem& coils, std::span<const double> r,
                                    std::span<const double> z) {
  validate(coils);
  for (const auto& f : coils.filaments) {
    if (f.position[0] != 0.0 || f.position[1] != 0.0) {
      throw GeometryError("loop_field expects filaments centred on the X3 axis");
    }
  }
  const std::size_t nr = r.size();
  const std::size_t nz = z.size();
  std::vector<FieldSample> out(nr * nz);
  std::vector<double> b2(nr * nz);
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t ir = 0; ir < nr; ++ir) {
      FieldSample& smp = out[iz * nr + ir];
      smp.r = r[ir];
      smp.z = z[iz];
      for (const auto& f : coils.filaments) {
        const auto b = loop_field_point(f.radius, r[ir], z[iz] - f.position[2]);
        smp.b[0] += f.current * b[0];
        smp.b[1] += f.current * b[1];
      }
      b2[iz * nr + ir] = smp.b[0] * smp.b[0] + smp.b[1] * smp.b[1];
    }
  }
  auto diff = [&](std::size_t i, std::size_t n, std::span<const double> axis, auto value) {
    if (n < 2) return 0.0;
    if (i == 0) return (value(1) - value(0)) / (axis[1] - axis[0]);
    if (i == n - 1) return (value(n - 1) - value(n - 2)) / (axis[n - 1] - axis[n - 2]);
    return (value(i + 1) - value(i - 1)) / (axis[i + 1] - axis[i - 1]);
  };
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t ir = 0; ir < nr; ++ir) {
      FieldSample& smp = out[iz * nr + ir];
      smp.grad_b2[0] = diff(ir, nr, r, [&](std::size_t k) { return b2[iz * nr + k]; });
      smp.grad_b2[1] = diff(iz, nz, z, [&](std::size_t k) { return b2[k * nr + ir]; });
    }
  }
  return out;
}

}  // namespace hlma
