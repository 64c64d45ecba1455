#include "hlma/eddy.hpp"

#include <cmath>
#include <string>

#include "hlma/errors.hpp"
#include "hlma/parallel.hpp"

namespace hlma {

Impedance Impedance::resistive(double resistance, double frequency) {
  if (!(resistance >= 0.0) || !(frequency > 0.0)) {
    throw GeometryError("resistive mode needs R >= 0 and f > 0");
  }
  return {Mode::Resistive, resistance, frequency};
}

std::string_view to_string(Impedance::Mode mode) {
  return mode == Impedance::Mode::Ideal ? "ideal" : "resistive";
}

std::shared_ptr<const ElementMatrix> ElementMatrix::assemble(const Mesh& mesh, Impedance impedance) {
  validate(mesh.ring());
  const std::size_t n = mesh.size();
  if (n == 0) throw GeometryError("mesh has no elements");

  auto out = std::shared_ptr<ElementMatrix>(new ElementMatrix());
  out->impedance_ = impedance;
  out->matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  // Coplanar equal elements couple through the lattice distance only; one quadrature
  // per distinct squared offset D = di^2 + dj^2 (lateral distance 2 sqrt(D) in R_e).
  int max_d = 0;
  for (const auto& p : mesh.lattice) {
    max_d = std::max({max_d, std::abs(p[0]), std::abs(p[1])});
  }
  const std::size_t table_size = static_cast<std::size_t>(8 * max_d * max_d + 1);
  std::vector<char> needed(table_size, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = s + 1; k < n; ++k) {
      const int di = mesh.lattice[s][0] - mesh.lattice[k][0];
      const int dj = mesh.lattice[s][1] - mesh.lattice[k][1];
      needed[static_cast<std::size_t>(di * di + dj * dj)] = 1;
    }
  }
  std::vector<std::size_t> keys;
  for (std::size_t d = 1; d < table_size; ++d) {
    if (needed[d]) keys.push_back(d);
  }
  std::vector<double> table(table_size, 0.0);
  parallel_for(keys.size(), [&](std::size_t i) {
    const double lateral = 2.0 * std::sqrt(static_cast<double>(keys[i]));
    table[keys[i]] = mutual_kz_lateral(lateral, 0.0, 1.0).m;
  });
  out->distinct_ = keys.size();

  const double diag = self_inductance_ring_normalized(mesh.epsilon());
  auto& L = out->matrix_;
  for (std::size_t s = 0; s < n; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    L(si, si) = diag;
    for (std::size_t k = s + 1; k < n; ++k) {
      const int di = mesh.lattice[s][0] - mesh.lattice[k][0];
      const int dj = mesh.lattice[s][1] - mesh.lattice[k][1];
      const double v = table[static_cast<std::size_t>(di * di + dj * dj)];
      const auto ki = static_cast<Eigen::Index>(k);
      L(si, ki) = v;
      L(ki, si) = v;
    }
  }

  if (impedance.mode == Impedance::Mode::Ideal) {
    out->cholesky_ = L;
    const Eigen::Index failed = Eigen::internal::llt_inplace<double, Eigen::Lower>::blocked(out->cholesky_);
    if (failed >= 0) {
      throw SingularSystemError("element matrix is not positive definite at pivot " + std::to_string(failed),
                                failed);
    }
  } else {
    out->shift_ = std::complex<double>(0.0, -impedance.resistance / impedance.frequency) /
                  (kMu0 * mesh.element_radius);
    Eigen::MatrixXcd lc = L.cast<std::complex<double>>();
    lc.diagonal().array() += out->shift_;
    out->lu_.compute(lc);
    const auto& lu = out->lu_.matrixLU();
    for (Eigen::Index i = 0; i < lu.rows(); ++i) {
      if (std::abs(lu(i, i)) == 0.0 || !std::isfinite(std::abs(lu(i, i)))) {
        throw SingularSystemError("element matrix is singular at pivot " + std::to_string(i), i);
      }
    }
  }
  return out;
}

Eigen::VectorXcd ElementMatrix::solve(const Eigen::VectorXcd& rhs) const {
  if (impedance_.mode == Impedance::Mode::Resistive) return lu_.solve(rhs);
  const auto lower = cholesky_.triangularView<Eigen::Lower>();
  Eigen::VectorXd re = rhs.real();
  lower.solveInPlace(re);
  lower.transpose().solveInPlace(re);
  Eigen::VectorXcd out = re.cast<std::complex<double>>();
  if (!rhs.imag().isZero(0.0)) {
    Eigen::VectorXd im = rhs.imag();
    lower.solveInPlace(im);
    lower.transpose().solveInPlace(im);
    out.imag() = im;
  }
  return out;
}

Eigen::VectorXcd ElementMatrix::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  y.real() = matrix_ * x.real();
  y.imag() = matrix_ * x.imag();
  y += shift_ * x;
  return y;
}

CouplingMatrix assemble_couplings(const Mesh& mesh, const CoilSystem& coils, const Pose& pose,
                                  KzCache* cache) {
  validate(coils);
  const std::size_t n = mesh.size();
  const std::size_t nc = coils.size();
  KzCache local;
  KzCache& memo = cache ? *cache : local;

  CouplingMatrix out;
  out.mc.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nc));
  out.dmc_dx3.resizeLike(out.mc);
  parallel_for(n, [&](std::size_t s) {
    const Vec3 c = mesh.center(s);
    for (std::size_t j = 0; j < nc; ++j) {
      const auto p = relative_placement(c, coils.filaments[j], pose, mesh.element_radius);
      const KzValue v = memo.get(std::hypot(p.x1, p.x2), p.x3, p.nu);
      const double scale = 1.0 / std::sqrt(p.nu);  // sqrt(R_cj R_e) / R_e
      out.mc(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = scale * v.m;
      out.dmc_dx3(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = scale * v.dm_dx3;
    }
  });
  return out;
}

EddySystem assemble(const Mesh& mesh, const CoilSystem& coils, const Pose& pose, Impedance impedance,
                    std::shared_ptr<const ElementMatrix> reuse, KzCache* cache) {
  EddySystem sys;
  if (reuse) {
    if (reuse->size() != mesh.size()) {
      throw GeometryError("reused element matrix does not match the mesh size");
    }
    sys.elements = std::move(reuse);
  } else {
    sys.elements = ElementMatrix::assemble(mesh, impedance);
  }
  sys.couplings = assemble_couplings(mesh, coils, pose, cache);
  sys.pose = pose;
  return sys;
}

EddySolution solve(const EddySystem& system, const Eigen::VectorXd& coil_currents) {
  if (!system.elements) throw GeometryError("eddy system has no element matrix");
  if (coil_currents.size() != system.couplings.mc.cols()) {
    throw GeometryError("coil current vector size does not match the coil system");
  }
  const Eigen::VectorXd drive = system.couplings.mc * coil_currents;
  const Eigen::VectorXcd rhs = (-drive).cast<std::complex<double>>();

  EddySolution sol;
  sol.currents = system.elements->solve(rhs);
  sol.complex_valued = system.elements->impedance().mode == Impedance::Mode::Resistive;
  const double norm = rhs.norm();
  sol.residual = norm > 0.0 ? (system.elements->apply(sol.currents) - rhs).norm() / norm : 0.0;
  return sol;
}

CurrentMaps current_maps(const EddySolution& solution, const Mesh& mesh) {
  const int n = mesh.grid_n;
  const auto cells = static_cast<std::size_t>(n * n);
  CurrentMaps maps;
  maps.currents = {n, std::vector<double>(cells, 0.0), std::vector<bool>(cells, false)};
  maps.magnitude = maps.currents;

  for (std::size_t s = 0; s < mesh.size(); ++s) {
    const auto [row, col] = mesh.grid_index(s);
    const auto idx = static_cast<std::size_t>(row * n + col);
    maps.currents.values[idx] = solution.currents[static_cast<Eigen::Index>(s)].real();
    maps.currents.present[idx] = true;
  }

  const GridMap& g = maps.currents;
  auto derivative = [&](int row, int col, int dr, int dc, bool& defined) {
    const bool prev = row - dr >= 0 && col - dc >= 0 && g.has(row - dr, col - dc);
    const bool next = row + dr < n && col + dc < n && g.has(row + dr, col + dc);
    defined = prev || next;
    if (prev && next) return 0.5 * (g.at(row + dr, col + dc) - g.at(row - dr, col - dc));
    if (next) return g.at(row + dr, col + dc) - g.at(row, col);
    if (prev) return g.at(row, col) - g.at(row - dr, col - dc);
    return 0.0;
  };
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      if (!g.has(row, col)) continue;
      bool dx_ok = false;
      bool dy_ok = false;
      const double dx = derivative(row, col, 0, 1, dx_ok);
      const double dy = derivative(row, col, 1, 0, dy_ok);
      if (!dx_ok && !dy_ok) continue;
      const auto idx = static_cast<std::size_t>(row * n + col);
      maps.magnitude.values[idx] = std::hypot(dx, dy);
      maps.magnitude.present[idx] = true;
    }
  }
  return maps;
}

}  // namespace hlma
