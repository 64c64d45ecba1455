#include <cmath>
#include <map>

#include "doctest.h"
#include "hlma/eddy.hpp"
#include "hlma/errors.hpp"
#include "hlma/scenario.hpp"
#include "oracles.hpp"

using namespace hlma;
using doctest::Approx;

namespace {

Eigen::VectorXd coil_currents(const CoilSystem& c) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t j = 0; j < c.size(); ++j) v[static_cast<Eigen::Index>(j)] = c.filaments[j].current;
  return v;
}

struct Solved {
  Mesh mesh;
  CoilSystem coils;
  EddySystem sys;
  EddySolution sol;
};

Solved solve_scenario(const ActuatorScenario& s) {
  Solved out{s.build_mesh(), s.build_coils(), {}, {}};
  out.sys = assemble(out.mesh, out.coils, Pose::at_height(s.levitation_height));
  out.sol = solve(out.sys, coil_currents(out.coils));
  return out;
}

double ring_oracle(double eps) {
  const double l = std::log(8.0 / eps);
  return l - 1.75 + eps * eps / 8.0 * (l + 1.0 / 3.0);
}

}  // namespace

TEST_SUITE("eddy") {

TEST_CASE("single element over a single loop") {
  const double re = 1e-4, rc = 1e-3, z = 2e-4;
  const Mesh mesh = mesh_disc(re, 1, 0.2 * re);
  const CoilSystem coils{build_solenoid(2 * rc, 1, 0.0, 0.0, 1.0)};
  const EddySystem sys = assemble(mesh, coils, Pose::at_height(z));
  REQUIRE(sys.elements->size() == 1);
  CHECK(sys.elements->matrix()(0, 0) == Approx(ring_oracle(0.1)).epsilon(1e-14));
  const double mbar = mutual_kz({0.0, 0.0, z / re, re / rc});
  CHECK(sys.couplings.mc(0, 0) == Approx(mbar / std::sqrt(re / rc)).epsilon(1e-12));
  const EddySolution sol = solve(sys, coil_currents(coils));
  // physical loop equation L I = -M Ic
  const double expected = -oracle::maxwell(rc, re, z) / (kMu0 * re * ring_oracle(0.1));
  CHECK(sol.currents[0].real() == Approx(expected).epsilon(1e-8));
  CHECK(sol.currents[0].real() == Approx(-std::sqrt(rc / re) * mbar / ring_oracle(0.1)).epsilon(1e-13));
  CHECK(sol.residual < 1e-14);
}

TEST_CASE("equal radii: I = -Mbar / Lbar") {
  const double re = 1e-3;
  const Mesh mesh = mesh_disc(re, 1, 0.2 * re);
  const CoilSystem coils{build_solenoid(2 * re, 1, 0.0, 0.0, 1.0)};
  const EddySolution sol = solve(assemble(mesh, coils, Pose::at_height(5e-4)), coil_currents(coils));
  CHECK(sol.currents[0].real() == Approx(-mutual_kz({0.0, 0.0, 0.5, 1.0}) / ring_oracle(0.1)).epsilon(1e-13));
}

TEST_CASE("element matrix structure") {
  const Mesh mesh = mesh_disc(1.4e-3, 11, 0.2 * 1.4e-3 / 11);
  const auto L = ElementMatrix::assemble(mesh);
  const auto& m = L->matrix();
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const double neighbour = mutual_kz_lateral(2.0, 0.0, 1.0).m;
  int found = 0;
  for (std::size_t s = 0; s < mesh.size(); ++s) {
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      const int di = mesh.lattice[s][0] - mesh.lattice[k][0];
      const int dj = mesh.lattice[s][1] - mesh.lattice[k][1];
      if (di * di + dj * dj == 1) {
        CHECK(m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) == Approx(neighbour).epsilon(1e-12));
        ++found;
      }
    }
  }
  CHECK(found > 0);
  CHECK(L->distinct_couplings() < mesh.size());
  // same mesh, assembled again: bit-identical
  const auto L2 = ElementMatrix::assemble(mesh);
  CHECK((L2->matrix() - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("element matrix is reused across poses") {
  const ActuatorScenario s = experiment_scenario(experiment_records()[1], 15);
  const Mesh mesh = s.build_mesh();
  const CoilSystem coils = s.build_coils();
  const EddySystem a = assemble(mesh, coils, Pose::at_height(200e-6));
  const EddySystem b = assemble(mesh, coils, Pose::at_height(180e-6), Impedance::ideal(), a.elements);
  CHECK(a.elements.get() == b.elements.get());
  CHECK((a.couplings.mc - b.couplings.mc).cwiseAbs().maxCoeff() > 0.0);
  const Mesh other = mesh_disc(1e-3, 5, 4e-5);
  CHECK_THROWS_AS(assemble(other, coils, Pose::at_height(2e-4), Impedance::ideal(), a.elements), GeometryError);
}

TEST_CASE("two-coil design: residual, sign pattern, energy") {
  const Solved r = solve_scenario(experiment_scenario(experiment_records()[1], 31));
  CHECK(r.sol.residual <= 1e-10);
  CHECK_FALSE(r.sol.complex_valued);
  const double lev_radius = 1e-3;
  int inside = 0, outside = 0;
  for (std::size_t s = 0; s < r.mesh.size(); ++s) {
    const auto c = r.mesh.center(s);
    const double rho = std::hypot(c[0], c[1]);
    const double i = r.sol.currents[static_cast<Eigen::Index>(s)].real();
    if (rho < 0.95 * lev_radius) {
      CHECK(i < 0.0);
      ++inside;
    } else if (rho > 1.05 * lev_radius) {
      CHECK(i > 0.0);
      ++outside;
    }
  }
  CHECK(inside > 100);
  CHECK(outside > 100);
  const Eigen::VectorXd I = r.sol.real();
  CHECK(I.dot(r.sys.elements->matrix() * I) > 0.0);
}

TEST_CASE("symmetric elements carry equal currents") {
  const Solved r = solve_scenario(experiment_scenario(experiment_records()[0], 31));
  std::map<std::array<int, 2>, double> by_cell;
  for (std::size_t s = 0; s < r.mesh.size(); ++s) by_cell[r.mesh.lattice[s]] = r.sol.currents[static_cast<Eigen::Index>(s)].real();
  for (const auto& [cell, v] : by_cell) {
    const auto [i, j] = cell;
    for (const std::array<int, 2> img : {std::array{-i, j}, std::array{i, -j}, std::array{j, i}, std::array{-j, -i}}) {
      CHECK(by_cell.at(img) == Approx(v).epsilon(1e-8));
    }
  }
}

TEST_CASE("total current changes monotonically with the grid") {
  double prev = 0.0;
  double prev_delta = 0.0;
  for (int g : {21, 31, 41}) {
    const double total = solve_scenario(experiment_scenario(experiment_records()[1], g)).sol.total_current();
    if (g > 21) {
      const double delta = total - prev;
      if (g > 31) CHECK(delta * prev_delta > 0.0);
      prev_delta = delta;
    }
    prev = total;
  }
}

TEST_CASE("resistive mode") {
  const ActuatorScenario s = experiment_scenario(experiment_records()[1], 11);
  const Mesh mesh = s.build_mesh();
  const CoilSystem coils = s.build_coils();
  const Pose pose = Pose::at_height(s.levitation_height);
  const EddySolution ideal = solve(assemble(mesh, coils, pose), coil_currents(coils));
  const EddySystem zero_r = assemble(mesh, coils, pose, Impedance::resistive(0.0, 2 * std::numbers::pi * 1e7));
  const EddySolution same = solve(zero_r, coil_currents(coils));
  CHECK((same.currents - ideal.currents).norm() <= 1e-12 * ideal.currents.norm());
  const EddySystem lossy = assemble(mesh, coils, pose, Impedance::resistive(1e-3, 2 * std::numbers::pi * 1e7));
  CHECK(lossy.elements->diagonal_shift().imag() < 0.0);
  const EddySolution sol = solve(lossy, coil_currents(coils));
  CHECK(sol.complex_valued);
  CHECK(sol.residual <= 1e-10);
  CHECK(sol.currents.imag().norm() > 0.0);
  CHECK_THROWS_AS(Impedance::resistive(-1.0, 1.0), GeometryError);
  CHECK_THROWS_AS(Impedance::resistive(1.0, 0.0), GeometryError);
}

TEST_CASE("non-positive-definite element matrix names the pivot") {
  auto old = set_warning_handler([](std::string_view) {});
  const Mesh mesh = mesh_disc(1.4e-3, 31, 0.99 * 2 * 1.4e-3 / 31);
  try {
    ElementMatrix::assemble(mesh);
    FAIL("expected SingularSystemError");
  } catch (const SingularSystemError& e) {
    CHECK(e.pivot() >= 0);
    CHECK(std::string(e.what()).find(std::to_string(e.pivot())) != std::string::npos);
  }
  set_warning_handler(old);
}

TEST_CASE("current maps") {
  SUBCASE("uniform current has zero gradient") {
    const Mesh mesh = mesh_disc(1e-3, 15, 1e-5);
    EddySolution sol;
    sol.currents = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(mesh.size()), 0.7);
    const auto maps = current_maps(sol, mesh);
    for (int r = 0; r < 15; ++r) {
      for (int c = 0; c < 15; ++c) {
        if (maps.magnitude.has(r, c)) CHECK(maps.magnitude.at(r, c) == 0.0);
      }
    }
    CHECK(maps.currents.at(7, 7) == Approx(0.7));
    CHECK_FALSE(maps.currents.has(0, 0));
  }
  SUBCASE("single element has no gradient") {
    const Mesh mesh = mesh_disc(1e-3, 1, 1e-4);
    EddySolution sol;
    sol.currents = Eigen::VectorXcd::Constant(1, 1.0);
    const auto maps = current_maps(sol, mesh);
    CHECK(maps.currents.has(0, 0));
    CHECK_FALSE(maps.magnitude.has(0, 0));
  }
  SUBCASE("linear ramp") {
    const Mesh mesh = mesh_disc(1e-3, 9, 1e-5);
    EddySolution sol;
    sol.currents.resize(static_cast<Eigen::Index>(mesh.size()));
    for (std::size_t s = 0; s < mesh.size(); ++s) sol.currents[static_cast<Eigen::Index>(s)] = 2.0 * mesh.lattice[s][0];
    const auto maps = current_maps(sol, mesh);
    for (int r = 0; r < 9; ++r) {
      for (int c = 0; c < 9; ++c) {
        if (maps.magnitude.has(r, c)) CHECK(maps.magnitude.at(r, c) == Approx(2.0));
      }
    }
  }
  SUBCASE("two-coil design: edge and levitation ring carry the largest gradients") {
    const Solved r = solve_scenario(experiment_scenario(experiment_records()[1], 31));
    const auto maps = current_maps(r.sol, r.mesh);
    double edge = 0.0, ring = 0.0, between = 0.0;
    const double re = r.mesh.element_radius;
    for (std::size_t s = 0; s < r.mesh.size(); ++s) {
      const auto [row, col] = r.mesh.grid_index(s);
      if (!maps.magnitude.has(row, col)) continue;
      const auto c = r.mesh.center(s);
      const double rho = std::hypot(c[0], c[1]);
      const double v = maps.magnitude.at(row, col);
      if (rho > r.mesh.disc_radius - 3 * re) edge = std::max(edge, v);
      else if (std::abs(rho - 1e-3) < 3 * re) ring = std::max(ring, v);
      else if (rho < 0.6e-3) between = std::max(between, v);
    }
    CHECK(edge > between);
    CHECK(ring > between);
  }
}

}
