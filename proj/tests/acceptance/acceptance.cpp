// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hlma/ellint.hpp"
#include "hlma/errors.hpp"
#include "hlma/filament.hpp"
#include "hlma/levforce.hpp"
#include "hlma/pullin.hpp"
#include "hlma/scenario.hpp"
#include "hlma/validate.hpp"
#include "../unit/oracles.hpp"

using namespace hlma;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Criterion {
  std::string title;
  std::vector<std::string> details;
  bool pass = true;

  void check(bool ok, const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + buf);
    pass = pass && ok;
  }
  void within(const char* what, double value, double target, double tol) {
    check(std::abs(value - target) <= tol, "%s = %.5f (target %.5f +- %.5f)", what, value, target, tol);
  }
  void within_rel(const char* what, double value, double target, double rel) {
    check(std::abs(value - target) <= rel * std::abs(target), "%s = %.5f (target %.5f +- %.1f%%)", what, value,
          target, 100 * rel);
  }
};

int report(const std::vector<Criterion>& all) {
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::printf("%s %zu. %s\n", all[i].pass ? "PASS" : "FAIL", i + 1, all[i].title.c_str());
    for (const auto& d : all[i].details) std::printf("       %s\n", d.c_str());
    failed += all[i].pass ? 0 : 1;
  }
  return failed;
}

Criterion preliminary_design_table() {
  Criterion c{"preliminary design pull-in (grid_n 71, fast mode, runtime)", {}};
  const ActuatorScenario s = preliminary_design(1.55e-3, 71);
  const auto t0 = Clock::now();
  const PullInResult q = run_pullin(PullInModel::QuasiFem, s).result;
  const PullInResult a = run_pullin(PullInModel::Analytical, s).result;
  const PullInResult p = run_pullin(PullInModel::Simplified, s).result;
  const double full_time = seconds_since(t0);
  c.within("quasi-fem |lambda_p|", q.lambda_p, 0.34, 0.01);
  c.within("quasi-fem sqrt(beta_p)", q.sqrt_beta_p, 0.0995, 0.003);
  c.within("analytical |lambda_p|", a.lambda_p, 0.34, 0.005);
  c.within("analytical sqrt(beta_p)", a.sqrt_beta_p, 0.102, 0.001);
  c.within("simplified |lambda_p|", p.lambda_p, 1.0 / 3.0, 1e-4);
  c.within("simplified sqrt(beta_p)", p.sqrt_beta_p, 0.1, 0.001);
  c.check(full_time <= 600.0, "grid_n 71 runtime %.1f s (limit 600 s)", full_time);

  const auto t1 = Clock::now();
  const PullInResult fast = run_pullin(PullInModel::QuasiFem, preliminary_design(1.55e-3, 31)).result;
  const double fast_time = seconds_since(t1);
  c.check(fast_time <= 60.0, "fast (grid_n 31) runtime %.1f s (limit 60 s)", fast_time);
  c.within_rel("fast quasi-fem sqrt(beta_p) vs grid_n 71", fast.sqrt_beta_p, q.sqrt_beta_p, 0.05);
  return c;
}

Criterion disc_size_sweep() {
  Criterion c{"disc-size sweep, quasi-fem (r = 1.2 mm and 1.7 mm)", {}};
  const PullInResult small = run_pullin(PullInModel::QuasiFem, preliminary_design(1.2e-3, 71)).result;
  const PullInResult large = run_pullin(PullInModel::QuasiFem, preliminary_design(1.7e-3, 71)).result;
  c.within_rel("r 1.2 mm sqrt(beta_p)", small.sqrt_beta_p, 0.1286, 0.05);
  c.within("r 1.2 mm |lambda_p|", small.lambda_p, 0.34, 0.01);
  c.within_rel("r 1.7 mm sqrt(beta_p)", large.sqrt_beta_p, 0.0949, 0.05);
  c.within("r 1.7 mm |lambda_p|", large.lambda_p, 0.34, 0.01);
  return c;
}

Criterion experiment_validation() {
  Criterion c{"measured-rig validation (quasi-fem 10%, analytical 5%, grid_n 71)", {}};
  const ValidationReport r = run_validation({});
  for (const auto& row : r.rows) {
    c.check(row.pass, "%-16s %-10s q %.1f um (ref %.1f, %+.1f%%)  U %.2f V (ref %.2f, %+.1f%%)", row.scenario.c_str(),
            std::string(to_string(row.model)).c_str(), row.result.displacement * 1e6,
            row.reference.displacement * 1e6, 100 * row.displacement_deviation, row.result.voltage,
            row.reference.voltage, 100 * row.voltage_deviation);
  }
  return c;
}

Criterion property_suite() {
  Criterion c{"property suite", {}};

  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double nu = oracle::uniform(0.01, 1.5);
    const double x3 = oracle::uniform(0.05, 30.0);
    const double kz = mutual_kz({0.0, 0.0, x3, nu});
    // secondary radius 1, primary radius 1/nu, separation x3; Mbar = M / (mu0 sqrt(Rp Rs))
    const double mx = oracle::maxwell(1.0 / nu, 1.0, x3) / (kMu0 * std::sqrt(1.0 / nu));
    worst = std::max(worst, std::abs(kz - mx) / std::abs(mx));
  }
  c.check(worst <= 1e-8, "Maxwell vs KZ at zero lateral offset: max rel %.2e (limit 1e-8, 50 cases)", worst);

  worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const RelativePlacement p{oracle::uniform(-20.0, 20.0), oracle::uniform(-20.0, 20.0),
                              oracle::uniform(0.3, 15.0) * (i % 2 ? 1 : -1), oracle::uniform(0.01, 1.2)};
    const double h = 1e-5;
    RelativePlacement up = p, dn = p;
    up.x3 += h;
    dn.x3 -= h;
    const double fd = (mutual_kz(up) - mutual_kz(dn)) / (2 * h);
    worst = std::max(worst, std::abs(dmutual_kz_dx3(p) - fd) / std::abs(fd));
  }
  c.check(worst <= 1e-6, "axial derivative vs central difference: max rel %.2e (limit 1e-6, 50 cases)", worst);

  worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double k = oracle::uniform(0.0, 0.999);
    const auto a = complete_elliptic(k);
    const auto b = complete_elliptic(std::sqrt(1.0 - k * k));
    worst = std::max(worst, std::abs(a.E * b.K + b.E * a.K - a.K * b.K - std::numbers::pi / 2));
  }
  c.check(worst <= 1e-12, "Legendre relation: max abs %.2e (limit 1e-12, 100 moduli)", worst);

  {
    const ActuatorScenario s = experiment_scenario(experiment_records()[1], 71);
    const Mesh mesh = s.build_mesh();
    const CoilSystem coils = s.build_coils();
    const auto currents = coils.currents();
    const Eigen::Map<const Eigen::VectorXd> icv(currents.data(), static_cast<Eigen::Index>(currents.size()));
    const EddySolution sol = solve(assemble(mesh, coils, Pose::at_height(s.levitation_height)), icv);
    c.check(sol.residual <= 1e-10, "eddy residual %.2e on the 2.8 mm disc (limit 1e-10)", sol.residual);
    int wrong = 0, counted = 0;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      const auto x = mesh.center(k);
      const double rho = std::hypot(x[0], x[1]);
      const double i = sol.currents[static_cast<Eigen::Index>(k)].real();
      if (rho < 0.95e-3) {
        ++counted;
        wrong += i < 0.0 ? 0 : 1;
      } else if (rho > 1.05e-3) {
        ++counted;
        wrong += i > 0.0 ? 0 : 1;
      }
    }
    c.check(wrong == 0, "sign pattern: %d of %d elements off-sign (negative under the levitation coil)", wrong,
            counted);
  }

  double worst_l = 0.0, worst_b = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double xi = oracle::uniform(0.01, 0.5);
    const double kappa = oracle::uniform(0.01, 1.0);
    const auto beta = [&](double l) { return beta_simplified(l, xi, kappa); };
    const PullInResult r = find_pullin(trace_curve(PullInModel::Simplified, beta), beta);
    const double exact = simplified_factor(xi) * kappa * 4.0 / 27.0;
    worst_l = std::max(worst_l, std::abs(r.lambda_p - 1.0 / 3.0));
    worst_b = std::max(worst_b, std::abs(r.beta_p - exact) / exact);
  }
  c.check(worst_l <= 1e-4 && worst_b <= 1e-10,
          "simplified pull-in: max |lambda_p - 1/3| %.1e (1e-4), beta_p rel %.1e (1e-10), 100 cases", worst_l,
          worst_b);

  {
    const ActuatorScenario s = experiment_scenario(experiment_records()[0], 11);
    const Mesh mesh = s.build_mesh();
    const CoilSystem coils = s.build_coils();
    const auto elements = ElementMatrix::assemble(mesh);
    const auto currents = coils.currents();
    const Eigen::Map<const Eigen::VectorXd> icv(currents.data(), static_cast<Eigen::Index>(currents.size()));
    const double re = mesh.element_radius;
    worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Pose pose{{oracle::uniform(-2e-4, 2e-4), oracle::uniform(-2e-4, 2e-4), oracle::uniform(100e-6, 300e-6)},
                      {}};
      const EddySolution sol = solve(assemble(mesh, coils, pose, Impedance::ideal(), elements), icv);
      const GeneralizedForce g = generalized_force(mesh, coils, pose, sol);
      const double scale = std::max({std::abs(g.force[0]), std::abs(g.force[1]), std::abs(g.force[2])});
      for (int axis = 0; axis < 3; ++axis) {
        const double step = 5e-4;
        Pose up = pose, dn = pose;
        up.translation[static_cast<std::size_t>(axis)] += step * re;
        dn.translation[static_cast<std::size_t>(axis)] -= step * re;
        const double fd =
            (stored_interaction_energy(mesh, coils, up, sol) - stored_interaction_energy(mesh, coils, dn, sol)) /
            (2 * step);
        worst = std::max(worst, std::abs(g.force[static_cast<std::size_t>(axis)] - fd) / scale);
      }
    }
    c.check(worst <= 1e-5, "force vs frozen-current energy difference: max rel %.2e (limit 1e-5, 20 poses)", worst);
  }
  return c;
}

Criterion mesh_convergence_check() {
  Criterion c{"mesh convergence, quasi-fem sqrt(beta_p) on the 2.8 mm disc (grid_n 51 vs 71)", {}};
  const ConvergenceCheck m = mesh_convergence();
  c.check(m.pass, "%.5f vs %.5f, change %.2f%% (limit %.1f%%)", m.sqrt_beta_coarse, m.sqrt_beta_fine, 100 * m.change,
          100 * m.tolerance);
  return c;
}

}  // namespace

int main() {
  set_warning_handler([](std::string_view) {});
  std::vector<Criterion> all;
  try {
    all.push_back(preliminary_design_table());
    all.push_back(disc_size_sweep());
    all.push_back(experiment_validation());
    all.push_back(property_suite());
    all.push_back(mesh_convergence_check());
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  return report(all);
}
