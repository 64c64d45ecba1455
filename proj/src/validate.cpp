#include "hlma/validate.hpp"

#include <cmath>
#include <cstdio>

#include "hlma/output.hpp"

namespace hlma {
namespace {

constexpr double kQuasiFemTolerance = 0.10;
constexpr double kQuasiFemFastTolerance = 0.15;
constexpr double kAnalyticalTolerance = 0.05;

double deviation(double value, double reference) { return (value - reference) / reference; }

std::string fmt(const char* f, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

bool ValidationReport::passed() const {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return !convergence || convergence->pass;
}

std::string ValidationReport::text() const {
  std::string out = "grid_n " + std::to_string(grid_n) + ", tolerance quasi-fem " +
                    fmt("%.0f%%, analytical %.0f%%", 100 * quasi_fem_tolerance, 100 * analytical_tolerance) + "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-10s %18s %18s %18s %15s %s\n", "scenario", "model", "this (um/V)",
                "reference (um/V)", "measured (um/V)", "dev q/U (%)", "status");
  out += line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-16s %-10s %18s %18s %18s %15s %s\n", r.scenario.c_str(),
                  std::string(to_string(r.model)).c_str(),
                  fmt("%.1f / %.2f", r.result.displacement * 1e6, r.result.voltage).c_str(),
                  fmt("%.1f / %.2f", r.reference.displacement * 1e6, r.reference.voltage).c_str(),
                  fmt("%.1f / %.2f", r.measured.displacement * 1e6, r.measured.voltage).c_str(),
                  fmt("%+.1f / %+.1f", 100 * r.displacement_deviation, 100 * r.voltage_deviation).c_str(),
                  r.pass ? "ok" : "FAIL");
    out += line;
  }
  if (convergence) {
    std::snprintf(line, sizeof line,
                  "convergence disc-2.8mm: sqrt(beta_p) %.5f (grid 51) vs %.5f (grid 71), change %.2f%% "
                  "(limit %.1f%%) %s\n",
                  convergence->sqrt_beta_coarse, convergence->sqrt_beta_fine, 100 * convergence->change,
                  100 * convergence->tolerance, convergence->pass ? "ok" : "FAIL");
    out += line;
  }
  out += passed() ? "validation passed\n" : "validation FAILED\n";
  return out;
}

std::string ValidationReport::csv() const {
  std::string out =
      "scenario,model,q_p_m,U_p_V,ref_q_m,ref_U_V,measured_q_m,measured_U_V,dev_q,dev_U,tolerance,pass\n";
  for (const auto& r : rows) {
    out += r.scenario + "," + std::string(to_string(r.model)) + "," + format_number(r.result.displacement) + "," +
           format_number(r.result.voltage) + "," + format_number(r.reference.displacement) + "," +
           format_number(r.reference.voltage) + "," + format_number(r.measured.displacement) + "," +
           format_number(r.measured.voltage) + "," + format_number(r.displacement_deviation) + "," +
           format_number(r.voltage_deviation) + "," + format_number(r.tolerance) + "," + (r.pass ? "1" : "0") +
           "\n";
  }
  return out;
}

ConvergenceCheck mesh_convergence(int samples) {
  const auto& rec = experiment_records()[1];
  ConvergenceCheck c;
  c.sqrt_beta_coarse = run_pullin(PullInModel::QuasiFem, experiment_scenario(rec, 51), samples).result.sqrt_beta_p;
  c.sqrt_beta_fine = run_pullin(PullInModel::QuasiFem, experiment_scenario(rec, 71), samples).result.sqrt_beta_p;
  c.change = std::abs(c.sqrt_beta_fine - c.sqrt_beta_coarse) / c.sqrt_beta_fine;
  c.pass = c.change < c.tolerance;
  return c;
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  report.grid_n = options.fast ? 31 : options.grid_n;
  report.quasi_fem_tolerance = options.fast ? kQuasiFemFastTolerance : kQuasiFemTolerance;
  report.analytical_tolerance = kAnalyticalTolerance;

  for (const auto& rec : experiment_records()) {
    const ActuatorScenario s = experiment_scenario(rec, report.grid_n);
    for (PullInModel model : {PullInModel::QuasiFem, PullInModel::Analytical}) {
      ValidationRow row;
      row.scenario = rec.name;
      row.model = model;
      row.result = run_pullin(model, s, options.samples).result;
      row.reference = model == PullInModel::QuasiFem ? rec.quasi_fem : rec.analytical;
      row.measured = rec.measured;
      row.displacement_deviation = deviation(row.result.displacement, row.reference.displacement);
      row.voltage_deviation = deviation(row.result.voltage, row.reference.voltage);
      row.tolerance = model == PullInModel::QuasiFem ? report.quasi_fem_tolerance : report.analytical_tolerance;
      row.pass = std::abs(row.displacement_deviation) <= row.tolerance &&
                 std::abs(row.voltage_deviation) <= row.tolerance;
      report.rows.push_back(row);
    }
  }
  if (options.convergence) report.convergence = mesh_convergence(options.samples);
  return report;
}

}  // namespace hlma
