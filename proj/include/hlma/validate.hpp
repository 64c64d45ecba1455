#pragma once

// Comparison of the pull-in models with the embedded experimental dataset.

#include <optional>
#include <string>
#include <vector>

#include "hlma/scenario.hpp"

namespace hlma {

struct ValidationOptions {
  int grid_n = 71;
  int samples = 15;
  bool fast = false;         // grid_n = 31 with widened quasi-FEM tolerance
  bool convergence = false;  // also compare grid_n 51 and 71 on the 2.8 mm disc
};

struct ValidationRow {
  std::string scenario;
  PullInModel model = PullInModel::QuasiFem;
  PullInResult result;
  PullInPoint reference;  // published model value
  PullInPoint measured;
  double displacement_deviation = 0.0;  // relative to reference
  double voltage_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ConvergenceCheck {
  double sqrt_beta_coarse = 0.0;  // grid_n 51
  double sqrt_beta_fine = 0.0;    // grid_n 71
  double change = 0.0;            // relative
  double tolerance = 0.015;
  bool pass = false;
};

struct ValidationReport {
  int grid_n = 0;
  double quasi_fem_tolerance = 0.0;
  double analytical_tolerance = 0.0;
  std::vector<ValidationRow> rows;
  std::optional<ConvergenceCheck> convergence;

  bool passed() const;
  std::string text() const;
  std::string csv() const;
};

ConvergenceCheck mesh_convergence(int samples = 15);
ValidationReport run_validation(const ValidationOptions& options = {});

}  // namespace hlma
