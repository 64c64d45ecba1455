#pragma once

// Static pull-in models. Displacement toward the electrodes is negative lambda;
// results report |lambda_p|.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlma/levforce.hpp"

namespace hlma {

inline constexpr double kGravity = 9.81;
inline constexpr double kEpsilon0 = 8.854e-12;

enum class PullInModel { QuasiFem, Analytical, Simplified };

std::string_view to_string(PullInModel model);
PullInModel parse_pullin_model(std::string_view s);

/// (ln(4/xi) - 1) / (ln(4/xi) - 2); throws ModelValidityError when ln(4/xi) <= 2.
double simplified_factor(double xi);
double beta_simplified(double lambda, double xi, double kappa);
/// Single eddy-circuit model calibrated at lambda = 0.
double beta_analytical(double lambda, double xi, double kappa);

struct CoilSpec {
  double diameter = 0.0;  // m
  int windings = 1;
  double pitch = 0.0;     // m
  double z_top = 0.0;     // m
  double current = 1.0;   // relative to the first coil
};

struct ActuatorScenario {
  std::string name;
  double disc_radius = 0.0;               // m
  double mass = 0.0;                      // kg
  std::optional<double> thickness;        // m; defaults to 0.2 R_e
  int grid_n = 71;
  MeshRule rule = MeshRule::CenterInside;
  std::vector<CoilSpec> coils;
  double electrode_area = 0.0;            // A_e (m^2)
  double spacing = 0.0;                   // h (m)
  double levitation_height = 0.0;         // h_l (m), disc height above z = 0

  double element_radius() const { return disc_radius / grid_n; }
  double layer_thickness() const { return thickness.value_or(0.2 * element_radius()); }
  /// R_l, radius of the first (levitation) coil.
  double levitation_radius() const;
  double kappa() const { return spacing / levitation_height; }
  double xi() const { return levitation_height / (2.0 * levitation_radius()); }
  double a0() const { return kEpsilon0 * electrode_area; }
  /// sqrt(4 m g h^2 / A0), the voltage for beta = 1.
  double voltage_scale() const;

  /// Throws InputError for nonpositive or missing quantities.
  void validate() const;
  Mesh build_mesh() const;
  CoilSystem build_coils() const;
};

/// beta(lambda) from the meshed disc: beta = -(1+lambda)^2 (1 + eta0 Fm(lambda)),
/// eta0 = -1/Fm(0).
class QuasiFemModel {
 public:
  explicit QuasiFemModel(VerticalForceModel force);
  static QuasiFemModel from(const ActuatorScenario& scenario,
                            std::shared_ptr<const ElementMatrix> elements = nullptr);

  double eta0() const { return eta0_; }
  double beta(double lambda) const;
  const VerticalForceModel& force() const { return force_; }

 private:
  VerticalForceModel force_;
  double eta0_;
};

using BetaFunction = std::function<double(double)>;

struct PullInSample {
  double lambda = 0.0;
  double beta = 0.0;
  bool ok = true;        // false when the model threw at this lambda
  bool physical = false; // on the ascending branch from lambda = 0 up to the maximum
  std::string error;
};

struct PullInCurve {
  PullInModel model = PullInModel::Simplified;
  std::vector<PullInSample> samples;  // lambda from 0 down to -0.9
};

/// Uniform lambda grid on [-0.9, 0]; n_samples >= 5. Samples where the model throws
/// are flagged and left out of the maximum search.
PullInCurve trace_curve(PullInModel model, const BetaFunction& beta, int n_samples = 15);

struct PullInResult {
  PullInModel model = PullInModel::Simplified;
  double lambda_p = 0.0;  // |lambda| at the maximum
  double beta_p = 0.0;
  double sqrt_beta_p = 0.0;
  std::optional<double> eta0;
  double voltage = 0.0;       // U_p (V)
  double displacement = 0.0;  // q_p (m)
};

/// Maximum of the curve, refined by golden section on beta over the bracketing
/// triple (|dlambda| <= 1e-4) and a final parabolic step. Without `beta` the
/// maximum is interpolated from the bracketing triple. Throws NoPullInError when
/// the curve has no interior maximum.
PullInResult find_pullin(const PullInCurve& curve, const BetaFunction& beta = {});

struct Dimensional {
  double voltage = 0.0;       // U_p = sqrt(4 m g h^2 beta_p / A0)
  double displacement = 0.0;  // q_p = lambda_p h
  double voltage_scale = 0.0; // U_norm
};

Dimensional dimensionalize(double lambda_p, double beta_p, const ActuatorScenario& scenario);

/// beta(lambda) for one model on one scenario. The quasi-FEM closure owns its model.
BetaFunction beta_function(PullInModel model, const ActuatorScenario& scenario,
                           std::shared_ptr<const ElementMatrix> elements = nullptr,
                           double* eta0 = nullptr);

struct PullInRun {
  PullInCurve curve;
  PullInResult result;
};

/// trace_curve + find_pullin + dimensionalize.
PullInRun run_pullin(PullInModel model, const ActuatorScenario& scenario, int n_samples = 15,
                     std::shared_ptr<const ElementMatrix> elements = nullptr);

}  // namespace hlma
