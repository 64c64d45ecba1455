#include "hlma/pullin.hpp"

#include <algorithm>
#include <cmath>

#include "hlma/ellint.hpp"
#include "hlma/errors.hpp"

namespace hlma {
namespace {

constexpr double kLambdaTolerance = 1e-4;
constexpr double kPolishStep = 2e-3;

double analytical_shape(double lambda, double xi, double kappa) {
  const double t = 1.0 + kappa * lambda;
  const double q = 1.0 + xi * xi * t * t;
  const double k = 1.0 / std::sqrt(q);
  const double g = 4.0 * psi_kernel(k) / k * phi_bracket(k);
  return g * t / (q * std::sqrt(q));
}

void check_groups(double xi, double kappa) {
  if (!(xi > 0.0) || !(kappa > 0.0)) throw ModelValidityError("xi and kappa must be positive");
}

}  // namespace

std::string_view to_string(PullInModel model) {
  switch (model) {
    case PullInModel::QuasiFem: return "quasi-fem";
    case PullInModel::Analytical: return "analytical";
    default: return "simplified";
  }
}

PullInModel parse_pullin_model(std::string_view s) {
  if (s == "quasi-fem") return PullInModel::QuasiFem;
  if (s == "analytical") return PullInModel::Analytical;
  if (s == "simplified") return PullInModel::Simplified;
  throw InputError("unknown model '" + std::string(s) + "'");
}

double simplified_factor(double xi) {
  if (!(xi > 0.0)) throw ModelValidityError("xi must be positive");
  const double l = std::log(4.0 / xi);
  if (l <= 2.0) throw ModelValidityError("simplified model needs ln(4/xi) > 2");
  return (l - 1.0) / (l - 2.0);
}

double beta_simplified(double lambda, double xi, double kappa) {
  check_groups(xi, kappa);
  const double f = simplified_factor(xi);
  return -f * kappa * lambda * (1.0 + lambda) * (1.0 + lambda);
}

double beta_analytical(double lambda, double xi, double kappa) {
  check_groups(xi, kappa);
  const double ratio = analytical_shape(lambda, xi, kappa) / analytical_shape(0.0, xi, kappa);
  return (1.0 + lambda) * (1.0 + lambda) * (ratio - 1.0);
}

double ActuatorScenario::levitation_radius() const {
  if (coils.empty()) throw InputError("coils: at least one coil is required");
  return 0.5 * coils.front().diameter;
}

double ActuatorScenario::voltage_scale() const {
  return std::sqrt(4.0 * mass * kGravity * spacing * spacing / a0());
}

void ActuatorScenario::validate() const {
  auto positive = [](double v, const char* path) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(path) + ": must be positive");
  };
  positive(disc_radius, "disc.radius_m");
  positive(mass, "disc.mass_kg");
  if (thickness) positive(*thickness, "disc.thickness_m");
  if (grid_n < 1 || grid_n % 2 == 0) throw InputError("mesh.grid_n: must be a positive odd integer");
  if (coils.empty()) throw InputError("coils: at least one coil is required");
  for (std::size_t j = 0; j < coils.size(); ++j) {
    const std::string p = "coils[" + std::to_string(j) + "]";
    positive(coils[j].diameter, (p + ".diameter_m").c_str());
    if (coils[j].windings < 1) throw InputError(p + ".windings: must be at least 1");
    if (!(coils[j].pitch >= 0.0)) throw InputError(p + ".pitch_m: must be nonnegative");
    if (!std::isfinite(coils[j].z_top)) throw InputError(p + ".z_top_m: must be finite");
    if (!std::isfinite(coils[j].current)) throw InputError(p + ".current_rel: must be finite");
  }
  if (coils.front().current == 0.0) throw InputError("coils[0].current_rel: must be nonzero");
  positive(electrode_area, "electrodes.area_m2");
  positive(spacing, "electrodes.spacing_h_m");
  positive(levitation_height, "levitation.height_m");
}

Mesh ActuatorScenario::build_mesh() const {
  return mesh_disc(disc_radius, grid_n, layer_thickness(), rule);
}

CoilSystem ActuatorScenario::build_coils() const {
  CoilSystem out;
  const double first = coils.empty() ? 1.0 : coils.front().current;
  for (const auto& c : coils) {
    auto f = build_solenoid(c.diameter, c.windings, c.pitch, c.z_top, c.current / first);
    out.filaments.insert(out.filaments.end(), f.begin(), f.end());
  }
  return out;
}

QuasiFemModel::QuasiFemModel(VerticalForceModel force) : force_(std::move(force)) {
  const double f0 = force_.fm(0.0);
  if (f0 == 0.0 || !std::isfinite(f0)) throw ModelValidityError("magnetic force vanishes at equilibrium");
  eta0_ = -1.0 / f0;
}

QuasiFemModel QuasiFemModel::from(const ActuatorScenario& scenario,
                                  std::shared_ptr<const ElementMatrix> elements) {
  scenario.validate();
  return QuasiFemModel(VerticalForceModel(scenario.build_mesh(), scenario.build_coils(),
                                          scenario.levitation_height, scenario.kappa(), std::move(elements)));
}

double QuasiFemModel::beta(double lambda) const {
  if (lambda == 0.0) return 0.0;
  return -(1.0 + lambda) * (1.0 + lambda) * (1.0 + eta0_ * force_.fm(lambda));
}

PullInCurve trace_curve(PullInModel model, const BetaFunction& beta, int n_samples) {
  if (n_samples < 5) throw InputError("n_samples ≥ 5");
  PullInCurve curve;
  curve.model = model;
  curve.samples.resize(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    auto& smp = curve.samples[static_cast<std::size_t>(i)];
    smp.lambda = i == 0 ? 0.0 : -0.9 * i / (n_samples - 1);
    try {
      smp.beta = beta(smp.lambda);
      if (!std::isfinite(smp.beta)) throw DomainError("non-finite beta");
    } catch (const std::exception& e) {
      smp.ok = false;
      smp.error = e.what();
      warn("sample lambda=" + std::to_string(smp.lambda) + " skipped: " + e.what());
    }
  }
  double last = -INFINITY;
  for (auto& smp : curve.samples) {
    if (!smp.ok) continue;
    if (smp.beta < last) break;
    smp.physical = true;
    last = smp.beta;
  }
  return curve;
}

PullInResult find_pullin(const PullInCurve& curve, const BetaFunction& beta) {
  std::vector<const PullInSample*> ok;
  for (const auto& s : curve.samples) {
    if (s.ok) ok.push_back(&s);
  }
  if (ok.size() < 3) throw NoPullInError();
  std::size_t m = 0;
  for (std::size_t i = 1; i < ok.size(); ++i) {
    if (ok[i]->beta > ok[m]->beta) m = i;
  }
  if (m == 0 || m + 1 == ok.size() || !(ok[m]->beta > ok[m - 1]->beta) || !(ok[m]->beta > ok[m + 1]->beta)) {
    throw NoPullInError();
  }

  double x = ok[m]->lambda;
  double fx = ok[m]->beta;
  if (beta) {
    // lambda decreases along the curve: ok[m+1] is the lower end of the bracket
    double a = ok[m + 1]->lambda;
    double b = ok[m - 1]->lambda;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = beta(c);
    double fd = beta(d);
    while (b - a > kLambdaTolerance) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = beta(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = beta(d);
      }
    }
    if (fc > fd) {
      x = c;
      fx = fc;
    } else {
      x = d;
      fx = fd;
    }
    const double fm = beta(x - kPolishStep);
    const double fp = beta(x + kPolishStep);
    const double curv = fp - 2.0 * fx + fm;
    if (curv < 0.0) {
      const double xs = x - 0.5 * kPolishStep * (fp - fm) / curv;
      if (std::abs(xs - x) <= kPolishStep) {
        const double fs = beta(xs);
        if (fs >= fx) {
          x = xs;
          fx = fs;
        }
      }
    }
  } else {
    const double x0 = ok[m + 1]->lambda, f0 = ok[m + 1]->beta;
    const double x1 = ok[m]->lambda, f1 = ok[m]->beta;
    const double x2 = ok[m - 1]->lambda, f2 = ok[m - 1]->beta;
    const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
    const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    if (den != 0.0) {
      x = x1 - 0.5 * num / den;
      // value of the interpolating parabola at its vertex
      const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
      const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
      const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
      fx = f0 * l0 + f1 * l1 + f2 * l2;
    }
  }

  PullInResult out;
  out.model = curve.model;
  out.lambda_p = std::abs(x);
  out.beta_p = fx;
  out.sqrt_beta_p = std::sqrt(std::max(fx, 0.0));
  return out;
}

Dimensional dimensionalize(double lambda_p, double beta_p, const ActuatorScenario& scenario) {
  Dimensional out;
  out.voltage_scale = scenario.voltage_scale();
  out.voltage = out.voltage_scale * std::sqrt(std::max(beta_p, 0.0));
  out.displacement = std::abs(lambda_p) * scenario.spacing;
  return out;
}

BetaFunction beta_function(PullInModel model, const ActuatorScenario& scenario,
                           std::shared_ptr<const ElementMatrix> elements, double* eta0) {
  const double xi = scenario.xi();
  const double kappa = scenario.kappa();
  switch (model) {
    case PullInModel::Simplified:
      simplified_factor(xi);
      return [xi, kappa](double l) { return beta_simplified(l, xi, kappa); };
    case PullInModel::Analytical:
      return [xi, kappa](double l) { return beta_analytical(l, xi, kappa); };
    default: {
      auto q = std::make_shared<QuasiFemModel>(QuasiFemModel::from(scenario, std::move(elements)));
      if (eta0) *eta0 = q->eta0();
      return [q](double l) { return q->beta(l); };
    }
  }
}

PullInRun run_pullin(PullInModel model, const ActuatorScenario& scenario, int n_samples,
                     std::shared_ptr<const ElementMatrix> elements) {
  scenario.validate();
  if (n_samples < 5) throw InputError("n_samples ≥ 5");
  double eta0 = 0.0;
  const BetaFunction beta = beta_function(model, scenario, std::move(elements), &eta0);
  PullInRun run;
  run.curve = trace_curve(model, beta, n_samples);
  run.result = find_pullin(run.curve, beta);
  if (model == PullInModel::QuasiFem) run.result.eta0 = eta0;
  const Dimensional d = dimensionalize(run.result.lambda_p, run.result.beta_p, scenario);
  run.result.voltage = d.voltage;
  run.result.displacement = d.displacement;
  return run;
}

}  // namespace hlma
