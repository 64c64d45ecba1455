#include "hlma/filament.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hlma/ellint.hpp"
#include "hlma/errors.hpp"

namespace hlma {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::size_t kTrapezoidStart = 64;
constexpr std::size_t kTrapezoidCap = std::size_t{1} << 14;
constexpr double kTrapezoidTol = 1e-11;
constexpr double kTanhSinhTol = 1e-12;

// k >= 1 - 1e-12  <=>  kc^2 <= ~2e-12
constexpr double kSingularKc2 = 2e-12;
// Below this kc^2 the periodic rule loses its spectral rate; use the split rule.
constexpr double kNearContactKc2 = 1e-4;
constexpr double kContactTol = 1e-12;

struct Pair {
  double m = 0.0;
  double d = 0.0;
};

// Integrand of Mbar and dMbar/dx3 at the angle whose half-angle squares are
// s = sin^2(phi/2), c = cos^2(phi/2). Both are supplied by the caller so that the
// one that is small near a contact point is exact.
class Integrand {
 public:
  Integrand(double lateral, double x3, double nu)
      : d_(lateral), x3_(x3), nu_(nu), a_(nu * x3) {
    const double near = nu * std::abs(1.0 - lateral);
    const double far = nu * (1.0 + lateral);
    c_near_ = (1.0 - near) * (1.0 + near);  // 1 - nu^2 (1-d)^2
    c_far_ = (1.0 - far) * (1.0 + far);     // 1 - nu^2 (1+d)^2
  }

  Pair operator()(double s, double c) const {
    double rho2;
    double one_minus_u2;
    if (c < s) {
      rho2 = (1.0 - d_) * (1.0 - d_) + 4.0 * d_ * c;
      one_minus_u2 = c_near_ - 4.0 * nu_ * nu_ * d_ * c;
    } else {
      rho2 = (1.0 + d_) * (1.0 + d_) - 4.0 * d_ * s;
      one_minus_u2 = c_far_ + 4.0 * nu_ * nu_ * d_ * s;
    }
    rho2 = std::max(rho2, 0.0);
    const double rho = std::sqrt(rho2);
    if (rho == 0.0) return {};  // secondary passes through the primary axis; integrand -> 0

    const double u = nu_ * rho;
    const double one_minus_u = one_minus_u2 / (1.0 + u);
    const double a2 = a_ * a_;
    const double dplus = (1.0 + u) * (1.0 + u) + a2;
    const double dminus = one_minus_u * one_minus_u + a2;
    const double k = std::sqrt(4.0 * u / dplus);
    const double kc = std::max(std::sqrt(dminus / dplus), std::numeric_limits<double>::min());

    const double weight = (1.0 + d_ * (c - s)) / (rho * std::sqrt(rho));
    Pair out;
    out.m = weight * detail::psi_kernel_kc(k, kc) / k;
    if (x3_ != 0.0) {
      const double dk_dx3 = -nu_ * a_ * std::sqrt(4.0 * u) / (dplus * std::sqrt(dplus));
      out.d = weight * detail::phi_bracket_kc(k, kc) * dk_dx3;
    }
    return out;
  }

  // Evaluate at phi in [0, pi], given t = pi - phi computed independently.
  Pair at(double phi, double t) const {
    if (phi <= 0.5 * kPi) {
      const double sh = std::sin(0.5 * phi);
      const double s = sh * sh;
      return (*this)(s, 1.0 - s);
    }
    const double ch = std::sin(0.5 * t);
    const double c = ch * ch;
    return (*this)(1.0 - c, c);
  }

 private:
  double d_, x3_, nu_, a_;
  double c_near_, c_far_;
};

struct QuadResult {
  Pair value;
  std::size_t nodes = 0;
  bool converged = false;
};

// Periodic trapezoid on the full circle, evaluated on [0, pi] using the even symmetry
// of the integrand in phi. Returns Mbar = (2/pi) Int_0^pi f.
QuadResult trapezoid(const Integrand& f, std::size_t start, std::size_t cap, bool adaptive) {
  std::size_t n = start;  // full-period node count
  // half-range sum with endpoint weights 1/2
  Pair sum;
  Pair abs_sum;
  auto add = [&](std::size_t i, std::size_t nn, double w) {
    const double phi = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(nn);
    const double t = 2.0 * kPi * static_cast<double>(nn / 2 - i) / static_cast<double>(nn);
    const Pair v = f.at(phi, t);
    sum.m += w * v.m;
    sum.d += w * v.d;
    abs_sum.m += w * std::abs(v.m);
    abs_sum.d += w * std::abs(v.d);
  };
  add(0, n, 0.5);
  add(n / 2, n, 0.5);
  for (std::size_t i = 1; i < n / 2; ++i) add(i, n, 1.0);

  auto estimate = [&](std::size_t nn) {
    const double h = 2.0 * kPi / static_cast<double>(nn);
    return Pair{2.0 / kPi * h * sum.m, 2.0 / kPi * h * sum.d};
  };
  Pair prev = estimate(n);
  if (!adaptive) return {prev, n, true};

  while (n < cap) {
    const std::size_t nn = 2 * n;
    for (std::size_t i = 1; i < nn / 2; i += 2) add(i, nn, 1.0);
    n = nn;
    const Pair cur = estimate(n);
    const double h = 2.0 * kPi / static_cast<double>(n);
    const double scale_m = 2.0 / kPi * h * abs_sum.m;
    const double scale_d = 2.0 / kPi * h * abs_sum.d;
    const bool ok_m = std::abs(cur.m - prev.m) <= kTrapezoidTol * std::max(std::abs(cur.m), 1e-300) ||
                      std::abs(cur.m - prev.m) <= kTrapezoidTol * 1e-3 * scale_m;
    const bool ok_d = std::abs(cur.d - prev.d) <= kTrapezoidTol * std::max(std::abs(cur.d), 1e-300) ||
                      std::abs(cur.d - prev.d) <= kTrapezoidTol * 1e-3 * scale_d || scale_d == 0.0;
    prev = cur;
    if (ok_m && ok_d) return {cur, n, true};
  }
  return {prev, n, false};
}

// Double-exponential rule on [lo, hi] (subset of [0, pi]). Node distances to both
// ends are formed without cancellation so that a log singularity at either end is
// resolved. Returns (2/pi) Int_lo^hi f.
Pair tanh_sinh(const Integrand& f, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  if (half <= 0.0) return {};
  constexpr double kTMax = 4.0;
  constexpr int kMaxLevel = 10;

  Pair sum;
  auto node = [&](double t) {
    const double sh = 0.5 * kPi * std::sinh(t);
    const double ch = std::cosh(sh);
    const double w = half * 0.5 * kPi * std::cosh(t) / (ch * ch);
    const double e = std::exp(-2.0 * std::abs(sh));
    const double small = half * 2.0 * e / (1.0 + e);  // distance to the nearer end
    double phi;
    double to_pi;
    if (t >= 0.0) {
      phi = hi - small;
      to_pi = (kPi - hi) + small;
    } else {
      phi = lo + small;
      to_pi = (kPi - lo) - small;
    }
    if (small <= 0.0) return;
    const Pair v = f.at(phi, to_pi);
    sum.m += w * v.m;
    sum.d += w * v.d;
  };

  double h = 1.0;
  node(0.0);
  for (double t = h; t <= kTMax; t += h) {
    node(t);
    node(-t);
  }
  Pair prev{h * sum.m, h * sum.d};
  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTMax; t += 2.0 * h) {
      node(t);
      node(-t);
    }
    const Pair cur{h * sum.m, h * sum.d};
    const bool ok = std::abs(cur.m - prev.m) <= kTanhSinhTol * std::abs(cur.m) &&
                    std::abs(cur.d - prev.d) <= kTanhSinhTol * std::max(std::abs(cur.d), 1e-300);
    prev = cur;
    if (ok && level >= 3) break;
  }
  return {2.0 / kPi * prev.m, 2.0 / kPi * prev.d};
}

std::string describe(double lateral, double x3, double nu) {
  std::ostringstream os;
  os.precision(17);
  os << "(lateral=" << lateral << ", x3=" << x3 << ", nu=" << nu << ")";
  return os.str();
}

KzQuadratureInfo evaluate(double lateral, double x3, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu) || !std::isfinite(lateral) || !std::isfinite(x3)) {
    throw GeometryError("invalid relative placement " + describe(lateral, x3, nu));
  }
  lateral = std::abs(lateral);
  const double a = nu * x3;

  if (lateral == 0.0) {
    // coaxial: the integrand is constant, Mbar = 2 Psi(k)/k
    const double dplus = (1.0 + nu) * (1.0 + nu) + a * a;
    const double dminus = (1.0 - nu) * (1.0 - nu) + a * a;
    if (dminus / dplus <= kSingularKc2) {
      throw SingularGeometryError("coincident filaments " + describe(lateral, x3, nu));
    }
    const Integrand f(0.0, x3, nu);
    const Pair v = f(0.0, 1.0);
    return {{2.0 * v.m, 2.0 * v.d}, 1, false};
  }

  // Largest k over the circle: u = nu*rho = sqrt(1 + a^2), clipped to the reachable rho range.
  const double rho_lo = std::abs(1.0 - lateral);
  const double rho_hi = 1.0 + lateral;
  const double rho_star = std::clamp(std::sqrt(1.0 + a * a) / nu, rho_lo, rho_hi);
  const double u_star = nu * rho_star;
  const double kc2_min = ((1.0 - u_star) * (1.0 - u_star) + a * a) / ((1.0 + u_star) * (1.0 + u_star) + a * a);
  const double cos_star = std::clamp((rho_star * rho_star - 1.0 - lateral * lateral) / (2.0 * lateral), -1.0, 1.0);
  const double phi_star = std::acos(cos_star);

  const Integrand f(lateral, x3, nu);

  if (kc2_min <= kSingularKc2) {
    // Contact or near contact. Only an in-plane crossing (closest point strictly inside
    // the angular range) is singular; tangent contact and small gaps are log-integrable.
    const double target = 1.0 / nu;
    const bool crossing = target > rho_lo + kContactTol * std::max(rho_lo, 1.0) &&
                          target < rho_hi - kContactTol * rho_hi;
    if (std::abs(a) <= kContactTol && crossing) {
      throw SingularGeometryError("filaments intersect " + describe(lateral, x3, nu));
    }
    const Pair lo = tanh_sinh(f, 0.0, phi_star);
    const Pair hi = tanh_sinh(f, phi_star, kPi);
    return {{lo.m + hi.m, lo.d + hi.d}, 0, true};
  }

  if (kc2_min < kNearContactKc2) {
    const Pair lo = tanh_sinh(f, 0.0, phi_star);
    const Pair hi = tanh_sinh(f, phi_star, kPi);
    return {{lo.m + hi.m, lo.d + hi.d}, 0, true};
  }

  const QuadResult q = trapezoid(f, kTrapezoidStart, kTrapezoidCap, true);
  if (q.converged) return {{q.value.m, q.value.d}, q.nodes, false};

  const Pair lo = tanh_sinh(f, 0.0, phi_star);
  const Pair hi = tanh_sinh(f, phi_star, kPi);
  return {{lo.m + hi.m, lo.d + hi.d}, 0, true};
}

}  // namespace

void validate(const RingGeometry& g) {
  if (!(g.radius > 0.0) || !(g.thickness > 0.0)) {
    throw GeometryError("ring radius and thickness must be positive");
  }
  const double eps = g.epsilon();
  if (!(eps < 1.0)) {
    std::ostringstream os;
    os << "ring aspect eps = th/(2 R_e) = " << eps << " must be < 1";
    throw GeometryError(os.str());
  }
  if (eps > 0.1 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "ring aspect eps = " << eps << " exceeds the recommended 0.1";
    warn(os.str());
  }
}

double self_inductance_ring_normalized(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw GeometryError("ring aspect eps must lie in (0, 1)");
  }
  const double l8 = std::log(8.0 / eps);
  return l8 - 1.75 + eps * eps / 8.0 * (l8 + 1.0 / 3.0);
}

double self_inductance_ring(const RingGeometry& g) {
  validate(g);
  return kMu0 * g.radius * self_inductance_ring_normalized(g.epsilon());
}

double mutual_maxwell_coaxial(double r1, double r2, double s) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(s)) {
    throw GeometryError("filament radii must be positive");
  }
  const double dplus = (r1 + r2) * (r1 + r2) + s * s;
  const double kc2 = ((r1 - r2) * (r1 - r2) + s * s) / dplus;
  if (kc2 <= kSingularKc2) {
    throw SingularGeometryError("coincident filaments (zero separation)");
  }
  const double k = std::sqrt(4.0 * r1 * r2 / dplus);
  // (2/k - k) K - (2/k) E = (2/k) Psi(k)
  return kMu0 * std::sqrt(r1 * r2) * 2.0 * detail::psi_kernel_kc(k, std::sqrt(kc2)) / k;
}

KzQuadratureInfo mutual_kz_detailed(double lateral, double x3, double nu) {
  return evaluate(lateral, x3, nu);
}

KzValue mutual_kz_lateral(double lateral, double x3, double nu) {
  return evaluate(lateral, x3, nu).value;
}

KzValue mutual_kz_with_derivative(const RelativePlacement& p) {
  return mutual_kz_lateral(std::hypot(p.x1, p.x2), p.x3, p.nu);
}

double mutual_kz(const RelativePlacement& p) { return mutual_kz_with_derivative(p).m; }

double dmutual_kz_dx3(const RelativePlacement& p) { return mutual_kz_with_derivative(p).dm_dx3; }

KzValue mutual_kz_trapezoid(double lateral, double x3, double nu, std::size_t n_nodes) {
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw std::invalid_argument("trapezoid node count must be even and >= 4");
  }
  const Integrand f(std::abs(lateral), x3, nu);
  const QuadResult q = trapezoid(f, n_nodes, n_nodes, false);
  return {q.value.m, q.value.d};
}

double KzCache::quantize(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  int e = 0;
  std::frexp(v, &e);
  const double step = std::ldexp(1.0, e - 40);
  return std::round(v / step) * step;
}

std::size_t KzCache::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint64_t w : {k.a, k.b, k.c}) {
    h ^= w;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

KzValue KzCache::get(double lateral, double x3, double nu) {
  const double ql = quantize(std::abs(lateral));
  const double qz = quantize(x3);
  const double qn = quantize(nu);
  const Key key{std::bit_cast<std::uint64_t>(ql), std::bit_cast<std::uint64_t>(qz),
                std::bit_cast<std::uint64_t>(qn)};
  {
    std::lock_guard lock(mutex_);
    if (auto it = map_.find(key); it != map_.end()) return it->second;
  }
  const KzValue v = mutual_kz_lateral(ql, qz, qn);
  std::lock_guard lock(mutex_);
  map_.emplace(key, v);
  return v;
}

std::size_t KzCache::size() const {
  std::lock_guard lock(mutex_);
  return map_.size();
}

void KzCache::clear() {
  std::lock_guard lock(mutex_);
  map_.clear();
}

}  // namespace hlma
