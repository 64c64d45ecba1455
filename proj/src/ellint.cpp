#include "hlma/ellint.hpp"

#include <cmath>
#include <numbers>

#include "hlma/errors.hpp"

namespace hlma {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxAgmIterations = 40;

// Below this k^2 the kernels switch to their Maclaurin series in m = k^2.
constexpr double kSeriesThreshold = 0.1;

void check_modulus(double k) {
  if (!(k >= 0.0) || !(k < 1.0) || k * k > 1.0 - 1e-12) {
    throw DomainError("modulus out of range");
  }
}

// Psi(k) = (pi/2) sum_{n>=2} c_n m^n with
//   c_n = a_n 2n/(2n-1) - a_{n-1}/2,  a_n = [(2n-1)!!/(2n)!!]^2.
// d(Psi/k)/dk = (pi/2) sum_{n>=2} c_n (2n-1) m^{n-1}.
struct SeriesValues {
  double psi;
  double dpsi_over_k;
};

SeriesValues kernel_series(double m) {
  double a_prev = 0.25;  // a_1
  double mn = m;         // m^1
  double psi = 0.0;
  double dpsi = 0.0;
  for (int n = 2; n < 80; ++n) {
    const double r = (2.0 * n - 1.0) / (2.0 * n);
    const double a_n = a_prev * r * r;
    const double c_n = a_n * 2.0 * n / (2.0 * n - 1.0) - 0.5 * a_prev;
    const double dterm = c_n * (2.0 * n - 1.0) * mn;
    mn *= m;
    const double pterm = c_n * mn;
    psi += pterm;
    dpsi += dterm;
    a_prev = a_n;
    if (std::abs(pterm) <= 1e-18 * std::abs(psi) && std::abs(dterm) <= 1e-18 * std::abs(dpsi)) {
      break;
    }
  }
  return {0.5 * kPi * psi, 0.5 * kPi * dpsi};
}

}  // namespace

namespace detail {

EllipticPair complete_elliptic_kc(double k, double kc) {
  double a = 1.0;
  double b = kc;
  double p = 0.5;
  double sum = 0.5 * k * k;
  for (int it = 0; it < kMaxAgmIterations; ++it) {
    if (std::abs(a - b) <= 1e-15 * a) break;
    const double c = 0.5 * (a - b);
    const double mean = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = mean;
    p *= 2.0;
    sum += p * c * c;
  }
  const double K = kPi / (a + b);
  return {K, K * (1.0 - sum)};
}

double psi_kernel_kc(double k, double kc) {
  const double m = k * k;
  if (m < kSeriesThreshold) return kernel_series(m).psi;
  const auto [K, E] = complete_elliptic_kc(k, kc);
  return (1.0 - 0.5 * m) * K - E;
}

double phi_bracket_kc(double k, double kc) {
  const double m = k * k;
  if (m < kSeriesThreshold) return kernel_series(m).dpsi_over_k;
  const auto [K, E] = complete_elliptic_kc(k, kc);
  const double mc = kc * kc;
  return ((1.0 + mc) / (2.0 * mc) * E - K) / m;
}

}  // namespace detail

EllipticPair complete_elliptic(double k) {
  check_modulus(k);
  return detail::complete_elliptic_kc(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

double psi_kernel(double k) {
  check_modulus(k);
  return detail::psi_kernel_kc(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

double phi_bracket(double k) {
  check_modulus(k);
  return detail::phi_bracket_kc(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

}  // namespace hlma
