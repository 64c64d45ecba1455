#pragma once

// Complete elliptic integrals (modulus convention: the argument is k, not m = k^2)
// and the composite kernels used by the circular-filament coupling formulas.

namespace hlma {

struct EllipticPair {
  double K;  // first kind
  double E;  // second kind
};

/// K(k), E(k) by the arithmetic-geometric mean. Requires 0 <= k < 1 and
/// k^2 <= 1 - 1e-12; anything else throws DomainError("modulus out of range").
EllipticPair complete_elliptic(double k);

/// Psi(k) = (1 - k^2/2) K(k) - E(k). Uses the power series for small k where the
/// direct difference cancels.
double psi_kernel(double k);

/// d(Psi(k)/k)/dk = (1/k^2) [ (2-k^2)/(2(1-k^2)) E(k) - K(k) ].
double phi_bracket(double k);

namespace detail {

// Same quantities, parameterized by the modulus and its complement kc = sqrt(1-k^2)
// computed independently by the caller. This is the entry point for the quadrature
// near a tangent contact, where kc is small and 1 - k*k would lose all digits.
// Requires k >= 0, kc > 0 (no near-singular guard).
EllipticPair complete_elliptic_kc(double k, double kc);
double psi_kernel_kc(double k, double kc);
double phi_bracket_kc(double k, double kc);

}  // namespace detail
}  // namespace hlma
