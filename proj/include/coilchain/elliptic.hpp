#pragma once

namespace coilchain
{

/// Complete elliptic integral of the first kind, K(k), modulus convention:
/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t). Throws std::domain_error
/// unless 0 <= k < 1.
double elliptic_K(double k);

/// Complete elliptic integral of the second kind, E(k), same convention.
/// Throws std::domain_error unless 0 <= k <= 1.
double elliptic_E(double k);

namespace detail
{
// Parameter forms with the complementary parameter m1 = 1 - m passed in
// separately so callers that know it exactly avoid the cancellation in 1 - m.
double ellint_K(double m, double m1);
double ellint_E(double m, double m1);

/// (1 - m/2) K - E, accurate for small m where the difference cancels.
double ellint_psi(double m, double m1);
}  // namespace detail

}  // namespace coilchain
