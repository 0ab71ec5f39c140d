#include "coilchain/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coilchain
{

namespace detail
{

namespace
{

struct AgmResult
{
  double mean;
  double weighted_sum;  // sum_{n>=0} 2^(n-1) c_n^2
};

AgmResult agm(double m, double m1)
{
  double a = 1.0;
  double b = std::sqrt(m1);
  double sum = 0.5 * m;
  double scale = 0.5;
  for (int it = 0; it < 64; ++it)
  {
    const double c = 0.5 * (a - b);
    scale *= 2.0;
    sum += scale * c * c;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    if (std::abs(c) <= 1e-17 * a)
      break;
  }
  return {a, sum};
}

}  // namespace

double ellint_K(double m, double m1)
{
  return std::numbers::pi / (2.0 * agm(m, m1).mean);
}

double ellint_E(double m, double m1)
{
  if (m1 == 0.0)
    return 1.0;
  const auto r = agm(m, m1);
  return std::numbers::pi / (2.0 * r.mean) * (1.0 - r.weighted_sum);
}

double ellint_psi(double m, double m1)
{
  if (m >= 0.25)
    return (1.0 - 0.5 * m) * ellint_K(m, m1) - ellint_E(m, m1);

  // Maclaurin series in m: the n = 0 and n = 1 terms vanish identically.
  double a_prev = 0.25;  // ((2n-1)!!/(2n)!!)^2 at n = 1
  double power = m;
  double sum = 0.0;
  for (int n = 2; n < 400; ++n)
  {
    const double ratio = (2.0 * n - 1.0) / (2.0 * n);
    const double a_n = a_prev * ratio * ratio;
    power *= m;
    const double term = power * (a_n * 2.0 * n / (2.0 * n - 1.0) - 0.5 * a_prev);
    sum += term;
    a_prev = a_n;
    if (std::abs(term) <= 1e-18 * std::abs(sum))
      break;
  }
  return 0.5 * std::numbers::pi * sum;
}

}  // namespace detail

double elliptic_K(double k)
{
  if (!(k >= 0.0 && k < 1.0))
    throw std::domain_error("elliptic_K: modulus must lie in [0, 1), got " + std::to_string(k));
  return detail::ellint_K(k * k, (1.0 - k) * (1.0 + k));
}

double elliptic_E(double k)
{
  if (!(k >= 0.0 && k <= 1.0))
    throw std::domain_error("elliptic_E: modulus must lie in [0, 1], got " + std::to_string(k));
  return detail::ellint_E(k * k, (1.0 - k) * (1.0 + k));
}

}  // namespace coilchain
