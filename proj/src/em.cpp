#include "coilchain/em.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coilchain/elliptic.hpp"
#include "quadrature.hpp"

namespace coilchain
{

double circular_filament_mutual(double r1, double r2, const Placement &pose, const AnalyticOptions &opts)
{
  const double alpha = r2 / r1;
  const double beta = pose.axial_c / r1;
  const double offset = pose.lateral_d / r2;
  const double sin_t = std::sin(pose.angle_theta);
  const double cos_t = std::cos(pose.angle_theta);

  auto integrand = [&](double phi) {
    const double cos_p = std::cos(phi);
    const double v2 = 1.0 - cos_p * cos_p * sin_t * sin_t - 2.0 * offset * cos_p * cos_t + offset * offset;
    if (!(v2 > 0.0))
      throw SingularConfiguration("mutual inductance: V <= 0 at phi = " + std::to_string(phi));
    const double v = std::sqrt(v2);
    const double xi = beta + alpha * cos_p * sin_t;
    const double av = alpha * v;
    const double den = (1.0 + av) * (1.0 + av) + xi * xi;
    const double m = 4.0 * av / den;
    const double m1 = ((1.0 - av) * (1.0 - av) + xi * xi) / den;
    if (!(m1 > 0.0))
      throw SingularConfiguration("mutual inductance: k >= 1, filaments intersect");
    const double psi = detail::ellint_psi(m, m1);
    return (cos_t - offset * cos_p) * psi / (std::sqrt(m) * v * std::sqrt(v));
  };

  const auto q = detail::integrate_gk15(integrand, 0.0, std::numbers::pi, opts.rel_tol);
  return 2.0 * mu0 / std::numbers::pi * std::sqrt(r1 * r2) * q.value;
}

double mutual_inductance_analytic(const CoilSpec &coil1, const CoilSpec &coil2, const Placement &pose,
                                  const AnalyticOptions &opts)
{
  double total = 0.0;
  for (int i = 0; i < coil1.turns; ++i)
  {
    auto [a1, b1] = coil1.turn_half_sides(i);
    const double r1 = kEquivalentRadius * std::sqrt(a1 * b1);
    for (int j = 0; j < coil2.turns; ++j)
    {
      auto [a2, b2] = coil2.turn_half_sides(j);
      const double r2 = kEquivalentRadius * std::sqrt(a2 * b2);
      total += circular_filament_mutual(r1, r2, pose, opts);
    }
  }
  return std::abs(total);
}

double mutual_inductance_filament(const CoilSpec &coil1, const CoilSpec &coil2, const Placement &pose,
                                  int segments_per_side, Exec exec)
{
  return std::abs(mutual_inductance_filament(coil1, Pose{}, coil2, Pose::from(pose), segments_per_side, exec));
}

double mutual_inductance_filament(const CoilSpec &coil1, const Pose &pose1, const CoilSpec &coil2,
                                  const Pose &pose2, int segments_per_side, Exec exec)
{
  if (segments_per_side < 8)
    throw std::invalid_argument("segments_per_side must be at least 8");
  const auto a = discretize(coil1, segments_per_side, pose1);
  const auto b = discretize(coil2, segments_per_side, pose2);
  return neumann_sum(a, b, exec);
}

double self_inductance(const CoilSpec &coil)
{
  // One filament per side: direction axis (0 = x, 1 = y), sign, fixed
  // perpendicular coordinate and extent along the axis.
  struct Side
  {
    int axis;
    double sign;
    double across;
    double lo, hi;
  };
  std::vector<Side> sides;
  for (int t = 0; t < coil.turns; ++t)
  {
    auto [a, b] = coil.turn_half_sides(t);
    sides.push_back({0, +1.0, -b, -a, a});
    sides.push_back({1, +1.0, a, -b, b});
    sides.push_back({0, -1.0, b, -a, a});
    sides.push_back({1, -1.0, -a, -b, b});
  }

  double total = 0.0;
  for (std::size_t i = 0; i < sides.size(); ++i)
  {
    const auto &s = sides[i];
    total += wire_self_partial(s.hi - s.lo, coil.wire_radius);
    for (std::size_t j = 0; j < sides.size(); ++j)
    {
      const auto &t = sides[j];
      if (i == j || s.axis != t.axis)
        continue;
      const double gap = std::abs(s.across - t.across);
      total += s.sign * t.sign * parallel_filament_mutual(s.lo, s.hi, t.lo, t.hi, gap);
    }
  }
  return total;
}

double skin_depth(double frequency)
{
  const double omega = 2.0 * std::numbers::pi * frequency;
  return std::sqrt(2.0 * copper_resistivity / (omega * mu0));
}

double ac_resistance(const CoilSpec &coil, double frequency)
{
  const double r = coil.wire_radius;
  const double inner = std::max(r - skin_depth(frequency), 0.0);
  const double area = std::numbers::pi * (r * r - inner * inner);
  return copper_resistivity * coil.wire_length() / area;
}

double match_capacitor(double inductance, double frequency)
{
  const double omega = 2.0 * std::numbers::pi * frequency;
  return 1.0 / (omega * omega * inductance);
}

double resonant_frequency(double inductance, double capacitance)
{
  return 1.0 / (2.0 * std::numbers::pi * std::sqrt(inductance * capacitance));
}

}  // namespace coilchain
