#pragma once

#include <stdexcept>

#include "coilchain/filament.hpp"
#include "coilchain/geometry.hpp"

namespace coilchain
{

inline constexpr double copper_resistivity = 1.68e-8;  // ohm m

/// Equivalent circular radius of a rectangular turn with half sides A, B is
/// kEquivalentRadius * sqrt(A * B). Equal area would be 2/sqrt(pi) = 1.1284;
/// 1.135 is the minimax fit against the filament sum for 10 cm squares at
/// c in {2, 5, 10} cm, d in {0, 5} cm, theta in {0, 30} deg (worst case ~4.8%).
inline constexpr double kEquivalentRadius = 1.135;

class SingularConfiguration : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ElectricalParams
{
  double self_inductance = 0.0;  // H
  double resistance = 0.0;       // ohm
  double capacitance = 0.0;      // F
};

struct AnalyticOptions
{
  double rel_tol = 1e-12;
};

/// Signed mutual inductance of two coaxially-referenced circular filaments of
/// radii r1 (upstream) and r2 (downstream) under the misalignment `pose`.
///
/// Evaluates the single phi-integral over [0, pi] with
///   alpha = r2/r1, beta = c/r1, xi = beta + alpha cos(phi) sin(theta),
///   V^2 = 1 - cos^2(phi) sin^2(theta) - 2 (d/r2) cos(phi) cos(theta) + (d/r2)^2,
///   k^2 = 4 alpha V / ((1 + alpha V)^2 + xi^2),
///   Psi = (1 - k^2/2) K(k) - E(k),
///   M = (2 mu0 / pi) sqrt(r1 r2) int (cos(theta) - (d/r2) cos(phi)) Psi / (k V^1.5) dphi.
/// The sign of the sin(theta) term in xi encodes the tilt direction of
/// Placement (normal swung away from the upstream axis).
///
/// Throws SingularConfiguration if a node has V <= 0 or k >= 1.
double circular_filament_mutual(double r1, double r2, const Placement &pose,
                                const AnalyticOptions &opts = {});

/// Mutual inductance of two multi-turn coils from the circular misalignment
/// formula, summed over turn pairs with equivalent radii. Returns |M|.
double mutual_inductance_analytic(const CoilSpec &coil1, const CoilSpec &coil2, const Placement &pose,
                                  const AnalyticOptions &opts = {});

/// Neumann double line integral over straight filaments for every turn pair.
/// Returns |M|. Throws std::invalid_argument for segments_per_side < 8 and
/// IntersectionError when the conductors touch.
double mutual_inductance_filament(const CoilSpec &coil1, const CoilSpec &coil2, const Placement &pose,
                                  int segments_per_side, Exec exec = Exec::parallel);

/// Signed filament mutual inductance between coils at arbitrary world poses.
double mutual_inductance_filament(const CoilSpec &coil1, const Pose &pose1, const CoilSpec &coil2,
                                  const Pose &pose2, int segments_per_side, Exec exec = Exec::parallel);

/// Self inductance of a planar multi-turn coil in the surface-current limit:
/// each side of each turn is one straight filament; self partials use the
/// wire radius, and every parallel side pair adds its exact mutual partial
/// (perpendicular sides do not couple).
double self_inductance(const CoilSpec &coil);

double skin_depth(double frequency);

/// Copper resistance of the whole winding with current confined to an
/// annulus one skin depth thick.
double ac_resistance(const CoilSpec &coil, double frequency);

/// C = 1 / ((2 pi f)^2 L)
double match_capacitor(double inductance, double frequency);

double resonant_frequency(double inductance, double capacitance);

}  // namespace coilchain
