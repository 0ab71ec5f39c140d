#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace coilchain
{

enum class CoilShape
{
  square,
  rectangle
};

/// Physical description of one planar multi-turn coil.
///
/// Turns are concentric rectangular filaments: turn `i` (0 = outermost) has
/// full sides `side_a - 2*pitch*i` by `side_b - 2*pitch*i`. All lengths are in
/// meters and are full side lengths, not half sides.
struct CoilSpec
{
  CoilShape shape = CoilShape::square;
  double side_a = 0.1;
  double side_b = 0.1;
  int turns = 3;
  double pitch = 0.002;
  double wire_radius = 0.5115e-3;

  /// Half sides (a/2, b/2) of turn `i`.
  std::array<double, 2> turn_half_sides(int i) const;
  /// Sum of all turn perimeters.
  double wire_length() const;

  static CoilSpec square_coil(double side, int turns, double pitch, double wire_radius);

  bool operator==(const CoilSpec &) const = default;
};

/// Relative pose of a coil with respect to its upstream neighbour.
///
/// The downstream coil's center sits at (lateral_d, 0, axial_c) in the
/// upstream coil's frame (upstream coil in z = 0, edges along x and y). It is
/// tilted by angle_theta about its own local y axis, and a positive angle
/// swings its normal toward +x, away from the upstream axis.
struct Placement
{
  double lateral_d = 0.0;
  double axial_c = 0.05;
  double angle_theta = 0.0;

  /// Pose of the upstream coil seen from the downstream one, when that pose
  /// is expressible with d >= 0, c >= 0 and theta in [0, pi/2].
  std::optional<Placement> inverse() const;

  bool operator==(const Placement &) const = default;
};

struct Vec3
{
  double x = 0, y = 0, z = 0;
};

/// Rigid transform p -> R*p + t.
struct Pose
{
  std::array<double, 9> rot{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3 shift;

  Vec3 apply(const Vec3 &p) const;
  Pose then(const Pose &inner) const;  // this * inner

  static Pose from(const Placement &p);
};

struct ReaderSpec
{
  CoilSpec coil;
  double inductance = 1.0e-6;  // L_in
  double current = 0.05;       // I_in, A RMS

  bool operator==(const ReaderSpec &) const = default;
};

struct RelaySpec
{
  CoilSpec coil;
  std::optional<double> resistance;   // replaces the copper AC resistance
  std::optional<double> capacitance;  // replaces the resonant match

  bool operator==(const RelaySpec &) const = default;
};

struct TagSpec
{
  CoilSpec coil;
  double inductance = 2.5e-6;  // L_o
  double load = 1000.0;        // R_o, parallel with the tuning capacitor

  bool operator==(const TagSpec &) const = default;
};

enum class CouplingModel
{
  analytic,
  filament
};

struct ChainConfig
{
  ReaderSpec reader;
  std::vector<RelaySpec> relays;
  TagSpec tag;
  /// reader->relay1, relay_k->relay_k+1, ..., relay_n->tag
  std::vector<Placement> placements;
  double frequency = 13.56e6;
  CouplingModel coupling = CouplingModel::analytic;
  /// Couple every coil pair in the mesh solver, not just neighbours.
  bool all_pairs = false;

  std::size_t coil_count() const { return relays.size() + 2; }

  bool operator==(const ChainConfig &) const = default;
};

struct Violation
{
  std::string path;
  std::string message;

  bool operator==(const Violation &) const = default;
};

std::vector<Violation> validate_coil(const CoilSpec &coil, const std::string &path);
std::vector<Violation> validate_placement(const Placement &p, const std::string &path);
std::vector<Violation> validate_chain(const ChainConfig &config);

/// Same chain with `n` copies of the last relay. Relay-to-relay hops repeat
/// the hop into the last relay (the reader hop when there was only one relay);
/// the reader and tag hops are kept.
ChainConfig retile(const ChainConfig &config, std::size_t n);

/// World pose of every coil, reader at the origin.
std::vector<Pose> world_poses(const ChainConfig &config);

/// The coil specs of a chain in order reader, relays..., tag.
std::vector<CoilSpec> chain_coils(const ChainConfig &config);

}  // namespace coilchain
