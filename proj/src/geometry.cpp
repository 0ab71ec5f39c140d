#include "coilchain/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coilchain
{

std::array<double, 2> CoilSpec::turn_half_sides(int i) const
{
  const double inset = 2.0 * pitch * i;
  return {0.5 * (side_a - inset), 0.5 * (side_b - inset)};
}

double CoilSpec::wire_length() const
{
  double total = 0.0;
  for (int i = 0; i < turns; ++i)
  {
    auto [a, b] = turn_half_sides(i);
    total += 4.0 * (a + b);
  }
  return total;
}

CoilSpec CoilSpec::square_coil(double side, int turns, double pitch, double wire_radius)
{
  return {CoilShape::square, side, side, turns, pitch, wire_radius};
}

std::optional<Placement> Placement::inverse() const
{
  const double s = std::sin(angle_theta);
  const double c = std::cos(angle_theta);
  // Parallel coils: a half turn about the axis flips the lateral sign freely.
  if (s == 0.0)
    return Placement{lateral_d, axial_c, angle_theta};
  const double lateral = axial_c * s - lateral_d * c;
  if (lateral < 0.0)
    return std::nullopt;
  return Placement{lateral, lateral_d * s + axial_c * c, angle_theta};
}

Vec3 Pose::apply(const Vec3 &p) const
{
  const auto &r = rot;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + shift.x,
          r[3] * p.x + r[4] * p.y + r[5] * p.z + shift.y,
          r[6] * p.x + r[7] * p.y + r[8] * p.z + shift.z};
}

Pose Pose::then(const Pose &inner) const
{
  Pose out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
    {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k)
        acc += rot[3 * i + k] * inner.rot[3 * k + j];
      out.rot[3 * i + j] = acc;
    }
  out.shift = apply(inner.shift);
  return out;
}

Pose Pose::from(const Placement &p)
{
  const double s = std::sin(p.angle_theta);
  const double c = std::cos(p.angle_theta);
  Pose out;
  out.rot = {c, 0, s, 0, 1, 0, -s, 0, c};
  out.shift = {p.lateral_d, 0.0, p.axial_c};
  return out;
}

std::vector<Violation> validate_coil(const CoilSpec &coil, const std::string &path)
{
  std::vector<Violation> out;
  auto bad = [&](const std::string &field, const std::string &msg) {
    out.push_back({path + "." + field, msg});
  };
  if (!(coil.side_a > 0.0))
    bad("side_a", "must be positive");
  if (!(coil.side_b > 0.0))
    bad("side_b", "must be positive");
  if (coil.shape == CoilShape::square && coil.side_a != coil.side_b)
    bad("side_b", "must equal side_a for a square coil");
  if (coil.turns < 1)
    bad("turns", "must be at least 1");
  if (!(coil.wire_radius > 0.0))
    bad("wire_radius", "must be positive");
  if (!(coil.pitch >= 2.0 * coil.wire_radius))
    bad("pitch", "must be at least twice wire_radius");
  if (out.empty())
  {
    auto [a, b] = coil.turn_half_sides(coil.turns - 1);
    if (!(std::min(a, b) > coil.wire_radius))
      bad("turns", "innermost turn collapses for this pitch");
  }
  return out;
}

std::vector<Violation> validate_placement(const Placement &p, const std::string &path)
{
  std::vector<Violation> out;
  if (!(p.lateral_d >= 0.0))
    out.push_back({path + ".lateral_d", "must be non-negative"});
  if (!(p.axial_c >= 0.0))
    out.push_back({path + ".axial_c", "must be non-negative"});
  if (!(p.angle_theta >= 0.0 && p.angle_theta <= std::numbers::pi / 2))
    out.push_back({path + ".angle_theta", "must lie in [0, pi/2]"});
  if (p.lateral_d == 0.0 && p.axial_c == 0.0)
    out.push_back({path, "coils may not be coincident"});
  return out;
}

std::vector<Violation> validate_chain(const ChainConfig &config)
{
  std::vector<Violation> out;
  auto append = [&](std::vector<Violation> v) { out.insert(out.end(), v.begin(), v.end()); };

  append(validate_coil(config.reader.coil, "reader"));
  if (!(config.reader.inductance > 0.0))
    out.push_back({"reader.inductance", "must be positive"});
  if (!(config.reader.current > 0.0))
    out.push_back({"reader.current", "must be positive"});

  for (std::size_t k = 0; k < config.relays.size(); ++k)
  {
    const auto path = "relay[" + std::to_string(k + 1) + "]";
    const auto &relay = config.relays[k];
    append(validate_coil(relay.coil, path));
    if (relay.resistance && !(*relay.resistance > 0.0))
      out.push_back({path + ".resistance", "must be positive"});
    if (relay.capacitance && !(*relay.capacitance > 0.0))
      out.push_back({path + ".capacitance", "must be positive"});
  }

  append(validate_coil(config.tag.coil, "tag"));
  if (!(config.tag.inductance > 0.0))
    out.push_back({"tag.inductance", "must be positive"});
  if (!(config.tag.load > 0.0))
    out.push_back({"tag.load", "must be positive"});

  if (config.placements.size() != config.relays.size() + 1)
  {
    out.push_back({"placements", "expected " + std::to_string(config.relays.size() + 1) +
                                     " entries (relays + 1), found " +
                                     std::to_string(config.placements.size())});
  }
  for (std::size_t k = 0; k < config.placements.size(); ++k)
    append(validate_placement(config.placements[k], "placements[" + std::to_string(k) + "]"));

  if (!(config.frequency > 0.0))
    out.push_back({"drive.frequency", "must be positive"});
  return out;
}

ChainConfig retile(const ChainConfig &config, std::size_t n)
{
  if (config.relays.empty() && n > 0)
    throw std::invalid_argument("retile: chain has no relay to repeat");
  if (config.placements.size() != config.relays.size() + 1)
    throw std::invalid_argument("retile: placements do not match relays");

  const std::size_t m = config.relays.size();
  ChainConfig out = config;
  out.relays.clear();
  out.placements.clear();
  if (n == 0)
  {
    out.placements.push_back(config.placements.back());
    return out;
  }

  const Placement hop = m >= 2 ? config.placements[m - 1] : config.placements[0];
  for (std::size_t k = 0; k < n; ++k)
    out.relays.push_back(k < m ? config.relays[k] : config.relays.back());
  out.placements.push_back(config.placements.front());
  for (std::size_t k = 1; k < n; ++k)
    out.placements.push_back(k < m ? config.placements[k] : hop);
  out.placements.push_back(config.placements.back());
  return out;
}

std::vector<Pose> world_poses(const ChainConfig &config)
{
  std::vector<Pose> out;
  out.reserve(config.placements.size() + 1);
  out.push_back(Pose{});
  for (const auto &p : config.placements)
    out.push_back(out.back().then(Pose::from(p)));
  return out;
}

std::vector<CoilSpec> chain_coils(const ChainConfig &config)
{
  std::vector<CoilSpec> out;
  out.reserve(config.coil_count());
  out.push_back(config.reader.coil);
  for (const auto &r : config.relays)
    out.push_back(r.coil);
  out.push_back(config.tag.coil);
  return out;
}

}  // namespace coilchain
