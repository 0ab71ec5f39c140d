#pragma once

#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "coilchain/geometry.hpp"

namespace coilchain
{

inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;

struct Segment
{
  Vec3 start;
  Vec3 end;
  double radius = 0.0;  // conductor radius for the intersection check
};

enum class Exec
{
  serial,
  parallel
};

class IntersectionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Straight filaments tracing every turn of `coil`, counter-clockwise about
/// the local +z axis, each side cut into `per_side` pieces, mapped by `pose`.
std::vector<Segment> discretize(const CoilSpec &coil, int per_side, const Pose &pose = {});

/// Neumann double line integral summed over all segment pairs, in henries.
///
/// Rows (segments of `a`) are reduced in index order so the serial and
/// parallel paths produce bit-identical sums. Throws IntersectionError when
/// two segments come closer than the sum of their radii.
double neumann_sum(std::span<const Segment> a, std::span<const Segment> b, Exec exec = Exec::parallel);

/// Closed-form mutual partial inductance of two parallel straight filaments.
/// Filament 1 spans [a1, b1] and filament 2 spans [a2, b2] along a common
/// direction; `gap` is their perpendicular separation (0 for collinear).
double parallel_filament_mutual(double a1, double b1, double a2, double b2, double gap);

/// Self partial inductance of a straight round wire, surface-current limit.
double wire_self_partial(double length, double radius);

/// Minimum distance between two segments.
double segment_distance(const Segment &s, const Segment &t);

}  // namespace coilchain
