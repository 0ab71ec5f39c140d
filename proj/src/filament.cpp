#include "coilchain/filament.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>

namespace coilchain
{

namespace
{

Vec3 sub(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 add(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 scale(const Vec3 &a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

// Gauss-Legendre rules on [0, 1].
struct Rule
{
  int n;
  std::array<double, 8> x;
  std::array<double, 8> w;
};

constexpr Rule gl2{2, {0.2113248654051871, 0.7886751345948129}, {0.5, 0.5}};
constexpr Rule gl4{4,
                   {0.0694318442029737, 0.3300094782075719, 0.6699905217924281, 0.9305681557970263},
                   {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269}};
constexpr Rule gl8{8,
                   {0.0198550717512319, 0.1016667612931866, 0.2372337950418355, 0.4082826787521751,
                    0.5917173212478249, 0.7627662049581645, 0.8983332387068134, 0.9801449282487681},
                   {0.0506142681451881, 0.1111905172266872, 0.1568533229389436, 0.1813418916891810,
                    0.1813418916891810, 0.1568533229389436, 0.1111905172266872, 0.0506142681451881}};

const Rule &rule_for(double separation, double length)
{
  const double ratio = separation / length;
  if (ratio > 8.0)
    return gl2;
  if (ratio > 3.0)
    return gl4;
  return gl8;
}

// Mutual partial inductance of two straight segments by product quadrature,
// without the mu0/4pi factor. `hit` is raised on intersection.
double pair_term(const Segment &s, const Segment &t, bool &hit)
{
  const Vec3 ds = sub(s.end, s.start);
  const Vec3 dt = sub(t.end, t.start);
  const double align = dot(ds, dt);
  const double ls = norm(ds);
  const double lt = norm(dt);

  const Vec3 ms = add(s.start, scale(ds, 0.5));
  const Vec3 mt = add(t.start, scale(dt, 0.5));
  const double mid = norm(sub(ms, mt));
  const double contact = s.radius + t.radius;
  if (mid - 0.5 * (ls + lt) < contact && segment_distance(s, t) < contact)
  {
    hit = true;
    return 0.0;
  }
  if (align == 0.0)
    return 0.0;

  const Rule &r = rule_for(mid, std::max(ls, lt));
  double acc = 0.0;
  for (int i = 0; i < r.n; ++i)
  {
    const Vec3 p = add(s.start, scale(ds, r.x[i]));
    double row = 0.0;
    for (int j = 0; j < r.n; ++j)
    {
      const Vec3 q = add(t.start, scale(dt, r.x[j]));
      row += r.w[j] / norm(sub(p, q));
    }
    acc += r.w[i] * row;
  }
  return align * acc;
}

}  // namespace

std::vector<Segment> discretize(const CoilSpec &coil, int per_side, const Pose &pose)
{
  std::vector<Segment> out;
  out.reserve(static_cast<std::size_t>(4 * per_side * std::max(coil.turns, 0)));
  for (int turn = 0; turn < coil.turns; ++turn)
  {
    auto [a, b] = coil.turn_half_sides(turn);
    const std::array<Vec3, 5> corners{Vec3{-a, -b, 0}, Vec3{a, -b, 0}, Vec3{a, b, 0}, Vec3{-a, b, 0},
                                      Vec3{-a, -b, 0}};
    for (int side = 0; side < 4; ++side)
    {
      const Vec3 from = corners[side];
      const Vec3 step = scale(sub(corners[side + 1], from), 1.0 / per_side);
      for (int k = 0; k < per_side; ++k)
      {
        const Vec3 p0 = add(from, scale(step, k));
        const Vec3 p1 = k + 1 == per_side ? corners[side + 1] : add(from, scale(step, k + 1));
        out.push_back({pose.apply(p0), pose.apply(p1), coil.wire_radius});
      }
    }
  }
  return out;
}

double neumann_sum(std::span<const Segment> a, std::span<const Segment> b, Exec exec)
{
  const auto rows = static_cast<std::ptrdiff_t>(a.size());
  std::vector<double> partial(a.size(), 0.0);
  std::atomic<bool> intersect{false};

  auto row_sum = [&](std::ptrdiff_t i) {
    bool hit = false;
    double acc = 0.0;
    for (const auto &t : b)
      acc += pair_term(a[i], t, hit);
    if (hit)
      intersect.store(true, std::memory_order_relaxed);
    partial[i] = acc;
  };

  if (exec == Exec::parallel)
  {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < rows; ++i)
      row_sum(i);
  }
  else
  {
    for (std::ptrdiff_t i = 0; i < rows; ++i)
      row_sum(i);
  }

  if (intersect.load())
    throw IntersectionError("filaments intersect: coils overlap for this placement");
  return mu0 / (4.0 * std::numbers::pi) * std::accumulate(partial.begin(), partial.end(), 0.0);
}

double parallel_filament_mutual(double a1, double b1, double a2, double b2, double gap)
{
  // Antiderivative of the double integral of 1/sqrt(u^2 + gap^2).
  auto g = [gap](double u) {
    if (gap == 0.0)
    {
      const double au = std::abs(u);
      return au == 0.0 ? 0.0 : au * std::log(au) - au;
    }
    return u * std::asinh(u / gap) - std::sqrt(u * u + gap * gap);
  };
  const double sum = g(b2 - a1) - g(b2 - b1) - g(a2 - a1) + g(a2 - b1);
  return mu0 / (4.0 * std::numbers::pi) * sum;
}

double wire_self_partial(double length, double radius)
{
  return mu0 * length / (2.0 * std::numbers::pi) * (std::log(2.0 * length / radius) - 1.0);
}

double segment_distance(const Segment &s, const Segment &t)
{
  // Closest points of two segments (clamped parametric solution).
  const Vec3 d1 = sub(s.end, s.start);
  const Vec3 d2 = sub(t.end, t.start);
  const Vec3 r = sub(s.start, t.start);
  const double a = dot(d1, d1);
  const double e = dot(d2, d2);
  const double f = dot(d2, r);
  const double c = dot(d1, r);
  const double b = dot(d1, d2);
  const double denom = a * e - b * b;

  double sc = 0.0;
  double tc = 0.0;
  if (denom > 1e-14 * a * e)
    sc = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  tc = (b * sc + f) / e;
  if (tc < 0.0)
  {
    tc = 0.0;
    sc = std::clamp(-c / a, 0.0, 1.0);
  }
  else if (tc > 1.0)
  {
    tc = 1.0;
    sc = std::clamp((b - c) / a, 0.0, 1.0);
  }
  const Vec3 p = add(s.start, scale(d1, sc));
  const Vec3 q = add(t.start, scale(d2, tc));
  return norm(sub(p, q));
}

}  // namespace coilchain
