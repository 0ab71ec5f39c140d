#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace coilchain::detail
{

struct QuadResult
{
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Globally adaptive Gauss-Kronrod 7/15 quadrature. Bisects the interval with
// the largest error estimate until the summed estimate falls below
// max(rel_tol * |I|, 1e-15 * int |f|).
template <class F>
QuadResult integrate_gk15(F &&f, double lo, double hi, double rel_tol, int max_intervals = 4000)
{
  static constexpr double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                                   0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                                   0.207784955007898468, 0.000000000000000000};
  static constexpr double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                                   0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                                   0.204432940075298892, 0.209482141084727828};
  static constexpr double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                                   0.417959183673469388};

  struct Piece
  {
    double lo, hi, value, error, magnitude;
    bool operator<(const Piece &o) const { return error < o.error; }
  };

  auto rule = [&](double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = wk[7] * fc;
    double gauss = wg[3] * fc;
    double mag = wk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j)
    {
      const double f1 = f(c - h * xk[j]);
      const double f2 = f(c + h * xk[j]);
      kron += wk[j] * (f1 + f2);
      mag += wk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1)
        gauss += wg[j / 2] * (f1 + f2);
    }
    return Piece{a, b, kron * h, std::abs((kron - gauss) * h), mag * h};
  };

  std::priority_queue<Piece> heap;
  heap.push(rule(lo, hi));
  double total = heap.top().value;
  double error = heap.top().error;
  double magnitude = heap.top().magnitude;
  int count = 1;
  while (error > std::max(rel_tol * std::abs(total), 1e-15 * magnitude) && count < max_intervals)
  {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Piece left = rule(worst.lo, mid);
    const Piece right = rule(mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    magnitude += left.magnitude + right.magnitude - worst.magnitude;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-sum the pieces so the result does not carry drift from the running
  // updates.
  QuadResult out;
  out.intervals = count;
  std::vector<Piece> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty())
  {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece &a, const Piece &b) { return a.lo < b.lo; });
  for (const auto &p : pieces)
  {
    out.value += p.value;
    out.error += p.error;
  }
  return out;
}

}  // namespace coilchain::detail
