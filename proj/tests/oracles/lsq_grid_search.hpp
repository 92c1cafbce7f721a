#pragma once

// Brute-force minimiser of ||A x - b||^2 for rows [sqrt(a_i), 1] . [z, c] =
// z_i sqrt(a_i).  Nested grid refinement: an outer grid over z, and for each
// candidate z an inner grid over c.  Both one-dimensional profiles are
// convex, so keeping one grid step either side of the best node never loses
// the minimiser.  Shares no code with the library solver.

#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

struct GridSolution {
  long double z_object;
  long double c;
};

inline long double residual(const std::vector<double>& z, const std::vector<double>& a, long double zo,
                            long double c) {
  long double acc = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const long double s = std::sqrt(static_cast<long double>(a[i]));
    const long double r = zo * s + c - static_cast<long double>(z[i]) * s;
    acc += r * r;
  }
  return acc;
}

template <typename F>
std::pair<long double, long double> refine_1d(F&& f, long double lo, long double hi, long double tol,
                                              int nodes = 21) {
  long double best_x = lo, best_f = 0;
  while (hi - lo > tol) {
    const long double step = (hi - lo) / (nodes - 1);
    bool first = true;
    for (int k = 0; k < nodes; ++k) {
      const long double x = lo + step * k;
      const long double fx = f(x);
      if (first || fx < best_f) {
        best_f = fx;
        best_x = x;
        first = false;
      }
    }
    lo = best_x - step;
    hi = best_x + step;
  }
  return {best_x, best_f};
}

inline GridSolution minimise(const std::vector<double>& z, const std::vector<double>& a, long double z_lo,
                             long double z_hi, long double c_lo, long double c_hi, long double tol = 1e-9L) {
  auto profile = [&](long double zo) {
    return refine_1d([&](long double c) { return residual(z, a, zo, c); }, c_lo, c_hi, tol * 1e-3L).second;
  };
  const long double zo = refine_1d(profile, z_lo, z_hi, tol).first;
  const long double c =
      refine_1d([&](long double cc) { return residual(z, a, zo, cc); }, c_lo, c_hi, tol * 1e-3L).first;
  return {zo, c};
}

}  // namespace oracle
