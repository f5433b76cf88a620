#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace minkray {

enum class Interp { Linear, CubicBSpline };

const char* to_string(Interp k);
Interp interp_from_string(const std::string& s);

/// Taps of a separable interpolation kernel at continuous index base + frac:
/// value = sum_b w[b] c[base + start + b]. For CubicBSpline, c are spline
/// coefficients (see bspline_prefilter), otherwise samples.
struct Taps {
  int start = 0;
  int count = 0;
  std::array<double, 4> w{};
};

inline Taps taps_for(Interp kind, double frac) {
  Taps t;
  if (kind == Interp::Linear) {
    t.start = 0;
    t.count = 2;
    t.w = {1.0 - frac, frac, 0.0, 0.0};
  } else {
    const double u = 1.0 - frac;
    t.start = -1;
    t.count = 4;
    t.w = {u * u * u / 6.0, 2.0 / 3.0 - frac * frac + 0.5 * frac * frac * frac,
           2.0 / 3.0 - u * u + 0.5 * u * u * u, frac * frac * frac / 6.0};
  }
  return t;
}

// Cubic B-spline interpolation coefficients along one axis of a row-major
// array, for a signal that is zero outside the array. Coefficients that would
// fall outside the array are dropped.
void bspline_prefilter(double* data, const std::vector<int>& dims, int axis);
void bspline_prefilter_all(double* data, const std::vector<int>& dims);

}  // namespace minkray
