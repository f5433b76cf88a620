#pragma once

#include <string>
#include <vector>

#include "minkray/tensor.hpp"

namespace minkray {

enum class SphereKind { Fibonacci, LatLong };

/// Quadrature on S^2; weights sum to 4 pi.
struct SphereSampling {
  SphereKind kind = SphereKind::Fibonacci;
  int n = 0;  // requested size (for lat-long: number of rings, 2n azimuths per ring)
  std::vector<Vec3> dirs;
  std::vector<double> weights;

  std::size_t size() const { return dirs.size(); }
};

// Golden-angle spiral, equal weights 4 pi / n.
SphereSampling fibonacci_sphere(int n);
// n_theta rings at midpoint colatitudes, 2 n_theta azimuths each; weights are
// exact ring-segment areas.
SphereSampling lat_long_sphere(int n_theta);
SphereSampling make_sphere(SphereKind kind, int n);

const char* to_string(SphereKind k);
SphereKind sphere_kind_from_string(const std::string& s);

}  // namespace minkray
