#include "minkray/sphere.hpp"

#include <cmath>
#include <numbers>

namespace minkray {

SphereSampling fibonacci_sphere(int n) {
  if (n < 1) throw DomainError("fibonacci_sphere: need at least one point");
  SphereSampling s;
  s.kind = SphereKind::Fibonacci;
  s.n = n;
  s.dirs.resize(n);
  s.weights.assign(n, 4.0 * std::numbers::pi / n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    s.dirs[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return s;
}

SphereSampling lat_long_sphere(int n_theta) {
  if (n_theta < 1) throw DomainError("lat_long_sphere: need at least one ring");
  SphereSampling s;
  s.kind = SphereKind::LatLong;
  s.n = n_theta;
  const int n_phi = 2 * n_theta;
  const double dth = std::numbers::pi / n_theta;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double th = (i + 0.5) * dth;
    const double area = dphi * (std::cos(i * dth) - std::cos((i + 1) * dth));
    for (int j = 0; j < n_phi; ++j) {
      const double ph = (j + 0.5) * dphi;
      s.dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
      s.weights.push_back(area);
    }
  }
  return s;
}

SphereSampling make_sphere(SphereKind kind, int n) {
  return kind == SphereKind::Fibonacci ? fibonacci_sphere(n) : lat_long_sphere(n);
}

const char* to_string(SphereKind k) { return k == SphereKind::Fibonacci ? "fibonacci" : "latlong"; }

SphereKind sphere_kind_from_string(const std::string& s) {
  if (s == "fibonacci") return SphereKind::Fibonacci;
  if (s == "latlong") return SphereKind::LatLong;
  throw FormatError("unknown sphere sampler '" + s + "'");
}

}  // namespace minkray
