#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minkray/field.hpp"
#include "minkray/interp.hpp"
#include "minkray/sphere.hpp"
#include "minkray/symbol.hpp"

namespace minkray {

/// gamma(s) = (s, y + s v), tangent theta = (1, v).
struct LightRay {
  Vec3 y{};
  Vec3 v{};

  Vec4 tangent() const { return light_tangent(v); }
  std::array<double, 4> at(double s) const { return {s, y[0] + s * v[0], y[1] + s * v[1], y[2] + s * v[2]}; }
};

/// Trapezoid rule on [-s_max, s_max]. s_max <= 0 means "derive from the field
/// grid": the time extent of the grid plus two cells, so every ray has left the
/// interpolated support at both ends.
struct LineQuadrature {
  int n_s = 257;
  double s_max = 0.0;

  double resolved_s_max(const Grid4& field) const;
  std::vector<double> nodes(double s_max_eff) const;
  std::vector<double> weights(double s_max_eff) const;
};

/// Region U of the t = 0 slice: an axis-aligned box or a ball.
struct Region {
  enum class Kind { Box, Ball } kind = Kind::Box;
  Vec3 lo{-1, -1, -1}, hi{1, 1, 1};  // box
  Vec3 center{0, 0, 0};
  double radius = 1.0;  // ball

  static Region box(const Vec3& lo, const Vec3& hi);
  static Region ball(const Vec3& center, double radius);
  bool contains(const Vec3& y) const;
  // min and max of |p - y| over y in U
  std::pair<double, double> distance_range(const Vec3& p) const;
};

/// Rays crossing t = 0 at lattice points y inside U, one per sphere direction.
struct RayGrid {
  Region region;
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> spacing{1, 1, 1};
  std::array<double, 3> origin{0, 0, 0};
  SphereSampling sphere;
  LineQuadrature line;

  // Lattice with the spatial spacing of `field`, covering every crossing point
  // of a ray through the field box (U is that lattice's bounding box).
  static RayGrid covering(const Grid4& field, const SphereSampling& sphere, const LineQuadrature& line);
  // Lattice with the given spacing covering U.
  static RayGrid over(const Region& u, const std::array<double, 3>& spacing, const SphereSampling& sphere,
                      const LineQuadrature& line);

  std::size_t lattice_size() const { return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]; }
  Vec3 point(std::size_t lattice_index) const;
  std::vector<std::uint8_t> mask() const;  // 1 where the lattice point lies in U
  std::size_t crossing_count() const;      // N_y
  std::size_t ray_count() const { return crossing_count() * sphere.size(); }
  void validate() const;
};

/// Transform values, stored per direction over the full lattice (0 outside U).
struct RayData {
  RayGrid grid;
  std::vector<double> values;  // [i_v][lattice index]
  std::string field_id;

  RayData() = default;
  explicit RayData(const RayGrid& g) : grid(g), values(g.sphere.size() * g.lattice_size(), 0.0) {}

  double* direction(std::size_t iv) { return values.data() + iv * grid.lattice_size(); }
  const double* direction(std::size_t iv) const { return values.data() + iv * grid.lattice_size(); }
  double at(std::size_t lattice_index, std::size_t iv) const { return direction(iv)[lattice_index]; }
  double norm2() const;  // sum_v w_v sum_y h^3 u^2
};

double raydata_dot(const RayData& a, const RayData& b);  // same measure as norm2

struct TransformOptions {
  Interp interp = Interp::Linear;
  SpatialWeight chi;  // weight on U; empty means 1
};

// chi(y) L f(y, v) on every ray of the grid.
RayData forward(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt = {});

// Transform of an analytic Sym2-valued function along the given rays.
using AnalyticSym2 = std::function<Sym2(const std::array<double, 4>&)>;
double forward_analytic(const AnalyticSym2& f, const LightRay& ray, const LineQuadrature& line, double s_max);

// Per-sample evaluation along arbitrary rays: tensor-product interpolation at
// each quadrature node. Reference path, also used for off-lattice rays.
std::vector<double> forward_rays(const Sym2Field& f, const std::vector<LightRay>& rays, const LineQuadrature& line,
                                 Interp interp);
RayData forward_reference(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt = {});

// (chi L)^t u = L^t(chi u) on `grid`: sum_v w_v chi u(x' - x0 v, v) theta theta,
// u interpolated on the crossing lattice and taken as 0 outside U.
Sym2Field adjoint(const RayData& u, const Grid4& grid, const TransformOptions& opt = {});
Sym2Field adjoint_reference(const RayData& u, const Grid4& grid, const TransformOptions& opt = {});

enum class NormalPath { AdjointForward, Direct };

// (chi L)^t (chi L) f. AdjointForward streams forward and adjoint per block of
// directions; Direct integrates along the line through every output point.
Sym2Field normal_geometric(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt = {},
                           NormalPath path = NormalPath::AdjointForward);

// p in L(U): some y in U is joined to p by a light ray, i.e. |p' - y| = |p0|.
bool in_LU(const std::array<double, 4>& p, const Region& u);

/// Projection of the null bicharacteristic through (x, xi): t -> x + t (-xi0, xi').
struct FlowoutLine {
  std::array<double, 4> x{};
  std::array<double, 4> direction{};
  std::array<double, 4> at(double t) const {
    return {x[0] + t * direction[0], x[1] + t * direction[1], x[2] + t * direction[2], x[3] + t * direction[3]};
  }
};
FlowoutLine flowout_line(const std::array<double, 4>& x, const Covector& xi, double eps = 1e-9);

}  // namespace minkray
