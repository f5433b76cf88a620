#include "minkray/raytransform.hpp"

#include <algorithm>
#include <cmath>

#include "minkray/kernels.hpp"
#include "minkray/parallel.hpp"

namespace minkray {

// ---------------------------------------------------------------------------
// Line quadrature, regions, lattices

double LineQuadrature::resolved_s_max(const Grid4& field) const {
  if (s_max > 0.0) return s_max;
  const double m = 2.0 * field.spacing[0];
  return std::max(std::abs(field.lo(0) - m), std::abs(field.hi(0) + m));
}

std::vector<double> LineQuadrature::nodes(double s_max_eff) const {
  if (n_s < 2) throw DomainError("LineQuadrature: need at least two nodes");
  std::vector<double> s(n_s);
  const double ds = 2.0 * s_max_eff / (n_s - 1);
  for (int k = 0; k < n_s; ++k) s[k] = -s_max_eff + k * ds;
  return s;
}

std::vector<double> LineQuadrature::weights(double s_max_eff) const {
  std::vector<double> w(n_s, 2.0 * s_max_eff / (n_s - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

Region Region::box(const Vec3& lo, const Vec3& hi) {
  Region r;
  r.kind = Kind::Box;
  r.lo = lo;
  r.hi = hi;
  return r;
}

Region Region::ball(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw DomainError("Region::ball: radius must be positive");
  Region r;
  r.kind = Kind::Ball;
  r.center = center;
  r.radius = radius;
  return r;
}

bool Region::contains(const Vec3& y) const {
  if (kind == Kind::Box) {
    for (int d = 0; d < 3; ++d)
      if (y[d] < lo[d] || y[d] > hi[d]) return false;
    return true;
  }
  const double dx = y[0] - center[0], dy = y[1] - center[1], dz = y[2] - center[2];
  return dx * dx + dy * dy + dz * dz <= radius * radius;
}

std::pair<double, double> Region::distance_range(const Vec3& p) const {
  if (kind == Kind::Ball) {
    const double d = std::hypot(p[0] - center[0], p[1] - center[1], p[2] - center[2]);
    return {std::max(0.0, d - radius), d + radius};
  }
  double near2 = 0.0, far2 = 0.0;
  for (int d = 0; d < 3; ++d) {
    const double below = lo[d] - p[d], above = p[d] - hi[d];
    const double gap = std::max({below, above, 0.0});
    near2 += gap * gap;
    const double far = std::max(std::abs(p[d] - lo[d]), std::abs(p[d] - hi[d]));
    far2 += far * far;
  }
  return {std::sqrt(near2), std::sqrt(far2)};
}

RayGrid RayGrid::covering(const Grid4& field, const SphereSampling& sphere, const LineQuadrature& line) {
  field.validate();
  RayGrid g;
  g.sphere = sphere;
  g.line = line;
  const double reach = line.resolved_s_max(field);
  Vec3 lo, hi;
  for (int d = 0; d < 3; ++d) {
    const double h = field.spacing[d + 1];
    const int m = static_cast<int>(std::ceil((reach + 2.0 * h) / h - 1e-9));
    g.spacing[d] = h;
    g.origin[d] = field.origin[d + 1] - m * h;
    g.dims[d] = field.dims[d + 1] + 2 * m;
    lo[d] = g.origin[d];
    hi[d] = g.origin[d] + (g.dims[d] - 1) * h;
  }
  g.region = Region::box(lo, hi);
  return g;
}

RayGrid RayGrid::over(const Region& u, const std::array<double, 3>& spacing, const SphereSampling& sphere,
                      const LineQuadrature& line) {
  RayGrid g;
  g.region = u;
  g.sphere = sphere;
  g.line = line;
  g.spacing = spacing;
  for (int d = 0; d < 3; ++d) {
    if (!(spacing[d] > 0.0)) throw DomainError("RayGrid::over: spacing must be positive");
    const double lo = u.kind == Region::Kind::Box ? u.lo[d] : u.center[d] - u.radius;
    const double hi = u.kind == Region::Kind::Box ? u.hi[d] : u.center[d] + u.radius;
    g.origin[d] = lo;
    g.dims[d] = static_cast<int>(std::floor((hi - lo) / spacing[d] + 1e-9)) + 1;
  }
  return g;
}

Vec3 RayGrid::point(std::size_t idx) const {
  const int j2 = static_cast<int>(idx % dims[2]);
  const int j1 = static_cast<int>((idx / dims[2]) % dims[1]);
  const int j0 = static_cast<int>(idx / (static_cast<std::size_t>(dims[1]) * dims[2]));
  return {origin[0] + j0 * spacing[0], origin[1] + j1 * spacing[1], origin[2] + j2 * spacing[2]};
}

std::vector<std::uint8_t> RayGrid::mask() const {
  std::vector<std::uint8_t> m(lattice_size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = region.contains(point(i)) ? 1 : 0;
  return m;
}

std::size_t RayGrid::crossing_count() const {
  const auto m = mask();
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1));
}

void RayGrid::validate() const {
  for (int d = 0; d < 3; ++d) {
    if (dims[d] <= 0) throw DomainError("RayGrid: lattice dims must be positive");
    if (!(spacing[d] > 0.0)) throw DomainError("RayGrid: lattice spacing must be positive");
  }
  if (sphere.size() == 0) throw DomainError("RayGrid: empty sphere sampling");
  if (line.n_s < 2) throw DomainError("RayGrid: need at least two line nodes");
}

double RayData::norm2() const { return raydata_dot(*this, *this); }

double raydata_dot(const RayData& a, const RayData& b) {
  if (a.values.size() != b.values.size()) throw DomainError("raydata_dot: ray grids differ");
  const std::size_t n = a.grid.lattice_size();
  const double cell = a.grid.spacing[0] * a.grid.spacing[1] * a.grid.spacing[2];
  double s = 0.0;
  for (std::size_t v = 0; v < a.grid.sphere.size(); ++v) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += a.values[v * n + i] * b.values[v * n + i];
    s += a.grid.sphere.weights[v] * d;
  }
  return s * cell;
}

// ---------------------------------------------------------------------------
// Constant-offset separable resampling of a 3D block.

namespace {

struct Range {
  int lo = 0, hi = 0;  // half-open
  int size() const { return hi - lo; }
  bool empty() const { return hi <= lo; }
};

struct AxisShift {
  Taps taps;
  int first = 0;  // source index of tap 0 for destination index 0
  Range dst;      // destination indices touched by at least one tap
  Range src;      // source indices read
};

AxisShift plan_axis(double off, Interp interp, int n_src, int n_dst) {
  AxisShift a;
  const double base = std::floor(off);
  a.taps = taps_for(interp, off - base);
  a.first = static_cast<int>(base) + a.taps.start;
  a.dst.lo = std::max(0, -a.first - (a.taps.count - 1));
  a.dst.hi = std::min(n_dst, n_src - a.first);
  a.src.lo = std::max(0, a.dst.lo + a.first);
  a.src.hi = std::min(n_src, a.dst.hi - 1 + a.first + a.taps.count);
  return a;
}

struct ShiftWorkspace {
  std::vector<double> tmp1, tmp2, row;
};

// dst(j) += weight * sum_taps src(j + off), every axis separable; src is zero
// outside its box.
void shift_accumulate(const double* src, const std::array<int, 3>& n, double* dst, const std::array<int, 3>& m,
                      const std::array<double, 3>& off, Interp interp, double weight, ShiftWorkspace& ws,
                      const kernels::Table& k) {
  AxisShift ax[3];
  for (int d = 0; d < 3; ++d) {
    ax[d] = plan_axis(off[d], interp, n[d], m[d]);
    if (ax[d].dst.empty() || ax[d].src.empty()) return;
  }
  const Range r0 = ax[0].src, r1 = ax[1].src;
  const Range j0 = ax[0].dst, j1 = ax[1].dst, j2 = ax[2].dst;
  const int len = j2.size();

  // Pass 1: contiguous axis.
  ws.tmp1.assign(static_cast<std::size_t>(r0.size()) * r1.size() * len, 0.0);
  const int pad = 4;
  const int src_from = j2.lo + ax[2].first;
  const int src_to = j2.hi - 1 + ax[2].first + ax[2].taps.count;  // exclusive
  const bool inside = src_from >= 0 && src_to <= n[2];
  if (!inside) ws.row.assign(n[2] + 2 * pad, 0.0);
  for (int i0 = r0.lo; i0 < r0.hi; ++i0)
    for (int i1 = r1.lo; i1 < r1.hi; ++i1) {
      const double* s = src + (static_cast<std::size_t>(i0) * n[1] + i1) * n[2];
      double* t = ws.tmp1.data() + (static_cast<std::size_t>(i0 - r0.lo) * r1.size() + (i1 - r1.lo)) * len;
      if (inside) {
        k.fir(t, s + src_from, ax[2].taps.w.data(), ax[2].taps.count, len);
      } else {
        std::copy(s, s + n[2], ws.row.begin() + pad);
        k.fir(t, ws.row.data() + pad + src_from, ax[2].taps.w.data(), ax[2].taps.count, len);
      }
    }

  // Pass 2: middle axis.
  ws.tmp2.assign(static_cast<std::size_t>(r0.size()) * j1.size() * len, 0.0);
  for (int i0 = r0.lo; i0 < r0.hi; ++i0)
    for (int jj = j1.lo; jj < j1.hi; ++jj) {
      double* t2 = ws.tmp2.data() + (static_cast<std::size_t>(i0 - r0.lo) * j1.size() + (jj - j1.lo)) * len;
      for (int b = 0; b < ax[1].taps.count; ++b) {
        const int i1 = jj + ax[1].first + b;
        if (i1 < r1.lo || i1 >= r1.hi) continue;
        const double* t1 = ws.tmp1.data() + (static_cast<std::size_t>(i0 - r0.lo) * r1.size() + (i1 - r1.lo)) * len;
        k.axpy(t2, t1, ax[1].taps.w[b], len);
      }
    }

  // Pass 3: slowest axis, into the destination.
  for (int jj0 = j0.lo; jj0 < j0.hi; ++jj0)
    for (int b = 0; b < ax[0].taps.count; ++b) {
      const int i0 = jj0 + ax[0].first + b;
      if (i0 < r0.lo || i0 >= r0.hi) continue;
      const double w = weight * ax[0].taps.w[b];
      for (int jj1 = j1.lo; jj1 < j1.hi; ++jj1) {
        double* d = dst + (static_cast<std::size_t>(jj0) * m[1] + jj1) * m[2] + j2.lo;
        const double* t2 = ws.tmp2.data() + (static_cast<std::size_t>(i0 - r0.lo) * j1.size() + (jj1 - j1.lo)) * len;
        k.axpy(d, t2, w, len);
      }
    }
}

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

bool lattice_matches(const Grid4& g, const RayGrid& r) {
  for (int d = 0; d < 3; ++d)
    if (!same_spacing(g.spacing[d + 1], r.spacing[d])) return false;
  return true;
}

// Interpolation source for the field: samples, or spline coefficients.
Sym2Field interpolation_source(const Sym2Field& f, Interp interp) {
  if (interp == Interp::Linear) return f;
  Sym2Field c = f;
  const std::vector<int> dims(f.grid().dims.begin(), f.grid().dims.end());
  for (int p = 0; p < 10; ++p) bspline_prefilter_all(c.component(p).data(), dims);
  return c;
}

// Per-lattice-point weight: region mask times chi.
std::vector<double> lattice_weights(const RayGrid& rays, const SpatialWeight& chi) {
  const auto mask = rays.mask();
  std::vector<double> w(mask.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mask[i] ? (chi ? chi(rays.point(i)) : 1.0) : 0.0;
  return w;
}

// Everything forward needs for one direction at a time.
struct ForwardPlan {
  const Sym2Field* coef = nullptr;
  Interp interp = Interp::Linear;
  std::vector<double> s, ws;
  std::vector<double> yweight;
  const RayGrid* rays = nullptr;
};

struct ForwardWorkspace {
  std::vector<double> contracted, slice;
  ShiftWorkspace shift;
};

void contract_field(const Sym2Field& coef, const Vec3& v, std::vector<double>& out, const kernels::Table& k) {
  const auto t = contraction_weights(light_tangent(v));
  const std::size_t n = coef.points();
  out.assign(n, 0.0);
  for (int p = 0; p < 10; ++p)
    if (t[p] != 0.0) k.axpy(out.data(), coef.component(p).data(), t[p], n);
}

// Time blend of the contracted field at time s into `slice`; false if all taps miss.
bool time_slice(const Grid4& g, const std::vector<double>& contracted, double s, Interp interp,
                std::vector<double>& slice, const kernels::Table& k) {
  const double tau = (s - g.origin[0]) / g.spacing[0];
  const double base = std::floor(tau);
  const Taps t = taps_for(interp, tau - base);
  const int first = static_cast<int>(base) + t.start;
  const std::size_t ns = g.slice_size();
  bool any = false;
  for (int b = 0; b < t.count; ++b) {
    const int i0 = first + b;
    if (i0 < 0 || i0 >= g.dims[0] || t.w[b] == 0.0) continue;
    if (!any) slice.assign(ns, 0.0);
    any = true;
    k.axpy(slice.data(), contracted.data() + i0 * ns, t.w[b], ns);
  }
  return any;
}

void forward_direction(const ForwardPlan& plan, std::size_t iv, double* out, ForwardWorkspace& ws,
                       const kernels::Table& k) {
  const Grid4& g = plan.coef->grid();
  const RayGrid& rays = *plan.rays;
  const Vec3& v = rays.sphere.dirs[iv];
  contract_field(*plan.coef, v, ws.contracted, k);
  std::fill(out, out + rays.lattice_size(), 0.0);
  const std::array<int, 3> n{g.dims[1], g.dims[2], g.dims[3]};
  for (std::size_t q = 0; q < plan.s.size(); ++q) {
    const double s = plan.s[q];
    if (!time_slice(g, ws.contracted, s, plan.interp, ws.slice, k)) continue;
    std::array<double, 3> off;
    for (int d = 0; d < 3; ++d) off[d] = (rays.origin[d] + s * v[d] - g.origin[d + 1]) / g.spacing[d + 1];
    shift_accumulate(ws.slice.data(), n, out, rays.dims, off, plan.interp, plan.ws[q], ws.shift, k);
  }
  for (std::size_t i = 0; i < rays.lattice_size(); ++i) out[i] *= plan.yweight[i];
}

ForwardPlan make_forward_plan(const Sym2Field& coef, const RayGrid& rays, const TransformOptions& opt) {
  ForwardPlan p;
  p.coef = &coef;
  p.interp = opt.interp;
  p.rays = &rays;
  const double smax = rays.line.resolved_s_max(coef.grid());
  p.s = rays.line.nodes(smax);
  p.ws = rays.line.weights(smax);
  p.yweight = lattice_weights(rays, opt.chi);
  return p;
}

// Adjoint pieces: prepared ray data (chi u, spline coefficients if needed).
std::vector<double> prepare_adjoint_source(const RayData& u, const TransformOptions& opt, std::size_t v_begin,
                                           std::size_t v_end) {
  const RayGrid& rg = u.grid;
  const std::size_t n = rg.lattice_size();
  const auto yw = lattice_weights(rg, opt.chi);
  std::vector<double> src((v_end - v_begin) * n);
  const std::vector<int> dims(rg.dims.begin(), rg.dims.end());
  for (std::size_t v = v_begin; v < v_end; ++v) {
    double* dst = src.data() + (v - v_begin) * n;
    const double* in = u.direction(v);
    for (std::size_t i = 0; i < n; ++i) dst[i] = in[i] * yw[i];
    if (opt.interp == Interp::CubicBSpline) bspline_prefilter_all(dst, dims);
  }
  return src;
}

// out(i0 slice) += sum_{v in [vb, ve)} w_v theta theta U_v(x' - t v)
void adjoint_slices(const RayGrid& rg, const std::vector<double>& src, std::size_t vb, std::size_t ve,
                    Sym2Field& out, Interp interp) {
  const Grid4& g = out.grid();
  const std::size_t ns = g.slice_size();
  const std::size_t n = rg.lattice_size();
  const std::array<int, 3> m{g.dims[1], g.dims[2], g.dims[3]};
  std::array<double*, 10> comp;
  for (int p = 0; p < 10; ++p) comp[p] = out.component(p).data();
  parallel_for(static_cast<std::size_t>(g.dims[0]), [&](std::size_t b, std::size_t e) {
    const kernels::Table& k = kernels::active();
    ShiftWorkspace ws;
    std::vector<double> acc(ns);
    for (std::size_t i0 = b; i0 < e; ++i0) {
      const double t = g.origin[0] + static_cast<double>(i0) * g.spacing[0];
      for (std::size_t v = vb; v < ve; ++v) {
        const Vec3& dir = rg.sphere.dirs[v];
        std::array<double, 3> off;
        for (int d = 0; d < 3; ++d) off[d] = (g.origin[d + 1] - t * dir[d] - rg.origin[d]) / rg.spacing[d];
        std::fill(acc.begin(), acc.end(), 0.0);
        shift_accumulate(src.data() + (v - vb) * n, rg.dims, acc.data(), m, off, interp, 1.0, ws, k);
        const auto tw = contraction_weights(light_tangent(dir));
        for (int p = 0; p < 10; ++p) {
          // theta^j theta^k per packed entry, without the Frobenius multiplicity
          const double c = rg.sphere.weights[v] * tw[p] / kSym2Multiplicity[p];
          k.axpy(comp[p] + i0 * ns, acc.data(), c, ns);
        }
      }
    }
  });
}

// Field value at an arbitrary point by tensor-product interpolation.
Sym2 sample_field(const Sym2Field& coef, const std::array<double, 4>& x, Interp interp) {
  const Grid4& g = coef.grid();
  Taps t[4];
  int first[4];
  for (int d = 0; d < 4; ++d) {
    const double c = (x[d] - g.origin[d]) / g.spacing[d];
    const double base = std::floor(c);
    t[d] = taps_for(interp, c - base);
    first[d] = static_cast<int>(base) + t[d].start;
  }
  Sym2 out;
  for (int a = 0; a < t[0].count; ++a) {
    const int i0 = first[0] + a;
    if (i0 < 0 || i0 >= g.dims[0]) continue;
    for (int b = 0; b < t[1].count; ++b) {
      const int i1 = first[1] + b;
      if (i1 < 0 || i1 >= g.dims[1]) continue;
      for (int c = 0; c < t[2].count; ++c) {
        const int i2 = first[2] + c;
        if (i2 < 0 || i2 >= g.dims[2]) continue;
        for (int d = 0; d < t[3].count; ++d) {
          const int i3 = first[3] + d;
          if (i3 < 0 || i3 >= g.dims[3]) continue;
          const double w = t[0].w[a] * t[1].w[b] * t[2].w[c] * t[3].w[d];
          const std::size_t idx = g.linear(i0, i1, i2, i3);
          for (int p = 0; p < 10; ++p) out[p] += w * coef.component(p)[idx];
        }
      }
    }
  }
  return out;
}

double sample_lattice(const double* src, const RayGrid& rg, const Vec3& y, Interp interp) {
  Taps t[3];
  int first[3];
  for (int d = 0; d < 3; ++d) {
    const double c = (y[d] - rg.origin[d]) / rg.spacing[d];
    const double base = std::floor(c);
    t[d] = taps_for(interp, c - base);
    first[d] = static_cast<int>(base) + t[d].start;
  }
  double out = 0.0;
  for (int a = 0; a < t[0].count; ++a) {
    const int i0 = first[0] + a;
    if (i0 < 0 || i0 >= rg.dims[0]) continue;
    for (int b = 0; b < t[1].count; ++b) {
      const int i1 = first[1] + b;
      if (i1 < 0 || i1 >= rg.dims[1]) continue;
      for (int c = 0; c < t[2].count; ++c) {
        const int i2 = first[2] + c;
        if (i2 < 0 || i2 >= rg.dims[2]) continue;
        out += t[0].w[a] * t[1].w[b] * t[2].w[c] * src[(static_cast<std::size_t>(i0) * rg.dims[1] + i1) * rg.dims[2] + i2];
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Forward

RayData forward(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt) {
  f.require(FieldDomain::Position, "forward");
  rays.validate();
  if (!lattice_matches(f.grid(), rays)) return forward_reference(f, rays, opt);
  const Sym2Field coef = interpolation_source(f, opt.interp);
  const ForwardPlan plan = make_forward_plan(coef, rays, opt);
  RayData out(rays);
  parallel_for(rays.sphere.size(), [&](std::size_t b, std::size_t e) {
    const kernels::Table& k = kernels::active();
    ForwardWorkspace ws;
    for (std::size_t iv = b; iv < e; ++iv) forward_direction(plan, iv, out.direction(iv), ws, k);
  });
  return out;
}

double forward_analytic(const AnalyticSym2& f, const LightRay& ray, const LineQuadrature& line, double s_max) {
  const auto s = line.nodes(s_max);
  const auto w = line.weights(s_max);
  const Vec4 th = ray.tangent();
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) sum += w[k] * contract(f(ray.at(s[k])), th);
  return sum;
}

std::vector<double> forward_rays(const Sym2Field& f, const std::vector<LightRay>& rays, const LineQuadrature& line,
                                 Interp interp) {
  f.require(FieldDomain::Position, "forward_rays");
  const Sym2Field coef = interpolation_source(f, interp);
  const double smax = line.resolved_s_max(f.grid());
  const auto s = line.nodes(smax);
  const auto w = line.weights(smax);
  std::vector<double> out(rays.size());
  parallel_for(rays.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      const Vec4 th = rays[r].tangent();
      double sum = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) sum += w[k] * contract(sample_field(coef, rays[r].at(s[k]), interp), th);
      out[r] = sum;
    }
  });
  return out;
}

RayData forward_reference(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt) {
  f.require(FieldDomain::Position, "forward_reference");
  rays.validate();
  const auto yw = lattice_weights(rays, opt.chi);
  std::vector<LightRay> list;
  std::vector<std::size_t> where;
  for (std::size_t iv = 0; iv < rays.sphere.size(); ++iv)
    for (std::size_t i = 0; i < rays.lattice_size(); ++i)
      if (yw[i] != 0.0) {
        list.push_back({rays.point(i), rays.sphere.dirs[iv]});
        where.push_back(iv * rays.lattice_size() + i);
      }
  LineQuadrature line = rays.line;
  const auto vals = forward_rays(f, list, line, opt.interp);
  RayData out(rays);
  for (std::size_t r = 0; r < list.size(); ++r) out.values[where[r]] = vals[r] * yw[where[r] % rays.lattice_size()];
  return out;
}

// ---------------------------------------------------------------------------
// Adjoint

Sym2Field adjoint(const RayData& u, const Grid4& grid, const TransformOptions& opt) {
  u.grid.validate();
  grid.validate();
  if (u.values.size() != u.grid.lattice_size() * u.grid.sphere.size())
    throw DomainError("adjoint: ray data does not match its ray grid");
  if (!lattice_matches(grid, u.grid)) return adjoint_reference(u, grid, opt);
  Sym2Field out(grid);
  const std::size_t nv = u.grid.sphere.size();
  const std::size_t block = 64;
  for (std::size_t vb = 0; vb < nv; vb += block) {
    const std::size_t ve = std::min(nv, vb + block);
    const auto src = prepare_adjoint_source(u, opt, vb, ve);
    adjoint_slices(u.grid, src, vb, ve, out, opt.interp);
  }
  return out;
}

Sym2Field adjoint_reference(const RayData& u, const Grid4& grid, const TransformOptions& opt) {
  const RayGrid& rg = u.grid;
  const auto src = prepare_adjoint_source(u, opt, 0, rg.sphere.size());
  const std::size_t n = rg.lattice_size();
  Sym2Field out(grid);
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t idx = b; idx < e; ++idx) {
      std::size_t r = idx;
      const int i3 = static_cast<int>(r % grid.dims[3]);
      r /= grid.dims[3];
      const int i2 = static_cast<int>(r % grid.dims[2]);
      r /= grid.dims[2];
      const int i1 = static_cast<int>(r % grid.dims[1]);
      const int i0 = static_cast<int>(r / grid.dims[1]);
      const auto x = grid.point(i0, i1, i2, i3);
      Sym2 acc;
      for (std::size_t v = 0; v < rg.sphere.size(); ++v) {
        const Vec3& dir = rg.sphere.dirs[v];
        const Vec3 y{x[1] - x[0] * dir[0], x[2] - x[0] * dir[1], x[3] - x[0] * dir[2]};
        const double val = rg.sphere.weights[v] * sample_lattice(src.data() + v * n, rg, y, opt.interp);
        const Vec4 th = light_tangent(dir);
        for (int p = 0; p < 10; ++p) {
          const auto [j, k] = Sym2::indices(p);
          acc[p] += val * th[j] * th[k];
        }
      }
      out.set(idx, acc);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Normal operator

namespace {

Sym2Field normal_adjoint_forward(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt) {
  const Sym2Field coef = interpolation_source(f, opt.interp);
  const ForwardPlan plan = make_forward_plan(coef, rays, opt);
  Sym2Field out(f.grid());
  const std::size_t nv = rays.sphere.size();
  const std::size_t n = rays.lattice_size();
  const std::size_t block = 32;
  RayData part(rays);
  for (std::size_t vb = 0; vb < nv; vb += block) {
    const std::size_t ve = std::min(nv, vb + block);
    parallel_for(ve - vb, [&](std::size_t b, std::size_t e) {
      const kernels::Table& k = kernels::active();
      ForwardWorkspace ws;
      for (std::size_t i = b; i < e; ++i) forward_direction(plan, vb + i, part.direction(vb + i), ws, k);
    });
    const auto src = prepare_adjoint_source(part, opt, vb, ve);
    adjoint_slices(rays, src, vb, ve, out, opt.interp);
  }
  (void)n;
  return out;
}

Sym2Field normal_direct(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt) {
  const Grid4& g = f.grid();
  const Sym2Field coef = interpolation_source(f, opt.interp);
  const double smax = rays.line.resolved_s_max(g);
  const auto r = rays.line.nodes(smax);
  const auto rw = rays.line.weights(smax);
  const std::size_t ns = g.slice_size();
  const std::array<int, 3> n{g.dims[1], g.dims[2], g.dims[3]};
  Sym2Field out(g);
  std::array<double*, 10> comp;
  for (int p = 0; p < 10; ++p) comp[p] = out.component(p).data();
  std::vector<double> contracted;
  std::vector<std::vector<double>> slices(r.size());
  std::vector<char> live(r.size());
  for (std::size_t iv = 0; iv < rays.sphere.size(); ++iv) {
    const Vec3& v = rays.sphere.dirs[iv];
    const kernels::Table& k0 = kernels::active();
    contract_field(coef, v, contracted, k0);
    for (std::size_t q = 0; q < r.size(); ++q) live[q] = time_slice(g, contracted, r[q], opt.interp, slices[q], k0);
    const auto tw = contraction_weights(light_tangent(v));
    parallel_for(static_cast<std::size_t>(g.dims[0]), [&](std::size_t b, std::size_t e) {
      const kernels::Table& k = kernels::active();
      ShiftWorkspace ws;
      std::vector<double> acc(ns);
      for (std::size_t i0 = b; i0 < e; ++i0) {
        const double t = g.origin[0] + static_cast<double>(i0) * g.spacing[0];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t q = 0; q < r.size(); ++q) {
          if (!live[q]) continue;
          std::array<double, 3> off;
          for (int d = 0; d < 3; ++d) off[d] = (r[q] - t) * v[d] / g.spacing[d + 1];
          shift_accumulate(slices[q].data(), n, acc.data(), n, off, opt.interp, rw[q], ws, k);
        }
        if (opt.chi) {
          std::size_t idx = 0;
          for (int i1 = 0; i1 < n[0]; ++i1)
            for (int i2 = 0; i2 < n[1]; ++i2)
              for (int i3 = 0; i3 < n[2]; ++i3, ++idx) {
                const auto x = g.point(static_cast<int>(i0), i1, i2, i3);
                const double c = opt.chi({x[1] - t * v[0], x[2] - t * v[1], x[3] - t * v[2]});
                acc[idx] *= c * c;
              }
        }
        for (int p = 0; p < 10; ++p)
          k.axpy(comp[p] + i0 * ns, acc.data(), rays.sphere.weights[iv] * tw[p] / kSym2Multiplicity[p], ns);
      }
    });
  }
  return out;
}

}  // namespace

Sym2Field normal_geometric(const Sym2Field& f, const RayGrid& rays, const TransformOptions& opt, NormalPath path) {
  f.require(FieldDomain::Position, "normal_geometric");
  rays.validate();
  if (path == NormalPath::Direct) return normal_direct(f, rays, opt);
  if (!lattice_matches(f.grid(), rays)) return adjoint(forward(f, rays, opt), f.grid(), opt);
  return normal_adjoint_forward(f, rays, opt);
}

// ---------------------------------------------------------------------------
// Geometry

bool in_LU(const std::array<double, 4>& p, const Region& u) {
  const auto [near, far] = u.distance_range({p[1], p[2], p[3]});
  const double r = std::abs(p[0]);
  return near <= r && r <= far;
}

FlowoutLine flowout_line(const std::array<double, 4>& x, const Covector& xi, double eps) {
  const double n2 = xi.euclid_norm2();
  if (n2 == 0.0 || std::abs(minkowski_q(xi)) > eps * n2)
    throw DomainError("flowout_line: covector is not light-like");
  FlowoutLine l;
  l.x = x;
  l.direction = {-xi[0], xi[1], xi[2], xi[3]};
  return l;
}

}  // namespace minkray
