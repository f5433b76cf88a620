#include "minkray/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "minkray/fft.hpp"
#include "minkray/kernels.hpp"
#include "minkray/parallel.hpp"

namespace minkray {

double FrequencyGrid::axis(int d, int k) const {
  return 2.0 * std::numbers::pi * signed_frequency(k, grid.dims[d]) / (grid.dims[d] * grid.spacing[d]);
}

Covector FrequencyGrid::eta(int k0, int k1, int k2, int k3) const {
  return Covector{{axis(0, k0), axis(1, k1), axis(2, k2), axis(3, k3)}};
}

const char* to_string(MultiplierKind k) {
  switch (k) {
    case MultiplierKind::Identity: return "identity";
    case MultiplierKind::Normal: return "normal";
    case MultiplierKind::NormalTruncated: return "normal-truncated";
    case MultiplierKind::Parametrix: return "parametrix";
    case MultiplierKind::Reference: return "reference";
    case MultiplierKind::Cutoff: return "cutoff";
    case MultiplierKind::TimeCutoff: return "time-cutoff";
    case MultiplierKind::GaugeProjector: return "gauge-projector";
  }
  return "?";
}

MultiplierKind multiplier_kind_from_string(const std::string& s) {
  for (auto k : {MultiplierKind::Identity, MultiplierKind::Normal, MultiplierKind::NormalTruncated,
                 MultiplierKind::Parametrix,
                 MultiplierKind::Reference, MultiplierKind::Cutoff, MultiplierKind::TimeCutoff,
                 MultiplierKind::GaugeProjector})
    if (s == to_string(k)) return k;
  throw DomainError("unknown multiplier kind '" + s + "'");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Multiplier of L^t L: the line integral contributes 2 pi delta(eta0 + v.eta'),
// so this is 2 pi a(eta). The light cone takes the mean of the one-sided
// limits: 0 from the time-like side, 2 pi (2 pi/|eta'|) theta* theta* from the
// space-like side.
Mat10 normal_symbol(const Covector& eta, int n_phi) {
  try {
    return kTwoPi * symbol_a(eta, n_phi).mandel();
  } catch (const LightLikeEvaluationError&) {
    const double s2 = eta[1] * eta[1] + eta[2] * eta[2] + eta[3] * eta[3];
    const double k = -eta[0] / s2;
    const Vec4 th{1.0, k * eta[1], k * eta[2], k * eta[3]};
    Sym2 t;
    for (int p = 0; p < 10; ++p) {
      const auto [i, j] = Sym2::indices(p);
      t[p] = th[i] * th[j];
    }
    const Vec10 m = to_mandel(t);
    return (kTwoPi * std::numbers::pi / std::sqrt(s2)) * m * m.transpose();
  }
}

Mat10 parametrix_symbol(const Covector& eta, const MultiplierSpec& spec, bool times_a) {
  const double t = spec.cutoff.taper(eta);
  if (t == 0.0) return Mat10::Zero();
  SymbolOperator a;
  try {
    a = symbol_a(eta, spec.n_phi);
  } catch (const LightLikeEvaluationError&) {
    return Mat10::Zero();
  }
  if (a.is_zero()) return Mat10::Zero();
  const Mat10 b = pinv_b(a, spec.cutoff).mandel();
  if (!times_a) return (t / kTwoPi) * b;
  const Mat10 ba = b * a.mandel();
  return t * 0.5 * (ba + ba.transpose());
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;
};

GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p1 = z, p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

const GaussLegendre& gauss_legendre_cached(int n) {
  thread_local std::map<int, GaussLegendre> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

Mat10 truncated_normal_symbol(const Covector& eta, double R) {
  if (!(R > 0.0)) throw DomainError("truncated_normal_symbol: R must be positive");
  const double s = std::sqrt(eta[1] * eta[1] + eta[2] * eta[2] + eta[3] * eta[3]);
  Vec3 e{0, 0, 1};
  if (s > 0.0) e = {eta[1] / s, eta[2] / s, eta[3] / s};
  // orthonormal e1, e2 completing e
  const int k = std::abs(e[0]) <= std::abs(e[1]) && std::abs(e[0]) <= std::abs(e[2]) ? 0 : (std::abs(e[1]) <= std::abs(e[2]) ? 1 : 2);
  Vec3 a{0, 0, 0};
  a[k] = 1.0;
  const double ad = a[0] * e[0] + a[1] * e[1] + a[2] * e[2];
  Vec3 e1{a[0] - ad * e[0], a[1] - ad * e[1], a[2] - ad * e[2]};
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (double& c : e1) c /= n1;
  const Vec3 e2{e[1] * e1[2] - e[2] * e1[1], e[2] * e1[0] - e[0] * e1[2], e[0] * e1[1] - e[1] * e1[0]};

  // Phi(c) = int_0^{2 pi} theta theta^T dphi is a degree-4 polynomial in c =
  // v.e; sample it at 5 Chebyshev points and integrate the Lagrange basis
  // against the oscillatory weight 2 sin(R sigma)/sigma by Gauss-Legendre.
  constexpr int kNodes = 5, kPhi = 9;
  std::array<double, kNodes> cn;
  for (int j = 0; j < kNodes; ++j) cn[j] = std::cos(std::numbers::pi * (j + 0.5) / kNodes);
  const int n = 24 + static_cast<int>(std::ceil(R * (s + std::abs(eta[0]))));
  const GaussLegendre& gl = gauss_legendre_cached(n);
  std::array<double, kNodes> mom{};
  for (int i = 0; i < n; ++i) {
    const double c = gl.x[i];
    const double sig = eta[0] + s * c;
    const double g = std::abs(R * sig) < 1e-8 ? 2.0 * R : 2.0 * std::sin(R * sig) / sig;
    for (int j = 0; j < kNodes; ++j) {
      double l = 1.0;
      for (int m = 0; m < kNodes; ++m)
        if (m != j) l *= (c - cn[m]) / (cn[j] - cn[m]);
      mom[j] += gl.w[i] * g * l;
    }
  }
  Mat10 out = Mat10::Zero();
  for (int j = 0; j < kNodes; ++j) {
    const double c = cn[j], r = std::sqrt(1.0 - c * c);
    Mat10 phi = Mat10::Zero();
    for (int q = 0; q < kPhi; ++q) {
      const double ph = 2.0 * std::numbers::pi * q / kPhi;
      const double cp = r * std::cos(ph), sp = r * std::sin(ph);
      const Vec4 th{1.0, c * e[0] + cp * e1[0] + sp * e2[0], c * e[1] + cp * e1[1] + sp * e2[1],
                    c * e[2] + cp * e1[2] + sp * e2[2]};
      Vec10 t;
      for (int p = 0; p < 10; ++p) {
        const auto [i0, i1] = Sym2::indices(p);
        t[p] = kMandelScale[p] * th[i0] * th[i1];
      }
      phi.selfadjointView<Eigen::Lower>().rankUpdate(t, 1.0);
    }
    out += (mom[j] * 2.0 * std::numbers::pi / kPhi) * phi.selfadjointView<Eigen::Lower>().toDenseMatrix();
  }
  return out;
}

Mat10 multiplier_matrix(const Covector& eta, const MultiplierSpec& spec) {
  if (spec.kind == MultiplierKind::Identity) return Mat10::Identity();
  // The truncated kernel is integrable, so its transform is finite at DC.
  if (spec.kind == MultiplierKind::NormalTruncated) return truncated_normal_symbol(eta, spec.truncation);
  if (eta.euclid_norm2() == 0.0) return Mat10::Zero();
  switch (spec.kind) {
    case MultiplierKind::Normal: return normal_symbol(eta, spec.n_phi);
    case MultiplierKind::NormalTruncated: break;
    case MultiplierKind::Parametrix: return parametrix_symbol(eta, spec, false);
    case MultiplierKind::Reference: return parametrix_symbol(eta, spec, true);
    case MultiplierKind::Cutoff: return spec.cutoff.taper(eta) * Mat10::Identity();
    case MultiplierKind::TimeCutoff: {
      const double s = std::sqrt(eta[1] * eta[1] + eta[2] * eta[2] + eta[3] * eta[3]);
      return spec.cutoff.taper(Covector{{s, std::abs(eta[0]), 0.0, 0.0}}) * Mat10::Identity();
    }
    case MultiplierKind::GaugeProjector: {
      const double w = spec.cutoff.gauge_weight(eta);
      if (w == 0.0) return Mat10::Identity();
      return w * gauge_complement_projector(eta) + (1.0 - w) * Mat10::Identity();
    }
    case MultiplierKind::Identity: break;
  }
  return Mat10::Identity();
}

// ---------------------------------------------------------------------------

std::size_t MultiplierPlan::cache_budget = std::size_t{512} << 20;

struct MultiplierPlan::Fft {
  explicit Fft(const std::array<int, 4>& dims) : r2c(dims) {}
  RealFft4 r2c;
};

MultiplierPlan::MultiplierPlan(const Grid4& grid, const MultiplierSpec& spec) : grid_(grid), spec_(spec) {
  grid.validate();
  spec.cutoff.validate();
  if (spec.padding < 1) throw DomainError("MultiplierSpec: padding must be >= 1");
  if (spec.n_phi < 9) throw DomainError("MultiplierSpec: n_phi must be >= 9");
  if (spec_.kind == MultiplierKind::NormalTruncated && !(spec_.truncation > 0.0))
    spec_.truncation = grid.dims[0] * grid.spacing[0];
  work_ = grid;
  for (int d = 0; d < 4; ++d) work_.dims[d] = grid.dims[d] * spec.padding;
  fft_ = std::make_unique<Fft>(work_.dims);
  if (spec.kind == MultiplierKind::Identity) return;
  const std::size_t nh = fft_->r2c.spectrum_size();
  if (55 * nh * sizeof(double) > cache_budget) return;
  mats_.assign(55 * nh, 0.0);
  const std::size_t slab = nh / work_.dims[0];
  parallel_for(static_cast<std::size_t>(work_.dims[0]), [&](std::size_t b, std::size_t e) {
    std::array<double*, 55> ptr;
    for (std::size_t k0 = b; k0 < e; ++k0) {
      for (int i = 0; i < 55; ++i) ptr[i] = mats_.data() + i * nh + k0 * slab;
      fill_slab(static_cast<int>(k0), ptr.data());
    }
  });
}

MultiplierPlan::~MultiplierPlan() = default;

void MultiplierPlan::fill_slab(int k0, double* const* mats) const {
  const FrequencyGrid fg(work_);
  const int h = fft_->r2c.half_last();
  std::size_t f = 0;
  for (int k1 = 0; k1 < work_.dims[1]; ++k1)
    for (int k2 = 0; k2 < work_.dims[2]; ++k2)
      for (int k3 = 0; k3 < h; ++k3, ++f) {
        const Mat10 m = multiplier_matrix(fg.eta(k0, k1, k2, k3), spec_);
        for (int p = 0; p < 10; ++p)
          for (int q = p; q < 10; ++q) mats[kernels::packed10(p, q)][f] = m(p, q);
      }
}

Sym2Field MultiplierPlan::apply(const Sym2Field& f) const {
  f.require(FieldDomain::Position, "apply_multiplier");
  if (!(f.grid() == grid_)) throw DomainError("apply_multiplier: field grid differs from the plan grid");
  if (spec_.kind == MultiplierKind::Identity) return f;
  const RealFft4& fft = fft_->r2c;
  const std::size_t nh = fft.spectrum_size();
  const std::size_t nw = work_.size();
  const std::size_t slab = nh / work_.dims[0];
  const Grid4& g = grid_;

  std::vector<std::complex<double>> spec(10 * nh);
  std::vector<double> buf(nw);
  auto copy_rows = [&](bool in, int p, Sym2Field* out) {
    const double s = kMandelScale[p];
    for (int a = 0; a < g.dims[0]; ++a)
      for (int b = 0; b < g.dims[1]; ++b)
        for (int c = 0; c < g.dims[2]; ++c) {
          const std::size_t src = g.linear(a, b, c, 0);
          const std::size_t dst = work_.linear(a, b, c, 0);
          if (in) {
            const double* x = f.component(p).data() + src;
            for (int d = 0; d < g.dims[3]; ++d) buf[dst + d] = s * x[d];
          } else {
            double* y = out->component(p).data() + src;
            for (int d = 0; d < g.dims[3]; ++d) y[d] = buf[dst + d] / s;
          }
        }
  };
  for (int p = 0; p < 10; ++p) {
    std::fill(buf.begin(), buf.end(), 0.0);
    copy_rows(true, p, nullptr);
    fft.forward(buf.data(), spec.data() + p * nh);
  }

  parallel_for(static_cast<std::size_t>(work_.dims[0]), [&](std::size_t b, std::size_t e) {
    const kernels::Table& k = kernels::active();
    std::vector<double> local;
    if (mats_.empty()) local.assign(55 * slab, 0.0);
    std::array<const double*, 55> mp;
    std::array<double*, 55> wp;
    std::array<std::complex<double>*, 10> cp;
    for (std::size_t k0 = b; k0 < e; ++k0) {
      if (mats_.empty()) {
        for (int i = 0; i < 55; ++i) wp[i] = local.data() + i * slab;
        fill_slab(static_cast<int>(k0), wp.data());
        for (int i = 0; i < 55; ++i) mp[i] = wp[i];
      } else {
        for (int i = 0; i < 55; ++i) mp[i] = mats_.data() + i * nh + k0 * slab;
      }
      for (int p = 0; p < 10; ++p) cp[p] = spec.data() + p * nh + k0 * slab;
      k.sym10_apply(cp.data(), mp.data(), slab);
    }
  });

  Sym2Field out(g);
  out.meta = f.meta;
  for (int p = 0; p < 10; ++p) {
    fft.inverse(spec.data() + p * nh, buf.data());
    copy_rows(false, p, &out);
  }
  return out;
}

Sym2Field apply_multiplier(const Sym2Field& f, const MultiplierSpec& m) { return MultiplierPlan(f.grid(), m).apply(f); }

// ---------------------------------------------------------------------------

Sym2Field fft_field(const Sym2Field& f) {
  f.require(FieldDomain::Position, "fft_field");
  ComplexFft4 fft(f.grid().dims);
  Sym2Field out(f.grid(), FieldDomain::Frequency);
  out.meta = f.meta;
  std::vector<std::complex<double>> in(f.points());
  for (int p = 0; p < 10; ++p) {
    auto x = f.component(p);
    std::copy(x.begin(), x.end(), in.begin());
    fft.forward(in.data(), out.spectrum(p).data());
  }
  return out;
}

Sym2Field ifft_field(const Sym2Field& fhat) {
  fhat.require(FieldDomain::Frequency, "ifft_field");
  ComplexFft4 fft(fhat.grid().dims);
  Sym2Field out(fhat.grid());
  out.meta = fhat.meta;
  std::vector<std::complex<double>> tmp(fhat.points());
  for (int p = 0; p < 10; ++p) {
    fft.inverse(fhat.spectrum(p).data(), tmp.data());
    auto y = out.component(p);
    for (std::size_t i = 0; i < tmp.size(); ++i) y[i] = tmp[i].real();
  }
  return out;
}

Sym2Field gauge_project(const Sym2Field& f, const CutoffSpec& spec, int padding) {
  MultiplierSpec m;
  m.kind = MultiplierKind::GaugeProjector;
  m.cutoff = spec;
  m.padding = padding;
  return apply_multiplier(f, m);
}

const char* to_string(Band b) {
  switch (b) {
    case Band::All: return "all";
    case Band::SpaceLike: return "space-like";
    case Band::TimeLike: return "time-like";
  }
  return "?";
}

Band band_from_string(const std::string& s) {
  for (auto b : {Band::All, Band::SpaceLike, Band::TimeLike})
    if (s == to_string(b)) return b;
  throw DomainError("unknown band '" + s + "'");
}

Sym2Field bandlimit(const Sym2Field& f, Band keep, const CutoffSpec& spec, bool project_gauge, int padding) {
  MultiplierSpec m;
  m.cutoff = spec;
  m.padding = padding;
  m.kind = keep == Band::All ? MultiplierKind::Identity
                             : (keep == Band::SpaceLike ? MultiplierKind::Cutoff : MultiplierKind::TimeCutoff);
  Sym2Field out = apply_multiplier(f, m);
  if (project_gauge) out = gauge_project(out, spec, padding);
  return out;
}

// ---------------------------------------------------------------------------

Grid4 extend_grid(const Grid4& g, int cells) {
  if (cells < 0) throw DomainError("extend_grid: negative extension");
  Grid4 e = g;
  for (int d = 0; d < 4; ++d) {
    e.dims[d] += 2 * cells;
    e.origin[d] -= cells * g.spacing[d];
  }
  return e;
}

namespace {

std::array<int, 4> offset_of(const Grid4& inner, const Grid4& outer) {
  std::array<int, 4> off;
  for (int d = 0; d < 4; ++d) {
    if (std::abs(inner.spacing[d] - outer.spacing[d]) > 1e-12 * outer.spacing[d])
      throw DomainError("grid spacing mismatch");
    const double o = (inner.origin[d] - outer.origin[d]) / outer.spacing[d];
    off[d] = static_cast<int>(std::lround(o));
    if (std::abs(o - off[d]) > 1e-6 || off[d] < 0 || off[d] + inner.dims[d] > outer.dims[d])
      throw DomainError("grid is not a sub-grid");
  }
  return off;
}

template <class Fn>
void for_rows(const Grid4& inner, const Grid4& outer, Fn&& fn) {
  const auto o = offset_of(inner, outer);
  for (int a = 0; a < inner.dims[0]; ++a)
    for (int b = 0; b < inner.dims[1]; ++b)
      for (int c = 0; c < inner.dims[2]; ++c)
        fn(inner.linear(a, b, c, 0), outer.linear(a + o[0], b + o[1], c + o[2], o[3]), inner.dims[3]);
}

}  // namespace

Sym2Field embed(const Sym2Field& f, const Grid4& larger) {
  f.require(FieldDomain::Position, "embed");
  Sym2Field out(larger);
  out.meta = f.meta;
  for (int p = 0; p < 10; ++p) {
    const double* x = f.component(p).data();
    double* y = out.component(p).data();
    for_rows(f.grid(), larger, [&](std::size_t i, std::size_t j, int n) { std::copy(x + i, x + i + n, y + j); });
  }
  return out;
}

Sym2Field crop(const Sym2Field& f, const Grid4& smaller) {
  f.require(FieldDomain::Position, "crop");
  Sym2Field out(smaller);
  out.meta = f.meta;
  for (int p = 0; p < 10; ++p) {
    const double* x = f.component(p).data();
    double* y = out.component(p).data();
    for_rows(smaller, f.grid(), [&](std::size_t i, std::size_t j, int n) { std::copy(x + j, x + j + n, y + i); });
  }
  return out;
}

Sym2Field reconstruct(const RayData& u, const Grid4& grid, const ReconstructOptions& opt) {
  const Grid4 ext = extend_grid(grid, opt.extend);
  const Sym2Field back = adjoint(u, ext, opt.transform);
  MultiplierSpec m = opt.parametrix;
  if (m.kind != MultiplierKind::Parametrix) throw DomainError("reconstruct: multiplier must be the parametrix");
  const Sym2Field r = MultiplierPlan(ext, m).apply(back);
  return opt.extend == 0 ? r : crop(r, grid);
}

Sym2Field reconstruct_fourier(const Sym2Field& f, const CutoffSpec& spec, int n_phi, int padding) {
  MultiplierSpec m;
  m.kind = MultiplierKind::Reference;
  m.cutoff = spec;
  m.n_phi = n_phi;
  m.padding = padding;
  return apply_multiplier(f, m);
}

// ---------------------------------------------------------------------------

std::vector<std::uint8_t> artifact_mask(const Covector& nu, const std::vector<std::array<double, 4>>& points,
                                        const Grid4& grid, int dilation, double eps) {
  grid.validate();
  std::vector<std::uint8_t> mask(grid.size(), 0);
  if (dilation < 0) throw DomainError("artifact_mask: dilation must be >= 0");
  const double hmin = *std::min_element(grid.spacing.begin(), grid.spacing.end());
  for (const auto& x : points) {
    const FlowoutLine line = flowout_line(x, nu, eps);
    const auto& dir = line.direction;
    double dn = 0.0;
    for (double c : dir) dn += c * c;
    dn = std::sqrt(dn);
    // parameter interval inside the (slightly enlarged) grid box
    double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 4; ++d) {
      const double lo = grid.lo(d) - grid.spacing[d], hi = grid.hi(d) + grid.spacing[d];
      if (dir[d] == 0.0) {
        if (x[d] < lo || x[d] > hi) t0 = 1, t1 = 0;
        continue;
      }
      double a = (lo - x[d]) / dir[d], b = (hi - x[d]) / dir[d];
      if (a > b) std::swap(a, b);
      t0 = std::max(t0, a);
      t1 = std::min(t1, b);
    }
    if (!(t0 <= t1)) continue;
    const double dt = 0.5 * hmin / dn;
    for (double t = t0; t <= t1 + 0.5 * dt; t += dt) {
      const auto p = line.at(t);
      std::array<int, 4> i;
      bool inside = true;
      for (int d = 0; d < 4 && inside; ++d) {
        i[d] = static_cast<int>(std::lround((p[d] - grid.origin[d]) / grid.spacing[d]));
        inside = i[d] >= 0 && i[d] < grid.dims[d];
      }
      if (inside) mask[grid.linear(i[0], i[1], i[2], i[3])] = 1;
    }
  }
  // Separable max filter: a cube of half-width `dilation` cells.
  for (int axis = 0; axis < 4 && dilation > 0; ++axis) {
    std::vector<std::uint8_t> next(mask.size(), 0);
    std::size_t stride = 1;
    for (int d = axis + 1; d < 4; ++d) stride *= grid.dims[d];
    const int n = grid.dims[axis];
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
      if (!mask[idx]) continue;
      const int i = static_cast<int>((idx / stride) % n);
      for (int k = std::max(0, i - dilation); k <= std::min(n - 1, i + dilation); ++k)
        next[idx + (static_cast<std::ptrdiff_t>(k) - i) * static_cast<std::ptrdiff_t>(stride)] = 1;
    }
    mask.swap(next);
  }
  return mask;
}

double mask_energy_fraction(const Sym2Field& f, const std::vector<std::uint8_t>& mask) {
  if (mask.size() != f.points()) throw DomainError("mask_energy_fraction: size mismatch");
  double in = 0.0, all = 0.0;
  for (std::size_t i = 0; i < f.points(); ++i) {
    double e = 0.0;
    for (int p = 0; p < 10; ++p) e += kSym2Multiplicity[p] * f.component(p)[i] * f.component(p)[i];
    all += e;
    if (mask[i]) in += e;
  }
  return all > 0.0 ? in / all : 0.0;
}

}  // namespace minkray
