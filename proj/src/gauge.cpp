#include "minkray/gauge.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "minkray/fft.hpp"

namespace minkray {

namespace {

std::vector<double> spectral_partial(const Grid4& g, const std::vector<double>& f, int axis) {
  RealFft4 fft(g.dims);
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(f.data(), spec.data());
  const int n = g.dims[axis];
  const double dk = 2.0 * std::numbers::pi / (n * g.spacing[axis]);
  const std::array<int, 4> sd{g.dims[0], g.dims[1], g.dims[2], fft.half_last()};
  std::size_t idx = 0;
  for (int i0 = 0; i0 < sd[0]; ++i0)
    for (int i1 = 0; i1 < sd[1]; ++i1)
      for (int i2 = 0; i2 < sd[2]; ++i2)
        for (int i3 = 0; i3 < sd[3]; ++i3, ++idx) {
          const int k = std::array<int, 4>{i0, i1, i2, i3}[axis];
          // The Nyquist bin has no odd real counterpart; drop it.
          const bool nyquist = (n % 2 == 0) && k == n / 2;
          const double eta = nyquist ? 0.0 : dk * signed_frequency(k, n);
          spec[idx] *= std::complex<double>(0.0, eta);
        }
  std::vector<double> out(g.size());
  fft.inverse(spec.data(), out.data());
  return out;
}

std::vector<double> central_partial(const Grid4& g, const std::vector<double>& f, int axis) {
  std::array<std::size_t, 4> stride{g.slice_size(), static_cast<std::size_t>(g.dims[2]) * g.dims[3],
                                    static_cast<std::size_t>(g.dims[3]), 1};
  const int n = g.dims[axis];
  const double h = g.spacing[axis];
  const std::size_t s = stride[axis];
  std::vector<double> out(g.size(), 0.0);
  if (n < 3) return out;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const int i = static_cast<int>((idx / s) % n);
    if (i == 0)
      out[idx] = (-3.0 * f[idx] + 4.0 * f[idx + s] - f[idx + 2 * s]) / (2.0 * h);
    else if (i == n - 1)
      out[idx] = (3.0 * f[idx] - 4.0 * f[idx - s] + f[idx - 2 * s]) / (2.0 * h);
    else
      out[idx] = (f[idx + s] - f[idx - s]) / (2.0 * h);
  }
  return out;
}

}  // namespace

std::vector<double> partial(const Grid4& grid, const std::vector<double>& f, int axis, DerivativeScheme scheme) {
  if (f.size() != grid.size()) throw DomainError("partial: array does not match grid");
  return scheme == DerivativeScheme::Spectral ? spectral_partial(grid, f, axis) : central_partial(grid, f, axis);
}

Sym2Field d_sym(const OneFormField& w, DerivativeScheme scheme) {
  const Grid4& g = w.grid;
  for (const auto& c : w.w)
    if (c.size() != g.size()) throw DomainError("d_sym: one-form components do not match the grid");
  Sym2Field out(g);
  // d[i][j] = partial_i w_j
  std::array<std::array<std::vector<double>, 4>, 4> d;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) d[i][j] = partial(g, w.w[j], i, scheme);
  for (int p = 0; p < 10; ++p) {
    const auto [i, j] = Sym2::indices(p);
    auto dst = out.component(p);
    for (std::size_t n = 0; n < g.size(); ++n) dst[n] = 0.5 * (d[i][j][n] + d[j][i][n]);
  }
  return out;
}

bool touches_boundary(const Sym2Field& f, int margin, double tol) {
  const Grid4& g = f.grid();
  double peak = 0.0;
  for (double v : f.real_data()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return false;
  for (int p = 0; p < 10; ++p) {
    auto c = f.component(p);
    std::size_t idx = 0;
    for (int i0 = 0; i0 < g.dims[0]; ++i0)
      for (int i1 = 0; i1 < g.dims[1]; ++i1)
        for (int i2 = 0; i2 < g.dims[2]; ++i2)
          for (int i3 = 0; i3 < g.dims[3]; ++i3, ++idx) {
            const std::array<int, 4> i{i0, i1, i2, i3};
            bool edge = false;
            for (int d = 0; d < 4; ++d) edge |= i[d] < margin || i[d] >= g.dims[d] - margin;
            if (edge && std::abs(c[idx]) > tol * peak) return true;
          }
  }
  return false;
}

Sym2Field gauge_field(const ScalarField& c, const OneFormField& w, DerivativeScheme scheme) {
  if (!(c.grid == w.grid)) throw DomainError("gauge_field: c and w live on different grids");
  if (c.v.size() != c.grid.size()) throw DomainError("gauge_field: scalar field does not match its grid");
  Sym2Field out = d_sym(w, scheme);
  const Sym2 g = Sym2::metric();
  for (int p = 0; p < 10; ++p) {
    if (g[p] == 0.0) continue;
    auto dst = out.component(p);
    for (std::size_t n = 0; n < c.v.size(); ++n) dst[n] += g[p] * c.v[n];
  }
  if (touches_boundary(out)) out.meta["warning"] = "gauge field support touches the grid boundary";
  return out;
}

}  // namespace minkray
