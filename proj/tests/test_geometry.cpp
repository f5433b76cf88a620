#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "minkray/fft.hpp"
#include "minkray/gauge.hpp"
#include "minkray/interp.hpp"
#include "minkray/sphere.hpp"

using namespace minkray;
using std::numbers::pi;

namespace {

template <class F>
void fill(const Grid4& g, std::vector<double>& out, F&& fn) {
  out.resize(g.size());
  for (int a = 0; a < g.dims[0]; ++a)
    for (int b = 0; b < g.dims[1]; ++b)
      for (int c = 0; c < g.dims[2]; ++c)
        for (int d = 0; d < g.dims[3]; ++d) out[g.linear(a, b, c, d)] = fn(g.point(a, b, c, d));
}

double bump(const std::array<double, 4>& x, double s) {
  return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]) / (2 * s * s));
}

}  // namespace

TEST_CASE("d_sym of a linear time potential under central differences") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  OneFormField w(g);
  fill(g, w.w[0], [](const auto& x) { return x[0]; });
  const Sym2Field d = d_sym(w, DerivativeScheme::CentralDifference);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(d.component(Sym2::index(0, 0))[i] == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(d.component(Sym2::index(0, k))[i]) <= 1e-12);
  }
}

TEST_CASE("d_sym of a constant one-form vanishes") {
  const Grid4 g = Grid4::cube(6, -1, 1);
  OneFormField w(g);
  for (int j = 0; j < 4; ++j) std::fill(w.w[j].begin(), w.w[j].end(), 0.3 * (j + 1));
  for (auto scheme : {DerivativeScheme::Spectral, DerivativeScheme::CentralDifference}) {
    const Sym2Field d = d_sym(w, scheme);
    for (double v : d.real_data()) CHECK(std::abs(v) <= 1e-13);
  }
}

TEST_CASE("spectral derivative of periodic sines is exact") {
  const Grid4 g = Grid4::cube(12, -1, 1);
  OneFormField w(g);
  for (int j = 0; j < 4; ++j) fill(g, w.w[j], [j](const auto& x) { return std::sin(2 * pi * x[j] / 2.0); });
  const Sym2Field d = d_sym(w, DerivativeScheme::Spectral);
  double err = 0.0;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      for (int c = 0; c < 12; ++c)
        for (int e = 0; e < 12; ++e) {
          const auto x = g.point(a, b, c, e);
          const std::size_t i = g.linear(a, b, c, e);
          for (int j = 0; j < 4; ++j) err = std::max(err, std::abs(d.component(Sym2::index(j, j))[i] - pi * std::cos(pi * x[j])));
          err = std::max(err, std::abs(d.component(Sym2::index(0, 1))[i]));
        }
  CHECK(err <= 1e-12);
}

TEST_CASE("d_sym is linear") {
  const Grid4 g = Grid4::cube(6, -1, 1);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  OneFormField a(g), b(g), s(g);
  for (int j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < g.size(); ++i) {
      a.w[j][i] = n(rng);
      b.w[j][i] = n(rng);
      s.w[j][i] = 2.0 * a.w[j][i] - 0.5 * b.w[j][i];
    }
  Sym2Field lhs = d_sym(s, DerivativeScheme::Spectral);
  Sym2Field rhs = d_sym(a, DerivativeScheme::Spectral);
  rhs *= 2.0;
  Sym2Field db = d_sym(b, DerivativeScheme::Spectral);
  db *= 0.5;
  rhs -= db;
  CHECK(relative_l2(lhs, rhs) <= 1e-13);
}

TEST_CASE("gauge_field with c only is c times the metric") {
  const Grid4 g = Grid4::cube(16, -1, 1);
  ScalarField c(g);
  fill(g, c.v, [](const auto& x) { return bump(x, 0.08); });
  const Sym2Field f = gauge_field(c, OneFormField(g));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Sym2 t = f.at(i);
    CHECK(t[Sym2::index(0, 0)] == -c.v[i]);
    CHECK(t[Sym2::index(2, 2)] == c.v[i]);
    CHECK(t[Sym2::index(1, 2)] == 0.0);
  }
  CHECK(f.meta.count("warning") == 0);
}

TEST_CASE("gauge_field flags support touching the boundary") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  ScalarField c(g);
  std::fill(c.v.begin(), c.v.end(), 1.0);
  CHECK(gauge_field(c, OneFormField(g)).meta.count("warning") == 1);
  const Sym2Field zero = gauge_field(ScalarField(g), OneFormField(g));
  for (double v : zero.real_data()) CHECK(v == 0.0);
}

TEST_CASE("sphere samplers integrate low moments") {
  for (const SphereSampling& s : {fibonacci_sphere(576), lat_long_sphere(24)}) {
    double w = 0, xx = 0, xy = 0, z = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& v = s.dirs[i];
      CHECK(std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) <= 1e-14);
      w += s.weights[i];
      xx += s.weights[i] * v[0] * v[0];
      xy += s.weights[i] * v[0] * v[1];
      z += s.weights[i] * v[2];
    }
    CHECK(w == doctest::Approx(4 * pi).epsilon(1e-13));
    CHECK(xx == doctest::Approx(4 * pi / 3).epsilon(2e-3));
    CHECK(std::abs(xy) <= 1e-2);
    CHECK(std::abs(z) <= 1e-12);
  }
  CHECK(sphere_kind_from_string(to_string(SphereKind::LatLong)) == SphereKind::LatLong);
  CHECK_THROWS_AS(sphere_kind_from_string("cube"), Error);
}

TEST_CASE("interpolation taps partition unity") {
  for (double fr : {0.0, 0.25, 0.5, 0.9}) {
    for (auto k : {Interp::Linear, Interp::CubicBSpline}) {
      const Taps t = taps_for(k, fr);
      double s = 0.0;
      for (int b = 0; b < t.count; ++b) s += t.w[b];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("cubic B-spline prefilter interpolates samples") {
  const int n = 40;
  std::vector<double> x(n), c(n);
  for (int i = 0; i < n; ++i) x[i] = c[i] = std::exp(-std::pow((i - 20.0) / 4.0, 2));
  bspline_prefilter(c.data(), {n}, 0);
  for (int i = 5; i < n - 5; ++i) {
    const Taps t = taps_for(Interp::CubicBSpline, 0.0);
    double v = 0.0;
    for (int b = 0; b < t.count; ++b) v += t.w[b] * c[i + t.start + b];
    CHECK(v == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("real FFT round trip and Hermitian symmetry") {
  const std::array<int, 4> dims{4, 6, 4, 8};
  RealFft4 fft(dims);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  std::vector<double> x(fft.real_size()), y(fft.real_size());
  for (auto& v : x) v = n(rng);
  std::vector<std::complex<double>> X(fft.spectrum_size());
  fft.forward(x.data(), X.data());
  // Hermitian pairs inside the stored half: bins (k, 0) and (-k, 0) on the last axis.
  const int h = fft.half_last();
  auto at = [&](int a, int b, int c, int d) { return X[((static_cast<std::size_t>(a) * dims[1] + b) * dims[2] + c) * h + d]; };
  CHECK(std::abs(at(1, 2, 3, 0) - std::conj(at(3, 4, 1, 0))) <= 1e-12);
  auto X2 = X;
  fft.inverse(X2.data(), y.data());
  double e = 0;
  for (std::size_t i = 0; i < x.size(); ++i) e = std::max(e, std::abs(x[i] - y[i]));
  CHECK(e <= 1e-13);
  CHECK(signed_frequency(3, 8) == 3);
  CHECK(signed_frequency(4, 8) == -4);
  CHECK(signed_frequency(7, 8) == -1);
}

TEST_CASE("delta transforms to constant spectrum") {
  const std::array<int, 4> dims{4, 4, 4, 4};
  ComplexFft4 fft(dims);
  std::vector<std::complex<double>> x(fft.size()), X(fft.size());
  x[0] = 1.0;
  fft.forward(x.data(), X.data());
  for (const auto& v : X) CHECK(std::abs(v - 1.0) <= 1e-15);
}
