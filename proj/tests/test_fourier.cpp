#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "minkray/fourier.hpp"

using namespace minkray;
using std::numbers::pi;

namespace {

Sym2Field random_field(const Grid4& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Sym2Field f(g);
  for (double& v : f.real_data()) v = n(rng);
  return f;
}

// A real field cannot carry the sign of a Nyquist frequency, so per-frequency
// projectors that are not even in each component are only projectors off those bins.
Sym2Field without_nyquist(const Sym2Field& f) {
  const Grid4& g = f.grid();
  Sym2Field h = fft_field(f);
  for (int a = 0; a < g.dims[0]; ++a)
    for (int b = 0; b < g.dims[1]; ++b)
      for (int c = 0; c < g.dims[2]; ++c)
        for (int d = 0; d < g.dims[3]; ++d) {
          if (2 * a != g.dims[0] && 2 * b != g.dims[1] && 2 * c != g.dims[2] && 2 * d != g.dims[3]) continue;
          for (int p = 0; p < 10; ++p) h.spectrum(p)[g.linear(a, b, c, d)] = 0.0;
        }
  return ifft_field(h);
}

Sym2Field smooth_field(const Grid4& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Sym2 amp;
  for (int p = 0; p < 10; ++p) amp[p] = u(rng);
  Sym2Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.point(static_cast<int>(i / g.slice_size()),
                           static_cast<int>(i / (g.dims[2] * g.dims[3]) % g.dims[1]),
                           static_cast<int>(i / g.dims[3] % g.dims[2]), static_cast<int>(i % g.dims[3]));
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    Sym2 v = amp;
    v *= std::exp(-r2 / (2 * 0.25 * 0.25));
    f.set(i, v);
  }
  return f;
}

Covector random_spacelike(std::mt19937_64& rng, double min_rho) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Covector eta{{n(rng), n(rng), n(rng), n(rng)}};
    if (minkowski_q(eta) >= min_rho * eta.euclid_norm2()) return eta;
  }
}

Mat10 mandel_identity() { return Mat10::Identity(); }

}  // namespace

TEST_CASE("field FFT round trip") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  const Sym2Field f = random_field(g, 1);
  CHECK(relative_l2(ifft_field(fft_field(f)), f) <= 1e-13);
}

TEST_CASE("identity multiplier and the all band are exact") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  const Sym2Field f = random_field(g, 2);
  CHECK(relative_l2(apply_multiplier(f, {MultiplierKind::Identity}), f) <= 1e-13);
  CHECK(relative_l2(bandlimit(f, Band::All), f) <= 1e-13);
}

TEST_CASE("sharp space-like band with gauge projection is idempotent") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  CutoffSpec sharp;
  sharp.sharp = true;
  const Sym2Field once = bandlimit(without_nyquist(random_field(g, 3)), Band::SpaceLike, sharp, true);
  const Sym2Field twice = bandlimit(once, Band::SpaceLike, sharp, true);
  CHECK(relative_l2(twice, once) <= 1e-12);
  const Sym2Field c1 = apply_multiplier(random_field(g, 4), {MultiplierKind::Cutoff, sharp});
  CHECK(relative_l2(apply_multiplier(c1, {MultiplierKind::Cutoff, sharp}), c1) <= 1e-12);
}

TEST_CASE("space-like and time-like bands are complementary under sharp cutoffs") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  CutoffSpec sharp;
  sharp.sharp = true;
  sharp.eps_band = 0.0;
  const Sym2Field f = random_field(g, 5);
  const Sym2Field s = bandlimit(f, Band::SpaceLike, sharp);
  const Sym2Field t = bandlimit(f, Band::TimeLike, sharp);
  CHECK(std::abs(frobenius_dot(s, t)) <= 1e-10 * f.norm2());
}

TEST_CASE("normal multiplier annihilates c g") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  Sym2Field f(g);
  const Sym2 metric = Sym2::metric();
  const Sym2Field s = smooth_field(g, 6);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Sym2 v = metric;
    v *= s.at(i)[0];
    f.set(i, v);
  }
  const Sym2Field out = apply_multiplier(f, {MultiplierKind::Normal});
  const Sym2Field ref = apply_multiplier(smooth_field(g, 6), {MultiplierKind::Normal});
  CHECK(std::sqrt(out.norm2()) <= 1e-10 * std::sqrt(ref.norm2()));
}

TEST_CASE("parametrix times normal is the tapered gauge projector per frequency") {
  std::mt19937_64 rng(7);
  const CutoffSpec cs;
  for (int t = 0; t < 50; ++t) {
    const Covector eta = random_spacelike(rng, 0.01);
    const Mat10 b = multiplier_matrix(eta, {MultiplierKind::Parametrix, cs});
    const Mat10 a = multiplier_matrix(eta, {MultiplierKind::Normal, cs});
    const Mat10 ref = cs.taper(eta) * gauge_complement_projector(eta);
    CHECK((b * a - ref).norm() <= 1e-10);
    const Mat10 r = multiplier_matrix(eta, {MultiplierKind::Reference, cs});
    CHECK((r - ref).norm() <= 1e-10);
  }
}

TEST_CASE("multipliers vanish or stay finite at every grid frequency") {
  const Grid4 g = Grid4::cube(6, -1, 1);
  const FrequencyGrid fg(g);
  for (auto kind : {MultiplierKind::Identity, MultiplierKind::Normal, MultiplierKind::Parametrix,
                    MultiplierKind::Reference, MultiplierKind::Cutoff, MultiplierKind::TimeCutoff,
                    MultiplierKind::GaugeProjector}) {
    bool finite = true;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int c = 0; c < 6; ++c)
          for (int d = 0; d < 6; ++d) finite = finite && multiplier_matrix(fg.eta(a, b, c, d), {kind}).allFinite();
    CHECK_MESSAGE(finite, to_string(kind));
  }
  CHECK(multiplier_matrix(Covector{{0, 0, 0, 0}}, {MultiplierKind::Normal}).isZero(0.0));
  CHECK((multiplier_matrix(Covector{{0, 0, 0, 0}}, {MultiplierKind::Identity}) - mandel_identity()).norm() == 0.0);
}

TEST_CASE("time-like frequencies get a zero normal multiplier") {
  const Mat10 m = multiplier_matrix(Covector{{2, 1, 0, 0}}, {MultiplierKind::Normal});
  CHECK(m.isZero(0.0));
}

TEST_CASE("light-like normal multiplier is the mean of its one-sided limits") {
  const Covector eta{{1, 1, 0, 0}};
  const Mat10 m = multiplier_matrix(eta, {MultiplierKind::Normal});
  const Covector inside{{1 - 1e-7, 1, 0, 0}};
  const Mat10 limit = multiplier_matrix(inside, {MultiplierKind::Normal});
  CHECK((m - 0.5 * limit).norm() <= 1e-3 * limit.norm());
}

TEST_CASE("truncated normal symbol converges to the normal symbol") {
  const Covector eta{{0.3, 1.0, 0.4, -0.2}};
  const Mat10 full = multiplier_matrix(eta, {MultiplierKind::Normal});
  double prev = 1e300;
  for (double R : {8.0, 32.0, 128.0}) {
    const double err = (truncated_normal_symbol(eta, R) - full).norm() / full.norm();
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev <= 2e-2);
}

TEST_CASE("truncated normal symbol at zero frequency") {
  const Mat10 k = truncated_normal_symbol(Covector{{0, 0, 0, 0}}, 1.5);
  const Vec10 t = to_mandel(Sym2::unit(0, 0));
  CHECK(t.dot(k * t) == doctest::Approx(8 * pi * 1.5).epsilon(1e-10));
}

TEST_CASE("periodic multipliers commute with grid shifts") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  const Sym2Field f = random_field(g, 8);
  Sym2Field shifted(g);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int d = 0; d < 8; ++d) shifted.set(g.linear((a + 3) % 8, (b + 1) % 8, c, (d + 5) % 8), f.at(g.linear(a, b, c, d)));
  for (auto kind : {MultiplierKind::Normal, MultiplierKind::Reference, MultiplierKind::GaugeProjector}) {
    const Sym2Field lhs = apply_multiplier(shifted, {kind});
    const Sym2Field mf = apply_multiplier(f, {kind});
    Sym2Field rhs(g);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int c = 0; c < 8; ++c)
          for (int d = 0; d < 8; ++d) rhs.set(g.linear((a + 3) % 8, (b + 1) % 8, c, (d + 5) % 8), mf.at(g.linear(a, b, c, d)));
    CHECK(relative_l2(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("streamed and cached multiplier plans agree") {
  const Grid4 g = Grid4::cube(6, -1, 1);
  const Sym2Field f = random_field(g, 9);
  const MultiplierSpec spec{MultiplierKind::Reference};
  const Sym2Field cached = MultiplierPlan(g, spec).apply(f);
  const std::size_t budget = MultiplierPlan::cache_budget;
  MultiplierPlan::cache_budget = 0;
  MultiplierPlan streamed(g, spec);
  CHECK_FALSE(streamed.cached());
  const Sym2Field s = streamed.apply(f);
  MultiplierPlan::cache_budget = budget;
  CHECK(relative_l2(s, cached) <= 1e-13);
}

TEST_CASE("all-Fourier reconstruction equals the tapered gauge projection") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  for (unsigned seed = 10; seed < 13; ++seed) {
    const Sym2Field f = random_field(g, seed);
    const Sym2Field r = reconstruct_fourier(f);
    const Sym2Field ref = apply_multiplier(gauge_project(f), {MultiplierKind::Cutoff});
    CHECK(relative_l2(r, ref) <= 1e-9);
  }
}

TEST_CASE("padding leaves a compactly supported field in the grid") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  const Sym2Field f = smooth_field(g, 14);
  const Sym2Field p = apply_multiplier(f, {MultiplierKind::Identity, {}, 32, 2});
  CHECK(p.grid() == g);
  CHECK(relative_l2(p, f) <= 1e-13);
}

TEST_CASE("extend, embed and crop") {
  const Grid4 g = Grid4::cube(6, -1, 1);
  const Grid4 e = extend_grid(g, 2);
  CHECK(e.dims[0] == 10);
  CHECK(e.origin[1] == doctest::Approx(-1 - 2 * g.spacing[1]));
  const Sym2Field f = random_field(g, 15);
  const Sym2Field big = embed(f, e);
  CHECK(big.norm2() == doctest::Approx(f.norm2()).epsilon(1e-14));
  CHECK(relative_l2(crop(big, g), f) == 0.0);
  CHECK_THROWS_AS(extend_grid(g, -1), DomainError);
}

TEST_CASE("artifact mask of a light-like plane contains the plane") {
  const Grid4 g = Grid4::cube(12, -1, 1);
  const double s = 1 / std::sqrt(2.0);
  const Covector nu{{s, s, 0, 0}};
  std::vector<std::array<double, 4>> pts{{0.1, -0.1, 0.0, 0.0}, {-0.3, 0.3, 0.2, -0.1}};
  const auto mask = artifact_mask(nu, pts, g, 0);
  std::size_t on = 0;
  for (int a = 0; a < 12; ++a)
    for (int b = 0; b < 12; ++b)
      for (int c = 0; c < 12; ++c)
        for (int d = 0; d < 12; ++d) {
          if (!mask[g.linear(a, b, c, d)]) continue;
          ++on;
          const auto x = g.point(a, b, c, d);
          CHECK(std::abs(s * x[0] + s * x[1]) <= g.spacing[0]);
        }
  CHECK(on > 0);
}

TEST_CASE("artifact mask errors and empty input") {
  const Grid4 g = Grid4::cube(8, -1, 1);
  CHECK_THROWS_AS(artifact_mask(Covector{{0, 1, 0, 0}}, {{0, 0, 0, 0}}, g), DomainError);
  const auto mask = artifact_mask(Covector{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0, 0}}, {}, g);
  for (auto m : mask) CHECK(m == 0);
  Sym2Field f = random_field(g, 16);
  CHECK(mask_energy_fraction(f, mask) == 0.0);
}

TEST_CASE("multiplier names round trip") {
  for (auto kind : {MultiplierKind::Identity, MultiplierKind::Normal, MultiplierKind::NormalTruncated,
                    MultiplierKind::Parametrix, MultiplierKind::Reference, MultiplierKind::Cutoff,
                    MultiplierKind::TimeCutoff, MultiplierKind::GaugeProjector})
    CHECK(multiplier_kind_from_string(to_string(kind)) == kind);
  for (auto b : {Band::All, Band::SpaceLike, Band::TimeLike}) CHECK(band_from_string(to_string(b)) == b);
  CHECK_THROWS(multiplier_kind_from_string("bogus"));
}
