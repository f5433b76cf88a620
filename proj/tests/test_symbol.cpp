#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "minkray/symbol.hpp"

using namespace minkray;
using std::numbers::pi;

namespace {

Covector random_spacelike(std::mt19937_64& rng, double min_rho = 0.0) {
  std::normal_distribution<double> n;
  for (;;) {
    Covector eta{{n(rng), n(rng), n(rng), n(rng)}};
    if (minkowski_q(eta) > min_rho * eta.euclid_norm2() && minkowski_q(eta) > 1e-3 * eta.euclid_norm2())
      return eta;
  }
}

double rel(const Mat10& a, const Mat10& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("circle_points satisfies the circle constraints") {
  const CirclePatch c = circle_points({{0, 1, 0, 0}}, 16);
  CHECK(c.radius == doctest::Approx(1.0));
  for (const auto& v : c.nodes) {
    CHECK(std::abs(v[0]) <= 1e-15);
    CHECK(std::hypot(v[0], v[1], v[2]) == doctest::Approx(1.0).epsilon(1e-15));
  }
  const CirclePatch d = circle_points({{1, 2, 0, 0}}, 32);
  CHECK(d.radius == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
  CHECK(d.center[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(d.center[1] == 0.0);
  for (const auto& v : d.nodes) {
    CHECK(std::abs(std::hypot(v[0], v[1], v[2]) - 1.0) <= 1e-15);
    CHECK(std::abs(1.0 + 2.0 * v[0]) <= 1e-15);
  }
  CHECK(d.weight == doctest::Approx(2 * pi * d.radius / 32));
  CHECK_THROWS_AS(circle_points({{2, 1, 0, 0}}, 16), NotSpaceLikeError);
  CHECK_THROWS_AS(circle_points({{0, 1, 0, 0}}, 8), DomainError);
}

TEST_CASE("circle constraints hold for random space-like covectors") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Covector eta = random_spacelike(rng);
    const CirclePatch c = circle_points(eta, 33);
    const double scale = std::sqrt(eta.euclid_norm2());
    for (const auto& v : c.nodes) {
      CHECK(std::abs(std::hypot(v[0], v[1], v[2]) - 1.0) <= 4e-15);
      CHECK(std::abs(eta[0] + v[0] * eta[1] + v[1] * eta[2] + v[2] * eta[3]) <= 1e-14 * scale);
    }
  }
}

TEST_CASE("symbol_a closed forms at eta = (0,1,0,0)") {
  // circle v = (0, cos phi, sin phi): int cos^4 = 3 pi/4, int cos^2 sin^2 = pi/4 over a period
  const SymbolOperator a = symbol_a({{0, 1, 0, 0}}, 16);
  CHECK(a.component(0, 0, 0, 0) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(a.component(2, 2, 2, 2) == doctest::Approx(3 * pi / 4).epsilon(1e-14));
  CHECK(a.component(2, 2, 3, 3) == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(a.component(0, 0, 2, 2) == doctest::Approx(pi).epsilon(1e-14));
  CHECK(std::abs(a.component(1, 1, 1, 1)) <= 1e-15);
  // homogeneity -1
  CHECK(symbol_a({{0, 2, 0, 0}}, 16).component(0, 0, 0, 0) == doctest::Approx(pi).epsilon(1e-14));
}

TEST_CASE("symbol_a vanishes for time-like eta and refuses light-like eta") {
  CHECK(symbol_a({{2, 1, 0, 0}}, 32).is_zero());
  CHECK(symbol_a({{1, 0, 0, 0}}, 32).is_zero());
  CHECK_THROWS_AS(symbol_a({{1, 1, 0, 0}}, 32), LightLikeEvaluationError);
  CHECK_THROWS_AS(symbol_a({{0, 1, 0, 0}}, 32, [](const Vec3&) { return 1.0; }), DomainError);
}

TEST_CASE("a_0000 = 2 pi / |eta'| for space-like eta") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Covector eta = random_spacelike(rng);
    const double expect = 2 * pi / std::sqrt(eta.spatial_norm2());
    CHECK(std::abs(symbol_a(eta, 32).component(0, 0, 0, 0) - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("quadrature is exact beyond 9 nodes") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Covector eta = random_spacelike(rng);
    const Mat10 a16 = symbol_a(eta, 16).mandel();
    CHECK(rel(a16, symbol_a(eta, 64).mandel()) <= 1e-13);
    CHECK(rel(symbol_a(eta, 9).mandel(), a16) <= 1e-13);
  }
}

TEST_CASE("Monte Carlo estimate agrees within three standard errors") {
  const Covector eta{{0.3, 1.0, -0.4, 0.7}};
  const Mat10 a = symbol_a(eta, 32).mandel();
  const MonteCarloSymbol mc = symbol_a_monte_carlo(eta, 1000000, 99);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) CHECK(std::abs(mc.mean(i, j) - a(i, j)) <= 3.0 * mc.std_error(i, j) + 1e-14);
}

TEST_CASE("a is fully symmetric, PSD, rank 5 and annihilates the null basis") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Covector eta = random_spacelike(rng, 0.1);
    const SymbolOperator a = symbol_a(eta, 32);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          for (int m = 0; m < 4; ++m) {
            const double v = a.component(j, k, l, m);
            CHECK(v == a.component(k, j, l, m));
            CHECK(v == a.component(l, m, j, k));
          }
    const Vec10 lam = symbol_eigenvalues(a);
    const double lmax = lam.maxCoeff();
    CHECK(lam.minCoeff() >= -1e-12 * lmax);
    int big = 0;
    for (int i = 0; i < 10; ++i) big += lam[i] > 1e-8 * lmax;
    CHECK(big == 5);
    const NullBasis nb = null_basis(eta);
    CHECK(nb.gram_determinant() > 0.0);
    for (const Sym2& n : nb.generators)
      CHECK(frobenius_norm(a.apply(n)) <= 1e-12 * a.norm() * frobenius_norm(n));
  }
}

TEST_CASE("null_basis") {
  const NullBasis nb = null_basis({{0, 1, 0, 0}});
  CHECK(nb.generators[0] == Sym2::metric());
  CHECK(nb.generators[2](1, 1) == 2.0);
  CHECK_THROWS_AS(null_basis({{2, 1, 0, 0}}), NotSpaceLikeError);
}

TEST_CASE("homogeneity of degree -1") {
  CHECK(symbol_order_check({{0, 1, 0, 0}}, 2.0) <= 1e-12);
  CHECK(symbol_order_check({{1, 2, 0, 0}}, 10.0) <= 1e-12);
  CHECK(symbol_order_check({{1, 2, 0, 0}}, 1.0) == 0.0);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const Covector eta = random_spacelike(rng);
    for (double l : {0.5, 2.0, 10.0}) CHECK(symbol_order_check(eta, l) <= 1e-12);
  }
}

TEST_CASE("light-cone limit collapses onto theta*^4") {
  const double s = 1.0 / std::sqrt(2.0);
  const Covector eta0{{1, 1, 0, 0}};
  double prev = 1e300;
  for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double dev = lightcone_limit_check(eta0, d);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(lightcone_limit_check(eta0, 1e-2) <= 5e-2);
  CHECK(lightcone_limit_check(eta0, 1e-6) <= 1e-3);
  CHECK(lightcone_limit_check({{1, s, s, 0}}, 1e-6) <= 1e-3);
  CHECK_THROWS_AS(lightcone_limit_check({{0.5, 1, 0, 0}}, 1e-2), DomainError);
}

TEST_CASE("pinv_b is the Moore-Penrose inverse on the kept band") {
  const CutoffSpec spec;
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const Covector eta = random_spacelike(rng, spec.lower_edge());
    const SymbolOperator a = symbol_a(eta, 32);
    const SymbolOperator b = pinv_b(a, spec);
    const Mat10& am = a.mandel();
    const Mat10& bm = b.mandel();
    CHECK(rel(am * bm * am, am) <= 1e-10);
    CHECK(rel(bm * am * bm, bm) <= 1e-10);
    const Mat10 ba = bm * am;
    CHECK(rel(ba * ba, ba) <= 1e-10);
    CHECK(rel(ba, gauge_complement_projector(eta)) <= 1e-10);
    CHECK(frobenius_norm(from_mandel(ba * to_mandel(Sym2::metric()))) <= 1e-10);
  }
  CHECK_THROWS_AS(pinv_b(symbol_a({{2, 1, 0, 0}}, 32), spec), DomainError);
}

TEST_CASE("pinv_b at eta = (0,1,0,0) gives a rank-5 projector") {
  const SymbolOperator a = symbol_a({{0, 1, 0, 0}}, 32);
  const Mat10 ba = pinv_b(a, CutoffSpec{}).mandel() * a.mandel();
  CHECK(rel(ba * ba, ba) <= 1e-10);
  CHECK(ba.trace() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("cutoff taper") {
  CutoffSpec s;
  CHECK(s.taper({{0, 1, 0, 0}}) == 1.0);
  CHECK(s.taper({{1, 0, 0, 0}}) == 0.0);
  CHECK(s.taper({{1, 1, 0, 0}}) == 0.0);
  CHECK(s.taper({{0, 0, 0, 0}}) == 0.0);
  // monotone in rho across the band
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double rho = 0.02 + 0.04 * i / 100.0;  // spans [0.02, 0.06]
    const double e0 = std::sqrt((1.0 - rho) / 2.0);
    const double t = s.taper({{e0, std::sqrt(1.0 - e0 * e0), 0, 0}});
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(s.gauge_weight({{1, 0, 0, 0}}) == 0.0);
  CHECK(s.gauge_weight({{0, 1, 0, 0}}) == 1.0);
  CutoffSpec bad;
  bad.taper_width = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("independent components") {
  const SymbolOperator a = symbol_a({{0, 1, 0, 0}}, 16);
  const auto c = independent_components(a);
  CHECK(c[0] == doctest::Approx(2 * pi));
  CHECK(independent_index_list()[34] == std::array<int, 4>{3, 3, 3, 3});
}
