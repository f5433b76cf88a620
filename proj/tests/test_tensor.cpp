#include <cmath>
#include <random>

#include "doctest.h"
#include "minkray/tensor.hpp"

using namespace minkray;

TEST_CASE("minkowski_q") {
  CHECK(minkowski_q({{1, 0, 0, 0}}) == -1.0);
  CHECK(minkowski_q({{0, 1, 0, 0}}) == 1.0);
  CHECK(minkowski_q({{3, 4, 0, 0}}) == 7.0);
}

TEST_CASE("causal_class") {
  CHECK(causal_class({{1, 0, 0, 0}}, 0.0) == CausalClass::TimeLike);
  CHECK(causal_class({{0, 1, 0, 0}}, 0.0) == CausalClass::SpaceLike);
  CHECK(causal_class({{1, 1, 0, 0}}, 0.0) == CausalClass::LightLike);
  CHECK(causal_class({{1, 1.05, 0, 0}}, 0.1) == CausalClass::LightLike);
  CHECK_THROWS_AS(causal_class({{0, 0, 0, 0}}, 0.0), DomainError);
  CHECK_THROWS_AS(causal_class({{0, 1, 0, 0}}, -1.0), DomainError);
}

TEST_CASE("causal_class is invariant under positive scaling") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> lam(1e-3, 1e3);
  for (int t = 0; t < 500; ++t) {
    const Covector eta{{n(rng), n(rng), n(rng), n(rng)}};
    const double l = lam(rng);
    for (double eps : {0.0, 0.05, 0.3}) CHECK(causal_class(eta.scaled(l), eps) == causal_class(eta, eps));
  }
}

TEST_CASE("Sym2 pack/unpack is an exact involution") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    Sym2 f;
    for (auto& x : f.c) x = n(rng);
    const auto m = f.unpack();
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) CHECK(m[j][k] == m[k][j]);
    CHECK(Sym2::pack(m) == f);
  }
  CHECK(Sym2::index(2, 3) == 8);
  CHECK(Sym2::indices(5) == std::array<int, 2>{1, 2});
}

TEST_CASE("contract") {
  const Vec3 v{0.6, 0.0, 0.8};
  CHECK(contract(Sym2::unit(0, 0), light_tangent(v)) == 1.0);
  CHECK(contract(Sym2::metric(), light_tangent(v)) == doctest::Approx(0.0).epsilon(1e-15));
  // sym(eta (x) w) with theta.eta = 1, theta.w = 0
  const Sym2 f = sym_outer({{0, 1, 0, 0}}, {{0, 0, 1, 0}});
  CHECK(contract(f, light_tangent({0, 1, 0})) == 0.0);
}

TEST_CASE("contract of the metric vanishes on every light-like tangent") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int t = 0; t < 1000; ++t) {
    Vec3 v{n(rng), n(rng), n(rng)};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (auto& x : v) x /= r;
    CHECK(std::abs(contract(Sym2::metric(), light_tangent(v))) <= 1e-15);
  }
}

TEST_CASE("sym_outer") {
  const Sym2 a = sym_outer({{0, 1, 0, 0}}, {{0, 1, 0, 0}});
  for (int p = 0; p < 10; ++p) CHECK(a[p] == (p == Sym2::index(1, 1) ? 2.0 : 0.0));
  const Sym2 b = sym_outer({{1, 0, 0, 0}}, {{0, 1, 0, 0}});
  for (int p = 0; p < 10; ++p) CHECK(b[p] == (p == Sym2::index(0, 1) ? 1.0 : 0.0));
  CHECK(sym_outer({{0, 0, 0, 0}}, {{1, 2, 3, 4}}) == Sym2{});
  CHECK(sym_outer({{1, 2, 3, 4}}, {{0, 0, 0, 0}}) == Sym2{});
}

TEST_CASE("contract(sym_outer(eta, w), theta) = 2 (theta.eta)(theta.w)") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  for (int t = 0; t < 500; ++t) {
    const Covector eta{{n(rng), n(rng), n(rng), n(rng)}};
    const Vec4 w{{n(rng), n(rng), n(rng), n(rng)}};
    const Vec4 th{{n(rng), n(rng), n(rng), n(rng)}};
    const Covector wc{{w[0], w[1], w[2], w[3]}};
    const double expect = 2.0 * pair(th, eta) * pair(th, wc);
    CHECK(contract(sym_outer(eta, w), th) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("frobenius counts off-diagonal entries twice") {
  CHECK(frobenius(Sym2::unit(0, 1), Sym2::unit(0, 1)) == 2.0);
  CHECK(frobenius(Sym2::metric(), Sym2::metric()) == 4.0);
}
