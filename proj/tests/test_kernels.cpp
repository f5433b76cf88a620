#include <random>
#include <vector>

#include "doctest.h"
#include "minkray/kernels.hpp"

using namespace minkray;

namespace {
std::vector<double> randv(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}
}  // namespace

TEST_CASE("packed10 layout") {
  CHECK(kernels::packed10(0, 0) == 0);
  CHECK(kernels::packed10(0, 9) == 9);
  CHECK(kernels::packed10(1, 1) == 10);
  CHECK(kernels::packed10(9, 9) == 54);
  CHECK(kernels::packed10(3, 2) == kernels::packed10(2, 3));
}

TEST_CASE("SIMD kernels match the scalar reference") {
  const kernels::Table* simd = kernels::avx2_table();
  if (!simd) {
    MESSAGE("AVX2 unavailable; only the scalar table is exercised");
    return;
  }
  const kernels::Table& ref = kernels::scalar_table();
  for (std::size_t n : {0, 1, 3, 4, 7, 8, 9, 31, 64, 1001}) {
    const auto x = randv(n + 4, n + 1);
    auto y0 = randv(n, 2 * n + 1), y1 = y0;
    ref.axpy(y0.data(), x.data(), 0.37, n);
    simd->axpy(y1.data(), x.data(), 0.37, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-14));

    for (int taps_n : {1, 2, 3, 4}) {
      const double taps[4] = {0.1, -0.7, 0.45, 0.2};
      auto z0 = randv(n, 3 * n + 1), z1 = z0;
      ref.fir(z0.data(), x.data(), taps, taps_n, n);
      simd->fir(z1.data(), x.data(), taps, taps_n, n);
      for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z0[i]).epsilon(1e-13));
    }
    const auto a = randv(n, 5 * n + 1);
    CHECK(simd->dot(a.data(), x.data(), n) == doctest::Approx(ref.dot(a.data(), x.data(), n)).epsilon(1e-12));
  }
}

TEST_CASE("sym10_apply SIMD matches scalar") {
  const kernels::Table* simd = kernels::avx2_table();
  if (!simd) return;
  for (std::size_t n : {1, 2, 5, 64}) {
    std::vector<std::vector<std::complex<double>>> c0(10), c1;
    std::vector<std::vector<double>> m(55);
    std::mt19937_64 rng(n);
    std::normal_distribution<double> d;
    for (auto& c : c0) {
      c.resize(n);
      for (auto& z : c) z = {d(rng), d(rng)};
    }
    for (auto& row : m) {
      row.resize(n);
      for (auto& v : row) v = d(rng);
    }
    c1 = c0;
    std::complex<double>* p0[10];
    std::complex<double>* p1[10];
    const double* mp[55];
    for (int q = 0; q < 10; ++q) p0[q] = c0[q].data(), p1[q] = c1[q].data();
    for (int k = 0; k < 55; ++k) mp[k] = m[k].data();
    kernels::scalar_table().sym10_apply(p0, mp, n);
    simd->sym10_apply(p1, mp, n);
    for (int q = 0; q < 10; ++q)
      for (std::size_t f = 0; f < n; ++f) {
        CHECK(c1[q][f].real() == doctest::Approx(c0[q][f].real()).epsilon(1e-13));
        CHECK(c1[q][f].imag() == doctest::Approx(c0[q][f].imag()).epsilon(1e-13));
      }
  }
}

TEST_CASE("runtime selection") {
  const auto before = kernels::active().isa;
  kernels::select(kernels::Isa::Scalar);
  CHECK(kernels::active_name() == "scalar");
  if (kernels::avx2_table()) {
    kernels::select(kernels::Isa::Avx2);
    CHECK(kernels::active_name() == "avx2");
  } else {
    CHECK_THROWS(kernels::select(kernels::Isa::Avx2));
  }
  kernels::select(before);
}
