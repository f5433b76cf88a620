#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Data-parallel inner loops. Each routine has a portable scalar reference and,
// where the CPU supports it, an AVX2+FMA variant picked at runtime. The two
// agree to rounding (tests/test_kernels.cpp); summation order differs, so
// bit-for-bit equality only holds within one ISA.
namespace minkray::kernels {

enum class Isa { Scalar, Avx2 };

// Index of (p, q), p <= q, in a packed symmetric 10x10 matrix (55 entries).
constexpr int packed10(int p, int q) {
  if (p > q) {
    const int t = p;
    p = q;
    q = t;
  }
  return p * 10 - p * (p - 1) / 2 + (q - p);
}

struct Table {
  Isa isa;
  const char* name;
  // y += a x
  void (*axpy)(double* y, const double* x, double a, std::size_t n);
  // y[i] += sum_b taps[b] x[i + b], b in [0, ntaps)
  void (*fir)(double* y, const double* x, const double* taps, int ntaps, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // For each frequency f in [0, n): v(f) <- M(f) v(f), with v(f) the 10 complex
  // values comps[q][f] and M(f) symmetric, stored packed as mats[packed10(p,q)][f].
  void (*sym10_apply)(std::complex<double>* const* comps, const double* const* mats, std::size_t n);
};

const Table& scalar_table();
// nullptr when the CPU lacks AVX2/FMA or the build has no x86 variant.
const Table* avx2_table();

// Table used by the library. Chosen once: MINKRAY_ISA=scalar forces the
// reference path, otherwise the widest supported ISA.
const Table& active();
void select(Isa isa);  // throws if unsupported
std::string active_name();

}  // namespace minkray::kernels
