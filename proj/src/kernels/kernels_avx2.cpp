// Compiled with -mavx2 -mfma; only reached through the dispatch table.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace minkray::kernels::avx2 {

void axpy(double* y, const double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d y0 = _mm256_loadu_pd(y + i), y1 = _mm256_loadu_pd(y + i + 4);
    y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
    y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
    _mm256_storeu_pd(y + i, y0);
    _mm256_storeu_pd(y + i + 4, y1);
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void fir(double* y, const double* x, const double* taps, int ntaps, std::size_t n) {
  std::size_t i = 0;
  if (ntaps == 2) {
    const __m256d t0 = _mm256_set1_pd(taps[0]), t1 = _mm256_set1_pd(taps[1]);
    for (; i + 4 <= n; i += 4) {
      __m256d s = _mm256_mul_pd(t0, _mm256_loadu_pd(x + i));
      s = _mm256_fmadd_pd(t1, _mm256_loadu_pd(x + i + 1), s);
      _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), s));
    }
  } else if (ntaps == 4) {
    const __m256d t0 = _mm256_set1_pd(taps[0]), t1 = _mm256_set1_pd(taps[1]);
    const __m256d t2 = _mm256_set1_pd(taps[2]), t3 = _mm256_set1_pd(taps[3]);
    for (; i + 4 <= n; i += 4) {
      __m256d s = _mm256_mul_pd(t0, _mm256_loadu_pd(x + i));
      s = _mm256_fmadd_pd(t1, _mm256_loadu_pd(x + i + 1), s);
      s = _mm256_fmadd_pd(t2, _mm256_loadu_pd(x + i + 2), s);
      s = _mm256_fmadd_pd(t3, _mm256_loadu_pd(x + i + 3), s);
      _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), s));
    }
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (int b = 0; b < ntaps; ++b) s += taps[b] * x[i + b];
    y[i] += s;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  s0 = _mm256_add_pd(s0, s1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, s0);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Two frequencies per register: lanes are (re f, im f, re f+1, im f+1).
void sym10_apply(std::complex<double>* const* comps, const double* const* mats, std::size_t n) {
  std::size_t f = 0;
  for (; f + 2 <= n; f += 2) {
    __m256d in[10];
    for (int q = 0; q < 10; ++q) in[q] = _mm256_loadu_pd(reinterpret_cast<const double*>(comps[q] + f));
    __m256d out[10];
    for (int p = 0; p < 10; ++p) out[p] = _mm256_setzero_pd();
    for (int p = 0; p < 10; ++p) {
      for (int q = p; q < 10; ++q) {
        const double* m = mats[packed10(p, q)] + f;
        const __m256d mv = _mm256_set_pd(m[1], m[1], m[0], m[0]);
        out[p] = _mm256_fmadd_pd(mv, in[q], out[p]);
        if (q != p) out[q] = _mm256_fmadd_pd(mv, in[p], out[q]);
      }
    }
    for (int p = 0; p < 10; ++p) _mm256_storeu_pd(reinterpret_cast<double*>(comps[p] + f), out[p]);
  }
  if (f < n) {
    std::complex<double>* tail[10];
    const double* mtail[55];
    for (int q = 0; q < 10; ++q) tail[q] = comps[q] + f;
    for (int k = 0; k < 55; ++k) mtail[k] = mats[k] + f;
    scalar::sym10_apply(tail, mtail, n - f);
  }
}

}  // namespace minkray::kernels::avx2
