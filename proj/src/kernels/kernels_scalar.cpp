#include "kernels_impl.hpp"

namespace minkray::kernels::scalar {

void axpy(double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void fir(double* y, const double* x, const double* taps, int ntaps, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int b = 0; b < ntaps; ++b) s += taps[b] * x[i + b];
    y[i] += s;
  }
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void sym10_apply(std::complex<double>* const* comps, const double* const* mats, std::size_t n) {
  for (std::size_t f = 0; f < n; ++f) {
    std::complex<double> in[10], out[10];
    for (int q = 0; q < 10; ++q) in[q] = comps[q][f];
    for (int p = 0; p < 10; ++p) {
      double re = 0.0, im = 0.0;
      for (int q = 0; q < 10; ++q) {
        const double m = mats[packed10(p, q)][f];
        re += m * in[q].real();
        im += m * in[q].imag();
      }
      out[p] = {re, im};
    }
    for (int p = 0; p < 10; ++p) comps[p][f] = out[p];
  }
}

}  // namespace minkray::kernels::scalar
