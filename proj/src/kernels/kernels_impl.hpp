#pragma once

#include "minkray/kernels.hpp"

namespace minkray::kernels {
namespace scalar {
void axpy(double* y, const double* x, double a, std::size_t n);
void fir(double* y, const double* x, const double* taps, int ntaps, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void sym10_apply(std::complex<double>* const* comps, const double* const* mats, std::size_t n);
}  // namespace scalar
namespace avx2 {
void axpy(double* y, const double* x, double a, std::size_t n);
void fir(double* y, const double* x, const double* taps, int ntaps, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void sym10_apply(std::complex<double>* const* comps, const double* const* mats, std::size_t n);
}  // namespace avx2
}  // namespace minkray::kernels
