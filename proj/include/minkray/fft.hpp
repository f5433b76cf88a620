#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace minkray {

// Thin RAII wrappers over FFTW plans for 4D transforms in row-major
// (i0 slowest) order. Plans use FFTW_ESTIMATE so results are reproducible.
// Forward transforms are unnormalised; inverse() divides by the point count.
class RealFft4 {
 public:
  explicit RealFft4(const std::array<int, 4>& dims);
  ~RealFft4();
  RealFft4(const RealFft4&) = delete;
  RealFft4& operator=(const RealFft4&) = delete;

  const std::array<int, 4>& dims() const { return dims_; }
  std::size_t real_size() const;
  // Last axis is halved: dims[3]/2 + 1.
  std::size_t spectrum_size() const;
  int half_last() const { return dims_[3] / 2 + 1; }

  void forward(const double* in, std::complex<double>* out) const;
  // Destroys `in`.
  void inverse(std::complex<double>* in, double* out) const;

 private:
  std::array<int, 4> dims_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

class ComplexFft4 {
 public:
  explicit ComplexFft4(const std::array<int, 4>& dims);
  ~ComplexFft4();
  ComplexFft4(const ComplexFft4&) = delete;
  ComplexFft4& operator=(const ComplexFft4&) = delete;

  std::size_t size() const;
  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  std::array<int, 4> dims_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// Signed DFT index of bin k on an axis of length n: k for k < n/2, else k - n.
inline int signed_frequency(int k, int n) { return k < (n + 1) / 2 ? k : k - n; }

}  // namespace minkray
