#include "minkray/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "minkray/tensor.hpp"

namespace minkray {

namespace {
// The FFTW planner is not thread-safe; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t product(const std::array<int, 4>& d) {
  return static_cast<std::size_t>(d[0]) * d[1] * d[2] * d[3];
}

template <class T>
struct FftwBuffer {
  T* p = nullptr;
  explicit FftwBuffer(std::size_t n) : p(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))) {
    if (!p) throw Error("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(p); }
};
}  // namespace

struct RealFft4::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

RealFft4::RealFft4(const std::array<int, 4>& dims) : dims_(dims), plans_(std::make_unique<Plans>()) {
  FftwBuffer<double> r(real_size());
  FftwBuffer<fftw_complex> c(spectrum_size());
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_dft_r2c(4, dims_.data(), r.p, c.p, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inv = fftw_plan_dft_c2r(4, dims_.data(), c.p, r.p, FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  if (!plans_->fwd || !plans_->inv) throw Error("RealFft4: FFTW planning failed");
}

RealFft4::~RealFft4() = default;

std::size_t RealFft4::real_size() const { return product(dims_); }
std::size_t RealFft4::spectrum_size() const {
  return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2] * half_last();
}

void RealFft4::forward(const double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(plans_->fwd, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void RealFft4::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(plans_->inv, reinterpret_cast<fftw_complex*>(in), out);
  const double s = 1.0 / static_cast<double>(real_size());
  const std::size_t n = real_size();
  for (std::size_t i = 0; i < n; ++i) out[i] *= s;
}

struct ComplexFft4::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

ComplexFft4::ComplexFft4(const std::array<int, 4>& dims) : dims_(dims), plans_(std::make_unique<Plans>()) {
  FftwBuffer<fftw_complex> a(size()), b(size());
  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_dft(4, dims_.data(), a.p, b.p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inv = fftw_plan_dft(4, dims_.data(), a.p, b.p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->fwd || !plans_->inv) throw Error("ComplexFft4: FFTW planning failed");
}

ComplexFft4::~ComplexFft4() = default;

std::size_t ComplexFft4::size() const { return product(dims_); }

void ComplexFft4::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void ComplexFft4::inverse(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(plans_->inv, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  const double s = 1.0 / static_cast<double>(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] *= s;
}

}  // namespace minkray
