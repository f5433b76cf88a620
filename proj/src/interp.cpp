#include "minkray/interp.hpp"

#include <cmath>

#include "minkray/kernels.hpp"
#include "minkray/tensor.hpp"

namespace minkray {

const char* to_string(Interp k) { return k == Interp::Linear ? "linear" : "cubic-bspline"; }

Interp interp_from_string(const std::string& s) {
  if (s == "linear") return Interp::Linear;
  if (s == "cubic-bspline" || s == "cubic") return Interp::CubicBSpline;
  throw FormatError("unknown interpolation '" + s + "'");
}

void bspline_prefilter(double* data, const std::vector<int>& dims, int axis) {
  const double z = std::sqrt(3.0) - 2.0;
  const int n = dims[axis];
  std::size_t inner = 1, outer = 1;
  for (int d = axis + 1; d < static_cast<int>(dims.size()); ++d) inner *= dims[d];
  for (int d = 0; d < axis; ++d) outer *= dims[d];
  const auto& k = kernels::active();
  // Rows of length `inner` are filtered together: c+[i] = f[i] + z c+[i-1],
  // c-[n-1] = -z/(1-z^2) c+[n-1], c-[i] = z (c-[i+1] - c+[i]), c = 6 c-.
  std::vector<double> row(inner);
  for (std::size_t o = 0; o < outer; ++o) {
    double* base = data + o * n * inner;
    for (int i = 1; i < n; ++i) k.axpy(base + i * inner, base + (i - 1) * inner, z, inner);
    double* last = base + (n - 1) * inner;
    for (std::size_t j = 0; j < inner; ++j) last[j] *= -z / (1.0 - z * z);
    for (int i = n - 2; i >= 0; --i) {
      double* cur = base + i * inner;
      const double* next = base + (i + 1) * inner;
      for (std::size_t j = 0; j < inner; ++j) cur[j] = z * (next[j] - cur[j]);
    }
    for (std::size_t j = 0; j < n * inner; ++j) base[j] *= 6.0;
  }
}

void bspline_prefilter_all(double* data, const std::vector<int>& dims) {
  for (int a = 0; a < static_cast<int>(dims.size()); ++a) bspline_prefilter(data, dims, a);
}

}  // namespace minkray
