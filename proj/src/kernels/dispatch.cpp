#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"
#include "minkray/tensor.hpp"

namespace minkray::kernels {

namespace {

const Table kScalar{Isa::Scalar, "scalar", scalar::axpy, scalar::fir, scalar::dot, scalar::sym10_apply};

#if defined(MINKRAY_HAVE_AVX2)
const Table kAvx2{Isa::Avx2, "avx2", avx2::axpy, avx2::fir, avx2::dot, avx2::sym10_apply};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Table* initial() {
  if (const char* s = std::getenv("MINKRAY_ISA"); s && std::strcmp(s, "scalar") == 0) return &kScalar;
  if (const Table* t = avx2_table()) return t;
  return &kScalar;
}

const Table*& current() {
  static const Table* t = initial();
  return t;
}

}  // namespace

const Table& scalar_table() { return kScalar; }

const Table* avx2_table() {
#if defined(MINKRAY_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() { return *current(); }

void select(Isa isa) {
  if (isa == Isa::Scalar) {
    current() = &kScalar;
    return;
  }
  const Table* t = avx2_table();
  if (!t) throw Error("kernels: AVX2 requested but not available on this CPU/build");
  current() = t;
}

std::string active_name() { return active().name; }

}  // namespace minkray::kernels
