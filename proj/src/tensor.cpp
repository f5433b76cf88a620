#include "minkray/tensor.hpp"

namespace minkray {

const char* to_string(CausalClass c) {
  switch (c) {
    case CausalClass::SpaceLike: return "space-like";
    case CausalClass::TimeLike: return "time-like";
    case CausalClass::LightLike: return "light-like";
  }
  return "?";
}

CausalClass causal_class(const Covector& eta, double eps) {
  const double n2 = eta.euclid_norm2();
  if (n2 == 0.0) throw DomainError("causal_class: zero covector has no causal type");
  if (eps < 0.0) throw DomainError("causal_class: negative band tolerance");
  const double q = minkowski_q(eta);
  if (q > eps * n2) return CausalClass::SpaceLike;
  if (q < -eps * n2) return CausalClass::TimeLike;
  return CausalClass::LightLike;
}

namespace {
constexpr int kIndex[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
constexpr int kPairs[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                               {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};
}  // namespace

int Sym2::index(int j, int k) { return kIndex[j][k]; }
std::array<int, 2> Sym2::indices(int p) { return {kPairs[p][0], kPairs[p][1]}; }
bool Sym2::is_diagonal(int p) { return kPairs[p][0] == kPairs[p][1]; }

std::array<std::array<double, 4>, 4> Sym2::unpack() const {
  std::array<std::array<double, 4>, 4> m{};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) m[j][k] = c[kIndex[j][k]];
  return m;
}

Sym2 Sym2::pack(const std::array<std::array<double, 4>, 4>& m) {
  Sym2 f;
  for (int p = 0; p < kSize; ++p) f.c[p] = m[kPairs[p][0]][kPairs[p][1]];
  return f;
}

Sym2 Sym2::unit(int j, int k) {
  Sym2 f;
  f(j, k) = 1.0;
  return f;
}

Sym2 Sym2::metric() {
  Sym2 g;
  g(0, 0) = -1.0;
  g(1, 1) = g(2, 2) = g(3, 3) = 1.0;
  return g;
}

Sym2& Sym2::operator+=(const Sym2& o) {
  for (int p = 0; p < kSize; ++p) c[p] += o.c[p];
  return *this;
}
Sym2& Sym2::operator-=(const Sym2& o) {
  for (int p = 0; p < kSize; ++p) c[p] -= o.c[p];
  return *this;
}
Sym2& Sym2::operator*=(double s) {
  for (auto& x : c) x *= s;
  return *this;
}

double frobenius(const Sym2& f, const Sym2& h) {
  double s = 0.0;
  for (int p = 0; p < Sym2::kSize; ++p) s += kSym2Multiplicity[p] * f.c[p] * h.c[p];
  return s;
}

std::array<double, 10> contraction_weights(const Vec4& theta) {
  std::array<double, 10> t{};
  for (int p = 0; p < Sym2::kSize; ++p)
    t[p] = kSym2Multiplicity[p] * theta[kPairs[p][0]] * theta[kPairs[p][1]];
  return t;
}

double contract(const Sym2& f, const Vec4& theta) {
  const auto t = contraction_weights(theta);
  double s = 0.0;
  for (int p = 0; p < Sym2::kSize; ++p) s += t[p] * f.c[p];
  return s;
}

Sym2 sym_outer(const Covector& eta, const Vec4& w) {
  Sym2 f;
  for (int p = 0; p < Sym2::kSize; ++p) {
    const int j = kPairs[p][0], k = kPairs[p][1];
    f.c[p] = eta[j] * w[k] + eta[k] * w[j];
  }
  return f;
}

}  // namespace minkray
