#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace minkray {

// Error types shared by every module.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSpaceLikeError : Error {
  using Error::Error;
};
struct LightLikeEvaluationError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct FormatError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

using Vec3 = std::array<double, 3>;

// Components ordered (time, space1, space2, space3).
struct Covector {
  std::array<double, 4> c{};

  constexpr double operator[](int i) const { return c[i]; }
  constexpr double& operator[](int i) { return c[i]; }
  double spatial_norm2() const { return c[1] * c[1] + c[2] * c[2] + c[3] * c[3]; }
  double euclid_norm2() const { return c[0] * c[0] + spatial_norm2(); }
  Covector scaled(double s) const { return {{c[0] * s, c[1] * s, c[2] * s, c[3] * s}}; }
};

// Ray tangents theta = (1, v) and gauge vectors w.
struct Vec4 {
  std::array<double, 4> c{};

  constexpr double operator[](int i) const { return c[i]; }
  constexpr double& operator[](int i) { return c[i]; }
};

inline Vec4 light_tangent(const Vec3& v) { return {{1.0, v[0], v[1], v[2]}}; }

enum class CausalClass { SpaceLike, TimeLike, LightLike };

const char* to_string(CausalClass c);

// q(eta) = -(eta0)^2 + |eta'|^2
inline double minkowski_q(const Covector& eta) { return -eta[0] * eta[0] + eta.spatial_norm2(); }

// SpaceLike if q > eps|eta|^2, TimeLike if q < -eps|eta|^2, else LightLike.
CausalClass causal_class(const Covector& eta, double eps);

// Euclidean pairing sum_j a^j b_j, used for theta . eta.
inline double pair(const Vec4& a, const Covector& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// Packed symmetric 2-tensor. Storage order
/// (00),(01),(02),(03),(11),(12),(13),(22),(23),(33).
struct Sym2 {
  static constexpr int kSize = 10;
  std::array<double, kSize> c{};

  double operator()(int j, int k) const { return c[index(j, k)]; }
  double& operator()(int j, int k) { return c[index(j, k)]; }
  double operator[](int p) const { return c[p]; }
  double& operator[](int p) { return c[p]; }

  static int index(int j, int k);
  static std::array<int, 2> indices(int p);
  static bool is_diagonal(int p);

  // Full 4x4 expansion and its inverse; unpack(pack(f)) == f exactly.
  std::array<std::array<double, 4>, 4> unpack() const;
  static Sym2 pack(const std::array<std::array<double, 4>, 4>& m);

  static Sym2 unit(int j, int k);
  static Sym2 metric();  // diag(-1, 1, 1, 1)

  Sym2& operator+=(const Sym2& o);
  Sym2& operator-=(const Sym2& o);
  Sym2& operator*=(double s);
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator*(double s, Sym2 a) { return a *= s; }
  friend bool operator==(const Sym2&, const Sym2&) = default;
};

// Frobenius weights: 1 on the diagonal, 2 off it, so <f,h> = sum_p mult_p f_p h_p.
inline constexpr std::array<double, 10> kSym2Multiplicity{1, 2, 2, 2, 1, 2, 2, 1, 2, 1};
// sqrt of the above; maps packed components to Frobenius-orthonormal (Mandel) coordinates.
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr std::array<double, 10> kMandelScale{1, kSqrt2, kSqrt2, kSqrt2, 1, kSqrt2, kSqrt2, 1, kSqrt2, 1};

double frobenius(const Sym2& f, const Sym2& h);
inline double frobenius_norm(const Sym2& f) { return std::sqrt(frobenius(f, f)); }

// f(theta, theta) = sum_{j,k} f_jk theta^j theta^k, off-diagonal entries counted twice.
double contract(const Sym2& f, const Vec4& theta);

// Packed weights t_p such that contract(f, theta) = sum_p t_p f_p.
std::array<double, 10> contraction_weights(const Vec4& theta);

// (eta (x) w + w (x) eta)_jk = eta_j w_k + eta_k w_j. No factor 1/2: this is the
// normalisation of the pointwise kernel c g + eta(x)w + w(x)eta.
Sym2 sym_outer(const Covector& eta, const Vec4& w);

}  // namespace minkray
