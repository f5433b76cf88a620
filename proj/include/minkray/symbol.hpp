#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "minkray/tensor.hpp"

namespace minkray {

// 10x10 operators on Sym2 are stored in Frobenius-orthonormal (Mandel)
// coordinates: packed component p scaled by kMandelScale[p]. In these
// coordinates the Frobenius pairing is the dot product and self-adjoint
// operators are symmetric matrices.
using Mat10 = Eigen::Matrix<double, 10, 10>;
using Vec10 = Eigen::Matrix<double, 10, 1>;

Vec10 to_mandel(const Sym2& f);
Sym2 from_mandel(const Vec10& v);

/// Directions v in S^2 with eta0 + v.eta' = 0: a circle of radius
/// sqrt(|eta'|^2 - eta0^2)/|eta'| centred at -(eta0/|eta'|^2) eta'.
struct CirclePatch {
  Covector eta;
  Vec3 center{};
  double radius = 0.0;
  Vec3 e1{}, e2{};
  int n_phi = 0;
  std::vector<Vec3> nodes;  // center + r(cos phi_k e1 + sin phi_k e2), phi_k = 2 pi k / n_phi
  double weight = 0.0;      // arc length per node, 2 pi r / n_phi
};

CirclePatch circle_points(const Covector& eta, int n_phi);

using SpatialWeight = std::function<double(const Vec3&)>;

/// The normal-operator symbol a_jklm(x, eta) as a self-adjoint operator on Sym2.
class SymbolOperator {
 public:
  SymbolOperator() : m_(Mat10::Zero()) {}
  SymbolOperator(const Covector& eta, const Mat10& mandel) : eta_(eta), m_(mandel) {}

  const Covector& eta() const { return eta_; }
  const Mat10& mandel() const { return m_; }
  bool is_zero() const { return m_.isZero(0.0); }

  // a_jklm in component form (no Mandel scaling).
  double component(int j, int k, int l, int m) const;
  // (a.f)_jk = sum_{l,m} a_jklm f_lm
  Sym2 apply(const Sym2& f) const;
  // Frobenius norm of the 4-index array.
  double norm() const { return m_.norm(); }

  std::optional<std::array<double, 4>> x;  // evaluation point when a weight is used

 private:
  Covector eta_;
  Mat10 m_;
};

/// a(eta) = q^{-1/2} sum_k w_k chi^2(x' - x0 v_k) theta(v_k)^{(x)4}, theta(v) = (1, v),
/// over the circle nodes. Zero for time-like eta (including eta' = 0);
/// throws LightLikeEvaluationError on the light cone. chi requires x.
SymbolOperator symbol_a(const Covector& eta, int n_phi, const SpatialWeight& chi = {},
                        const std::optional<std::array<double, 4>>& x = std::nullopt);

/// Same integral estimated from uniformly random circle angles. Returns the
/// estimate and the per-entry standard error (Mandel coordinates).
struct MonteCarloSymbol {
  Mat10 mean;
  Mat10 std_error;
};
MonteCarloSymbol symbol_a_monte_carlo(const Covector& eta, std::size_t samples, std::uint64_t seed);

/// Generators of the pointwise kernel: g and eta(x)e_i + e_i(x)eta, i = 0..3.
struct NullBasis {
  std::array<Sym2, 5> generators;
  double gram_determinant() const;
};
NullBasis null_basis(const Covector& eta);

/// Frobenius-orthogonal projector onto the complement of span(null_basis(eta)).
/// Defined for any eta != 0.
Mat10 gauge_complement_projector(const Covector& eta);

/// Band and regularisation parameters for the space-like cutoff and the
/// pseudoinverse. With rho = q/|eta|^2 the taper is 1 for rho >= eps_band,
/// 0 for rho <= (1 - taper_width) eps_band, and a raised cosine between.
/// Sharp mode uses the indicator rho > eps_band instead (eps_band may be 0).
struct CutoffSpec {
  double eps_band = 0.05;
  double taper_width = 0.5;
  double pinv_floor = 1e-8;
  bool sharp = false;

  void validate() const;
  double lower_edge() const { return sharp ? eps_band : (1.0 - taper_width) * eps_band; }
  double taper(const Covector& eta) const;
  // Blend weight of the gauge projector: 1 wherever taper() can be nonzero,
  // falling to 0 at the light cone, 0 for time-like eta.
  double gauge_weight(const Covector& eta) const;
};

/// Moore-Penrose inverse of a with eigenvalues below pinv_floor * lambda_max
/// discarded, so b.a is the orthogonal projector onto range(a).
SymbolOperator pinv_b(const SymbolOperator& a, const CutoffSpec& spec);

/// Ascending eigenvalues of the Frobenius Gram matrix of a.
Vec10 symbol_eigenvalues(const SymbolOperator& a);

// max_jklm |lambda a(lambda eta) - a(eta)| / ||a(eta)||
double symbol_order_check(const Covector& eta, double lambda, int n_phi = 32);

/// For a light-like direction eta0 with |eta0'| = 1, builds eta_delta with the
/// same spatial part and q(eta_delta) = delta and returns
/// ||a(eta_delta) - (2 pi/|eta'|) theta*^{(x)4}|| / ||a(eta_delta)||, theta* = (1, c)
/// with c the centre of the collapsing circle.
double lightcone_limit_check(const Covector& eta0, double delta, int n_phi = 32);

// The 35 distinct a_jklm (j <= k <= l <= m) in lexicographic order.
std::array<double, 35> independent_components(const SymbolOperator& a);
std::array<std::array<int, 4>, 35> independent_index_list();

}  // namespace minkray
