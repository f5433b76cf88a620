#include "minkray/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace minkray {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
  const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  return {a[0] / n, a[1] / n, a[2] / n};
}

// Mandel-scaled theta (x) theta.
Vec10 tangent_square(const Vec3& v) {
  const Vec4 th = light_tangent(v);
  Vec10 t;
  for (int p = 0; p < 10; ++p) {
    const auto [j, k] = Sym2::indices(p);
    t[p] = kMandelScale[p] * th[j] * th[k];
  }
  return t;
}

double cosine_ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * t);
}

}  // namespace

Vec10 to_mandel(const Sym2& f) {
  Vec10 v;
  for (int p = 0; p < 10; ++p) v[p] = kMandelScale[p] * f[p];
  return v;
}

Sym2 from_mandel(const Vec10& v) {
  Sym2 f;
  for (int p = 0; p < 10; ++p) f[p] = v[p] / kMandelScale[p];
  return f;
}

CirclePatch circle_points(const Covector& eta, int n_phi) {
  if (n_phi < 9) throw DomainError("circle_points: n_phi must be >= 9");
  const double sp2 = eta.spatial_norm2();
  const double q = minkowski_q(eta);
  if (!(q > 0.0) || sp2 == 0.0)
    throw NotSpaceLikeError("circle_points: covector is not space-like (q = " + std::to_string(q) + ")");
  const double sp = std::sqrt(sp2);
  CirclePatch c;
  c.eta = eta;
  c.n_phi = n_phi;
  c.radius = std::sqrt(q) / sp;
  for (int i = 0; i < 3; ++i) c.center[i] = -eta[0] * eta[i + 1] / sp2;

  const Vec3 n{eta[1] / sp, eta[2] / sp, eta[3] / sp};
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(n[i]) < std::abs(n[axis])) axis = i;
  Vec3 helper{0, 0, 0};
  helper[axis] = 1.0;
  c.e1 = normalized(cross(n, helper));
  c.e2 = cross(n, c.e1);

  c.nodes.resize(n_phi);
  for (int k = 0; k < n_phi; ++k) {
    const double phi = kTwoPi * k / n_phi;
    const double cs = std::cos(phi), sn = std::sin(phi);
    for (int i = 0; i < 3; ++i) c.nodes[k][i] = c.center[i] + c.radius * (cs * c.e1[i] + sn * c.e2[i]);
  }
  c.weight = kTwoPi * c.radius / n_phi;
  return c;
}

double SymbolOperator::component(int j, int k, int l, int m) const {
  const int p = Sym2::index(j, k), q = Sym2::index(l, m);
  return m_(p, q) / (kMandelScale[p] * kMandelScale[q]);
}

Sym2 SymbolOperator::apply(const Sym2& f) const { return from_mandel(m_ * to_mandel(f)); }

namespace {
bool on_light_cone(const Covector& eta) {
  const double q = minkowski_q(eta);
  return std::abs(q) <= 8.0 * std::numeric_limits<double>::epsilon() * eta.euclid_norm2();
}
}  // namespace

SymbolOperator symbol_a(const Covector& eta, int n_phi, const SpatialWeight& chi,
                        const std::optional<std::array<double, 4>>& x) {
  if (chi && !x) throw DomainError("symbol_a: a spatial weight needs an evaluation point x");
  if (eta.euclid_norm2() == 0.0) throw DomainError("symbol_a: eta = 0 has no symbol");
  if (on_light_cone(eta))
    throw LightLikeEvaluationError("symbol_a: eta is light-like; apply a cutoff before evaluating");
  const double q = minkowski_q(eta);
  SymbolOperator zero(eta, Mat10::Zero());
  zero.x = x;
  if (q < 0.0 || eta.spatial_norm2() == 0.0) return zero;

  const CirclePatch c = circle_points(eta, n_phi);
  Mat10 m = Mat10::Zero();
  for (const Vec3& v : c.nodes) {
    double w = c.weight;
    if (chi) {
      const Vec3 y{(*x)[1] - (*x)[0] * v[0], (*x)[2] - (*x)[0] * v[1], (*x)[3] - (*x)[0] * v[2]};
      const double cv = chi(y);
      w *= cv * cv;
    }
    const Vec10 t = tangent_square(v);
    m.selfadjointView<Eigen::Lower>().rankUpdate(t, w);
  }
  m = m.selfadjointView<Eigen::Lower>();
  m /= std::sqrt(q);
  SymbolOperator a(eta, m);
  a.x = x;
  return a;
}

MonteCarloSymbol symbol_a_monte_carlo(const Covector& eta, std::size_t samples, std::uint64_t seed) {
  const CirclePatch c = circle_points(eta, 9);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  Mat10 sum = Mat10::Zero(), sum2 = Mat10::Zero();
  for (std::size_t s = 0; s < samples; ++s) {
    const double phi = angle(rng);
    const double cs = std::cos(phi), sn = std::sin(phi);
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = c.center[i] + c.radius * (cs * c.e1[i] + sn * c.e2[i]);
    const Vec10 t = tangent_square(v);
    const Mat10 o = t * t.transpose();
    sum += o;
    sum2 += o.cwiseProduct(o);
  }
  const double n = static_cast<double>(samples);
  const double scale = kTwoPi * c.radius / std::sqrt(minkowski_q(eta));
  const Mat10 mean = sum / n;
  const Mat10 var = (sum2 / n - mean.cwiseProduct(mean)).cwiseMax(0.0) * (n / (n - 1.0));
  MonteCarloSymbol out;
  out.mean = scale * mean;
  out.std_error = scale * (var / n).cwiseSqrt();
  return out;
}

NullBasis null_basis(const Covector& eta) {
  if (!(minkowski_q(eta) > 0.0)) throw NotSpaceLikeError("null_basis: covector is not space-like");
  NullBasis nb;
  nb.generators[0] = Sym2::metric();
  for (int i = 0; i < 4; ++i) {
    Vec4 e;
    e[i] = 1.0;
    nb.generators[i + 1] = sym_outer(eta, e);
  }
  return nb;
}

double NullBasis::gram_determinant() const {
  Eigen::Matrix<double, 5, 5> g;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) g(i, j) = frobenius(generators[i], generators[j]);
  return g.determinant();
}

Mat10 gauge_complement_projector(const Covector& eta) {
  if (eta.euclid_norm2() == 0.0) throw DomainError("gauge_complement_projector: eta = 0");
  Eigen::Matrix<double, 10, 5> basis;
  basis.col(0) = to_mandel(Sym2::metric());
  for (int i = 0; i < 4; ++i) {
    Vec4 e;
    e[i] = 1.0;
    basis.col(i + 1) = to_mandel(sym_outer(eta, e));
  }
  const Eigen::HouseholderQR<Eigen::Matrix<double, 10, 5>> qr(basis);
  const Eigen::Matrix<double, 10, 5> q = qr.householderQ() * Eigen::Matrix<double, 10, 5>::Identity();
  return Mat10::Identity() - q * q.transpose();
}

void CutoffSpec::validate() const {
  if (sharp) {
    if (!(eps_band >= 0.0)) throw DomainError("CutoffSpec: eps_band must be >= 0 in sharp mode");
  } else {
    if (!(eps_band > 0.0)) throw DomainError("CutoffSpec: eps_band must be > 0");
    if (!(taper_width > 0.0 && taper_width <= 1.0)) throw DomainError("CutoffSpec: taper_width must be in (0, 1]");
  }
  if (!(pinv_floor > 0.0)) throw DomainError("CutoffSpec: pinv_floor must be > 0");
}

double CutoffSpec::taper(const Covector& eta) const {
  const double n2 = eta.euclid_norm2();
  if (n2 == 0.0) return 0.0;
  const double rho = minkowski_q(eta) / n2;
  if (sharp) return rho > eps_band ? 1.0 : 0.0;
  const double lo = lower_edge();
  return cosine_ramp((rho - lo) / (eps_band - lo));
}

double CutoffSpec::gauge_weight(const Covector& eta) const {
  const double n2 = eta.euclid_norm2();
  if (n2 == 0.0) return 0.0;
  const double rho = minkowski_q(eta) / n2;
  const double lo = lower_edge();
  if (sharp || lo <= 0.0) return rho > 0.0 ? 1.0 : 0.0;
  return cosine_ramp(rho / lo);
}

Vec10 symbol_eigenvalues(const SymbolOperator& a) {
  Eigen::SelfAdjointEigenSolver<Mat10> es(a.mandel(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SymbolOperator pinv_b(const SymbolOperator& a, const CutoffSpec& spec) {
  spec.validate();
  if (a.is_zero()) throw DomainError("pinv_b: zero operator has no pseudoinverse on the kept band");
  Eigen::SelfAdjointEigenSolver<Mat10> es(a.mandel());
  const Vec10& lam = es.eigenvalues();
  const double floor = spec.pinv_floor * lam.maxCoeff();
  Vec10 inv = Vec10::Zero();
  for (int i = 0; i < 10; ++i)
    if (lam[i] >= floor) inv[i] = 1.0 / lam[i];
  const Mat10& v = es.eigenvectors();
  Mat10 b = v * inv.asDiagonal() * v.transpose();
  b = 0.5 * (b + b.transpose()).eval();
  SymbolOperator out(a.eta(), b);
  out.x = a.x;
  return out;
}

double symbol_order_check(const Covector& eta, double lambda, int n_phi) {
  const SymbolOperator a = symbol_a(eta, n_phi);
  const SymbolOperator al = symbol_a(eta.scaled(lambda), n_phi);
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  double worst = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
          worst = std::max(worst, std::abs(lambda * al.component(j, k, l, m) - a.component(j, k, l, m)));
  return worst / n;
}

double lightcone_limit_check(const Covector& eta0, double delta, int n_phi) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("lightcone_limit_check: delta must lie in (0, 0.5)");
  const double sp2 = eta0.spatial_norm2();
  if (std::abs(sp2 - 1.0) > 1e-12) throw DomainError("lightcone_limit_check: need |eta0'| = 1");
  if (std::abs(minkowski_q(eta0)) > 1e-12) throw DomainError("lightcone_limit_check: eta0 must be light-like");
  Covector eta = eta0;
  eta[0] = std::copysign(std::sqrt(1.0 - delta), eta0[0]);
  const SymbolOperator a = symbol_a(eta, n_phi);
  Vec3 c;
  for (int i = 0; i < 3; ++i) c[i] = -eta[0] * eta[i + 1] / sp2;
  const Vec10 t = tangent_square(c);
  const Mat10 limit = (kTwoPi / std::sqrt(sp2)) * (t * t.transpose());
  return (a.mandel() - limit).norm() / a.norm();
}

std::array<std::array<int, 4>, 35> independent_index_list() {
  std::array<std::array<int, 4>, 35> out{};
  int n = 0;
  for (int j = 0; j < 4; ++j)
    for (int k = j; k < 4; ++k)
      for (int l = k; l < 4; ++l)
        for (int m = l; m < 4; ++m) out[n++] = {j, k, l, m};
  return out;
}

std::array<double, 35> independent_components(const SymbolOperator& a) {
  std::array<double, 35> out{};
  const auto idx = independent_index_list();
  for (int i = 0; i < 35; ++i) out[i] = a.component(idx[i][0], idx[i][1], idx[i][2], idx[i][3]);
  return out;
}

}  // namespace minkray
