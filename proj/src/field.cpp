#include "minkray/field.hpp"

#include <cmath>

namespace minkray {

Grid4 Grid4::cube(int n, double lo, double hi) {
  Grid4 g;
  const double h = (hi - lo) / n;
  g.dims = {n, n, n, n};
  g.spacing = {h, h, h, h};
  g.origin = {lo, lo, lo, lo};
  return g;
}

void Grid4::validate() const {
  for (int d = 0; d < 4; ++d) {
    if (dims[d] <= 0) throw DomainError("Grid4: dims must be positive");
    if (!(spacing[d] > 0.0)) throw DomainError("Grid4: spacing must be positive");
    if (!std::isfinite(origin[d])) throw DomainError("Grid4: origin must be finite");
  }
}

const char* to_string(FieldDomain d) { return d == FieldDomain::Position ? "position" : "frequency"; }

Sym2Field::Sym2Field(const Grid4& grid, FieldDomain domain) : grid_(grid), domain_(domain) {
  grid_.validate();
  if (domain_ == FieldDomain::Position)
    real_.assign(10 * grid_.size(), 0.0);
  else
    cplx_.assign(10 * grid_.size(), {0.0, 0.0});
}

void Sym2Field::require(FieldDomain d, const char* what) const {
  if (domain_ != d)
    throw DomainError(std::string(what) + ": expected a " + to_string(d) + "-domain field, got " +
                      to_string(domain_));
}

std::span<double> Sym2Field::component(int p) {
  require(FieldDomain::Position, "Sym2Field::component");
  return {real_.data() + p * grid_.size(), grid_.size()};
}
std::span<const double> Sym2Field::component(int p) const {
  require(FieldDomain::Position, "Sym2Field::component");
  return {real_.data() + p * grid_.size(), grid_.size()};
}
std::span<std::complex<double>> Sym2Field::spectrum(int p) {
  require(FieldDomain::Frequency, "Sym2Field::spectrum");
  return {cplx_.data() + p * grid_.size(), grid_.size()};
}
std::span<const std::complex<double>> Sym2Field::spectrum(int p) const {
  require(FieldDomain::Frequency, "Sym2Field::spectrum");
  return {cplx_.data() + p * grid_.size(), grid_.size()};
}

std::vector<double>& Sym2Field::real_data() {
  require(FieldDomain::Position, "Sym2Field::real_data");
  return real_;
}
const std::vector<double>& Sym2Field::real_data() const {
  require(FieldDomain::Position, "Sym2Field::real_data");
  return real_;
}
std::vector<std::complex<double>>& Sym2Field::complex_data() {
  require(FieldDomain::Frequency, "Sym2Field::complex_data");
  return cplx_;
}
const std::vector<std::complex<double>>& Sym2Field::complex_data() const {
  require(FieldDomain::Frequency, "Sym2Field::complex_data");
  return cplx_;
}

Sym2 Sym2Field::at(std::size_t idx) const {
  require(FieldDomain::Position, "Sym2Field::at");
  Sym2 f;
  for (int p = 0; p < 10; ++p) f[p] = real_[p * grid_.size() + idx];
  return f;
}

void Sym2Field::set(std::size_t idx, const Sym2& f) {
  require(FieldDomain::Position, "Sym2Field::set");
  for (int p = 0; p < 10; ++p) real_[p * grid_.size() + idx] = f[p];
}

double Sym2Field::norm2() const {
  const std::size_t n = grid_.size();
  double s = 0.0;
  for (int p = 0; p < 10; ++p) {
    double c = 0.0;
    if (domain_ == FieldDomain::Position)
      for (std::size_t i = 0; i < n; ++i) c += real_[p * n + i] * real_[p * n + i];
    else
      for (std::size_t i = 0; i < n; ++i) c += std::norm(cplx_[p * n + i]);
    s += kSym2Multiplicity[p] * c;
  }
  return s;
}

Sym2Field& Sym2Field::operator+=(const Sym2Field& o) {
  if (!(o.grid_ == grid_) || o.domain_ != domain_) throw DomainError("Sym2Field +=: shape mismatch");
  for (std::size_t i = 0; i < real_.size(); ++i) real_[i] += o.real_[i];
  for (std::size_t i = 0; i < cplx_.size(); ++i) cplx_[i] += o.cplx_[i];
  return *this;
}
Sym2Field& Sym2Field::operator-=(const Sym2Field& o) {
  if (!(o.grid_ == grid_) || o.domain_ != domain_) throw DomainError("Sym2Field -=: shape mismatch");
  for (std::size_t i = 0; i < real_.size(); ++i) real_[i] -= o.real_[i];
  for (std::size_t i = 0; i < cplx_.size(); ++i) cplx_[i] -= o.cplx_[i];
  return *this;
}
Sym2Field& Sym2Field::operator*=(double s) {
  for (auto& x : real_) x *= s;
  for (auto& x : cplx_) x *= s;
  return *this;
}

double frobenius_dot(const Sym2Field& a, const Sym2Field& b) {
  a.require(FieldDomain::Position, "frobenius_dot");
  b.require(FieldDomain::Position, "frobenius_dot");
  if (!(a.grid() == b.grid())) throw DomainError("frobenius_dot: grid mismatch");
  double s = 0.0;
  for (int p = 0; p < 10; ++p) {
    auto x = a.component(p);
    auto y = b.component(p);
    double c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) c += x[i] * y[i];
    s += kSym2Multiplicity[p] * c;
  }
  return s;
}

double relative_l2(const Sym2Field& approx, const Sym2Field& ref) {
  Sym2Field d = approx;
  d -= ref;
  const double r = ref.norm2();
  return r > 0.0 ? std::sqrt(d.norm2() / r) : std::sqrt(d.norm2());
}

}  // namespace minkray
