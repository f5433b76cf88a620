#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "minkray/tensor.hpp"

namespace minkray {

/// Regular 4D grid. Point i sits at origin + i*spacing (componentwise);
/// linear order is i0 slowest, i3 fastest.
struct Grid4 {
  std::array<int, 4> dims{1, 1, 1, 1};
  std::array<double, 4> spacing{1, 1, 1, 1};
  std::array<double, 4> origin{0, 0, 0, 0};

  // N points per axis covering [lo, hi) with spacing (hi-lo)/N.
  static Grid4 cube(int n, double lo, double hi);

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
  }
  std::size_t slice_size() const { return static_cast<std::size_t>(dims[1]) * dims[2] * dims[3]; }
  std::size_t linear(int i0, int i1, int i2, int i3) const {
    return ((static_cast<std::size_t>(i0) * dims[1] + i1) * dims[2] + i2) * dims[3] + i3;
  }
  std::array<double, 4> point(int i0, int i1, int i2, int i3) const {
    return {origin[0] + i0 * spacing[0], origin[1] + i1 * spacing[1], origin[2] + i2 * spacing[2],
            origin[3] + i3 * spacing[3]};
  }
  double lo(int d) const { return origin[d]; }
  double hi(int d) const { return origin[d] + (dims[d] - 1) * spacing[d]; }
  double cell_volume() const { return spacing[0] * spacing[1] * spacing[2] * spacing[3]; }

  void validate() const;
  friend bool operator==(const Grid4&, const Grid4&) = default;
};

enum class FieldDomain { Position, Frequency };

const char* to_string(FieldDomain d);

/// Sym2-valued field on a Grid4. Position-domain fields are real, frequency-domain
/// fields complex. Storage is component outermost, then grid order.
class Sym2Field {
 public:
  Sym2Field() = default;
  explicit Sym2Field(const Grid4& grid, FieldDomain domain = FieldDomain::Position);

  const Grid4& grid() const { return grid_; }
  FieldDomain domain() const { return domain_; }
  std::size_t points() const { return grid_.size(); }

  std::span<double> component(int p);
  std::span<const double> component(int p) const;
  std::span<std::complex<double>> spectrum(int p);
  std::span<const std::complex<double>> spectrum(int p) const;

  std::vector<double>& real_data();
  const std::vector<double>& real_data() const;
  std::vector<std::complex<double>>& complex_data();
  const std::vector<std::complex<double>>& complex_data() const;

  Sym2 at(std::size_t idx) const;
  void set(std::size_t idx, const Sym2& f);

  void require(FieldDomain d, const char* what) const;

  // Euclidean L2 over grid points and the Frobenius pairing, without cell volume.
  double norm2() const;

  Sym2Field& operator+=(const Sym2Field& o);
  Sym2Field& operator-=(const Sym2Field& o);
  Sym2Field& operator*=(double s);

  std::map<std::string, std::string> meta;

 private:
  Grid4 grid_;
  FieldDomain domain_ = FieldDomain::Position;
  std::vector<double> real_;
  std::vector<std::complex<double>> cplx_;
};

double frobenius_dot(const Sym2Field& a, const Sym2Field& b);
double relative_l2(const Sym2Field& approx, const Sym2Field& ref);

struct ScalarField {
  Grid4 grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid4& g) : grid(g), v(g.size(), 0.0) {}
};

struct OneFormField {
  Grid4 grid;
  std::array<std::vector<double>, 4> w;

  OneFormField() = default;
  explicit OneFormField(const Grid4& g) : grid(g) {
    for (auto& c : w) c.assign(g.size(), 0.0);
  }
};

}  // namespace minkray
