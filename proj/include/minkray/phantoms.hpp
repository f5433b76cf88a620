#pragma once

#include <array>
#include <string>
#include <vector>

#include "minkray/fourier.hpp"

namespace minkray {

/// Product of 1D bumps: 1 on the inner `flat` fraction of each half-width,
/// a quintic C^2 ramp down to 0 at the half-width, 0 beyond.
struct Window {
  std::array<double, 4> center{0, 0, 0, 0};
  std::array<double, 4> half_width{0.8, 0.8, 0.8, 0.8};
  double flat = 0.5;
  double operator()(const std::array<double, 4>& x) const;
  bool inside(const Grid4& g) const;  // support box within the grid box
};

double bump1d(double t, double flat);  // t in units of the half-width

// u exp(-|x - center|^2 / (2 sigma^2)), optionally times a window. Throws if
// sigma is below the grid spacing or the +-3 sigma box leaves the grid.
Sym2Field make_gaussian(const Sym2& u, const std::array<double, 4>& center, double sigma, const Grid4& grid,
                        const Window* window = nullptr);

// u exp(-(x.nu)^2 / (2 delta^2)) W(x), |nu| = 1 (Euclidean).
Sym2Field make_plane_conormal(const Sym2& u, const Covector& nu, double delta, const Window& window,
                              const Grid4& grid);

struct GaussianBump {
  double amplitude = 1.0;
  std::array<double, 4> center{0, 0, 0, 0};
  double sigma = 0.15;
};
// c g + d^s w with Gaussian c and Gaussian components w_j.
Sym2Field make_gauge(const GaussianBump& c, const std::array<GaussianBump, 4>& w, const Grid4& grid);

enum class PhantomKind { Gaussian, PlaneConormal, Gauge, Empty };
const char* to_string(PhantomKind k);
PhantomKind phantom_kind_from_string(const std::string& s);

struct PhantomSpec {
  PhantomKind kind = PhantomKind::Gaussian;
  Sym2 amplitude = Sym2::unit(0, 0);
  std::array<double, 4> center{0, 0, 0, 0};
  double sigma = 0.2;
  Covector nu{{0, 1, 0, 0}};
  double delta = 0.05;
  bool windowed = false;
  Window window;
  GaussianBump gauge_c;
  std::array<GaussianBump, 4> gauge_w{};
  Band band = Band::All;
  bool project_gauge = false;
  CutoffSpec cutoff;
};

Sym2Field make_phantom(const PhantomSpec& spec, const Grid4& grid);

// JSON text <-> spec. Amplitudes are 10 packed numbers, "metric", or "eJK".
PhantomSpec parse_phantom_spec(const std::string& json_text);
std::string to_json(const PhantomSpec& spec);

// Grid points within half a cell of the plane x.nu = 0 where the window is
// nonzero: the singular layer of a plane phantom at grid resolution.
std::vector<std::array<double, 4>> plane_layer_points(const Covector& nu, const Window& window, const Grid4& grid);

}  // namespace minkray
