#include "minkray/phantoms.hpp"

#include <cmath>
#include "json.hpp"

#include "minkray/gauge.hpp"
#include "minkray/parallel.hpp"

namespace minkray {

using nlohmann::json;

double bump1d(double t, double flat) {
  const double a = std::abs(t);
  if (a <= flat) return 1.0;
  if (a >= 1.0) return 0.0;
  const double u = (1.0 - a) / (1.0 - flat);
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

double Window::operator()(const std::array<double, 4>& x) const {
  double w = 1.0;
  for (int d = 0; d < 4 && w != 0.0; ++d) w *= bump1d((x[d] - center[d]) / half_width[d], flat);
  return w;
}

bool Window::inside(const Grid4& g) const {
  for (int d = 0; d < 4; ++d)
    if (center[d] - half_width[d] < g.lo(d) || center[d] + half_width[d] > g.hi(d)) return false;
  return true;
}

namespace {

template <class Fn>
Sym2Field fill_field(const Grid4& g, const Sym2& u, Fn&& profile) {
  Sym2Field f(g);
  const std::size_t ns = g.slice_size();
  parallel_for(static_cast<std::size_t>(g.dims[0]), [&](std::size_t b, std::size_t e) {
    for (std::size_t a = b; a < e; ++a)
      for (int i1 = 0; i1 < g.dims[1]; ++i1)
        for (int i2 = 0; i2 < g.dims[2]; ++i2)
          for (int i3 = 0; i3 < g.dims[3]; ++i3) {
            const double s = profile(g.point(static_cast<int>(a), i1, i2, i3));
            if (s == 0.0) continue;
            const std::size_t idx = a * ns + (static_cast<std::size_t>(i1) * g.dims[2] + i2) * g.dims[3] + i3;
            for (int p = 0; p < 10; ++p) f.component(p)[idx] = s * u[p];
          }
  });
  return f;
}

void check_window(const Window& w, const Grid4& g) {
  for (int d = 0; d < 4; ++d)
    if (!(w.half_width[d] > 0.0)) throw DomainError("window half-width must be positive");
  if (!(w.flat >= 0.0 && w.flat < 1.0)) throw DomainError("window flat fraction must be in [0, 1)");
  if (!w.inside(g)) throw DomainError("phantom support leaves the grid box");
}

double gauss(const std::array<double, 4>& x, const std::array<double, 4>& c, double s) {
  double r2 = 0.0;
  for (int d = 0; d < 4; ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
  return std::exp(-r2 / (2.0 * s * s));
}

void check_gaussian(const std::array<double, 4>& c, double sigma, const Grid4& g) {
  if (!(sigma > 0.0)) throw DomainError("gaussian: sigma must be positive");
  for (int d = 0; d < 4; ++d) {
    if (sigma < g.spacing[d]) throw DomainError("gaussian: sigma below the grid spacing is unresolvable");
    if (c[d] - 3 * sigma < g.lo(d) || c[d] + 3 * sigma > g.hi(d))
      throw DomainError("gaussian: 6-sigma support leaves the grid box");
  }
}

}  // namespace

Sym2Field make_gaussian(const Sym2& u, const std::array<double, 4>& center, double sigma, const Grid4& grid,
                        const Window* window) {
  grid.validate();
  check_gaussian(center, sigma, grid);
  if (window) check_window(*window, grid);
  Sym2Field f = fill_field(grid, u, [&](const std::array<double, 4>& x) {
    const double w = window ? (*window)(x) : 1.0;
    return w == 0.0 ? 0.0 : w * gauss(x, center, sigma);
  });
  f.meta["phantom"] = "gaussian";
  return f;
}

Sym2Field make_plane_conormal(const Sym2& u, const Covector& nu, double delta, const Window& window,
                              const Grid4& grid) {
  grid.validate();
  if (std::abs(nu.euclid_norm2() - 1.0) > 1e-12) throw DomainError("plane phantom: nu must have unit length");
  if (!(delta > 0.0)) throw DomainError("plane phantom: delta must be positive");
  check_window(window, grid);
  Sym2Field f = fill_field(grid, u, [&](const std::array<double, 4>& x) {
    const double w = window(x);
    if (w == 0.0) return 0.0;
    const double s = x[0] * nu[0] + x[1] * nu[1] + x[2] * nu[2] + x[3] * nu[3];
    return w * std::exp(-s * s / (2.0 * delta * delta));
  });
  f.meta["phantom"] = "plane-conormal";
  f.meta["causal_class"] = to_string(causal_class(nu, 1e-9));
  return f;
}

Sym2Field make_gauge(const GaussianBump& c, const std::array<GaussianBump, 4>& w, const Grid4& grid) {
  grid.validate();
  ScalarField cf(grid);
  OneFormField wf(grid);
  auto fill = [&](const GaussianBump& b, std::vector<double>& out) {
    if (b.amplitude == 0.0) return;
    check_gaussian(b.center, b.sigma, grid);
    for (int i0 = 0; i0 < grid.dims[0]; ++i0)
      for (int i1 = 0; i1 < grid.dims[1]; ++i1)
        for (int i2 = 0; i2 < grid.dims[2]; ++i2)
          for (int i3 = 0; i3 < grid.dims[3]; ++i3)
            out[grid.linear(i0, i1, i2, i3)] = b.amplitude * gauss(grid.point(i0, i1, i2, i3), b.center, b.sigma);
  };
  fill(c, cf.v);
  for (int j = 0; j < 4; ++j) fill(w[j], wf.w[j]);
  Sym2Field f = gauge_field(cf, wf, DerivativeScheme::Spectral);
  f.meta["phantom"] = "gauge";
  return f;
}

const char* to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::Gaussian: return "gaussian";
    case PhantomKind::PlaneConormal: return "plane-conormal";
    case PhantomKind::Gauge: return "gauge";
    case PhantomKind::Empty: return "empty";
  }
  return "?";
}

PhantomKind phantom_kind_from_string(const std::string& s) {
  for (auto k : {PhantomKind::Gaussian, PhantomKind::PlaneConormal, PhantomKind::Gauge, PhantomKind::Empty})
    if (s == to_string(k)) return k;
  throw DomainError("unknown phantom kind '" + s + "'");
}

Sym2Field make_phantom(const PhantomSpec& spec, const Grid4& grid) {
  Sym2Field f;
  switch (spec.kind) {
    case PhantomKind::Gaussian:
      f = make_gaussian(spec.amplitude, spec.center, spec.sigma, grid, spec.windowed ? &spec.window : nullptr);
      break;
    case PhantomKind::PlaneConormal:
      f = make_plane_conormal(spec.amplitude, spec.nu, spec.delta, spec.window, grid);
      break;
    case PhantomKind::Gauge: f = make_gauge(spec.gauge_c, spec.gauge_w, grid); break;
    case PhantomKind::Empty:
      f = Sym2Field(grid);
      f.meta["phantom"] = "empty";
      break;
  }
  if (spec.band != Band::All || spec.project_gauge) {
    auto meta = f.meta;
    f = bandlimit(f, spec.band, spec.cutoff, spec.project_gauge);
    f.meta = meta;
  }
  return f;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Sym2 amplitude_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "metric") return Sym2::metric();
    if (s.size() == 3 && s[0] == 'e' && s[1] >= '0' && s[1] <= '3' && s[2] >= '0' && s[2] <= '3') {
      Sym2 t = Sym2::unit(s[1] - '0', s[2] - '0');
      return t;
    }
    throw FormatError("phantom amplitude: unknown name '" + s + "'");
  }
  if (!j.is_array() || j.size() != 10) throw FormatError("phantom amplitude: expected 10 packed components");
  Sym2 t;
  for (int p = 0; p < 10; ++p) t[p] = j[p].get<double>();
  return t;
}

std::array<double, 4> vec4_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) throw FormatError(std::string("phantom ") + what + ": expected 4 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

GaussianBump bump_from_json(const json& j) {
  GaussianBump b;
  b.amplitude = j.value("amplitude", b.amplitude);
  if (j.contains("center")) b.center = vec4_from_json(j["center"], "center");
  b.sigma = j.value("sigma", b.sigma);
  return b;
}

json bump_to_json(const GaussianBump& b) {
  return {{"amplitude", b.amplitude}, {"center", b.center}, {"sigma", b.sigma}};
}

}  // namespace

PhantomSpec parse_phantom_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("phantom spec: ") + e.what());
  }
  try {
    PhantomSpec s;
    s.kind = phantom_kind_from_string(j.value("kind", std::string("gaussian")));
    if (j.contains("amplitude")) s.amplitude = amplitude_from_json(j["amplitude"]);
    if (j.contains("center")) s.center = vec4_from_json(j["center"], "center");
    s.sigma = j.value("sigma", s.sigma);
    if (j.contains("nu")) {
      const auto n = vec4_from_json(j["nu"], "nu");
      s.nu = Covector{{n[0], n[1], n[2], n[3]}};
      if (j.value("normalize", true)) {
        const double len = std::sqrt(s.nu.euclid_norm2());
        if (len == 0.0) throw FormatError("phantom nu: zero vector");
        for (int d = 0; d < 4; ++d) s.nu.c[d] /= len;
      }
    }
    s.delta = j.value("delta", s.delta);
    if (j.contains("window")) {
      const json& w = j["window"];
      s.windowed = true;
      if (w.contains("center")) s.window.center = vec4_from_json(w["center"], "window.center");
      if (w.contains("half_width")) {
        if (w["half_width"].is_number()) s.window.half_width.fill(w["half_width"].get<double>());
        else s.window.half_width = vec4_from_json(w["half_width"], "window.half_width");
      }
      s.window.flat = w.value("flat", s.window.flat);
    }
    if (j.contains("c")) s.gauge_c = bump_from_json(j["c"]);
    if (j.contains("omega")) {
      const json& w = j["omega"];
      if (!w.is_array() || w.size() != 4) throw FormatError("phantom omega: expected 4 bumps");
      for (int k = 0; k < 4; ++k) s.gauge_w[k] = bump_from_json(w[k]);
    }
    s.band = band_from_string(j.value("band", std::string("all")));
    s.project_gauge = j.value("project_gauge", false);
    if (j.contains("cutoff")) {
      const json& c = j["cutoff"];
      s.cutoff.eps_band = c.value("eps_band", s.cutoff.eps_band);
      s.cutoff.taper_width = c.value("taper_width", s.cutoff.taper_width);
      s.cutoff.pinv_floor = c.value("pinv_floor", s.cutoff.pinv_floor);
      s.cutoff.sharp = c.value("sharp", s.cutoff.sharp);
    }
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("phantom spec: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("phantom spec: ") + e.what());
  }
}

std::string to_json(const PhantomSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["amplitude"] = std::vector<double>(s.amplitude.c.begin(), s.amplitude.c.end());
  j["center"] = s.center;
  j["sigma"] = s.sigma;
  j["nu"] = std::array<double, 4>{s.nu[0], s.nu[1], s.nu[2], s.nu[3]};
  j["normalize"] = false;
  j["delta"] = s.delta;
  if (s.windowed || s.kind == PhantomKind::PlaneConormal)
    j["window"] = {{"center", s.window.center}, {"half_width", s.window.half_width}, {"flat", s.window.flat}};
  j["c"] = bump_to_json(s.gauge_c);
  j["omega"] = json::array();
  for (const auto& b : s.gauge_w) j["omega"].push_back(bump_to_json(b));
  j["band"] = to_string(s.band);
  j["project_gauge"] = s.project_gauge;
  j["cutoff"] = {{"eps_band", s.cutoff.eps_band},
                 {"taper_width", s.cutoff.taper_width},
                 {"pinv_floor", s.cutoff.pinv_floor},
                 {"sharp", s.cutoff.sharp}};
  return j.dump();
}

std::vector<std::array<double, 4>> plane_layer_points(const Covector& nu, const Window& window, const Grid4& grid) {
  std::vector<std::array<double, 4>> pts;
  double reach = 0.0;
  for (int d = 0; d < 4; ++d) reach += std::abs(nu[d]) * grid.spacing[d];
  for (int i0 = 0; i0 < grid.dims[0]; ++i0)
    for (int i1 = 0; i1 < grid.dims[1]; ++i1)
      for (int i2 = 0; i2 < grid.dims[2]; ++i2)
        for (int i3 = 0; i3 < grid.dims[3]; ++i3) {
          const auto x = grid.point(i0, i1, i2, i3);
          const double s = x[0] * nu[0] + x[1] * nu[1] + x[2] * nu[2] + x[3] * nu[3];
          if (std::abs(s) <= 0.5 * reach && window(x) > 0.0) pts.push_back(x);
        }
  return pts;
}

}  // namespace minkray
