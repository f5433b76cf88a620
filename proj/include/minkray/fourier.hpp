#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "minkray/field.hpp"
#include "minkray/raytransform.hpp"
#include "minkray/symbol.hpp"

namespace minkray {

/// Dual grid of a Grid4 under the DFT: eta_j = 2 pi k_j / (N_j h_j),
/// k_j in [-N_j/2, N_j/2).
struct FrequencyGrid {
  Grid4 grid;
  explicit FrequencyGrid(const Grid4& g) : grid(g) {}
  double axis(int d, int k) const;  // k is the storage bin, 0 <= k < N_d
  Covector eta(int k0, int k1, int k2, int k3) const;
};

enum class MultiplierKind {
  Identity,        // exact identity, DC included
  Normal,          // 2 pi a(eta): the multiplier of L^t L
  NormalTruncated, // transform of the L^t L kernel cut to |tau| <= R (free space on the box)
  Parametrix,      // taper(eta) b(eta) / (2 pi), a left inverse of Normal on the band
  Reference,       // taper(eta) b(eta) a(eta)
  Cutoff,          // taper(eta) Id (space-like band)
  TimeCutoff,      // taper(-eta) Id with q negated (time-like band)
  GaugeProjector,  // w Pi + (1 - w) Id, w = gauge_weight(eta)
};

const char* to_string(MultiplierKind k);
MultiplierKind multiplier_kind_from_string(const std::string& s);

struct MultiplierSpec {
  MultiplierKind kind = MultiplierKind::Normal;
  CutoffSpec cutoff;
  int n_phi = 32;
  // Zero-pad every axis to padding * N before transforming. 1 means the
  // periodic multiplier; >= 3 approximates the free-space operator for fields
  // supported inside the box.
  int padding = 1;
  // NormalTruncated: kernel cut-off R in line parameter; <= 0 means the time
  // extent N0 h0 of the unpadded grid. With padding >= 2 periodic images of
  // the kernel cannot reach the box, so the result is the free-space operator.
  double truncation = 0.0;
};

// int_{S^2} 2 sin(R sigma)/sigma theta^{(x)4} dv with sigma = eta0 + v.eta', in
// Mandel coordinates. Tends to 2 pi a(eta) as R grows.
Mat10 truncated_normal_symbol(const Covector& eta, double R);

// The multiplier at one frequency, as a symmetric matrix in Mandel coordinates.
// Zero at eta = 0 except for Identity and NormalTruncated. On exactly light-like frequencies the
// normal symbol takes the mean of its two one-sided limits.
Mat10 multiplier_matrix(const Covector& eta, const MultiplierSpec& spec);

/// Reusable multiplier for fields on one grid. Per-frequency matrices are kept
/// when they fit in cache_budget bytes, otherwise recomputed slab by slab.
class MultiplierPlan {
 public:
  MultiplierPlan(const Grid4& grid, const MultiplierSpec& spec);
  ~MultiplierPlan();
  MultiplierPlan(const MultiplierPlan&) = delete;
  MultiplierPlan& operator=(const MultiplierPlan&) = delete;

  Sym2Field apply(const Sym2Field& f) const;
  const Grid4& grid() const { return grid_; }
  const Grid4& work_grid() const { return work_; }
  const MultiplierSpec& spec() const { return spec_; }
  bool cached() const { return !mats_.empty(); }

  static std::size_t cache_budget;

 private:
  void fill_slab(int k0, double* const* mats) const;

  Grid4 grid_, work_;
  MultiplierSpec spec_;
  std::vector<double> mats_;  // [55][frequency], empty when streaming
  struct Fft;
  std::unique_ptr<Fft> fft_;
};

Sym2Field apply_multiplier(const Sym2Field& f, const MultiplierSpec& m);

// Componentwise 4D DFT (unnormalised) and its inverse (1/N). ifft_field keeps
// the real part.
Sym2Field fft_field(const Sym2Field& f);
Sym2Field ifft_field(const Sym2Field& fhat);

// Per-frequency orthogonal projection onto the complement of the gauge null
// space, blended to the identity across the light cone.
Sym2Field gauge_project(const Sym2Field& f, const CutoffSpec& spec = {}, int padding = 1);

enum class Band { All, SpaceLike, TimeLike };
const char* to_string(Band b);
Band band_from_string(const std::string& s);
// padding > 1 zero-pads as in MultiplierSpec, so the result approximates the
// free-space band limit restricted to the grid instead of a periodic one.
Sym2Field bandlimit(const Sym2Field& f, Band keep, const CutoffSpec& spec = {}, bool project_gauge = false,
                    int padding = 1);

struct ReconstructOptions {
  MultiplierSpec parametrix{MultiplierKind::Parametrix, {}, 32, 1};
  TransformOptions transform;
  // Backproject onto the grid grown by this many cells on both sides of every
  // axis, apply the parametrix there, then crop.
  int extend = 0;
};

// A(u) = taper b (L^t u) on `grid`.
Sym2Field reconstruct(const RayData& u, const Grid4& grid, const ReconstructOptions& opt = {});
// F^{-1}[taper b a f^], the all-Fourier path.
Sym2Field reconstruct_fourier(const Sym2Field& f, const CutoffSpec& spec = {}, int n_phi = 32, int padding = 1);

Grid4 extend_grid(const Grid4& g, int cells);
Sym2Field embed(const Sym2Field& f, const Grid4& larger);  // zero outside f's grid
Sym2Field crop(const Sym2Field& f, const Grid4& smaller);

// Grid cells within `dilation` cells (per axis) of a flowout line of nu
// through any of the given points.
std::vector<std::uint8_t> artifact_mask(const Covector& nu, const std::vector<std::array<double, 4>>& points,
                                        const Grid4& grid, int dilation = 2, double eps = 1e-9);

// Energy (sum of Frobenius squares) of f inside the mask over the total.
double mask_energy_fraction(const Sym2Field& f, const std::vector<std::uint8_t>& mask);

}  // namespace minkray
