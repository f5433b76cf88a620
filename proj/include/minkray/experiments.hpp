#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minkray/phantoms.hpp"
#include "minkray/report.hpp"

namespace minkray {

// Pass/fail thresholds of the acceptance experiments. Bumping any value
// bumps kDefaultsVersion.
struct Thresholds {
  double closed_form = 1e-12;
  double quadrature = 1e-13;
  double monte_carlo_sigmas = 3.0;
  double null_space = 1e-12;
  double rank_floor = 1e-8;
  double psd_floor = 1e-12;
  double homogeneity = 1e-12;
  double light_cone = 1e-3;
  double pseudoinverse = 1e-10;
  double forward_oracle = 1e-4;
  double gauge_exact = 1e-13;  // c g: rounding of theta theta : g only
  double gauge_rms = 1e-3;
  double adjoint = 1e-3;
  double normal = 0.03;
  double parametrix = 1e-9;
  double recovery = 0.05;
  double timelike_fourier = 1e-6;
  double timelike_geometric = 5e-2;
  double artifact_fraction = 0.6;
};

inline constexpr const char* kDefaultsVersion = "1";

struct ExperimentConfig {
  int grid = 32;
  double box_lo = -1.0, box_hi = 1.0;
  int n_phi = 32;
  int n_s = 257;
  int n_v = 576;
  CutoffSpec cutoff;
  Interp interp = Interp::CubicBSpline;
  std::uint64_t seed = 7;
  int samples = 100;       // random covectors per symbol suite
  int extend = 4;          // backprojection margin in cells for reconstruct
  int mask_dilation = 2;   // artifact mask dilation in cells
  double plane_delta = 0.1;
  Window plane_window = default_plane_window();
  std::string out_dir;     // slice images are written here when set
  Thresholds thresholds;

  static Window default_plane_window();
  Grid4 grid4() const;
  RayGrid rays(const Grid4& g) const;
  TransformOptions transform() const;
  nlohmann::ordered_json to_json() const;
};

struct Criterion {
  int number;
  const char* id;
  ExperimentReport (*run)(const ExperimentConfig&);
};

// Criteria 1-15; determinism (16) compares two suite runs.
const std::vector<Criterion>& criteria();
const Criterion& criterion(const std::string& id_or_number);

ExperimentReport symbol_closed_forms(const ExperimentConfig& cfg);
ExperimentReport quadrature_exactness(const ExperimentConfig& cfg);
ExperimentReport symbol_null_space(const ExperimentConfig& cfg);
ExperimentReport symbol_rank_psd(const ExperimentConfig& cfg);
ExperimentReport symbol_homogeneity(const ExperimentConfig& cfg);
ExperimentReport light_cone_limit(const ExperimentConfig& cfg);
ExperimentReport pseudoinverse(const ExperimentConfig& cfg);
ExperimentReport forward_oracle(const ExperimentConfig& cfg);
ExperimentReport gauge_invisibility(const ExperimentConfig& cfg);
ExperimentReport adjoint_pairing(const ExperimentConfig& cfg);
ExperimentReport normal_agreement(const ExperimentConfig& cfg);
ExperimentReport parametrix_identity(const ExperimentConfig& cfg);
ExperimentReport recovery(const ExperimentConfig& cfg);
ExperimentReport timelike_annihilation(const ExperimentConfig& cfg);
ExperimentReport flowout_artifacts(const ExperimentConfig& cfg);

// Amplitude of the plane phantoms: e23 + (e22 - e33)/2, transverse and
// trace-free for nu = (0, 1, 0, 0).
Sym2 plane_amplitude();

// Reconstruction energy inside the flowout mask of a light-like plane
// phantom; shared by the artifacts command and criterion 15.
ExperimentReport artifact_report(const Sym2Field& f, const Sym2Field& recon, const Covector& nu,
                                 const ExperimentConfig& cfg);

}  // namespace minkray
