// minkray: symbol atlas, phantoms, forward/adjoint/normal transforms,
// reconstruction, artifact measurement, light-ray reachability and the
// acceptance experiments.
//
// Exit codes: 0 success, 1 a thresholded metric failed, 2 usage, 3 I/O.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "minkray/experiments.hpp"
#include "minkray/io.hpp"
#include "minkray/kernels.hpp"
#include "minkray/parallel.hpp"

using namespace minkray;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kMetricFail = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  ExperimentConfig cfg;
  std::vector<double> box{-1.0, 1.0};
  std::string interp = "cubic";
  int threads = 0;
  bool deterministic = false;
  bool no_timestamps = false;

  void finalize() {
    if (box.size() != 2 || !(box[1] > box[0])) throw UsageError("--box expects a,b with a < b");
    cfg.box_lo = box[0];
    cfg.box_hi = box[1];
    cfg.interp = interp_from_string(interp);
    cfg.cutoff.validate();
    if (threads > 0) set_thread_count(threads);
  }

  void stamp(ExperimentReport& r) const {
    r.params["threads"] = thread_count();
    r.params["deterministic"] = deterministic;
    if (!no_timestamps) r.params["kernels"] = kernels::active_name();
  }

  // Prints the report and writes it to --out; returns the exit code.
  int emit(ExperimentReport& r) const {
    stamp(r);
    const std::string text = r.to_json(!no_timestamps);
    std::cout << text << "\n";
    if (!cfg.out_dir.empty()) {
      fs::create_directories(cfg.out_dir);
      write_text_file((fs::path(cfg.out_dir) / (r.id + ".json")).string(), text + "\n");
    }
    return r.pass() ? kOk : kMetricFail;
  }

  ExperimentReport report(const std::string& id) const {
    ExperimentReport r;
    r.id = id;
    r.params = cfg.to_json();
    return r;
  }
};

class Timer {
 public:
  Timer() : t_(std::chrono::steady_clock::now()) {}
  void lap(ExperimentReport& r, const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    r.runtimes.emplace_back(name, std::chrono::duration<double>(now - t_).count());
    t_ = now;
  }

 private:
  std::chrono::steady_clock::time_point t_;
};

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  if (n && out.size() != n) throw UsageError(flag + " expects " + std::to_string(n) + " comma-separated numbers");
  return out;
}

Covector parse_covector(const std::string& s, const std::string& flag) {
  const auto v = parse_list(s, 4, flag);
  return Covector{{v[0], v[1], v[2], v[3]}};
}

double energy_ratio(const Sym2Field& a, const Sym2Field& b) {
  const double den = b.norm2();
  return den > 0.0 ? a.norm2() / den : 0.0;
}

ReconstructOptions reconstruct_options(const ExperimentConfig& cfg) {
  ReconstructOptions ro;
  ro.parametrix = {MultiplierKind::Parametrix, cfg.cutoff, cfg.n_phi, 1};
  ro.transform = cfg.transform();
  ro.extend = cfg.extend;
  return ro;
}

// ---------------------------------------------------------------------------

std::string csv_header() {
  std::string h = "eta0,eta1,eta2,eta3";
  for (const auto& idx : independent_index_list())
    h += ",a" + std::to_string(idx[0]) + std::to_string(idx[1]) + std::to_string(idx[2]) + std::to_string(idx[3]);
  for (int i = 0; i < 10; ++i) h += ",lambda" + std::to_string(i);
  return h;
}

std::string csv_row(const Covector& eta, int n_phi) {
  const SymbolOperator a = symbol_a(eta, n_phi);
  const auto comps = independent_components(a);
  Vec10 lam = Vec10::Zero();
  if (!a.is_zero()) lam = symbol_eigenvalues(a);
  std::ostringstream os;
  os.precision(17);
  os << eta[0] << ',' << eta[1] << ',' << eta[2] << ',' << eta[3];
  for (double c : comps) os << ',' << c;
  for (int i = 0; i < 10; ++i) os << ',' << lam[i];
  return os.str();
}

int cmd_symbol_eval(const Globals& g, const std::vector<std::string>& etas, const std::vector<double>& range, int steps,
                    const std::string& csv) {
  std::vector<Covector> points;
  for (const auto& e : etas) points.push_back(parse_covector(e, "--eta"));
  if (!range.empty()) {
    if (range.size() != 2 || steps < 1) throw UsageError("--range expects lo,hi with --steps >= 1");
    const double h = steps > 1 ? (range[1] - range[0]) / (steps - 1) : 0.0;
    for (int a = 0; a < steps; ++a)
      for (int b = 0; b < steps; ++b)
        for (int c = 0; c < steps; ++c)
          for (int d = 0; d < steps; ++d)
            points.push_back(Covector{{range[0] + a * h, range[0] + b * h, range[0] + c * h, range[0] + d * h}});
  }
  if (points.empty()) throw UsageError("symbol eval needs --eta or --range");
  std::ostringstream os;
  os << csv_header() << "\n";
  for (const auto& eta : points) os << csv_row(eta, g.cfg.n_phi) << "\n";
  if (csv.empty()) std::cout << os.str();
  else write_text_file(csv, os.str());
  return kOk;
}

int run_criteria(const Globals& g, const std::vector<const Criterion*>& list) {
  int failures = 0;
  for (const Criterion* c : list) {
    ExperimentReport r = c->run(g.cfg);
    g.stamp(r);
    const bool ok = r.pass();
    failures += !ok;
    std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", c->number, c->id);
    if (!g.cfg.out_dir.empty()) {
      fs::create_directories(g.cfg.out_dir);
      write_text_file((fs::path(g.cfg.out_dir) / (std::string(c->id) + ".json")).string(),
                      r.to_json(!g.no_timestamps) + "\n");
    }
  }
  std::fflush(stdout);
  return failures ? kMetricFail : kOk;
}

int cmd_symbol_check(const Globals& g) {
  std::vector<const Criterion*> list;
  for (const char* id : {"symbol-homogeneity", "symbol-rank-psd", "symbol-null-space", "quadrature-exactness"})
    list.push_back(&criterion(id));
  return run_criteria(g, list);
}

int cmd_experiment(const Globals& g, const std::vector<std::string>& ids) {
  std::vector<const Criterion*> list;
  if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) {
    for (const auto& c : criteria()) list.push_back(&c);
  } else {
    for (const auto& id : ids) {
      try {
        list.push_back(&criterion(id));
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
    }
  }
  return run_criteria(g, list);
}

// ---------------------------------------------------------------------------

int cmd_phantom(const Globals& g, const std::string& spec_file, const std::string& kind, const std::string& nu,
                const std::string& band, bool project, double delta, const std::string& out) {
  PhantomSpec spec;
  if (!spec_file.empty()) {
    spec = parse_phantom_spec(read_text_file(spec_file));
  } else {
    spec.kind = phantom_kind_from_string(kind);
    if (spec.kind == PhantomKind::PlaneConormal) {
      spec.amplitude = plane_amplitude();
      spec.delta = g.cfg.plane_delta;
      spec.windowed = true;
      spec.window = g.cfg.plane_window;
    }
    if (!nu.empty()) spec.nu = parse_covector(nu, "--nu");
    if (delta > 0.0) spec.delta = delta;
    spec.band = band_from_string(band);
    spec.project_gauge = project;
    spec.cutoff = g.cfg.cutoff;
  }
  Timer t;
  ExperimentReport r = g.report("phantom");
  const Sym2Field f = make_phantom(spec, g.cfg.grid4());
  t.lap(r, "make");
  write_t2f(out, f);
  r.params["phantom"] = ordered_json::parse(to_json(spec));
  r.params["output"] = out;
  r.add("l2_norm", std::sqrt(f.norm2()));
  return g.emit(r);
}

int cmd_forward(const Globals& g, const std::string& in, const std::string& out) {
  Timer t;
  ExperimentReport r = g.report("forward");
  const Sym2Field f = read_t2f(in);
  RayData u = forward(f, g.cfg.rays(f.grid()), g.cfg.transform());
  u.field_id = fs::path(in).filename().string();
  t.lap(r, "forward");
  write_rays(out, u);
  r.params["input"] = in;
  r.params["output"] = out;
  r.params["rays"] = u.grid.ray_count();
  r.add("l2_norm", std::sqrt(u.norm2()));
  return g.emit(r);
}

int cmd_adjoint(const Globals& g, const std::string& in, const std::string& out) {
  Timer t;
  ExperimentReport r = g.report("adjoint");
  const RayData u = read_rays(in);
  const Sym2Field f = adjoint(u, g.cfg.grid4(), g.cfg.transform());
  t.lap(r, "adjoint");
  write_t2f(out, f);
  r.params["input"] = in;
  r.params["output"] = out;
  r.add("l2_norm", std::sqrt(f.norm2()));
  return g.emit(r);
}

int cmd_normal(const Globals& g, const std::string& in, const std::string& out, const std::string& path,
               const std::string& compare) {
  Timer t;
  ExperimentReport r = g.report("normal");
  const Sym2Field f = read_t2f(in);
  Sym2Field n;
  if (path == "geometric") {
    n = normal_geometric(f, g.cfg.rays(f.grid()), g.cfg.transform());
  } else {
    // Free-space kernel on the zero-padded box: what the geometric path computes.
    MultiplierSpec m{MultiplierKind::NormalTruncated, g.cfg.cutoff, g.cfg.n_phi, 2};
    n = apply_multiplier(f, m);
  }
  t.lap(r, path);
  if (!out.empty()) write_t2f(out, n);
  r.params["input"] = in;
  r.params["path"] = path;
  r.add("l2_norm", std::sqrt(n.norm2()));
  if (!compare.empty()) {
    r.params["compare"] = compare;
    r.add("rel_l2_vs_compare", relative_l2(n, read_t2f(compare)), "<=", g.cfg.thresholds.normal);
  }
  return g.emit(r);
}

int cmd_reconstruct(const Globals& g, const std::string& in, const std::string& out, const std::string& reference) {
  Timer t;
  ExperimentReport r = g.report("reconstruct");
  const RayData u = read_rays(in);
  const Sym2Field rec = reconstruct(u, g.cfg.grid4(), reconstruct_options(g.cfg));
  t.lap(r, "reconstruct");
  if (!out.empty()) write_t2f(out, rec);
  r.params["input"] = in;
  r.add("l2_norm", std::sqrt(rec.norm2()));
  if (!reference.empty()) {
    const Sym2Field f = read_t2f(reference);
    r.params["reference"] = reference;
    r.add("energy_ratio", energy_ratio(rec, f));
    r.add("rel_l2", f.norm2() > 0.0 ? relative_l2(rec, f) : 0.0);
  }
  return g.emit(r);
}

int cmd_artifacts(const Globals& g, const std::string& nu_text, bool empty) {
  const Covector nu = parse_covector(nu_text, "--nu");
  const Grid4 grid = g.cfg.grid4();
  Timer t;
  Sym2Field f(grid);
  if (!empty) f = make_plane_conormal(plane_amplitude(), nu, g.cfg.plane_delta, g.cfg.plane_window, grid);
  const Sym2Field rec = empty ? Sym2Field(grid)
                              : reconstruct(forward(f, g.cfg.rays(grid), g.cfg.transform()), grid,
                                            reconstruct_options(g.cfg));
  ExperimentReport r = artifact_report(f, rec, nu, g.cfg);
  r.id = "artifacts";
  r.params["empty"] = empty;
  t.lap(r, "total");
  return g.emit(r);
}

int cmd_lu(const std::vector<std::string>& points, const std::string& ball, const std::string& box) {
  Region u;
  if (!ball.empty() == !box.empty()) throw UsageError("lu needs exactly one of --ball cx,cy,cz,r or --box lx,ly,lz,hx,hy,hz");
  if (!ball.empty()) {
    const auto b = parse_list(ball, 4, "--ball");
    if (!(b[3] >= 0.0)) throw UsageError("--ball: radius must be non-negative");
    u = Region::ball({b[0], b[1], b[2]}, b[3]);
  } else {
    const auto b = parse_list(box, 6, "--box");
    for (int i = 0; i < 3; ++i)
      if (b[i] > b[i + 3]) throw UsageError("--box: lo must not exceed hi");
    u = Region::box({b[0], b[1], b[2]}, {b[3], b[4], b[5]});
  }
  if (points.empty()) throw UsageError("lu needs at least one --point t,x,y,z");
  ordered_json out = ordered_json::array();
  for (const auto& s : points) {
    const auto p = parse_list(s, 4, "--point");
    const auto [lo, hi] = u.distance_range({p[1], p[2], p[3]});
    out.push_back({{"point", p}, {"distance_range", {lo, hi}}, {"in_LU", in_LU({p[0], p[1], p[2], p[3]}, u)}});
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Light ray transform of symmetric 2-tensors on Minkowski space"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  ExperimentConfig& c = g.cfg;
  if (const char* env = std::getenv("MINKRAY_THREADS")) g.threads = std::atoi(env);

  app.add_option("--grid", c.grid, "grid points per axis")->check(CLI::Range(4, 1024));
  app.add_option("--box", g.box, "box bounds a,b on every axis")->delimiter(',')->expected(2);
  app.add_option("--n-phi", c.n_phi, "circle quadrature nodes")->check(CLI::Range(1, 4096));
  app.add_option("--n-s", c.n_s, "line quadrature nodes")->check(CLI::Range(2, 1 << 20));
  app.add_option("--n-v", c.n_v, "sphere directions")->check(CLI::Range(1, 1 << 20));
  app.add_option("--eps-band", c.cutoff.eps_band, "space-like band edge q/|eta|^2");
  app.add_option("--taper", c.cutoff.taper_width, "taper width as a fraction of the band edge");
  app.add_option("--pinv-floor", c.cutoff.pinv_floor, "relative pseudoinverse floor");
  app.add_flag("--sharp", c.cutoff.sharp, "sharp band cutoff");
  app.add_option("--interp", g.interp, "interpolation: linear or cubic")->check(CLI::IsMember({"linear", "cubic"}));
  app.add_option("--extend", c.extend, "backprojection margin in cells")->check(CLI::Range(0, 64));
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads (default MINKRAY_THREADS or 1)")->check(CLI::Range(1, 1024));
  app.add_flag("--deterministic", g.deterministic, "deterministic schedules (always on; recorded in reports)");
  app.add_flag("--no-timestamps", g.no_timestamps, "omit runtimes and run-specific fields from reports");
  app.add_option("--out", c.out_dir, "directory for reports and images");

  auto* symbol = app.add_subcommand("symbol", "principal symbol a(eta)");
  symbol->require_subcommand(1);
  std::vector<std::string> etas;
  std::vector<double> range;
  int steps = 0;
  std::string csv;
  auto* eval = symbol->add_subcommand("eval", "CSV atlas of a(eta) and its eigenvalues");
  eval->add_option("--eta", etas, "covector e0,e1,e2,e3 (repeatable)");
  eval->add_option("--range", range, "lo,hi of a regular eta grid")->delimiter(',')->expected(2);
  eval->add_option("--steps", steps, "points per axis of the --range grid");
  eval->add_option("--csv", csv, "write CSV here instead of stdout");
  auto* check = symbol->add_subcommand("check", "homogeneity, PSD/rank, null space and quadrature suites");
  check->add_option("--samples", c.samples, "random covectors per suite")->check(CLI::Range(1, 1000000));

  std::string spec_file, kind = "gaussian", nu, band = "all", out, in, path = "geometric", compare, reference;
  bool project = false, empty = false;
  double delta = 0.0;
  auto* phantom = app.add_subcommand("phantom", "phantom fields");
  phantom->require_subcommand(1);
  auto* make = phantom->add_subcommand("make", "write a phantom .t2f");
  make->add_option("--spec", spec_file, "phantom spec JSON");
  make->add_option("--kind", kind, "gaussian, plane-conormal, gauge or empty");
  make->add_option("--nu", nu, "plane conormal n0,n1,n2,n3");
  make->add_option("--delta", delta, "plane profile width");
  make->add_option("--band", band, "all, space-like or time-like")->check(CLI::IsMember({"all", "space-like", "time-like"}));
  make->add_flag("--project-gauge", project, "project out the gauge part");
  make->add_option("-o,--output", out, "output .t2f")->required();

  auto* fwd = app.add_subcommand("forward", "light ray transform of a field");
  fwd->add_option("-i,--input", in, "input .t2f")->required();
  fwd->add_option("-o,--output", out, "output .rays")->required();

  auto* adj = app.add_subcommand("adjoint", "backprojection of ray data onto the --grid/--box field grid");
  adj->add_option("-i,--input", in, "input .rays")->required();
  adj->add_option("-o,--output", out, "output .t2f")->required();

  auto* nrm = app.add_subcommand("normal", "normal operator L^t L");
  nrm->add_option("-i,--input", in, "input .t2f")->required();
  nrm->add_option("-o,--output", out, "output .t2f");
  nrm->add_option("--path", path, "geometric or fourier")->check(CLI::IsMember({"geometric", "fourier"}));
  nrm->add_option("--compare", compare, "report relative L2 against this .t2f");

  auto* rec = app.add_subcommand("reconstruct", "parametrix reconstruction from ray data");
  rec->add_option("-i,--input", in, "input .rays")->required();
  rec->add_option("-o,--output", out, "output .t2f");
  rec->add_option("--reference", reference, "report errors against this .t2f");

  std::string art_nu = "0.7071067811865476,0.7071067811865476,0,0";
  auto* art = app.add_subcommand("artifacts", "flowout artifacts of a plane phantom");
  art->add_option("--nu", art_nu, "plane conormal n0,n1,n2,n3 (default light-like)");
  art->add_option("--delta", c.plane_delta, "plane profile width");
  art->add_option("--dilation", c.mask_dilation, "mask dilation in cells")->check(CLI::Range(0, 64));
  art->add_option("--threshold", c.thresholds.artifact_fraction, "required energy fraction in the mask");
  art->add_flag("--empty", empty, "use the zero phantom");

  std::vector<std::string> points;
  std::string ball, box;
  auto* lu = app.add_subcommand("lu", "is p reached by a light ray from U in the t = 0 slice");
  lu->add_option("--point", points, "t,x,y,z (repeatable)");
  lu->add_option("--ball", ball, "cx,cy,cz,r");
  lu->add_option("--box", box, "lx,ly,lz,hx,hy,hz");

  std::vector<std::string> ids;
  auto* exp = app.add_subcommand("experiment", "run acceptance experiments by id or number (default all)");
  exp->add_option("ids", ids, "experiment ids or numbers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    g.finalize();
    if (*eval) return cmd_symbol_eval(g, etas, range, steps, csv);
    if (*check) return cmd_symbol_check(g);
    if (*make) return cmd_phantom(g, spec_file, kind, nu, band, project, delta, out);
    if (*fwd) return cmd_forward(g, in, out);
    if (*adj) return cmd_adjoint(g, in, out);
    if (*nrm) return cmd_normal(g, in, out, path, compare);
    if (*rec) return cmd_reconstruct(g, in, out, reference);
    if (*art) return cmd_artifacts(g, art_nu, empty);
    if (*lu) return cmd_lu(points, ball, box);
    if (*exp) return cmd_experiment(g, ids);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
