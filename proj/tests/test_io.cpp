#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "minkray/io.hpp"
#include "minkray/report.hpp"
#include "minkray/sphere.hpp"

using namespace minkray;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("minkray_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Sym2Field random_field(const Grid4& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Sym2Field f(g);
  for (double& v : f.real_data()) v = n(rng);
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& s) {
  std::ofstream out(path, std::ios::binary);
  out << s;
}

// Replaces the JSON header of a file with `edit(header)`.
template <class F>
void edit_header(const std::string& path, F&& edit) {
  std::string s = slurp(path);
  const auto a = s.find('\n') + 1;
  const auto b = s.find('\n', a);
  auto h = nlohmann::json::parse(s.substr(a, b - a));
  edit(h);
  spit(path, s.substr(0, a) + h.dump() + s.substr(b));
}

std::string format_error(const std::string& path, bool rays) {
  try {
    if (rays) read_rays(path);
    else read_t2f(path);
  } catch (const FormatError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("t2f round trip is bit exact") {
  TempDir tmp;
  Grid4 g = Grid4::cube(5, -1, 1);
  g.dims[2] = 4;
  Sym2Field f = random_field(g, 1);
  f.meta["phantom"] = "gaussian";
  write_t2f(tmp.file("a.t2f"), f);
  const Sym2Field r = read_t2f(tmp.file("a.t2f"));
  CHECK(r.grid() == g);
  CHECK(r.meta == f.meta);
  CHECK(std::memcmp(r.real_data().data(), f.real_data().data(), f.real_data().size() * sizeof(double)) == 0);
}

TEST_CASE("t2f frequency fields round trip") {
  TempDir tmp;
  Sym2Field f(Grid4::cube(4, -1, 1), FieldDomain::Frequency);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (auto& z : f.complex_data()) z = {n(rng), n(rng)};
  write_t2f(tmp.file("h.t2f"), f);
  const Sym2Field r = read_t2f(tmp.file("h.t2f"));
  CHECK(r.domain() == FieldDomain::Frequency);
  CHECK(r.complex_data() == f.complex_data());
}

TEST_CASE("t2f errors name the offending header field") {
  TempDir tmp;
  const std::string p = tmp.file("b.t2f");
  const Sym2Field f = random_field(Grid4::cube(4, -1, 1), 3);

  write_t2f(p, f);
  edit_header(p, [](auto& h) { h.erase("dims"); });
  CHECK(format_error(p, false).find("'dims'") != std::string::npos);

  write_t2f(p, f);
  edit_header(p, [](auto& h) { h["components"] = 9; });
  CHECK(format_error(p, false).find("'components'") != std::string::npos);

  write_t2f(p, f);
  edit_header(p, [](auto& h) { h["dtype"] = "f32le"; });
  CHECK(format_error(p, false).find("'dtype'") != std::string::npos);

  write_t2f(p, f);
  std::string s = slurp(p);
  spit(p, s.substr(0, s.size() - 8));
  CHECK(format_error(p, false).find("truncated") != std::string::npos);
  spit(p, s + "x");
  CHECK(format_error(p, false).find("trailing") != std::string::npos);
  spit(p, "T2F2\n" + s.substr(5));
  CHECK(format_error(p, false).find("magic") != std::string::npos);

  CHECK_THROWS_AS(read_t2f(tmp.file("missing.t2f")), IoError);
  CHECK_THROWS_AS(write_t2f(tmp.file("no/such/dir/x.t2f"), f), IoError);
}

TEST_CASE("rays round trip is bit exact") {
  TempDir tmp;
  const Grid4 g = Grid4::cube(6, -1, 1);
  const RayGrid rg = RayGrid::covering(g, fibonacci_sphere(12), LineQuadrature{});
  RayData u(rg);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const auto mask = rg.mask();
  for (std::size_t iv = 0; iv < rg.sphere.size(); ++iv)
    for (std::size_t y = 0; y < rg.lattice_size(); ++y)
      if (mask[y]) u.direction(iv)[y] = n(rng);
  u.field_id = "f1";
  write_rays(tmp.file("u.rays"), u);
  const RayData r = read_rays(tmp.file("u.rays"));
  CHECK(r.field_id == "f1");
  CHECK(r.grid.sphere.size() == rg.sphere.size());
  CHECK(r.grid.lattice_size() == rg.lattice_size());
  CHECK(r.values == u.values);
  CHECK(rays_header(r) == rays_header(u));
}

TEST_CASE("rays errors name the offending header field") {
  TempDir tmp;
  const std::string p = tmp.file("v.rays");
  const RayData u(RayGrid::covering(Grid4::cube(4, -1, 1), fibonacci_sphere(8), LineQuadrature{}));
  write_rays(p, u);
  edit_header(p, [](auto& h) { h["n_v"] = 9; });
  CHECK(format_error(p, true).find("'n_v'") != std::string::npos);
  write_rays(p, u);
  edit_header(p, [](auto& h) { h["n_y"] = 1; });
  CHECK(format_error(p, true).find("'n_y'") != std::string::npos);
  write_rays(p, u);
  edit_header(p, [](auto& h) { h["region"]["kind"] = "torus"; });
  CHECK(format_error(p, true).find("'region.kind'") != std::string::npos);
}

TEST_CASE("pgm slices map min and max to 0 and 255") {
  TempDir tmp;
  const Grid4 g = Grid4::cube(4, -1, 1);
  Sym2Field f(g);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Sym2 v;
      v[Sym2::index(1, 1)] = a * 4 + b;
      f.set(g.linear(a, b, 1, 2), v);
    }
  const Image img = slice2d(f, Sym2::index(1, 1), 0, 1, {0, 0, 1, 2});
  CHECK(img.rows == 4);
  CHECK(img.cols == 4);
  CHECK(img.pixels[5] == 5.0);
  const auto [lo, hi] = write_pgm(tmp.file("s.pgm"), img);
  CHECK(lo == 0.0);
  CHECK(hi == 15.0);
  const std::string s = slurp(tmp.file("s.pgm"));
  const std::string head = "P5\n4 4\n255\n";
  REQUIRE(s.size() == head.size() + 16);
  CHECK(s.substr(0, head.size()) == head);
  CHECK(static_cast<unsigned char>(s[head.size()]) == 0);
  CHECK(static_cast<unsigned char>(s[head.size() + 15]) == 255);
  CHECK(static_cast<unsigned char>(s[head.size() + 5]) == 85);
}

TEST_CASE("constant pgm maps to zero") {
  TempDir tmp;
  Image img{2, 3, std::vector<double>(6, 4.0)};
  write_pgm(tmp.file("c.pgm"), img);
  const std::string s = slurp(tmp.file("c.pgm"));
  for (std::size_t i = s.size() - 6; i < s.size(); ++i) CHECK(s[i] == 0);
}

TEST_CASE("report round trip and pass logic") {
  ExperimentReport r;
  r.id = "demo";
  r.params["grid"] = 16;
  r.add("err", 0.01, "<=", 0.03);
  r.add("frac", 0.7, ">=", 0.6);
  r.add("note", 3.0);
  r.runtimes.push_back({"forward", 1.5});
  CHECK(r.pass());
  const ExperimentReport back = ExperimentReport::from_json(r.to_json(false));
  CHECK(back.to_json(false) == r.to_json(false));
  CHECK(r.to_json(false).find("forward") == std::string::npos);
  CHECK(r.to_json(true).find("forward") != std::string::npos);
  r.add("bad", std::numeric_limits<double>::quiet_NaN(), "info");
  CHECK_FALSE(r.pass());
  ExperimentReport f;
  f.add("err", 0.05, "<=", 0.03);
  CHECK_FALSE(f.pass());
  CHECK(f.find("err") != nullptr);
  CHECK(f.find("none") == nullptr);
}
