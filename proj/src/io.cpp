#include "minkray/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace minkray {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "payloads are written in host order");

namespace {

constexpr char kT2fMagic[] = "T2F1\n";
constexpr char kRaysMagic[] = "RAYS1\n";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

void expect_magic(std::istream& in, const char* magic, const std::string& path) {
  std::string m(std::strlen(magic), '\0');
  in.read(m.data(), static_cast<std::streamsize>(m.size()));
  if (!in || m != magic) throw FormatError("'" + path + "': bad magic, expected " + std::string(magic, std::strlen(magic) - 1));
}

json read_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("'" + path + "': missing header line");
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': header is not JSON: " + e.what());
  }
}

template <class T>
T field(const json& h, const char* key, const std::string& path) {
  if (!h.contains(key)) throw FormatError("'" + path + "': header field '" + key + "' missing");
  try {
    return h.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError("'" + path + "': header field '" + key + "' has the wrong type");
  }
}

void read_payload(std::istream& in, void* dst, std::size_t bytes, const std::string& path) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw FormatError("'" + path + "': payload truncated");
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("'" + path + "': trailing bytes after payload");
}

json region_json(const Region& r) {
  if (r.kind == Region::Kind::Box) return {{"kind", "box"}, {"lo", r.lo}, {"hi", r.hi}};
  return {{"kind", "ball"}, {"center", r.center}, {"radius", r.radius}};
}

Region region_from(const json& j, const std::string& path) {
  const auto kind = field<std::string>(j, "kind", path);
  if (kind == "box") return Region::box(field<Vec3>(j, "lo", path), field<Vec3>(j, "hi", path));
  if (kind == "ball") return Region::ball(field<Vec3>(j, "center", path), field<double>(j, "radius", path));
  throw FormatError("'" + path + "': header field 'region.kind' must be box or ball");
}

}  // namespace

std::string t2f_header(const Sym2Field& f) {
  const Grid4& g = f.grid();
  json h;
  h["dims"] = g.dims;
  h["spacing"] = g.spacing;
  h["origin"] = g.origin;
  h["domain"] = to_string(f.domain());
  h["components"] = 10;
  h["dtype"] = f.domain() == FieldDomain::Position ? "f64le" : "c128le";
  h["meta"] = f.meta;
  return h.dump();
}

void write_t2f(const std::string& path, const Sym2Field& f) {
  auto out = open_out(path);
  out << kT2fMagic << t2f_header(f) << '\n';
  if (f.domain() == FieldDomain::Position)
    out.write(reinterpret_cast<const char*>(f.real_data().data()),
              static_cast<std::streamsize>(f.real_data().size() * sizeof(double)));
  else
    out.write(reinterpret_cast<const char*>(f.complex_data().data()),
              static_cast<std::streamsize>(f.complex_data().size() * sizeof(std::complex<double>)));
  if (!out) throw IoError("write to '" + path + "' failed");
}

Sym2Field read_t2f(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, kT2fMagic, path);
  const json h = read_header(in, path);
  Grid4 g;
  g.dims = field<std::array<int, 4>>(h, "dims", path);
  g.spacing = field<std::array<double, 4>>(h, "spacing", path);
  g.origin = field<std::array<double, 4>>(h, "origin", path);
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw FormatError("'" + path + "': header field 'dims'/'spacing' invalid: " + e.what());
  }
  if (field<int>(h, "components", path) != 10) throw FormatError("'" + path + "': header field 'components' must be 10");
  const auto domain = field<std::string>(h, "domain", path);
  const auto dtype = field<std::string>(h, "dtype", path);
  FieldDomain d;
  if (domain == "position" && dtype == "f64le") d = FieldDomain::Position;
  else if (domain == "frequency" && dtype == "c128le") d = FieldDomain::Frequency;
  else throw FormatError("'" + path + "': header fields 'domain'/'dtype' inconsistent or unknown");
  Sym2Field f(g, d);
  if (h.contains("meta")) {
    try {
      f.meta = h["meta"].get<std::map<std::string, std::string>>();
    } catch (const json::exception&) {
      throw FormatError("'" + path + "': header field 'meta' must map strings to strings");
    }
  }
  if (d == FieldDomain::Position)
    read_payload(in, f.real_data().data(), f.real_data().size() * sizeof(double), path);
  else
    read_payload(in, f.complex_data().data(), f.complex_data().size() * sizeof(std::complex<double>), path);
  return f;
}

std::string rays_header(const RayData& u) {
  const RayGrid& r = u.grid;
  json h;
  h["region"] = region_json(r.region);
  h["lattice"] = {{"dims", r.dims}, {"spacing", r.spacing}, {"origin", r.origin}};
  h["n_y"] = r.crossing_count();
  h["sphere"] = {{"kind", to_string(r.sphere.kind)}, {"n", r.sphere.n}};
  h["n_v"] = r.sphere.size();
  h["line"] = {{"n_s", r.line.n_s}, {"s_max", r.line.s_max}};
  h["field_id"] = u.field_id;
  h["dtype"] = "f64le";
  h["order"] = "y-outer,v-inner";
  return h.dump();
}

void write_rays(const std::string& path, const RayData& u) {
  auto out = open_out(path);
  out << kRaysMagic << rays_header(u) << '\n';
  const auto mask = u.grid.mask();
  const std::size_t nv = u.grid.sphere.size();
  std::vector<double> row(nv);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    for (std::size_t v = 0; v < nv; ++v) row[v] = u.at(i, v);
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(nv * sizeof(double)));
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

RayData read_rays(const std::string& path) {
  auto in = open_in(path);
  expect_magic(in, kRaysMagic, path);
  const json h = read_header(in, path);
  RayGrid g;
  g.region = region_from(field<json>(h, "region", path), path);
  const json lat = field<json>(h, "lattice", path);
  g.dims = field<std::array<int, 3>>(lat, "dims", path);
  g.spacing = field<std::array<double, 3>>(lat, "spacing", path);
  g.origin = field<std::array<double, 3>>(lat, "origin", path);
  const json sph = field<json>(h, "sphere", path);
  try {
    g.sphere = make_sphere(sphere_kind_from_string(field<std::string>(sph, "kind", path)), field<int>(sph, "n", path));
  } catch (const DomainError& e) {
    throw FormatError("'" + path + "': header field 'sphere' invalid: " + e.what());
  }
  if (field<std::size_t>(h, "n_v", path) != g.sphere.size())
    throw FormatError("'" + path + "': header field 'n_v' disagrees with the sphere sampler");
  const json line = field<json>(h, "line", path);
  g.line.n_s = field<int>(line, "n_s", path);
  g.line.s_max = field<double>(line, "s_max", path);
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw FormatError("'" + path + "': header field 'lattice' invalid: " + e.what());
  }
  if (field<std::size_t>(h, "n_y", path) != g.crossing_count())
    throw FormatError("'" + path + "': header field 'n_y' disagrees with region and lattice");
  RayData u(g);
  u.field_id = h.value("field_id", std::string());
  const auto mask = g.mask();
  const std::size_t nv = g.sphere.size();
  std::vector<double> row(nv);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(nv * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != nv * sizeof(double)) throw FormatError("'" + path + "': payload truncated");
    for (std::size_t v = 0; v < nv; ++v) u.direction(v)[i] = row[v];
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("'" + path + "': trailing bytes after payload");
  return u;
}

Image slice2d(const Sym2Field& f, int component, int row_axis, int col_axis, const std::array<int, 4>& fixed) {
  f.require(FieldDomain::Position, "slice2d");
  const Grid4& g = f.grid();
  if (component < 0 || component >= 10 || row_axis == col_axis || row_axis < 0 || row_axis > 3 || col_axis < 0 ||
      col_axis > 3)
    throw DomainError("slice2d: bad component or axes");
  Image img;
  img.rows = g.dims[row_axis];
  img.cols = g.dims[col_axis];
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols);
  std::array<int, 4> i = fixed;
  for (int d = 0; d < 4; ++d)
    if (d != row_axis && d != col_axis && (i[d] < 0 || i[d] >= g.dims[d])) throw DomainError("slice2d: fixed index out of range");
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      i[row_axis] = r;
      i[col_axis] = c;
      img.pixels[static_cast<std::size_t>(r) * img.cols + c] = f.component(component)[g.linear(i[0], i[1], i[2], i[3])];
    }
  return img;
}

std::pair<double, double> write_pgm(const std::string& path, const Image& img) {
  if (img.pixels.size() != static_cast<std::size_t>(img.rows) * img.cols) throw DomainError("write_pgm: size mismatch");
  double lo = 0.0, hi = 0.0;
  if (!img.pixels.empty()) {
    const auto [a, b] = std::minmax_element(img.pixels.begin(), img.pixels.end());
    lo = *a;
    hi = *b;
  }
  std::vector<unsigned char> bytes(img.pixels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double t = hi > lo ? (img.pixels[i] - lo) / (hi - lo) : 0.0;
    bytes[i] = static_cast<unsigned char>(std::clamp(std::lround(255.0 * t), 0L, 255L));
  }
  auto out = open_out(path);
  out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
  return {lo, hi};
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace minkray
