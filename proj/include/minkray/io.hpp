#pragma once

#include <array>
#include <string>
#include <vector>

#include "minkray/raytransform.hpp"

namespace minkray {

// ".t2f": "T2F1\n", one JSON header line, "\n", raw little-endian payload in
// Sym2Field storage order (f64le for position fields, c128le for frequency).
void write_t2f(const std::string& path, const Sym2Field& f);
Sym2Field read_t2f(const std::string& path);

// ".rays": "RAYS1\n", one JSON header line, "\n", f64le values with the
// in-region lattice points outer and directions inner.
void write_rays(const std::string& path, const RayData& u);
RayData read_rays(const std::string& path);

std::string t2f_header(const Sym2Field& f);
std::string rays_header(const RayData& u);

// 2D section of one component: axes (row_axis, col_axis) vary, the others are
// fixed at the given indices. Row-major, rows = dims[row_axis].
struct Image {
  int rows = 0, cols = 0;
  std::vector<double> pixels;
};
Image slice2d(const Sym2Field& f, int component, int row_axis, int col_axis, const std::array<int, 4>& fixed);

// Binary PGM (P5, maxval 255); [min, max] maps linearly to [0, 255]
// (a constant image maps to 0). Returns the range used.
std::pair<double, double> write_pgm(const std::string& path, const Image& img);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace minkray
