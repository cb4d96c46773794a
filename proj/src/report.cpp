#include "plb/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace plb {

namespace {

double uniform_spacing(const std::vector<double>& xs, const char* what) {
  if (xs.size() < 2) return 0.0;
  const double d = xs[1] - xs[0];
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double step = xs[i + 1] - xs[i];
    if (std::abs(step - d) > 1e-9 * std::max(1.0, std::abs(d)))
      throw std::invalid_argument(std::string("binary dump requires a ") +
                                  "uniformly spaced " + what + " axis");
  }
  return d;
}

void put_doubles(std::ofstream& out, const double* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p),
            std::streamsize(n * sizeof(double)));
}

}  // namespace

void write_field_csv(const GridField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  const bool radial = field.kind == GridField::Kind::radial_1d;
  out << (radial ? "r,t,value\n" : "x,y,t,value\n");
  const std::size_t ns = field.space_size();
  for (std::size_t it = 0; it < field.ts.size(); ++it)
    for (std::size_t is = 0; is < ns; ++is) {
      if (radial) {
        out << field.xs[is];
      } else {
        out << field.xs[is / field.ys.size()] << ','
            << field.ys[is % field.ys.size()];
      }
      out << ',' << field.ts[it] << ',' << field.at(it, is) << '\n';
    }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_field_binary(const GridField& field, const std::string& path) {
  const bool radial = field.kind == GridField::Kind::radial_1d;
  const double header[8] = {
      radial ? 0.0 : 1.0,
      double(field.xs.size()),
      double(radial ? 0 : field.ys.size()),
      double(field.ts.size()),
      uniform_spacing(field.xs, "space"),
      radial ? 0.0 : uniform_spacing(field.ys, "space"),
      uniform_spacing(field.ts, "time"),
      field.xs.front(),  // axis origin; time starts at ts.front() = 0
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  put_doubles(out, header, 8);
  put_doubles(out, field.values.data(), field.values.size());
  if (!out) throw std::runtime_error("write failed for " + path);
}

GridField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  double header[8];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw std::runtime_error("truncated header in " + path);

  GridField f;
  f.kind = header[0] == 0.0 ? GridField::Kind::radial_1d
                            : GridField::Kind::box_2d;
  const std::size_t nx = std::size_t(header[1]);
  const std::size_t ny = std::size_t(header[2]);
  const std::size_t nt = std::size_t(header[3]);
  const double dx = header[4], dy = header[5], dts = header[6];
  const double x0 = header[7];
  f.xs.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) f.xs[i] = x0 + dx * double(i);
  if (f.kind == GridField::Kind::box_2d) {
    f.ys.resize(ny);
    for (std::size_t i = 0; i < ny; ++i) f.ys[i] = x0 + dy * double(i);
  }
  f.ts.resize(nt);
  for (std::size_t i = 0; i < nt; ++i) f.ts[i] = dts * double(i);

  const std::size_t ns = f.space_size();
  f.values.resize(ns * nt);
  in.read(reinterpret_cast<char*>(f.values.data()),
          std::streamsize(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated values in " + path);

  f.lateral.assign(ns, 0);
  if (f.kind == GridField::Kind::radial_1d) {
    f.lateral.back() = 1;
  } else {
    for (std::size_t ix = 0; ix < nx; ++ix)
      for (std::size_t iy = 0; iy < ny; ++iy)
        if (ix == 0 || iy == 0 || ix == nx - 1 || iy == ny - 1)
          f.lateral[ix * ny + iy] = 1;
  }
  return f;
}

}  // namespace plb
