#include "geometry/lattice_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lipmass::geometry {
namespace {

constexpr char kTextMagic[] = "LIPMASS-LATTICE";
constexpr char kBinaryMagic[] = "LPMLAT01";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  require(static_cast<bool>(in), ErrorCode::kIo, "truncated binary lattice file");
  return v;
}

std::shared_ptr<LatticeMetric> read_text(std::istream& in) {
  std::string magic;
  int version = 0, n = 0;
  in >> magic >> version >> n;
  require(in && magic == kTextMagic && version == 1, ErrorCode::kIo, "bad text lattice header");
  check_dimension(n);
  Vec lower(n), upper(n);
  for (int k = 0; k < n; ++k) in >> lower[k];
  for (int k = 0; k < n; ++k) in >> upper[k];
  double h = 0.0;
  in >> h;
  std::vector<std::int64_t> dims(n);
  for (int k = 0; k < n; ++k) in >> dims[k];
  require(static_cast<bool>(in), ErrorCode::kIo, "bad text lattice header");
  Lattice lat(lower, h, dims);
  require((lat.upper() - upper).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, upper.cwiseAbs().maxCoeff()),
          ErrorCode::kIo, "lattice upper corner inconsistent with lower + h * (dims - 1)");
  std::vector<double> data(static_cast<std::size_t>(lat.size() * n * n));
  for (double& v : data) in >> v;
  require(static_cast<bool>(in), ErrorCode::kIo, "truncated text lattice file");
  return std::make_shared<LatticeMetric>(lat, std::move(data));
}

std::shared_ptr<LatticeMetric> read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  require(in && std::memcmp(magic, kBinaryMagic, 8) == 0, ErrorCode::kIo, "bad binary lattice magic");
  const int n = get<std::int32_t>(in);
  check_dimension(n);
  Vec lower(n), upper(n);
  for (int k = 0; k < n; ++k) lower[k] = get<double>(in);
  for (int k = 0; k < n; ++k) upper[k] = get<double>(in);
  const double h = get<double>(in);
  std::vector<std::int64_t> dims(n);
  for (int k = 0; k < n; ++k) dims[k] = get<std::int64_t>(in);
  Lattice lat(lower, h, dims);
  std::vector<double> data(static_cast<std::size_t>(lat.size() * n * n));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  require(static_cast<bool>(in), ErrorCode::kIo, "truncated binary lattice file");
  return std::make_shared<LatticeMetric>(lat, std::move(data));
}

}  // namespace

void write_lattice(std::ostream& out, const LatticeMetric& g, LatticeFormat format) {
  const Lattice& lat = g.lattice();
  const int n = lat.dim();
  const Vec upper = lat.upper();
  const auto& data = g.components();
  if (format == LatticeFormat::kBinary) {
    out.write(kBinaryMagic, 8);
    put<std::int32_t>(out, n);
    for (int k = 0; k < n; ++k) put(out, lat.lower()[k]);
    for (int k = 0; k < n; ++k) put(out, upper[k]);
    put(out, lat.spacing());
    for (int k = 0; k < n; ++k) put<std::int64_t>(out, lat.extent(k));
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  } else {
    out << kTextMagic << " 1\n" << n << "\n";
    for (int k = 0; k < n; ++k) out << (k ? " " : "") << format_double(lat.lower()[k]);
    out << "\n";
    for (int k = 0; k < n; ++k) out << (k ? " " : "") << format_double(upper[k]);
    out << "\n" << format_double(lat.spacing()) << "\n";
    for (int k = 0; k < n; ++k) out << (k ? " " : "") << lat.extent(k);
    out << "\n";
    const int per = n * n;
    for (std::size_t node = 0; node * per < data.size(); ++node) {
      for (int c = 0; c < per; ++c) out << (c ? " " : "") << format_double(data[node * per + c]);
      out << "\n";
    }
  }
  require(static_cast<bool>(out), ErrorCode::kIo, "failed writing lattice");
}

void write_lattice_file(const std::string& path, const LatticeMetric& g, LatticeFormat format) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path + " for writing");
  write_lattice(out, g, format);
}

std::shared_ptr<LatticeMetric> read_lattice(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  std::istringstream all(buf.str());
  if (buf.str().compare(0, 8, kBinaryMagic) == 0) return read_binary(all);
  return read_text(all);
}

std::shared_ptr<LatticeMetric> read_lattice_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
  return read_lattice(in);
}

}  // namespace lipmass::geometry
