#pragma once

#include "geometry/lattice.hpp"

#include <iosfwd>
#include <string>

namespace lipmass::geometry {

enum class LatticeFormat { kText, kBinary };

/// Text layout:
///   LIPMASS-LATTICE 1
///   n
///   lower_1 ... lower_n
///   upper_1 ... upper_n
///   h
///   dims_1 ... dims_n
///   then one line per node (row-major) holding g_11 g_12 ... g_nn.
/// Binary layout: magic "LPMLAT01", int32 n, n doubles lower, n doubles upper,
/// double h, n int64 dims, then the node components as doubles (little endian).
void write_lattice(std::ostream& out, const LatticeMetric& g, LatticeFormat format);
void write_lattice_file(const std::string& path, const LatticeMetric& g, LatticeFormat format);

/// Detects the format from the leading bytes.
std::shared_ptr<LatticeMetric> read_lattice(std::istream& in);
std::shared_ptr<LatticeMetric> read_lattice_file(const std::string& path);

}  // namespace lipmass::geometry
