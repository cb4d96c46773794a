#pragma once
// Grid-field serialization: a plain CSV listing and a compact binary dump
// for uniformly spaced fields. Layouts are documented in docs/formats.md.

#include <string>

#include "plb/verification.hpp"

namespace plb {

/// CSV with one node per row. Radial fields use columns r,t,value; planar
/// fields x,y,t,value. Rows run time-major, then space in storage order.
void write_field_csv(const GridField& field, const std::string& path);

/// Binary dump for uniformly spaced fields: an 8-double header (kind, space
/// dims, time dim, spacings) followed by the values row-major, all 64-bit
/// little-endian. Non-uniform grids are rejected.
void write_field_binary(const GridField& field, const std::string& path);

/// Reads a binary dump back; boundary tags are reconstructed from the
/// geometry (outermost radius / box edges).
GridField read_field_binary(const std::string& path);

}  // namespace plb
