#pragma once

#include <string>

#include "bwf/field.hpp"

namespace bwf {

// Field dump format: one ASCII header line
//   BWF1 NX NY NLEV d lam1x lam1y lam2x lam2y
// (NLEV = number of z-levels = nz + 1), followed by raw little-endian IEEE-754
// float64 samples, component-major, then Z-major, then Y, then X — i.e. the
// VectorField storage order verbatim.
void write_field_dump(const std::string& path, const VectorField& f);
VectorField read_field_dump(const std::string& path);

// Inspection export: header row then one line per node
// i,j,k,X,Y,Z,u1,u2,u3 (reference coordinates).
void write_field_csv(const std::string& path, const VectorField& f);

}  // namespace bwf
