#pragma once

#include <string>

#include "volform/grid.hpp"

namespace volform {

// Raw little-endian float64 field file plus a JSON sidecar
// {dim, n, nt, layout: "time-major"}; nt = 0 marks a spatial field.
// The sidecar path is <path>.meta.json unless path already ends in .f64,
// in which case the suffix is replaced.
void write_spatial_field(const std::string& path, const SpatialField& f, const TorusGrid& g);
void write_spacetime_field(const std::string& path, const SpacetimeField& f, const TorusGrid& g);

// Reads a field and checks the sidecar against the grid. Throws
// std::runtime_error on mismatch or malformed files.
SpatialField read_spatial_field(const std::string& path, const TorusGrid& g);
SpacetimeField read_spacetime_field(const std::string& path, const TorusGrid& g);

// CSV export, one node per row: spatial indices (plus the time index for
// spacetime fields), then the value at 17 significant digits.
void write_spatial_csv(const std::string& path, const SpatialField& f, const TorusGrid& g);
void write_spacetime_csv(const std::string& path, const SpacetimeField& f, const TorusGrid& g);

std::string meta_path_for(const std::string& path);

}  // namespace volform
