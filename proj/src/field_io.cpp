#include "volform/field_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "field files are little endian; byte swapping not implemented");

namespace volform {

namespace {

using nlohmann::json;

void write_raw(const std::string& path, const std::vector<double>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("field io: cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw std::runtime_error("field io: short write to " + path);
}

std::vector<double> read_raw(const std::string& path, size_t count) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("field io: cannot open " + path);
  const auto bytes = static_cast<size_t>(in.tellg());
  if (bytes != count * sizeof(double))
    throw std::runtime_error("field io: " + path + " has " + std::to_string(bytes) +
                             " bytes, expected " + std::to_string(count * sizeof(double)));
  in.seekg(0);
  std::vector<double> v(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("field io: short read from " + path);
  return v;
}

void write_meta(const std::string& path, const TorusGrid& g, int nt) {
  json meta{{"dim", g.dim}, {"n", g.n}, {"nt", nt}, {"layout", "time-major"}};
  std::ofstream out(meta_path_for(path));
  if (!out) throw std::runtime_error("field io: cannot open sidecar for " + path);
  out << meta.dump(2) << "\n";
}

void check_meta(const std::string& path, const TorusGrid& g, int nt) {
  std::ifstream in(meta_path_for(path));
  if (!in) throw std::runtime_error("field io: missing sidecar " + meta_path_for(path));
  json meta;
  in >> meta;
  if (meta.value("dim", -1) != g.dim || meta.value("n", -1) != g.n ||
      meta.value("nt", -1) != nt || meta.value("layout", "") != "time-major")
    throw std::runtime_error("field io: sidecar " + meta_path_for(path) +
                             " does not match the grid");
}

}  // namespace

std::string meta_path_for(const std::string& path) {
  const std::string suffix = ".f64";
  if (path.size() >= suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return path.substr(0, path.size() - suffix.size()) + ".meta.json";
  return path + ".meta.json";
}

void write_spatial_field(const std::string& path, const SpatialField& f, const TorusGrid& g) {
  write_raw(path, f.v);
  write_meta(path, g, 0);
}

void write_spacetime_field(const std::string& path, const SpacetimeField& f, const TorusGrid& g) {
  write_raw(path, f.v);
  write_meta(path, g, g.nt);
}

SpatialField read_spatial_field(const std::string& path, const TorusGrid& g) {
  check_meta(path, g, 0);
  SpatialField f;
  f.v = read_raw(path, static_cast<size_t>(g.spatial_size()));
  return f;
}

SpacetimeField read_spacetime_field(const std::string& path, const TorusGrid& g) {
  check_meta(path, g, g.nt);
  SpacetimeField f;
  f.v = read_raw(path, static_cast<size_t>(g.total_size()));
  return f;
}

namespace {

void write_row(std::FILE* out, const int* idx, int count, double value) {
  for (int k = 0; k < count; ++k) std::fprintf(out, "%d,", idx[k]);
  std::fprintf(out, "%.17g\n", value);
}

}  // namespace

void write_spatial_csv(const std::string& path, const SpatialField& f, const TorusGrid& g) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("field io: cannot open " + path);
  for (int i = 0; i < f.size(); ++i) {
    const auto x = g.coords_of(i);
    write_row(out, x.data(), g.dim, f[i]);
  }
  std::fclose(out);
}

void write_spacetime_csv(const std::string& path, const SpacetimeField& f, const TorusGrid& g) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw std::runtime_error("field io: cannot open " + path);
  const int ns = g.spatial_size();
  for (int j = 0; j < g.nt; ++j) {
    for (int i = 0; i < ns; ++i) {
      const auto x = g.coords_of(i);
      int idx[4] = {j, x[0], x[1], x[2]};
      write_row(out, idx, 1 + g.dim, f[static_cast<size_t>(j) * ns + i]);
    }
  }
  std::fclose(out);
}

}  // namespace volform
