#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volform/experiments.hpp"
#include "volform/grid.hpp"
#include "volform/solver.hpp"

namespace volform {

// Configuration file problem with a file:line locus.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One endpoint: either a list of trig modes or a field file path.
struct BoundarySpec {
  std::vector<TrigMode> modes;
  std::string file;  // non-empty means read from file

  bool empty() const { return modes.empty() && file.empty(); }
};

// Parsed [grid]/[solver]/[boundary]/[experiment] sections.
struct RunConfig {
  int dim = 1;
  int n = 32;
  int nt = 33;

  SolverConfig solver;
  BoundarySpec phi0;
  BoundarySpec phi1;
  ExperimentConfig experiment;
  std::string suite = "all";
  std::string source_text;  // verbatim config, echoed into run directories

  TorusGrid grid() const { return make_grid(dim, n, nt); }
  SpatialField materialize(const BoundarySpec& spec, const TorusGrid& g) const;
  BoundaryPair boundary(const TorusGrid& g) const;  // throws ConfigError if absent
};

// Parses the key-per-line sectioned format. Unknown keys, malformed values
// and inadmissible trig specs fail with a line-precise ConfigError.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config_file(const std::string& path);

// "const:V", "trig:k.. amp phase[,k.. amp phase...]" or "file:PATH".
BoundarySpec parse_point_spec(const std::string& spec, int dim);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace volform
