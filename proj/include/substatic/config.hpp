#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "substatic/convergence.hpp"

namespace substatic {

/// Parsed run configuration. Flat `key = value` lines grouped under [model],
/// [problem] and [run]; `#` starts a comment.
struct RunConfig {
  Problem problem;
  std::vector<int> resolutions;
  std::vector<std::string> identities;  // empty selects every applicable identity
  std::optional<double> tolerance;
  std::string out_dir = ".";
  int brendle_grid = 256;
  int field_points = 50;
  std::string source;  // path or label, for messages
};

/// Names accepted by the `identities` key.
const std::vector<std::string>& identity_registry();

/// Throws Error(config_parse) with "<source>:<line>: ..." on any problem.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace substatic
