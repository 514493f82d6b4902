#ifndef NHP_CONFIG_HPP
#define NHP_CONFIG_HPP

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "nhp/errors.hpp"

namespace nhp {

// Scalar-mode-independent description of a run, parsed from a single JSON
// document. Realization into measures/systems happens per precision mode.
struct GeneratorSpec {
  std::string family;  // uniform | jacobi | laguerre | atoms
  std::string lo, hi;  // hi may be "inf" (laguerre only)
  int atoms = 0;
  std::string rule = "gauss";  // uniform only: gauss | midpoint
  std::string alpha = "0", beta = "0";
  std::vector<std::array<std::string, 2>> atom_list;  // atoms family: (x, w)
};

struct RunConfig {
  bool exact = true;
  unsigned bits = 192;

  std::vector<GeneratorSpec> generators;
  std::vector<std::vector<int>> indices;

  std::vector<std::pair<std::string, int>> w_real;                    // (root, mult)
  std::vector<std::tuple<std::string, std::string, int>> w_pairs;     // (re, im, mult)

  std::vector<std::array<std::string, 2>> grid;  // (re, im)
  std::vector<int> targets;
  int threads = 1;
  std::string output = "out";

  int verify_series_order = 10;
  int verify_max_n = 8;
  unsigned verify_seed = 20250801;
};

// Throws ConfigError with a json-pointer-style context on invalid input.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// NHP_PRECISION environment override: "exact" or "float:<bits>".
void apply_precision_env(RunConfig& cfg);

}  // namespace nhp

#endif  // NHP_CONFIG_HPP
