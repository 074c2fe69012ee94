#ifndef MBC_CONFIG_HPP
#define MBC_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mbc/alpha_grid.hpp"

namespace mbc {

/// Everything a CLI run needs; defaults reproduce the reference experiments.
struct RunConfig {
  std::string alpha_family = "independence";
  AlphaParams alpha_params;
  std::string alpha_csv;  // when set, the lattice is read from this file

  std::vector<int> m_list = {1, 5, 10, 20, 30, 40, 50};
  int n = 2;

  std::string mixing_family = "gamma_mixing";
  double mix_a = 5.0;
  double mix_scale = 100.0;  // b for gamma_mixing, lambda for gamma_claims

  std::vector<double> kappa_list = {0.95};
  double eps_tail = 1e-12;
  std::size_t paths = 1000000;
  std::uint64_t seed = 20260823;
  std::string out;  // empty = stdout
};

/// Flat `key = value` file with `[alpha]`, `[mixing]`, `[run]` section
/// headers; `#` starts a comment.  Returns "section.key" -> value.  Throws
/// std::runtime_error on malformed lines or unknown sections.
std::map<std::string, std::string> parse_config_file(std::istream& is);

/// Applies parsed keys onto the defaults; unknown keys throw.
void apply_config(const std::map<std::string, std::string>& kv, RunConfig& config);

/// Comma-separated numeric lists used by `m` and `kappa` keys.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace mbc

#endif
