#ifndef MBC_ALPHA_GRID_HPP
#define MBC_ALPHA_GRID_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mbc {

/// Lattice sampling of a copula on {0,...,m}^n / m.  The dependence input
/// of the whole model: values[nu] = alpha(nu_1/m, ..., nu_n/m).
struct AlphaGrid {
  int n = 0;                   // dimension, >= 2
  int m = 0;                   // Bernstein order, >= 1
  std::vector<double> values;  // (m+1)^n, row-major, last coordinate fastest

  AlphaGrid() = default;
  AlphaGrid(int n_, int m_);

  std::size_t flat_index(std::span<const int> nu) const;
  double at(std::span<const int> nu) const { return values[flat_index(nu)]; }
  double& at(std::span<const int> nu) { return values[flat_index(nu)]; }
  std::size_t size() const { return values.size(); }

  /// Advances a mixed-radix index over {0,...,radix-1}^n; returns false on wrap.
  static bool next_index(std::span<int> nu, int radix);
};

enum class AlphaFamily {
  independence,
  comonotonic,
  counter_comonotonic,
  fgm,
  clayton,
  piecewise_gaussian,
  liebscher_clayton,
};

/// Family parameters; only the fields a family uses are read.
struct AlphaParams {
  double delta = 0.0;    // fgm, in [-1, 1]
  double theta = 1.0;    // clayton, > 0
  double tau = 0.5;      // piecewise_gaussian seam, in (0, 1)
  double r1 = -0.95;     // piecewise_gaussian, in (-1, 1)
  double r2 = 0.95;      // piecewise_gaussian, in (-1, 1)
  double gamma = 6.0;    // liebscher_clayton, > 0
  double delta2 = 2.0;   // liebscher_clayton, > 0
  double theta1 = 0.525; // liebscher_clayton, in [0, 1]
  double theta2 = 0.3;   // liebscher_clayton, in [0, 1]
};

AlphaFamily alpha_family_from_string(const std::string& name);
std::string to_string(AlphaFamily family);

/// Samples the named copula on the lattice.  Throws std::invalid_argument on
/// unknown families, out-of-range parameters, or dimension restrictions
/// (counter_comonotonic, fgm, piecewise_gaussian, liebscher_clayton need n=2).
AlphaGrid make_alpha(AlphaFamily family, const AlphaParams& params, int m, int n);

/// Pointwise evaluation of the named copula (used by make_alpha and by the
/// quadrature oracles in the tests).
double eval_alpha_copula(AlphaFamily family, const AlphaParams& params,
                         std::span<const double> u);

struct ValidationReport {
  enum class Condition { boundary_zero, uniform_margin, n_increasing };
  struct Violation {
    Condition condition;
    std::vector<int> index;
    double value;
  };
  bool is_valid = true;
  std::vector<Violation> violations;
};

/// Exhaustive check of the three copula-grid conditions: zero boundary,
/// uniform margins, and nonnegative alternating differences.  Differences
/// down to -1e-12 count as nonnegative (rounding on exact zeros).
ValidationReport validate_alpha(const AlphaGrid& grid);

/// CSV lattice format: header "n,m", then one "nu_1,...,nu_n,value" row
/// per lattice point.
void write_alpha_csv(const AlphaGrid& grid, std::ostream& os);
AlphaGrid read_alpha_csv(std::istream& is);

}  // namespace mbc

#endif
