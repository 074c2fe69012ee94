#ifndef MBC_BERNSTEIN_HPP
#define MBC_BERNSTEIN_HPP

#include <span>
#include <vector>

#include "mbc/alpha_grid.hpp"

namespace mbc {

/// Alternating finite differences of the alpha grid; the pmf of the
/// Bernstein index vector (N_1,...,N_n), each N_i uniform on {0,...,m-1}.
struct GammaTensor {
  int n = 0, m = 0;
  std::vector<double> weights;  // m^n, row-major, last coordinate fastest

  std::size_t flat_index(std::span<const int> nu) const;
  double at(std::span<const int> nu) const { return weights[flat_index(nu)]; }
};

/// Signed coefficients of the survival-function expansion
/// Hbar(x) = sum_l beta_l f*(sum_i l_i x_i).
struct BetaTensor {
  int n = 0, m = 0;
  std::vector<double> coeffs;  // (m+1)^n, row-major, last coordinate fastest
  /// max over coefficients of sum|terms| / |coefficient|; values beyond
  /// ~1e12 mean the alternating sum has eaten the double mantissa.
  double max_condition = 0.0;
  bool ill_conditioned() const { return max_condition > 1e12; }

  std::size_t flat_index(std::span<const int> l) const;
  double at(std::span<const int> l) const { return coeffs[flat_index(l)]; }
};

/// Throws std::invalid_argument if the differences go negative beyond the
/// rounding floor (the grid is not a copula lattice).
GammaTensor gamma_coeffs(const AlphaGrid& grid);

BetaTensor beta_coeffs(const AlphaGrid& grid);

/// Bernstein copula C_B(u) = sum_nu alpha(nu/m) prod_i G_{nu_i:m}(u_i).
double eval_copula_bernstein(const AlphaGrid& grid, std::span<const double> u);

/// Bernstein copula density c_B(u) = sum_nu gamma(nu) prod_i m G_{nu_i:m-1}(u_i).
double eval_density_bernstein(const GammaTensor& gamma, std::span<const double> u);

/// Bernstein basis polynomial G_{nu:m}(u).
double bernstein_basis(int nu, int m, double u);

}  // namespace mbc

#endif
