#include "mbc/bernstein.hpp"

#include <cmath>
#include <stdexcept>

#include "mbc/specfun.hpp"

namespace mbc {

namespace {
constexpr double kNegTol = 1e-12;
}

std::size_t GammaTensor::flat_index(std::span<const int> nu) const {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(m) + nu[i];
  return idx;
}

std::size_t BetaTensor::flat_index(std::span<const int> l) const {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(m + 1) + l[i];
  return idx;
}

double bernstein_basis(int nu, int m, double u) {
  if (nu < 0 || nu > m) return 0.0;
  return specfun::binom(m, nu) * std::pow(u, nu) * std::pow(1.0 - u, m - nu);
}

GammaTensor gamma_coeffs(const AlphaGrid& grid) {
  const int n = grid.n, m = grid.m;
  // Successive forward differences along each axis, shrinking that axis
  // from m+1 to m; equivalent to the 2^n alternating corner sum per cell.
  std::vector<double> work = grid.values;
  std::vector<int> dims(n, m + 1);
  for (int axis = 0; axis < n; ++axis) {
    std::vector<int> out_dims = dims;
    out_dims[axis] = dims[axis] - 1;
    std::size_t out_size = 1;
    for (int d : out_dims) out_size *= static_cast<std::size_t>(d);
    std::vector<double> next(out_size);

    std::size_t stride = 1;
    for (int i = axis + 1; i < n; ++i) stride *= static_cast<std::size_t>(dims[i]);
    std::size_t outer = 1;
    for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(dims[i]);
    const std::size_t len = static_cast<std::size_t>(dims[axis]);

    std::size_t w = 0;
    for (std::size_t o = 0; o < outer; ++o) {
      const std::size_t base = o * len * stride;
      for (std::size_t k = 0; k + 1 < len; ++k)
        for (std::size_t s = 0; s < stride; ++s)
          next[w++] = work[base + (k + 1) * stride + s] - work[base + k * stride + s];
    }
    work = std::move(next);
    dims = out_dims;
  }

  for (double& v : work) {
    if (v < -kNegTol)
      throw std::invalid_argument(
          "gamma_coeffs: negative finite difference; grid is not a copula lattice");
    if (v < 0.0) v = 0.0;
  }

  GammaTensor gamma;
  gamma.n = n;
  gamma.m = m;
  gamma.weights = std::move(work);
  return gamma;
}

BetaTensor beta_coeffs(const AlphaGrid& grid) {
  const int n = grid.n, m = grid.m;
  BetaTensor beta;
  beta.n = n;
  beta.m = m;
  beta.coeffs.assign(grid.size(), 0.0);

  std::vector<int> l(n, 0), nu(n, 0);
  std::size_t flat = 0;
  do {
    bool zero_slice = false;
    for (int i = 0; i < n; ++i) zero_slice |= (l[i] == 0);
    if (zero_slice) {
      beta.coeffs[flat++] = 0.0;
      continue;
    }
    specfun::CompensatedSum acc;
    std::fill(nu.begin(), nu.end(), 0);
    bool more = true;
    while (more) {
      double coef = 1.0;
      int parity = 0;
      for (int i = 0; i < n; ++i) {
        coef *= specfun::binom(m - nu[i], m - l[i]) * specfun::binom(m, nu[i]);
        parity += l[i] - nu[i];
      }
      if (parity % 2 != 0) coef = -coef;
      acc.add(coef * grid.at(nu));
      // next nu with nu_i <= l_i
      more = false;
      for (int i = n - 1; i >= 0; --i) {
        if (++nu[i] <= l[i]) {
          more = true;
          break;
        }
        nu[i] = 0;
      }
    }
    const double value = acc.value();
    if (std::abs(value) > 0.0)
      beta.max_condition = std::max(beta.max_condition, acc.abs_sum() / std::abs(value));
    beta.coeffs[flat++] = value;
  } while (AlphaGrid::next_index(l, m + 1));

  return beta;
}

double eval_copula_bernstein(const AlphaGrid& grid, std::span<const double> u) {
  const int n = grid.n, m = grid.m;
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("eval_copula_bernstein: dimension mismatch");
  // Per-axis basis values, then a straight lattice contraction.
  std::vector<std::vector<double>> basis(n, std::vector<double>(m + 1));
  for (int i = 0; i < n; ++i)
    for (int v = 0; v <= m; ++v) basis[i][v] = bernstein_basis(v, m, u[i]);

  std::vector<int> nu(n, 0);
  std::size_t flat = 0;
  specfun::CompensatedSum acc;
  do {
    double prod = grid.values[flat++];
    if (prod != 0.0) {
      for (int i = 0; i < n; ++i) prod *= basis[i][nu[i]];
      acc.add(prod);
    }
  } while (AlphaGrid::next_index(nu, m + 1));
  return acc.value();
}

double eval_density_bernstein(const GammaTensor& gamma, std::span<const double> u) {
  const int n = gamma.n, m = gamma.m;
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("eval_density_bernstein: dimension mismatch");
  std::vector<std::vector<double>> basis(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i)
    for (int v = 0; v < m; ++v) basis[i][v] = m * bernstein_basis(v, m - 1, u[i]);

  std::vector<int> nu(n, 0);
  std::size_t flat = 0;
  specfun::CompensatedSum acc;
  do {
    double prod = gamma.weights[flat++];
    if (prod != 0.0) {
      for (int i = 0; i < n; ++i) prod *= basis[i][nu[i]];
      acc.add(prod);
    }
  } while (AlphaGrid::next_index(nu, m));
  return acc.value();
}

}  // namespace mbc
