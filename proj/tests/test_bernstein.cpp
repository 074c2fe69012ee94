#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mbc/bernstein.hpp"
#include "mbc/specfun.hpp"

using namespace mbc;

TEST_CASE("gamma tensor is a pmf with uniform margins") {
  AlphaParams p;
  p.theta = 1.3;
  for (auto fam : {AlphaFamily::independence, AlphaFamily::clayton, AlphaFamily::comonotonic}) {
    for (int m : {1, 3, 6}) {
      CAPTURE(to_string(fam));
      CAPTURE(m);
      const auto gamma = gamma_coeffs(make_alpha(fam, p, m, 2));
      double total = 0.0;
      for (double w : gamma.weights) {
        CHECK(w >= 0.0);
        total += w;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      // Each axis margin is uniform on {0,...,m-1}.
      for (int axis = 0; axis < 2; ++axis) {
        for (int v = 0; v < m; ++v) {
          double margin = 0.0;
          std::vector<int> nu(2);
          for (int other = 0; other < m; ++other) {
            nu[axis] = v;
            nu[1 - axis] = other;
            margin += gamma.at(nu);
          }
          CHECK(margin == doctest::Approx(1.0 / m).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("independence gamma is uniform on the lattice") {
  const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::independence, {}, 2, 2));
  for (double w : gamma.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("gamma_coeffs rejects a non-monotone grid") {
  auto grid = make_alpha(AlphaFamily::independence, {}, 2, 2);
  std::vector<int> idx = {1, 1};
  grid.at(idx) += 0.3;
  CHECK_THROWS_AS(gamma_coeffs(grid), std::invalid_argument);
}

TEST_CASE("survival coefficients reproduce the FGM closed form") {
  // At m = 2 the lattice copula is itself FGM with parameter
  // d = 4 alpha(1/2,1/2) - 1, and the nonzero survival coefficients are
  // beta_{1,1} = 1+d, beta_{1,2} = beta_{2,1} = -d, beta_{2,2} = d.
  // Sampling an FGM(delta_alpha) surface gives d = delta_alpha / 4: the
  // order-2 operator shrinks the quadratic interaction term.
  AlphaParams p;
  p.delta = 0.6;
  const double delta = p.delta / 4.0;
  const auto beta = beta_coeffs(make_alpha(AlphaFamily::fgm, p, 2, 2));
  auto at = [&](int l1, int l2) {
    std::vector<int> l = {l1, l2};
    return beta.at(l);
  };
  CHECK(at(1, 1) == doctest::Approx(1.0 + delta).epsilon(1e-12));
  CHECK(at(1, 2) == doctest::Approx(-delta).epsilon(1e-12));
  CHECK(at(2, 1) == doctest::Approx(-delta).epsilon(1e-12));
  CHECK(at(2, 2) == doctest::Approx(delta).epsilon(1e-12));
  for (int l1 = 0; l1 <= 2; ++l1) CHECK(at(l1, 0) == 0.0);
  for (int l2 = 0; l2 <= 2; ++l2) CHECK(at(0, l2) == 0.0);
}

TEST_CASE("survival coefficients sum to one") {
  // Setting every x_i = 0 in the survival expansion gives sum beta_l = 1.
  AlphaParams p;
  p.theta = 2.0;
  for (int m : {1, 4, 9}) {
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::clayton, p, m, 2));
    specfun::CompensatedSum total;
    for (double b : beta.coeffs) total.add(b);
    CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(beta.ill_conditioned());
  }
}

TEST_CASE("bernstein basis") {
  CHECK(bernstein_basis(0, 3, 0.0) == 1.0);
  CHECK(bernstein_basis(3, 3, 1.0) == 1.0);
  CHECK(bernstein_basis(1, 2, 0.5) == doctest::Approx(0.5));
  double total = 0.0;
  for (int nu = 0; nu <= 5; ++nu) total += bernstein_basis(nu, 5, 0.37);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bernstein_basis(-1, 3, 0.5) == 0.0);
  CHECK(bernstein_basis(4, 3, 0.5) == 0.0);
}

TEST_CASE("lattice copula evaluation") {
  SUBCASE("independence alpha reproduces the product exactly") {
    // The Bernstein operator is exact on products of linear functions.
    const auto grid = make_alpha(AlphaFamily::independence, {}, 4, 2);
    for (double u : {0.2, 0.55}) {
      for (double v : {0.1, 0.9}) {
        std::vector<double> uv = {u, v};
        CHECK(eval_copula_bernstein(grid, uv) == doctest::Approx(u * v).epsilon(1e-13));
      }
    }
  }
  SUBCASE("pinned comonotonic value") {
    const auto grid = make_alpha(AlphaFamily::comonotonic, {}, 5, 2);
    std::vector<double> u = {0.5, 0.5};
    // sum_nu min(nu1,nu2)/5 * C(5,nu1) C(5,nu2) / 2^10, evaluated exactly.
    CHECK(eval_copula_bernstein(grid, u) == doctest::Approx(0.376953125).epsilon(1e-14));
  }
  SUBCASE("uniform margins") {
    AlphaParams p;
    p.theta = 1.0;
    const auto grid = make_alpha(AlphaFamily::clayton, p, 6, 2);
    for (double u : {0.25, 0.8}) {
      std::vector<double> edge = {u, 1.0};
      CHECK(eval_copula_bernstein(grid, edge) == doctest::Approx(u).epsilon(1e-13));
    }
  }
}

TEST_CASE("lattice density integrates to the copula") {
  AlphaParams p;
  p.theta = 1.0;
  const auto grid = make_alpha(AlphaFamily::clayton, p, 3, 2);
  const auto gamma = gamma_coeffs(grid);
  // int_0^a int_0^b density = C_B(a, b), checked by Gauss-Legendre.
  const auto& gl = specfun::gauss_legendre(32);
  for (double a : {0.4, 1.0}) {
    for (double b : {0.7, 1.0}) {
      double integral = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
          std::vector<double> u = {0.5 * a * (gl.nodes[i] + 1.0), 0.5 * b * (gl.nodes[j] + 1.0)};
          integral += 0.25 * a * b * gl.weights[i] * gl.weights[j] *
                      eval_density_bernstein(gamma, u);
        }
      }
      std::vector<double> corner = {a, b};
      CHECK(integral == doctest::Approx(eval_copula_bernstein(grid, corner)).epsilon(1e-10));
    }
  }
}
