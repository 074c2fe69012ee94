#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mbc/specfun.hpp"

using namespace mbc::specfun;

TEST_CASE("normal cdf and quantile") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(norm_quantile(0.5) == 0.0);
  for (double p : {1e-12, 1e-4, 0.3, 0.5, 0.77, 1.0 - 1e-5}) {
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK_THROWS_AS(norm_quantile(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(norm_quantile(1.1), std::invalid_argument);
}

namespace {

// Independent oracle: Phi2(x,y,r) = int_{-inf}^x phi(t) Phi((y - r t)/sqrt(1-r^2)) dt.
double phi2_by_quadrature(double x, double y, double r) {
  const auto& gl = gauss_legendre(64);
  const double lo = -9.0;
  const double s = std::sqrt(1.0 - r * r);
  double total = 0.0;
  constexpr int panels = 16;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + (x - lo) * p / panels, b = lo + (x - lo) * (p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double t = mid + half * gl.nodes[k];
      const double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979323846);
      total += half * gl.weights[k] * phi * norm_cdf((y - r * t) / s);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("bivariate normal cdf") {
  CHECK(bivariate_norm_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
  // Closed form at the median: 1/4 + asin(r) / (2 pi).
  for (double r : {0.5, 0.95, -0.95}) {
    const double expected = 0.25 + std::asin(r) / (2.0 * 3.14159265358979323846);
    CHECK(bivariate_norm_cdf(0.0, 0.0, r) == doctest::Approx(expected).epsilon(1e-13));
  }
  for (double r : {-0.9, -0.3, 0.0, 0.6, 0.95}) {
    for (double x : {-1.5, 0.3, 2.0}) {
      for (double y : {-0.7, 1.1}) {
        CHECK(bivariate_norm_cdf(x, y, r) ==
              doctest::Approx(phi2_by_quadrature(x, y, r)).epsilon(1e-9));
        CHECK(bivariate_norm_cdf(x, y, r) == bivariate_norm_cdf(y, x, r));
      }
    }
  }
  CHECK_THROWS_AS(bivariate_norm_cdf(0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bivariate_norm_cdf(0.0, 0.0, -1.5), std::invalid_argument);
}

TEST_CASE("regularized incomplete gamma") {
  // Q(1, x) = exp(-x); Q(1/2, x) = erfc(sqrt(x)).
  for (double x : {0.1, 1.0, 5.0, 30.0}) {
    CHECK(reg_upper_gamma(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-13));
    CHECK(reg_upper_gamma(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-13));
    CHECK(reg_lower_gamma(0.5, x) + reg_upper_gamma(0.5, x) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // Integer shape: Q(n, x) = exp(-x) sum_{k<n} x^k / k!.
  const double x = 7.3;
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < 5; ++k) {
    sum += term;
    term *= x / (k + 1);
  }
  CHECK(reg_upper_gamma(5.0, x) == doctest::Approx(std::exp(-x) * sum).epsilon(1e-13));
  CHECK(reg_upper_gamma(5.0, 0.0) == 1.0);
}

TEST_CASE("log of the upper incomplete gamma survives underflow") {
  for (double a : {0.3, 0.7, 1.0}) {
    for (double x : {0.5, 3.0, 50.0}) {
      CHECK(log_reg_upper_gamma(a, x) ==
            doctest::Approx(std::log(reg_upper_gamma(a, x))).epsilon(1e-12));
    }
  }
  // Far past double underflow of Q itself.
  const double lq = log_reg_upper_gamma(0.5, 800.0);
  CHECK(std::isfinite(lq));
  CHECK(lq < -700.0);
}

TEST_CASE("gauss-legendre rules") {
  for (int order : {4, 16, 33}) {
    const auto& gl = gauss_legendre(order);
    REQUIRE(gl.nodes.size() == static_cast<std::size_t>(order));
    double wsum = 0.0, x2 = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      wsum += gl.weights[i];
      x2 += gl.weights[i] * gl.nodes[i] * gl.nodes[i];
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("binomial coefficients are exact") {
  CHECK(binom(5, 2) == 10.0);
  CHECK(binom(0, 0) == 1.0);
  CHECK(binom(10, 11) == 0.0);
  CHECK(binom(10, -1) == 0.0);
  CHECK(binom(64, 32) == 1832624140942590534.0);
  CHECK_THROWS_AS(binom_row(65), std::invalid_argument);
}

TEST_CASE("log_sum_exp") {
  std::vector<double> terms = {std::log(2.0), std::log(3.0), std::log(5.0)};
  CHECK(log_sum_exp(terms) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  std::vector<double> big = {1000.0, 1000.0};
  CHECK(log_sum_exp(big) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));
  std::vector<double> empty;
  CHECK(log_sum_exp(empty) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("compensated summation") {
  CompensatedSum acc;
  acc.add(1.0);
  for (int i = 0; i < 10; ++i) acc.add(1e-16);
  acc.add(-1.0);
  CHECK(acc.value() == doctest::Approx(1e-15).epsilon(1e-10));
  CHECK(acc.abs_sum() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kolmogorov-smirnov p-value") {
  // A tiny statistic on a large sample is unremarkable; a huge one is not.
  CHECK(ks_pvalue(0.001, 100000) > 0.9);
  CHECK(ks_pvalue(0.05, 100000) < 1e-6);
  CHECK(ks_pvalue(0.005, 100000) > ks_pvalue(0.006, 100000));
}
