#ifndef MBC_SPECFUN_HPP
#define MBC_SPECFUN_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace mbc::specfun {

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile (Wichura's PPND16), full double accuracy.
double norm_quantile(double p);

/// P(A <= x, B <= y) for a standard bivariate normal pair with
/// correlation r, |r| < 1.  Absolute error <= 1e-14.
double bivariate_norm_cdf(double x, double y, double r);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double reg_upper_gamma(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double reg_lower_gamma(double a, double x);

/// log Q(a, x); stays finite where Q itself underflows (x >> a).
double log_reg_upper_gamma(double a, double x);

struct Quadrature {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (nodes on (-1,1)).
/// Rules are cached; the returned reference stays valid.
const Quadrature& gauss_legendre(int order);

/// Exact binomial coefficients C(n, k) for n <= 64, converted to double.
/// Throws std::invalid_argument for n > 64.
const std::vector<double>& binom_row(int n);

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return binom_row(n)[static_cast<std::size_t>(k)];
}

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_sum_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  double abs_sum() const { return abs_sum_; }

 private:
  double sum_ = 0.0, comp_ = 0.0, abs_sum_ = 0.0;
};

/// log(sum(exp(log_terms))) for nonnegative-term series.
double log_sum_exp(std::span<const double> log_terms);

/// Asymptotic Kolmogorov-Smirnov p-value for statistic d with sample size n.
double ks_pvalue(double d, std::size_t n);

}  // namespace mbc::specfun

#endif
