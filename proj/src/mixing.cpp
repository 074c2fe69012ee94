#include "mbc/mixing.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mbc/specfun.hpp"

namespace mbc {

MixingFamily MixingFamily::gamma_mixing(double a, double b) {
  if (a < 1.0) throw std::invalid_argument("gamma_mixing: a must be >= 1");
  if (b <= 0.0) throw std::invalid_argument("gamma_mixing: b must be > 0");
  return MixingFamily(Kind::gamma_mixing, a, b);
}

MixingFamily MixingFamily::gamma_claims(double a, double lambda) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("gamma_claims: a must be in (0,1]");
  if (lambda <= 0.0) throw std::invalid_argument("gamma_claims: lambda must be > 0");
  return MixingFamily(Kind::gamma_claims, a, lambda);
}

MixingFamily MixingFamily::from_config(const std::string& name, double a, double scale) {
  if (name == "gamma_mixing") return gamma_mixing(a, scale);
  if (name == "gamma_claims") return gamma_claims(a, scale);
  throw std::invalid_argument("unknown mixing family: " + name);
}

double MixingFamily::laplace(double x) const {
  if (x < 0.0) throw std::invalid_argument("laplace: x must be >= 0");
  switch (kind_) {
    case Kind::gamma_mixing:
      return std::exp(-a_ * std::log1p(x / scale_));
    case Kind::gamma_claims:
      return specfun::reg_upper_gamma(a_, scale_ * x);
  }
  return 0.0;
}

double MixingFamily::log_abs_laplace_deriv(int l, double x) const {
  if (l < 0) throw std::invalid_argument("laplace_deriv: order must be >= 0");
  if (x < 0.0) throw std::invalid_argument("laplace_deriv: x must be >= 0");
  switch (kind_) {
    case Kind::gamma_mixing:
      // (-1)^l Gamma(a+l) / (Gamma(a) b^l) (1 + x/b)^{-a-l}
      return std::lgamma(a_ + l) - std::lgamma(a_) - l * std::log(scale_) -
             (a_ + l) * std::log1p(x / scale_);
    case Kind::gamma_claims: {
      const double lam = scale_;
      if (a_ == 1.0) return l * std::log(lam) - lam * x;
      if (l == 0) return specfun::log_reg_upper_gamma(a_, lam * x);
      if (x == 0.0)
        throw std::domain_error("laplace_deriv: gamma_claims with a < 1 is singular at x = 0");
      // f*^(l)(x) = -(lam^a / Gamma(a)) e^{-lam x}
      //     * sum_{k=0}^{l-1} C(l-1,k) (a-1)(a-2)...(a-k) x^{a-1-k} (-lam)^{l-1-k}.
      // For a < 1 the falling factorial contributes (-1)^k Gamma(k+1-a)/Gamma(1-a),
      // so every term carries the same sign (-1)^{l-1} and the sum is a clean
      // log-sum-exp with no cancellation.
      const double log_x = std::log(x), log_lam = std::log(lam);
      std::vector<double> terms(static_cast<std::size_t>(l));
      for (int k = 0; k < l; ++k)
        terms[static_cast<std::size_t>(k)] =
            std::lgamma(l) - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(l - k)) +
            std::lgamma(k + 1.0 - a_) - std::lgamma(1.0 - a_) + (a_ - 1.0 - k) * log_x +
            (l - 1.0 - k) * log_lam;
      return a_ * log_lam - std::lgamma(a_) - lam * x + specfun::log_sum_exp(terms);
    }
  }
  return 0.0;
}

double MixingFamily::laplace_deriv(int l, double x) const {
  const double magnitude = std::exp(log_abs_laplace_deriv(l, x));
  return (l % 2 == 0) ? magnitude : -magnitude;
}

double MixingFamily::laplace_inv(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("laplace_inv: u must be in (0,1]");
  if (u == 1.0) return 0.0;
  switch (kind_) {
    case Kind::gamma_mixing:
      return scale_ * std::expm1(-std::log(u) / a_);
    case Kind::gamma_claims: {
      // Solve Q(a, lam x) = u by safeguarded Newton; Q is strictly decreasing.
      const double lam = scale_;
      if (a_ == 1.0) return -std::log(u) / lam;
      double lo = 0.0, hi = 1.0 / lam;
      while (laplace(hi) > u) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("laplace_inv: bracket not found");
      }
      double x = 0.5 * (lo + hi);
      for (int iter = 0; iter < 200; ++iter) {
        const double fx = laplace(x) - u;
        if (fx > 0.0)
          lo = x;
        else
          hi = x;
        // Q'(a, lam x) d/dx = -lam (lam x)^{a-1} e^{-lam x} / Gamma(a)
        const double dq = -lam * std::exp((a_ - 1.0) * std::log(lam * x) - lam * x -
                                          std::lgamma(a_));
        double next = x - fx / dq;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - x);
        x = next;
        if (step <= 1e-13 * (std::abs(x) + 1e-300)) break;
      }
      return x;
    }
  }
  return 0.0;
}

double MixingFamily::tail_integral(double y) const {
  if (y < 0.0) throw std::invalid_argument("tail_integral: y must be >= 0");
  switch (kind_) {
    case Kind::gamma_mixing:
      if (a_ <= 1.0)
        throw std::domain_error(
            "tail_integral: diverges for gamma_mixing with a <= 1 (infinite-mean marginals)");
      return scale_ / (a_ - 1.0) * std::exp((1.0 - a_) * std::log1p(y / scale_));
    case Kind::gamma_claims: {
      // int_y^inf Q(a, lam t) dt = (a/lam) Q(a+1, lam y) - y Q(a, lam y);
      // check: the derivative in y is -Q(a, lam y) and the y=0 value is the
      // Gamma(a, lam) mean a/lam.
      const double lam = scale_;
      return a_ / lam * specfun::reg_upper_gamma(a_ + 1.0, lam * y) -
             y * specfun::reg_upper_gamma(a_, lam * y);
    }
  }
  return 0.0;
}

double MixingFamily::sample_theta(Rng& rng) const {
  switch (kind_) {
    case Kind::gamma_mixing:
      return sample_gamma(rng, a_) / scale_;
    case Kind::gamma_claims:
      if (a_ == 1.0) return scale_;
      // Theta = lam / V with V ~ Beta(a, 1-a) gives E[e^{-s Theta}] = Q(a, lam s).
      return scale_ / sample_beta(rng, a_, 1.0 - a_);
  }
  return 0.0;
}

}  // namespace mbc
