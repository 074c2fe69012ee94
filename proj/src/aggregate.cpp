#include "mbc/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mbc/specfun.hpp"

namespace mbc {

AggregateModel::AggregateModel(MixingFamily mixing, CountPmf counts)
    : mixing_(std::move(mixing)), counts_(std::move(counts)), tails_(tail_sums(counts_)) {}

AggregateModel AggregateModel::build(const GammaTensor& gamma, const MixingFamily& mixing,
                                     double eps_tail) {
  return AggregateModel(mixing, total_count_pmf(gamma, eps_tail));
}

double AggregateModel::agg_pdf(double x) const {
  if (!(x > 0.0)) throw std::invalid_argument("agg_pdf: x must be > 0");
  const int mval = m();
  const double log_x = std::log(x), log_m = std::log(static_cast<double>(mval));
  std::vector<double> terms;
  terms.reserve(counts_.probs.size());
  for (int l = n(); l <= counts_.l_cap(); ++l) {
    const double a_l = counts_.probs[static_cast<std::size_t>(l)];
    if (a_l == 0.0) continue;
    terms.push_back(std::log(a_l) + l * log_m + (l - 1) * log_x - std::lgamma(l) +
                    mixing_.log_abs_laplace_deriv(l, mval * x));
  }
  return std::exp(specfun::log_sum_exp(terms));
}

double AggregateModel::agg_survival(double x) const {
  if (x < 0.0) throw std::invalid_argument("agg_survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  const int mval = m();
  const double log_mx = std::log(mval * x);
  std::vector<double> terms;
  terms.reserve(tails_.size());
  for (int i = 0; i <= counts_.l_cap(); ++i) {
    const double b_i = tails_[static_cast<std::size_t>(i)];
    if (b_i == 0.0) continue;
    terms.push_back(std::log(b_i) + i * log_mx - std::lgamma(i + 1.0) +
                    mixing_.log_abs_laplace_deriv(i, mval * x));
  }
  return std::clamp(std::exp(specfun::log_sum_exp(terms)), 0.0, 1.0);
}

double AggregateModel::truncation_bound(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (counts_.tail_mass == 0.0) return 0.0;
  const int mval = m();
  const double log_mx = std::log(mval * x);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int i = counts_.l_cap() / 2; i <= counts_.l_cap(); ++i)
    max_log = std::max(max_log, i * log_mx - std::lgamma(i + 1.0) +
                                    mixing_.log_abs_laplace_deriv(i, mval * x));
  return counts_.tail_mass * std::exp(max_log);
}

double AggregateModel::var(double kappa) const {
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("var: kappa must be in (0,1)");
  const double target = 1.0 - kappa;
  // The marginal quantile is a lower bound for the aggregate quantile of a
  // sum of positive risks at the same level; bracket upward from it.
  double lo = 0.0, hi = std::max(mixing_.laplace_inv(target), 1e-8);
  while (agg_survival(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("var: no bracket below overflow guard");
  }
  // Bisection with a secant refinement; survival is continuous and strictly
  // decreasing where positive.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (agg_survival(mid) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double pareto_agg_pdf(double a, double b, const CountPmf& counts, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("pareto_agg_pdf: x must be > 0");
  const int mval = counts.m;
  const double log_x = std::log(x), log_m = std::log(static_cast<double>(mval));
  const double log_b = std::log(b);
  std::vector<double> terms;
  for (int l = counts.n; l <= counts.l_cap(); ++l) {
    const double a_l = counts.probs[static_cast<std::size_t>(l)];
    if (a_l == 0.0) continue;
    const double log_beta = std::lgamma(l) + std::lgamma(a) - std::lgamma(l + a);
    terms.push_back(std::log(a_l) + l * log_m + (l - 1) * log_x - l * log_b - log_beta -
                    (a + l) * std::log1p(mval * x / b));
  }
  return std::exp(specfun::log_sum_exp(terms));
}

std::vector<double> gamma_agg_weights(double a, const CountPmf& counts) {
  if (!(a > 0.0 && a <= 1.0))
    throw std::invalid_argument("gamma_agg_weights: a must be in (0,1]");
  const int l_cap = counts.l_cap(), n = counts.n;
  std::vector<double> weights(static_cast<std::size_t>(l_cap), 0.0);
  if (a == 1.0) {
    // Degenerate mixing: the weight on Gamma(k, lambda m) is just A_k.
    for (int k = 1; k <= l_cap; ++k)
      weights[static_cast<std::size_t>(k - 1)] = counts.probs[static_cast<std::size_t>(k)];
    return weights;
  }
  // omega_k = sum_{l >= max(k,n)} A_l Gamma(a+k-1) / (Gamma(k) Gamma(l-k+1)
  // Gamma(a)) * (-1)^{l-k} (a-1)...(a-(l-k)).  For a < 1 the falling
  // factorial equals (-1)^{l-k} Gamma(l-k+1-a)/Gamma(1-a), so all terms are
  // nonnegative.
  for (int k = 1; k <= l_cap; ++k) {
    std::vector<double> terms;
    for (int l = std::max(k, n); l <= l_cap; ++l) {
      const double a_l = counts.probs[static_cast<std::size_t>(l)];
      if (a_l == 0.0) continue;
      const int j = l - k;
      terms.push_back(std::log(a_l) - std::lgamma(j + 1.0) + std::lgamma(j + 1.0 - a) -
                      std::lgamma(1.0 - a));
    }
    if (terms.empty()) continue;
    weights[static_cast<std::size_t>(k - 1)] =
        std::exp(std::lgamma(a + k - 1.0) - std::lgamma(static_cast<double>(k)) -
                 std::lgamma(a) + specfun::log_sum_exp(terms));
  }
  return weights;
}

}  // namespace mbc
