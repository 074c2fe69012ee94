#ifndef MBC_AGGREGATE_HPP
#define MBC_AGGREGATE_HPP

#include <vector>

#include "mbc/counts.hpp"
#include "mbc/mixing.hpp"

namespace mbc {

/// Distribution of the aggregate loss S_n = X_1 + ... + X_n.  Built once
/// from the dependence lattice and the mixing family; evaluation is pure.
class AggregateModel {
 public:
  AggregateModel(MixingFamily mixing, CountPmf counts);

  static AggregateModel build(const GammaTensor& gamma, const MixingFamily& mixing,
                              double eps_tail = 1e-12);

  const MixingFamily& mixing() const { return mixing_; }
  const CountPmf& counts() const { return counts_; }
  const std::vector<double>& tails() const { return tails_; }
  int n() const { return counts_.n; }
  int m() const { return counts_.m; }

  /// Density of S_n at x > 0: sum_l A_l (-1)^l m^l / Gamma(l) x^{l-1}
  /// f*^{(l)}(mx).  Complete monotonicity makes every term nonnegative, so
  /// the series is evaluated in log-space without sign tracking.
  double agg_pdf(double x) const;

  /// Pr(S_n > x) = sum_i (-1)^i B_i (mx)^i / i! f*^{(i)}(mx).
  double agg_survival(double x) const;

  /// Conservative truncation-error envelope for the series at x: the count
  /// tail mass times the largest per-unit-mass term in the upper half of the
  /// evaluated range.
  double truncation_bound(double x) const;

  /// Quantile: smallest x with Pr(S_n <= x) >= kappa, to relative accuracy
  /// 1e-12.  Throws std::runtime_error if no bracket exists below overflow.
  double var(double kappa) const;

 private:
  MixingFamily mixing_;
  CountPmf counts_;
  std::vector<double> tails_;
};

/// Pareto-marginal closed form of the density (gamma mixing): algebraically
/// identical to the generic series, kept as an independent evaluation path.
double pareto_agg_pdf(double a, double b, const CountPmf& counts, double x);

/// Gamma-claims closed form: S_n is a mixture over k of Gamma(a+k-1, lambda m)
/// densities; returns the mixture weights (indexed from k = 1 at element 0).
std::vector<double> gamma_agg_weights(double a, const CountPmf& counts);

}  // namespace mbc

#endif
