#ifndef MBC_RISK_MEASURES_HPP
#define MBC_RISK_MEASURES_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "mbc/aggregate.hpp"
#include "mbc/bernstein.hpp"
#include "mbc/mixing.hpp"

namespace mbc {

struct RiskReport {
  double kappa = 0.0;
  double var = 0.0;
  double tvar = 0.0;
  std::vector<double> contributions;  // sums to tvar
  double truncation_bound = 0.0;
};

/// Tail value at risk E[S_n | S_n > VaR_kappa]: series over the count-tail
/// weights plus the Laplace-transform tail integral.  Throws
/// std::domain_error when the marginal mean is infinite (gamma_mixing a <= 1).
double tvar(const AggregateModel& model, std::span<const double> tvar_w, double kappa);

/// Same series with the per-risk weights; sums over risks to tvar.
double tvar_contribution(const AggregateModel& model, std::span<const double> alloc_w,
                         double kappa);

/// Full report: VaR, TVaR and all n contributions for one level.
RiskReport risk_report(const AggregateModel& model, const GammaTensor& gamma, double kappa,
                       double eps_tail = 1e-12);

/// CSV rows `kappa,var,tvar,contrib_1,...,contrib_n,truncation_bound`.
void write_risk_csv(std::span<const RiskReport> reports, std::ostream& os);

/// Joint survival Pr(X_1 > x_1, ..., X_n > x_n) = sum_l beta_l f*(sum l_i x_i).
double joint_survival(const BetaTensor& beta, const MixingFamily& mixing,
                      std::span<const double> x);

/// The dependence structure itself: C(u) = sum_l beta_l f*(sum l_i f*^{-1}(u_i)).
/// Returns 0 if any coordinate is 0 (groundedness; the inverse diverges).
double mixed_copula(const BetaTensor& beta, const MixingFamily& mixing,
                    std::span<const double> u);

/// Spearman's rho = 12 * int int C(u,v) du dv - 3 for n = 2, by tensor
/// Gauss-Legendre with escalating order until successive rules agree to 1e-7.
double spearman_rho(const BetaTensor& beta, const MixingFamily& mixing);

}  // namespace mbc

#endif
