#include "mbc/risk_measures.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mbc/counts.hpp"
#include "mbc/specfun.hpp"

namespace mbc {

namespace {

// Common series of the TVaR theorem: weights w_nu against
// (-1)^{nu+1} m^{nu-1} V^nu / nu! f*^{(nu-1)}(mV), plus coeff * tail
// integral, all over (1 - kappa).  Every series term is nonnegative by
// complete monotonicity, so the sum is a log-sum-exp.
double tvar_series(const AggregateModel& model, std::span<const double> weights, double kappa,
                   double integral_coeff) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("tvar: kappa must be in (0,1)");
  const double v = model.var(kappa);
  const int mval = model.m();
  const double log_m = std::log(static_cast<double>(mval)), log_v = std::log(v);
  std::vector<double> terms;
  terms.reserve(weights.size());
  for (std::size_t nu = 1; nu < weights.size(); ++nu) {
    const double w = weights[nu];
    if (w == 0.0) continue;
    terms.push_back(std::log(w) + (static_cast<double>(nu) - 1.0) * log_m +
                    static_cast<double>(nu) * log_v - std::lgamma(nu + 1.0) +
                    model.mixing().log_abs_laplace_deriv(static_cast<int>(nu) - 1, mval * v));
  }
  const double series = std::exp(specfun::log_sum_exp(terms));
  const double tail = model.mixing().tail_integral(mval * v);
  return (series + integral_coeff * tail) / (1.0 - kappa);
}

}  // namespace

double tvar(const AggregateModel& model, std::span<const double> tvar_w, double kappa) {
  return tvar_series(model, tvar_w, kappa, static_cast<double>(model.n()));
}

double tvar_contribution(const AggregateModel& model, std::span<const double> alloc_w,
                         double kappa) {
  return tvar_series(model, alloc_w, kappa, 1.0);
}

RiskReport risk_report(const AggregateModel& model, const GammaTensor& gamma, double kappa,
                       double eps_tail) {
  RiskReport report;
  report.kappa = kappa;
  report.var = model.var(kappa);
  report.tvar = tvar(model, tvar_weights(model.counts()), kappa);
  report.contributions.reserve(static_cast<std::size_t>(model.n()));
  for (int i = 1; i <= model.n(); ++i) {
    const auto joint = joint_count_pmf(gamma, i, eps_tail);
    report.contributions.push_back(tvar_contribution(model, allocation_weights(joint), kappa));
  }
  report.truncation_bound = model.truncation_bound(report.var);
  return report;
}

void write_risk_csv(std::span<const RiskReport> reports, std::ostream& os) {
  if (reports.empty()) return;
  os << "kappa,var,tvar";
  for (std::size_t i = 1; i <= reports.front().contributions.size(); ++i)
    os << ",contrib_" << i;
  os << ",truncation_bound\n";
  os.precision(10);
  for (const auto& r : reports) {
    os << r.kappa << ',' << r.var << ',' << r.tvar;
    for (double c : r.contributions) os << ',' << c;
    os << ',' << r.truncation_bound << '\n';
  }
}

double joint_survival(const BetaTensor& beta, const MixingFamily& mixing,
                      std::span<const double> x) {
  const int n = beta.n, m = beta.m;
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("joint_survival: dimension mismatch");
  for (double xi : x)
    if (xi < 0.0) throw std::invalid_argument("joint_survival: x must be >= 0 componentwise");
  std::vector<int> l(static_cast<std::size_t>(n), 0);
  std::size_t flat = 0;
  specfun::CompensatedSum acc;
  do {
    const double b = beta.coeffs[flat++];
    if (b != 0.0) {
      double arg = 0.0;
      for (int i = 0; i < n; ++i) arg += l[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      acc.add(b * mixing.laplace(arg));
    }
  } while (AlphaGrid::next_index(l, m + 1));
  return acc.value();
}

double mixed_copula(const BetaTensor& beta, const MixingFamily& mixing,
                    std::span<const double> u) {
  const int n = beta.n;
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("mixed_copula: dimension mismatch");
  std::vector<double> x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) return 0.0;  // grounded; the inverse diverges
    x[i] = mixing.laplace_inv(u[i]);
  }
  return joint_survival(beta, mixing, x);
}

double spearman_rho(const BetaTensor& beta, const MixingFamily& mixing) {
  if (beta.n != 2) throw std::invalid_argument("spearman_rho: requires n = 2");
  const int m = beta.m;
  double previous = 0.0;
  bool have_previous = false;
  for (int order : {16, 24, 32, 48, 64, 96}) {
    const auto& gl = specfun::gauss_legendre(order);
    std::vector<double> inv(gl.nodes.size());
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      inv[i] = mixing.laplace_inv(0.5 * (gl.nodes[i] + 1.0));

    specfun::CompensatedSum integral;
    std::vector<int> l(2, 0);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        specfun::CompensatedSum c;
        std::size_t flat = 0;
        std::fill(l.begin(), l.end(), 0);
        do {
          const double b = beta.coeffs[flat++];
          if (b != 0.0) c.add(b * mixing.laplace(l[0] * inv[i] + l[1] * inv[j]));
        } while (AlphaGrid::next_index(l, m + 1));
        integral.add(0.25 * gl.weights[i] * gl.weights[j] * c.value());
      }
    const double rho = 12.0 * integral.value() - 3.0;
    if (have_previous && std::abs(rho - previous) < 1e-7) return rho;
    previous = rho;
    have_previous = true;
  }
  return previous;
}

}  // namespace mbc
