#ifndef MBC_MC_HPP
#define MBC_MC_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mbc/bernstein.hpp"
#include "mbc/mixing.hpp"
#include "mbc/risk_measures.hpp"

namespace mbc {

/// Simulated loss paths from the exact stochastic representation
/// X_i = Z_i / Theta: independent ground truth for every closed formula.
struct SimulationBatch {
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<double> losses;  // paths x n, row-major
  std::vector<double> sums;    // per-path totals, accumulated left to right

  double loss(std::size_t path, int i) const {
    return losses[path * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
  }
};

/// Per path: draw the lattice index from the gamma pmf, build each Z_i as the
/// weighted exponential sum Z_i = sum_{j=1}^{m-nu_i} Q_j / (m-j+1), draw
/// Theta, and set X_i = Z_i / Theta.  With threads > 1 the paths are split
/// across workers on disjoint RNG substreams; a given (seed, threads) pair is
/// bit-reproducible, different thread counts are statistically equivalent.
SimulationBatch sample_batch(const GammaTensor& gamma, const MixingFamily& mixing,
                             std::size_t paths, std::uint64_t seed, int threads = 1);

/// Empirical report with attached standard errors: VaR as the order statistic
/// at ceil(kappa * paths), TVaR and contributions as conditional means over
/// the exceedance paths.  Throws if kappa is outside (0,1) or fewer than 50
/// paths exceed the quantile.
struct EmpiricalReport {
  RiskReport report;
  double var_stderr = 0.0;
  double tvar_stderr = 0.0;
  std::vector<double> contribution_stderr;
  std::size_t exceedances = 0;
};
EmpiricalReport empirical_measures(const SimulationBatch& batch, double kappa);

/// Kolmogorov-Smirnov statistic of one margin against its model survival f*.
double marginal_ks_statistic(const SimulationBatch& batch, const MixingFamily& mixing, int i);

/// CSV rows `x_1,...,x_n,sum`.
void write_batch_csv(const SimulationBatch& batch, std::ostream& os);

}  // namespace mbc

#endif
