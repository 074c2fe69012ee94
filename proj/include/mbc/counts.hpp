#ifndef MBC_COUNTS_HPP
#define MBC_COUNTS_HPP

#include <vector>

#include "mbc/bernstein.hpp"

namespace mbc {

/// Distribution of the total count T = sum of per-risk counts; probs[l] is
/// the mass at l (zero below l = n).  Every closed-form series downstream is
/// a moment of this pmf against Laplace-transform derivatives.
struct CountPmf {
  int m = 0, n = 0;
  std::vector<double> probs;  // indexed by l = 0..L_cap
  double tail_mass = 0.0;     // 1 - sum(probs), lost above L_cap

  int l_cap() const { return static_cast<int>(probs.size()) - 1; }
};

/// Joint distribution of (risk-i count K, remaining count L); probs[k][l].
struct JointCountPmf {
  int m = 0, n = 0, risk = 0;  // risk is 1-based
  std::vector<std::vector<double>> probs;
  double tail_mass = 0.0;
};

/// Pmf of the count for one risk given its lattice value nu: the convolution
/// of shifted geometrics with success probabilities (nu+1)/m, ..., m/m.
/// probs[k] for k = 0..l_cap; support starts at k = m - nu.
std::vector<double> conditional_count_pmf(int m, int nu, int l_cap);

/// Mixes the per-risk count convolutions over the gamma lattice.  The cap
/// starts at max(32, 4mn) and doubles until tail_mass <= eps_tail, up to the
/// hard cap 20mn; throws std::runtime_error if the target is unreachable.
CountPmf total_count_pmf(const GammaTensor& gamma, double eps_tail = 1e-12);

/// B_i = Pr(T >= max(i+1, n)), i = 0..l_cap; reverse cumulative sums with
/// the truncated tail mass folded in.
std::vector<double> tail_sums(const CountPmf& count);

/// P_nu = E[T; T >= max(nu, n)] for nu = 1..l_cap; equals mn for nu <= n.
std::vector<double> tvar_weights(const CountPmf& count);

/// Joint pmf of risk i's count against the total of the others.
JointCountPmf joint_count_pmf(const GammaTensor& gamma, int risk, double eps_tail = 1e-12);

/// P_nu^(i) = E[K; K + L >= max(nu, n)] for nu = 1..l_cap; sums over risks
/// to tvar_weights.
std::vector<double> allocation_weights(const JointCountPmf& joint);

}  // namespace mbc

#endif
