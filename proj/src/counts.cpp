#include "mbc/counts.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mbc/specfun.hpp"

namespace mbc {

namespace {

constexpr int kHardCapFactor = 20;

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b,
                             int l_cap) {
  std::vector<double> out(static_cast<std::size_t>(l_cap) + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    const std::size_t kmax = std::min(out.size() - 1 - i, b.size() - 1);
    for (std::size_t j = 0; j <= kmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Convolutions of the per-risk conditional pmfs, cached by the sorted
/// multiset of nu-values (only the multiset matters, not the order).
class ConvCache {
 public:
  ConvCache(const std::vector<std::vector<double>>& cond, int l_cap)
      : cond_(cond), l_cap_(l_cap) {
    cache_[{}] = std::vector<double>(static_cast<std::size_t>(l_cap) + 1, 0.0);
    cache_[{}][0] = 1.0;
  }

  const std::vector<double>& get(std::vector<int> nus) {
    std::sort(nus.begin(), nus.end());
    auto it = cache_.find(nus);
    if (it != cache_.end()) return it->second;
    std::vector<int> head(nus.begin(), nus.end() - 1);
    auto conv = convolve(get(head), cond_[static_cast<std::size_t>(nus.back())], l_cap_);
    return cache_.emplace(std::move(nus), std::move(conv)).first->second;
  }

 private:
  const std::vector<std::vector<double>>& cond_;
  int l_cap_;
  std::map<std::vector<int>, std::vector<double>> cache_;
};

std::vector<std::vector<double>> all_conditionals(int m, int l_cap) {
  std::vector<std::vector<double>> cond(static_cast<std::size_t>(m));
  for (int nu = 0; nu < m; ++nu) cond[static_cast<std::size_t>(nu)] = conditional_count_pmf(m, nu, l_cap);
  return cond;
}

}  // namespace

std::vector<double> conditional_count_pmf(int m, int nu, int l_cap) {
  if (m < 1 || nu < 0 || nu > m - 1)
    throw std::invalid_argument("conditional_count_pmf: need 0 <= nu <= m-1");
  std::vector<double> pmf(static_cast<std::size_t>(l_cap) + 1, 0.0);
  pmf[0] = 1.0;
  for (int j = nu + 1; j <= m; ++j) {
    const double p = static_cast<double>(j) / m;
    // Convolve with a shifted geometric: g[k] = (1-p) g[k-1] + p f[k-1].
    // At j = m the count is deterministically 1 and this is a pure shift.
    std::vector<double> next(pmf.size(), 0.0);
    for (std::size_t k = 1; k < pmf.size(); ++k)
      next[k] = (1.0 - p) * next[k - 1] + p * pmf[k - 1];
    pmf = std::move(next);
  }
  return pmf;
}

CountPmf total_count_pmf(const GammaTensor& gamma, double eps_tail) {
  const int m = gamma.m, n = gamma.n;
  const int hard_cap = kHardCapFactor * m * n;
  int l_cap = std::min(std::max(32, 4 * m * n), hard_cap);

  for (;;) {
    const auto cond = all_conditionals(m, l_cap);
    ConvCache cache(cond, l_cap);

    std::vector<specfun::CompensatedSum> acc(static_cast<std::size_t>(l_cap) + 1);
    std::vector<int> nu(static_cast<std::size_t>(n), 0);
    std::size_t flat = 0;
    std::vector<int> head(nu.begin(), nu.end() - 1);
    do {
      // Mix the last coordinate analytically: one weighted pmf per prefix,
      // then a single convolution against the cached prefix convolution.
      std::copy(nu.begin(), nu.end() - 1, head.begin());
      std::vector<double> mixed(static_cast<std::size_t>(l_cap) + 1, 0.0);
      bool any = false;
      for (int last = 0; last < m; ++last) {
        const double w = gamma.weights[flat++];
        if (w == 0.0) continue;
        any = true;
        const auto& c = cond[static_cast<std::size_t>(last)];
        for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] += w * c[k];
      }
      // Advance the full index by m (the inner loop consumed the last axis).
      for (int i = n - 2; i >= 0; --i) {
        if (++nu[static_cast<std::size_t>(i)] < m) break;
        nu[static_cast<std::size_t>(i)] = 0;
      }
      if (!any) continue;
      const auto total = convolve(cache.get(head), mixed, l_cap);
      for (std::size_t l = 0; l < total.size(); ++l) acc[l].add(total[l]);
    } while (flat < gamma.weights.size());

    CountPmf out;
    out.m = m;
    out.n = n;
    out.probs.resize(acc.size());
    specfun::CompensatedSum mass;
    for (std::size_t l = 0; l < acc.size(); ++l) {
      out.probs[l] = std::max(acc[l].value(), 0.0);
      mass.add(out.probs[l]);
    }
    out.tail_mass = std::max(1.0 - mass.value(), 0.0);
    if (out.tail_mass <= eps_tail) return out;
    if (l_cap >= hard_cap)
      throw std::runtime_error("total_count_pmf: tail tolerance unreachable at the hard cap");
    l_cap = std::min(2 * l_cap, hard_cap);
  }
}

std::vector<double> tail_sums(const CountPmf& count) {
  const int l_cap = count.l_cap(), n = count.n;
  std::vector<double> cum(static_cast<std::size_t>(l_cap) + 2, 0.0);
  cum[static_cast<std::size_t>(l_cap) + 1] = count.tail_mass;
  for (int l = l_cap; l >= 0; --l)
    cum[static_cast<std::size_t>(l)] = cum[static_cast<std::size_t>(l) + 1] + count.probs[static_cast<std::size_t>(l)];

  std::vector<double> b(static_cast<std::size_t>(l_cap) + 1);
  for (int i = 0; i <= l_cap; ++i) {
    const int thresh = std::max(i + 1, n);
    b[static_cast<std::size_t>(i)] =
        (thresh <= l_cap + 1) ? cum[static_cast<std::size_t>(thresh)] : count.tail_mass;
  }
  return b;
}

std::vector<double> tvar_weights(const CountPmf& count) {
  const int l_cap = count.l_cap(), n = count.n;
  std::vector<double> cum(static_cast<std::size_t>(l_cap) + 2, 0.0);
  for (int l = l_cap; l >= 0; --l)
    cum[static_cast<std::size_t>(l)] =
        cum[static_cast<std::size_t>(l) + 1] + l * count.probs[static_cast<std::size_t>(l)];

  std::vector<double> p(static_cast<std::size_t>(l_cap) + 1, 0.0);
  for (int nuv = 0; nuv <= l_cap; ++nuv) {
    const int thresh = std::max(nuv, n);
    if (thresh <= l_cap) p[static_cast<std::size_t>(nuv)] = cum[static_cast<std::size_t>(thresh)];
  }
  return p;
}

JointCountPmf joint_count_pmf(const GammaTensor& gamma, int risk, double eps_tail) {
  const int m = gamma.m, n = gamma.n;
  if (risk < 1 || risk > n) throw std::invalid_argument("joint_count_pmf: risk index out of range");
  // Reuse the cap the total pmf needed for this tolerance.
  const int l_cap = total_count_pmf(gamma, eps_tail).l_cap();
  const auto cond = all_conditionals(m, l_cap);
  ConvCache cache(cond, l_cap);

  // g[nu_i][l] = sum over the other coordinates of gamma(nu) times the
  // (n-1)-fold convolution of their conditional pmfs.
  std::vector<std::vector<double>> g(
      static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(l_cap) + 1, 0.0));
  std::vector<int> nu(static_cast<std::size_t>(n), 0);
  std::vector<int> others(static_cast<std::size_t>(n) - 1);
  std::size_t flat = 0;
  do {
    const double w = gamma.weights[flat++];
    if (w == 0.0) continue;
    std::size_t o = 0;
    for (int i = 0; i < n; ++i)
      if (i != risk - 1) others[o++] = nu[static_cast<std::size_t>(i)];
    const auto& conv = cache.get(others);
    auto& dst = g[static_cast<std::size_t>(nu[static_cast<std::size_t>(risk - 1)])];
    for (std::size_t l = 0; l < dst.size(); ++l) dst[l] += w * conv[l];
  } while (AlphaGrid::next_index(nu, m));

  JointCountPmf joint;
  joint.m = m;
  joint.n = n;
  joint.risk = risk;
  joint.probs.assign(static_cast<std::size_t>(l_cap) + 1,
                     std::vector<double>(static_cast<std::size_t>(l_cap) + 1, 0.0));
  specfun::CompensatedSum mass;
  for (int nui = 0; nui < m; ++nui) {
    const auto& ci = cond[static_cast<std::size_t>(nui)];
    const auto& gi = g[static_cast<std::size_t>(nui)];
    for (std::size_t k = 0; k <= static_cast<std::size_t>(l_cap); ++k) {
      if (ci[k] == 0.0) continue;
      for (std::size_t l = 0; l <= static_cast<std::size_t>(l_cap); ++l)
        joint.probs[k][l] += ci[k] * gi[l];
    }
  }
  for (const auto& row : joint.probs)
    for (double v : row) mass.add(v);
  joint.tail_mass = std::max(1.0 - mass.value(), 0.0);
  return joint;
}

std::vector<double> allocation_weights(const JointCountPmf& joint) {
  const int l_cap = static_cast<int>(joint.probs.size()) - 1, n = joint.n;
  // d[r] = E[K; K + L = r]; the weights are its reverse cumulative sums.
  std::vector<double> d(2 * static_cast<std::size_t>(l_cap) + 1, 0.0);
  for (int k = 0; k <= l_cap; ++k)
    for (int l = 0; l <= l_cap; ++l)
      d[static_cast<std::size_t>(k + l)] += k * joint.probs[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];

  std::vector<double> cum(d.size() + 1, 0.0);
  for (int r = static_cast<int>(d.size()) - 1; r >= 0; --r)
    cum[static_cast<std::size_t>(r)] = cum[static_cast<std::size_t>(r) + 1] + d[static_cast<std::size_t>(r)];

  std::vector<double> p(static_cast<std::size_t>(l_cap) + 1, 0.0);
  for (int nuv = 0; nuv <= l_cap; ++nuv) {
    const std::size_t thresh = static_cast<std::size_t>(std::max(nuv, n));
    if (thresh < cum.size()) p[static_cast<std::size_t>(nuv)] = cum[thresh];
  }
  return p;
}

}  // namespace mbc
