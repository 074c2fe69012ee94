#include "mbc/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mbc/specfun.hpp"

namespace mbc {

namespace {

// Cumulative table over the (clamped, renormalized) gamma pmf for inverse
// lookup of the lattice index.
struct LatticeSampler {
  explicit LatticeSampler(const GammaTensor& gamma) : n(gamma.n), m(gamma.m) {
    cumulative.reserve(gamma.weights.size());
    double total = 0.0;
    for (double w : gamma.weights) {
      if (w < 0.0) throw std::invalid_argument("sample_batch: gamma has negative weights");
      total += w;
      cumulative.push_back(total);
    }
    if (!(total > 0.0)) throw std::invalid_argument("sample_batch: gamma sums to zero");
    for (double& c : cumulative) c /= total;
    cumulative.back() = 1.0;
  }

  void draw(Rng& rng, std::vector<int>& nu) const {
    const double u = rng.uniform();
    std::size_t flat = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    for (int i = n - 1; i >= 0; --i) {
      nu[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(m));
      flat /= static_cast<std::size_t>(m);
    }
  }

  int n, m;
  std::vector<double> cumulative;
};

void fill_paths(const LatticeSampler& lattice, const MixingFamily& mixing, Rng rng,
                std::size_t first, std::size_t count, SimulationBatch& batch) {
  const int n = lattice.n, m = lattice.m;
  std::vector<int> nu(static_cast<std::size_t>(n));
  for (std::size_t p = first; p < first + count; ++p) {
    lattice.draw(rng, nu);
    const double theta = mixing.sample_theta(rng);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      // Z_i given nu_i is the partial sum of scaled order-statistic spacings.
      double z = 0.0;
      for (int j = 1; j <= m - nu[static_cast<std::size_t>(i)]; ++j)
        z += rng.exponential() / (m - j + 1);
      const double x = z / theta;
      batch.losses[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = x;
      sum += x;
    }
    batch.sums[p] = sum;
  }
}

}  // namespace

SimulationBatch sample_batch(const GammaTensor& gamma, const MixingFamily& mixing,
                             std::size_t paths, std::uint64_t seed, int threads) {
  if (paths < 1) throw std::invalid_argument("sample_batch: paths must be >= 1");
  if (threads < 1) threads = 1;
  const LatticeSampler lattice(gamma);

  SimulationBatch batch;
  batch.paths = paths;
  batch.seed = seed;
  batch.n = gamma.n;
  batch.losses.resize(paths * static_cast<std::size_t>(gamma.n));
  batch.sums.resize(paths);

  Rng master(seed);
  if (threads == 1 || paths < 2 * static_cast<std::size_t>(threads)) {
    fill_paths(lattice, mixing, master, 0, paths, batch);
    return batch;
  }

  std::vector<std::thread> workers;
  const std::size_t chunk = (paths + static_cast<std::size_t>(threads) - 1) /
                            static_cast<std::size_t>(threads);
  for (int t = 0; t < threads; ++t) {
    const std::size_t first = static_cast<std::size_t>(t) * chunk;
    if (first >= paths) break;
    const std::size_t count = std::min(chunk, paths - first);
    workers.emplace_back(fill_paths, std::cref(lattice), std::cref(mixing), master, first,
                         count, std::ref(batch));
    master.long_jump();  // disjoint substream for the next worker
  }
  for (auto& w : workers) w.join();
  return batch;
}

EmpiricalReport empirical_measures(const SimulationBatch& batch, double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("empirical_measures: kappa must be in (0,1)");
  if (batch.paths < 1000)
    throw std::invalid_argument("empirical_measures: need at least 1000 paths");

  const std::size_t paths = batch.paths;
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(kappa * static_cast<double>(paths)));  // 1-based order statistic
  std::vector<double> sorted = batch.sums;
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  const double var = sorted[rank - 1];

  EmpiricalReport out;
  out.report.kappa = kappa;
  out.report.var = var;
  out.report.contributions.assign(static_cast<std::size_t>(batch.n), 0.0);
  out.contribution_stderr.assign(static_cast<std::size_t>(batch.n), 0.0);

  // Conditional means and second moments over the exceedance event.
  std::vector<specfun::CompensatedSum> s1(static_cast<std::size_t>(batch.n)),
      s2(static_cast<std::size_t>(batch.n));
  specfun::CompensatedSum t1, t2;
  std::size_t k = 0;
  for (std::size_t p = 0; p < paths; ++p) {
    if (!(batch.sums[p] > var)) continue;
    ++k;
    t1.add(batch.sums[p]);
    t2.add(batch.sums[p] * batch.sums[p]);
    for (int i = 0; i < batch.n; ++i) {
      const double x = batch.loss(p, i);
      s1[static_cast<std::size_t>(i)].add(x);
      s2[static_cast<std::size_t>(i)].add(x * x);
    }
  }
  if (k < 50)
    throw std::runtime_error("empirical_measures: fewer than 50 exceedance paths");
  out.exceedances = k;

  const double kd = static_cast<double>(k);
  out.report.tvar = t1.value() / kd;
  out.tvar_stderr =
      std::sqrt(std::max(t2.value() / kd - out.report.tvar * out.report.tvar, 0.0) / kd);
  for (int i = 0; i < batch.n; ++i) {
    const double mean = s1[static_cast<std::size_t>(i)].value() / kd;
    const double var_i =
        std::max(s2[static_cast<std::size_t>(i)].value() / kd - mean * mean, 0.0);
    out.report.contributions[static_cast<std::size_t>(i)] = mean;
    out.contribution_stderr[static_cast<std::size_t>(i)] = std::sqrt(var_i / kd);
  }
  // Asymptotic quantile stderr: sqrt(kappa(1-kappa)/paths) / density, with the
  // density estimated from a small window of order statistics around the VaR.
  const double h = std::max(1.0, 0.001 * static_cast<double>(paths));
  const std::size_t lo = rank > static_cast<std::size_t>(h) ? rank - static_cast<std::size_t>(h) : 1;
  const std::size_t hi = std::min(paths, rank + static_cast<std::size_t>(h));
  std::nth_element(sorted.begin(), sorted.begin() + (lo - 1), sorted.end());
  const double x_lo = sorted[lo - 1];
  std::nth_element(sorted.begin(), sorted.begin() + (hi - 1), sorted.end());
  const double x_hi = sorted[hi - 1];
  const double density = (static_cast<double>(hi - lo) / static_cast<double>(paths)) /
                         std::max(x_hi - x_lo, 1e-300);
  out.var_stderr = std::sqrt(kappa * (1.0 - kappa) / static_cast<double>(paths)) / density;
  return out;
}

double marginal_ks_statistic(const SimulationBatch& batch, const MixingFamily& mixing, int i) {
  if (i < 0 || i >= batch.n) throw std::invalid_argument("marginal_ks_statistic: bad index");
  std::vector<double> x(batch.paths);
  for (std::size_t p = 0; p < batch.paths; ++p) x[p] = batch.loss(p, i);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double np = static_cast<double>(batch.paths);
  for (std::size_t p = 0; p < batch.paths; ++p) {
    const double cdf = 1.0 - mixing.laplace(x[p]);
    d = std::max(d, std::abs(cdf - static_cast<double>(p) / np));
    d = std::max(d, std::abs(static_cast<double>(p + 1) / np - cdf));
  }
  return d;
}

void write_batch_csv(const SimulationBatch& batch, std::ostream& os) {
  for (int i = 1; i <= batch.n; ++i) os << "x_" << i << ',';
  os << "sum\n";
  os.precision(10);
  for (std::size_t p = 0; p < batch.paths; ++p) {
    for (int i = 0; i < batch.n; ++i) os << batch.loss(p, i) << ',';
    os << batch.sums[p] << '\n';
  }
}

}  // namespace mbc
