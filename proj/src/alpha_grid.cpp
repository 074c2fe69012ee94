#include "mbc/alpha_grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mbc/specfun.hpp"

namespace mbc {

namespace {
constexpr double kDiffTol = 1e-12;

std::size_t pow_sz(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}
}  // namespace

AlphaGrid::AlphaGrid(int n_, int m_) : n(n_), m(m_) {
  if (n < 2) throw std::invalid_argument("AlphaGrid: n must be >= 2");
  if (m < 1) throw std::invalid_argument("AlphaGrid: m must be >= 1");
  values.assign(pow_sz(m + 1, n), 0.0);
}

std::size_t AlphaGrid::flat_index(std::span<const int> nu) const {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(m + 1) + nu[i];
  return idx;
}

bool AlphaGrid::next_index(std::span<int> nu, int radix) {
  for (int i = static_cast<int>(nu.size()) - 1; i >= 0; --i) {
    if (++nu[i] < radix) return true;
    nu[i] = 0;
  }
  return false;
}

AlphaFamily alpha_family_from_string(const std::string& name) {
  if (name == "independence") return AlphaFamily::independence;
  if (name == "comonotonic") return AlphaFamily::comonotonic;
  if (name == "counter_comonotonic") return AlphaFamily::counter_comonotonic;
  if (name == "fgm") return AlphaFamily::fgm;
  if (name == "clayton") return AlphaFamily::clayton;
  if (name == "piecewise_gaussian") return AlphaFamily::piecewise_gaussian;
  if (name == "liebscher_clayton") return AlphaFamily::liebscher_clayton;
  throw std::invalid_argument("unknown alpha family: " + name);
}

std::string to_string(AlphaFamily family) {
  switch (family) {
    case AlphaFamily::independence: return "independence";
    case AlphaFamily::comonotonic: return "comonotonic";
    case AlphaFamily::counter_comonotonic: return "counter_comonotonic";
    case AlphaFamily::fgm: return "fgm";
    case AlphaFamily::clayton: return "clayton";
    case AlphaFamily::piecewise_gaussian: return "piecewise_gaussian";
    case AlphaFamily::liebscher_clayton: return "liebscher_clayton";
  }
  return "?";
}

namespace {

double gaussian_copula(double u, double v, double r) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  if (v >= 1.0) return u;
  return specfun::bivariate_norm_cdf(specfun::norm_quantile(u),
                                     specfun::norm_quantile(v), r);
}

double clayton2(double x, double y, double theta) {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  return std::pow(std::pow(x, -theta) + std::pow(y, -theta) - 1.0, -1.0 / theta);
}

void check_params(AlphaFamily family, const AlphaParams& p, int n) {
  switch (family) {
    case AlphaFamily::independence:
    case AlphaFamily::comonotonic:
      break;
    case AlphaFamily::counter_comonotonic:
      if (n != 2)
        throw std::invalid_argument(
            "counter_comonotonic: the lower Frechet bound is a copula only for n=2");
      break;
    case AlphaFamily::fgm:
      if (n != 2) throw std::invalid_argument("fgm: n must be 2");
      if (p.delta < -1.0 || p.delta > 1.0)
        throw std::invalid_argument("fgm: delta must be in [-1,1]");
      break;
    case AlphaFamily::clayton:
      if (p.theta <= 0.0) throw std::invalid_argument("clayton: theta must be > 0");
      break;
    case AlphaFamily::piecewise_gaussian:
      if (n != 2) throw std::invalid_argument("piecewise_gaussian: n must be 2");
      if (!(p.tau > 0.0 && p.tau < 1.0))
        throw std::invalid_argument("piecewise_gaussian: tau must be in (0,1)");
      if (!(std::abs(p.r1) < 1.0 && std::abs(p.r2) < 1.0))
        throw std::invalid_argument("piecewise_gaussian: r1, r2 must be in (-1,1)");
      break;
    case AlphaFamily::liebscher_clayton:
      if (n != 2) throw std::invalid_argument("liebscher_clayton: n must be 2");
      if (p.gamma <= 0.0 || p.delta2 <= 0.0)
        throw std::invalid_argument("liebscher_clayton: gamma, delta must be > 0");
      if (p.theta1 < 0.0 || p.theta1 > 1.0 || p.theta2 < 0.0 || p.theta2 > 1.0)
        throw std::invalid_argument("liebscher_clayton: theta_i must be in [0,1]");
      break;
  }
}

}  // namespace

double eval_alpha_copula(AlphaFamily family, const AlphaParams& p,
                         std::span<const double> u) {
  const int n = static_cast<int>(u.size());
  switch (family) {
    case AlphaFamily::independence: {
      double prod = 1.0;
      for (double ui : u) prod *= ui;
      return prod;
    }
    case AlphaFamily::comonotonic:
      return *std::min_element(u.begin(), u.end());
    case AlphaFamily::counter_comonotonic: {
      double s = 0.0;
      for (double ui : u) s += ui;
      return std::max(s - (n - 1), 0.0);
    }
    case AlphaFamily::fgm:
      return u[0] * u[1] * (1.0 + p.delta * (1.0 - u[0]) * (1.0 - u[1]));
    case AlphaFamily::clayton: {
      double s = 1.0 - n;
      for (double ui : u) {
        if (ui <= 0.0) return 0.0;
        s += std::pow(ui, -p.theta);
      }
      return std::pow(s, -1.0 / p.theta);
    }
    case AlphaFamily::piecewise_gaussian: {
      const double u1 = u[0], u2 = u[1], tau = p.tau;
      if (u1 <= tau) return tau * gaussian_copula(u1 / tau, u2, p.r1);
      return tau * u2 + (1.0 - tau) * gaussian_copula((u1 - tau) / (1.0 - tau), u2, p.r2);
    }
    case AlphaFamily::liebscher_clayton: {
      const double u1 = u[0], u2 = u[1];
      if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
      // Product of two Clayton copulas with Liebscher exponent splits
      // theta_i / (1 - theta_i) across the factors.
      const double f1 = clayton2(std::pow(u1, p.theta1), std::pow(u2, p.theta2), p.gamma);
      const double f2 = clayton2(std::pow(u1, 1.0 - p.theta1),
                                 std::pow(u2, 1.0 - p.theta2), p.delta2);
      return f1 * f2;
    }
  }
  throw std::invalid_argument("eval_alpha_copula: unknown family");
}

AlphaGrid make_alpha(AlphaFamily family, const AlphaParams& params, int m, int n) {
  check_params(family, params, n);
  AlphaGrid grid(n, m);
  std::vector<int> nu(n, 0);
  std::vector<double> u(n);
  std::size_t flat = 0;
  do {
    for (int i = 0; i < n; ++i) u[i] = static_cast<double>(nu[i]) / m;
    grid.values[flat++] = eval_alpha_copula(family, params, u);
  } while (AlphaGrid::next_index(nu, m + 1));
  // Enforce the exact boundary/margin values; the closed forms already
  // satisfy them up to rounding.
  do {
    bool boundary = false;
    for (int i = 0; i < n; ++i) boundary |= (nu[i] == 0);
    if (boundary) grid.at(nu) = 0.0;
  } while (AlphaGrid::next_index(nu, m + 1));
  return grid;
}

ValidationReport validate_alpha(const AlphaGrid& grid) {
  ValidationReport report;
  const int n = grid.n, m = grid.m;
  auto flag = [&](ValidationReport::Condition c, std::span<const int> idx, double v) {
    report.is_valid = false;
    report.violations.push_back({c, {idx.begin(), idx.end()}, v});
  };

  std::vector<int> nu(n, 0);
  // Boundary zeros.
  do {
    bool boundary = false;
    for (int i = 0; i < n; ++i) boundary |= (nu[i] == 0);
    if (boundary && std::abs(grid.at(nu)) > kDiffTol)
      flag(ValidationReport::Condition::boundary_zero, nu, grid.at(nu));
  } while (AlphaGrid::next_index(nu, m + 1));

  // Uniform margins: alpha(1,...,nu_i/m,...,1) = nu_i/m.
  for (int i = 0; i < n; ++i) {
    std::fill(nu.begin(), nu.end(), m);
    for (int v = 0; v <= m; ++v) {
      nu[i] = v;
      const double want = static_cast<double>(v) / m;
      if (std::abs(grid.at(nu) - want) > kDiffTol)
        flag(ValidationReport::Condition::uniform_margin, nu, grid.at(nu));
    }
  }

  // n-increasing: every alternating difference over a unit cell >= 0.
  std::fill(nu.begin(), nu.end(), 0);
  std::vector<int> corner(n);
  do {
    specfun::CompensatedSum diff;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      int ones = 0;
      for (int i = 0; i < n; ++i) {
        const int l = (mask >> i) & 1u;
        corner[i] = nu[i] + l;
        ones += l;
      }
      const double sign = ((n + ones) % 2 == 0) ? 1.0 : -1.0;
      diff.add(sign * grid.at(corner));
    }
    if (diff.value() < -kDiffTol)
      flag(ValidationReport::Condition::n_increasing, nu, diff.value());
  } while (AlphaGrid::next_index(nu, m));

  return report;
}

void write_alpha_csv(const AlphaGrid& grid, std::ostream& os) {
  os << grid.n << ',' << grid.m << '\n';
  std::vector<int> nu(grid.n, 0);
  std::size_t flat = 0;
  os.precision(17);
  do {
    for (int i = 0; i < grid.n; ++i) os << nu[i] << ',';
    os << grid.values[flat++] << '\n';
  } while (AlphaGrid::next_index(nu, grid.m + 1));
}

AlphaGrid read_alpha_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("alpha csv: empty input");
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream header(line);
  int n = 0, m = 0;
  if (!(header >> n >> m)) throw std::runtime_error("alpha csv: bad header");
  AlphaGrid grid(n, m);
  std::vector<int> nu(n);
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    for (int i = 0; i < n; ++i)
      if (!(row >> nu[i]) || nu[i] < 0 || nu[i] > m)
        throw std::runtime_error("alpha csv: bad index row");
    double value;
    if (!(row >> value)) throw std::runtime_error("alpha csv: missing value");
    grid.at(nu) = value;
    ++rows;
  }
  if (rows != grid.size()) throw std::runtime_error("alpha csv: wrong row count");
  return grid;
}

}  // namespace mbc
