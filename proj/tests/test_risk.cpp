#include <stdexcept>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "mbc/mc.hpp"
#include "mbc/risk_measures.hpp"
#include "mbc/specfun.hpp"

using namespace mbc;

namespace {

AlphaParams default_params() {
  AlphaParams p;
  p.theta = 1.0;
  p.delta = 0.5;
  return p;
}

}  // namespace

TEST_CASE("tvar reference values") {
  const auto mixing = MixingFamily::gamma_mixing(5, 100);
  SUBCASE("m=1") {
    const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::comonotonic, {}, 1, 2));
    const auto model = AggregateModel::build(gamma, mixing);
    const double t = tvar(model, tvar_weights(model.counts()), 0.95);
    CHECK(t == doctest::Approx(205.30).epsilon(5e-5));
    CHECK(t >= model.var(0.95));
  }
  SUBCASE("counter-comonotonic m=50") {
    const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::counter_comonotonic, {}, 50, 2));
    const auto model = AggregateModel::build(gamma, mixing);
    CHECK(tvar(model, tvar_weights(model.counts()), 0.95) ==
          doctest::Approx(169.22).epsilon(0.005));
  }
  SUBCASE("divergent marginal mean is refused") {
    const auto heavy = MixingFamily::gamma_mixing(1.0, 100);
    const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::comonotonic, {}, 2, 2));
    const auto model = AggregateModel::build(gamma, heavy);
    CHECK_THROWS_AS(tvar(model, tvar_weights(model.counts()), 0.95), std::domain_error);
  }
}

TEST_CASE("tvar contributions") {
  const auto mixing = MixingFamily::gamma_mixing(5, 100);
  SUBCASE("m=1 splits evenly") {
    const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::comonotonic, {}, 1, 2));
    const auto model = AggregateModel::build(gamma, mixing);
    const auto report = risk_report(model, gamma, 0.95);
    CHECK(report.contributions[0] == doctest::Approx(102.65).epsilon(1e-4));
    CHECK(report.contributions[1] == doctest::Approx(102.65).epsilon(1e-4));
  }
  SUBCASE("non-exchangeable product family, m=5") {
    const auto gamma = gamma_coeffs(make_alpha(AlphaFamily::liebscher_clayton, {}, 5, 2));
    const auto model = AggregateModel::build(gamma, mixing);
    const auto report = risk_report(model, gamma, 0.95);
    CHECK(report.contributions[0] == doctest::Approx(110.99).epsilon(0.005));
    CHECK(report.contributions[1] == doctest::Approx(111.09).epsilon(0.005));
    const double total = report.contributions[0] + report.contributions[1];
    CHECK(total == doctest::Approx(report.tvar).epsilon(1e-8));
    CHECK(report.tvar >= report.var);
  }
  SUBCASE("additivity and exchangeability across families and orders") {
    for (auto fam : {AlphaFamily::independence, AlphaFamily::fgm, AlphaFamily::comonotonic}) {
      for (int m : {1, 5, 10}) {
        CAPTURE(to_string(fam));
        CAPTURE(m);
        const auto gamma = gamma_coeffs(make_alpha(fam, default_params(), m, 2));
        const auto model = AggregateModel::build(gamma, mixing);
        const auto report = risk_report(model, gamma, 0.95);
        CHECK(report.contributions[0] + report.contributions[1] ==
              doctest::Approx(report.tvar).epsilon(1e-8));
        CHECK(report.contributions[0] ==
              doctest::Approx(report.contributions[1]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("risk report csv") {
  RiskReport r;
  r.kappa = 0.95;
  r.var = 139.12;
  r.tvar = 205.3;
  r.contributions = {102.65, 102.65};
  r.truncation_bound = 1e-15;
  std::ostringstream os;
  write_risk_csv({&r, 1}, os);
  CHECK(os.str().find("kappa,var,tvar,contrib_1,contrib_2,truncation_bound") == 0);
  CHECK(os.str().find("0.95,139.12,205.3,102.65,102.65,1e-15") != std::string::npos);
}

TEST_CASE("joint survival") {
  const auto mixing = MixingFamily::gamma_mixing(5, 100);
  SUBCASE("marginal boundary") {
    AlphaParams p = default_params();
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::clayton, p, 4, 2));
    for (double x : {0.5, 20.0, 150.0}) {
      std::vector<double> edge = {x, 0.0};
      CHECK(joint_survival(beta, mixing, edge) ==
            doctest::Approx(mixing.laplace(x)).epsilon(1e-12));
      std::vector<double> other = {0.0, x};
      CHECK(joint_survival(beta, mixing, other) ==
            doctest::Approx(mixing.laplace(x)).epsilon(1e-12));
    }
  }
  SUBCASE("FGM four-term expansion") {
    AlphaParams p;
    p.delta = 0.5;
    // The order-2 lattice copula is FGM with parameter 4*alpha(1/2,1/2) - 1,
    // which is delta/4 when the sampled surface is itself FGM(delta).
    const double delta = p.delta / 4.0;
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::fgm, p, 2, 2));
    const double x1 = 30.0, x2 = 55.0;
    const double expected = (1.0 + delta) * mixing.laplace(x1 + x2) -
                            delta * mixing.laplace(x1 + 2.0 * x2) -
                            delta * mixing.laplace(2.0 * x1 + x2) +
                            delta * mixing.laplace(2.0 * x1 + 2.0 * x2);
    std::vector<double> x = {x1, x2};
    CHECK(joint_survival(beta, mixing, x) == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("quadrature over the mixing density") {
    // Hbar(x) = int C_B(e^{-theta x1}, e^{-theta x2}) f_Theta(theta) dtheta
    // with Theta ~ Gamma(a, b): an oracle that never touches the survival
    // expansion.
    AlphaParams p = default_params();
    const auto grid = make_alpha(AlphaFamily::clayton, p, 3, 2);
    const auto beta = beta_coeffs(grid);
    const double a = 5.0, b = 100.0;
    const auto& gl = specfun::gauss_legendre(64);
    const struct {
      double x1, x2;
    } points[] = {{10, 10}, {50, 20}, {5, 120}, {200, 200}, {0.5, 80}};
    for (const auto& pt : points) {
      double integral = 0.0;
      const double upper = 0.4;  // Gamma(5, 100) mass beyond 0.4 is ~1e-12
      constexpr int panels = 24;
      for (int panel = 0; panel < panels; ++panel) {
        const double lo = upper * panel / panels, hi = upper * (panel + 1) / panels;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
          const double theta = mid + half * gl.nodes[k];
          const double density =
              std::exp(a * std::log(b) + (a - 1.0) * std::log(theta) - b * theta -
                       std::lgamma(a));
          std::vector<double> u = {std::exp(-theta * pt.x1), std::exp(-theta * pt.x2)};
          integral += half * gl.weights[k] * density * eval_copula_bernstein(grid, u);
        }
      }
      std::vector<double> x = {pt.x1, pt.x2};
      CHECK(joint_survival(beta, MixingFamily::gamma_mixing(a, b), x) ==
            doctest::Approx(integral).epsilon(1e-8));
    }
  }
  SUBCASE("argument checks") {
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::independence, {}, 2, 2));
    std::vector<double> bad = {-1.0, 2.0};
    CHECK_THROWS_AS(joint_survival(beta, mixing, bad), std::invalid_argument);
    std::vector<double> wrong_dim = {1.0};
    CHECK_THROWS_AS(joint_survival(beta, mixing, wrong_dim), std::invalid_argument);
  }
}

TEST_CASE("mixed copula") {
  const auto mixing = MixingFamily::gamma_mixing(5, 100);
  SUBCASE("uniform margins and groundedness") {
    AlphaParams p = default_params();
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::clayton, p, 4, 2));
    for (double u : {0.15, 0.6, 0.97}) {
      std::vector<double> edge = {u, 1.0};
      CHECK(mixed_copula(beta, mixing, edge) == doctest::Approx(u).epsilon(1e-10));
    }
    std::vector<double> zero = {0.0, 0.5};
    CHECK(mixed_copula(beta, mixing, zero) == 0.0);
  }
  SUBCASE("m=1 is the Archimedean copula") {
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::comonotonic, {}, 1, 2));
    for (double u : {0.2, 0.8}) {
      for (double v : {0.35, 0.66}) {
        std::vector<double> uv = {u, v};
        const double expected =
            mixing.laplace(mixing.laplace_inv(u) + mixing.laplace_inv(v));
        CHECK(mixed_copula(beta, mixing, uv) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
  SUBCASE("gamma-mixing explicit form at m=2") {
    AlphaParams p;
    p.delta = 0.5;
    // Effective FGM parameter of the order-2 lattice copula (see above).
    const double d = p.delta / 4.0;
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::fgm, p, 2, 2));
    const double a = 5.0;
    const double u = 0.4, v = 0.75;
    const auto term = [&](int l1, int l2) {
      return std::pow(1.0 + l1 * (std::pow(u, -1.0 / a) - 1.0) +
                          l2 * (std::pow(v, -1.0 / a) - 1.0),
                      -a);
    };
    const double expected = (1.0 + d) * term(1, 1) - d * term(1, 2) - d * term(2, 1) +
                            d * term(2, 2);
    std::vector<double> uv = {u, v};
    CHECK(mixed_copula(beta, mixing, uv) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("spearman's rho") {
  SUBCASE("m=1, a=1 matches the known rank correlation") {
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::independence, {}, 1, 2));
    const auto mixing = MixingFamily::gamma_mixing(1, 50);
    CHECK(spearman_rho(beta, mixing) == doctest::Approx(0.4784176).epsilon(1e-3 / 0.4784176));
  }
  SUBCASE("scale invariance") {
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::comonotonic, {}, 4, 2));
    const double r1 = spearman_rho(beta, MixingFamily::gamma_mixing(3, 10));
    const double r2 = spearman_rho(beta, MixingFamily::gamma_mixing(3, 1000));
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-10));
    const auto beta1 = beta_coeffs(make_alpha(AlphaFamily::independence, {}, 2, 2));
    const double c1 = spearman_rho(beta1, MixingFamily::gamma_claims(0.5, 1));
    const double c2 = spearman_rho(beta1, MixingFamily::gamma_claims(0.5, 20));
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-10));
  }
  SUBCASE("monotone in m under the extremal families") {
    const auto mixing = MixingFamily::gamma_mixing(5, 100);
    double prev_upper = -2.0, prev_lower = 2.0;
    for (int m : {1, 2, 5, 10}) {
      const double upper =
          spearman_rho(beta_coeffs(make_alpha(AlphaFamily::comonotonic, {}, m, 2)), mixing);
      const double lower = spearman_rho(
          beta_coeffs(make_alpha(AlphaFamily::counter_comonotonic, {}, m, 2)), mixing);
      CHECK(upper > prev_upper);
      CHECK(lower < prev_lower);
      prev_upper = upper;
      prev_lower = lower;
    }
  }
  SUBCASE("independence alpha leaves rho unchanged by m") {
    const auto mixing = MixingFamily::gamma_mixing(5, 100);
    const double at_m1 =
        spearman_rho(beta_coeffs(make_alpha(AlphaFamily::independence, {}, 1, 2)), mixing);
    for (int m : {3, 7}) {
      CHECK(spearman_rho(beta_coeffs(make_alpha(AlphaFamily::independence, {}, m, 2)), mixing) ==
            doctest::Approx(at_m1).epsilon(1e-6));
    }
  }
  SUBCASE("requires two dimensions") {
    AlphaParams p = default_params();
    const auto beta = beta_coeffs(make_alpha(AlphaFamily::clayton, p, 2, 3));
    CHECK_THROWS_AS(spearman_rho(beta, MixingFamily::gamma_mixing(5, 100)),
                    std::invalid_argument);
  }
}
