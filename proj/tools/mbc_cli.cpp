#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mbc/aggregate.hpp"
#include "mbc/alpha_grid.hpp"
#include "mbc/bernstein.hpp"
#include "mbc/config.hpp"
#include "mbc/mc.hpp"
#include "mbc/risk_measures.hpp"

namespace {

constexpr double kBoundFlagThreshold = 1e-6;

struct CliState {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  int threads = 0;  // 0 = resolve from MBC_THREADS, else 1
  bool mc_check = false;
};

int resolve_threads(const CliState& state) {
  if (state.threads > 0) return state.threads;
  if (const char* env = std::getenv("MBC_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

mbc::RunConfig load_config(const CliState& state) {
  mbc::RunConfig config;
  if (!state.config_path.empty()) {
    std::ifstream file(state.config_path);
    if (!file) throw std::runtime_error("cannot open config file: " + state.config_path);
    mbc::apply_config(mbc::parse_config_file(file), config);
  }
  mbc::apply_config(state.overrides, config);
  return config;
}

// Registers --config plus one override flag per config key on a subcommand.
void add_common_options(CLI::App* cmd, CliState& state) {
  cmd->add_option("--config", state.config_path, "Config file ([alpha]/[mixing]/[run] sections)");
  cmd->add_option("--threads", state.threads, "Worker threads (default: MBC_THREADS or 1)");
  static const struct {
    const char* flag;
    const char* key;
    const char* help;
  } keys[] = {
      {"--family", "alpha.family", "Dependence family"},
      {"--alpha-csv", "alpha.csv", "Read the lattice from a CSV file"},
      {"--delta", "alpha.delta", "FGM parameter"},
      {"--theta", "alpha.theta", "Clayton parameter"},
      {"--tau", "alpha.tau", "Piecewise-Gaussian seam"},
      {"--r1", "alpha.r1", "Piecewise-Gaussian lower-block correlation"},
      {"--r2", "alpha.r2", "Piecewise-Gaussian upper-block correlation"},
      {"--gamma", "alpha.gamma", "Product-family first Clayton parameter"},
      {"--delta2", "alpha.delta2", "Product-family second Clayton parameter"},
      {"--theta1", "alpha.theta1", "Product-family first exponent"},
      {"--theta2", "alpha.theta2", "Product-family second exponent"},
      {"--mixing", "mixing.family", "Mixing family (gamma_mixing | gamma_claims)"},
      {"--a", "mixing.a", "Mixing shape"},
      {"--b", "mixing.b", "gamma_mixing scale"},
      {"--lambda", "mixing.lambda", "gamma_claims rate"},
      {"--m", "run.m", "Comma-separated Bernstein orders"},
      {"--n", "run.n", "Dimension"},
      {"--kappa", "run.kappa", "Comma-separated levels"},
      {"--eps-tail", "run.eps_tail", "Count-truncation tolerance"},
      {"--paths", "run.paths", "Monte Carlo paths"},
      {"--seed", "run.seed", "Monte Carlo seed"},
      {"--out", "run.out", "Output file (default: stdout)"},
  };
  for (const auto& k : keys) {
    const std::string key = k.key;
    cmd->add_option_function<std::string>(
        k.flag, [&state, key](const std::string& v) { state.overrides[key] = v; }, k.help);
  }
}

mbc::AlphaGrid build_grid(const mbc::RunConfig& config, int m) {
  if (!config.alpha_csv.empty()) {
    std::ifstream file(config.alpha_csv);
    if (!file) throw std::runtime_error("cannot open alpha csv: " + config.alpha_csv);
    auto grid = mbc::read_alpha_csv(file);
    if (grid.m != m || grid.n != config.n)
      throw std::runtime_error("alpha csv dimensions do not match the requested m, n");
    return grid;
  }
  return mbc::make_alpha(mbc::alpha_family_from_string(config.alpha_family),
                         config.alpha_params, m, config.n);
}

mbc::MixingFamily build_mixing(const mbc::RunConfig& config) {
  return mbc::MixingFamily::from_config(config.mixing_family, config.mix_a, config.mix_scale);
}

std::ostream& open_output(const mbc::RunConfig& config, std::unique_ptr<std::ofstream>& holder) {
  if (config.out.empty()) return std::cout;
  holder = std::make_unique<std::ofstream>(config.out);
  if (!*holder) throw std::runtime_error("cannot open output file: " + config.out);
  return *holder;
}

const char* condition_name(mbc::ValidationReport::Condition c) {
  using Condition = mbc::ValidationReport::Condition;
  switch (c) {
    case Condition::boundary_zero: return "boundary_zero";
    case Condition::uniform_margin: return "uniform_margin";
    case Condition::n_increasing: return "n_increasing";
  }
  return "?";
}

int cmd_validate_alpha(const CliState& state) {
  const auto config = load_config(state);
  bool all_valid = true;
  for (int m : config.m_list) {
    const auto grid = build_grid(config, m);
    const auto report = mbc::validate_alpha(grid);
    if (report.is_valid) {
      std::cout << "m=" << m << ": valid\n";
      continue;
    }
    all_valid = false;
    for (const auto& v : report.violations) {
      std::cout << "m=" << m << ": " << condition_name(v.condition) << " at (";
      for (std::size_t i = 0; i < v.index.size(); ++i)
        std::cout << (i ? "," : "") << v.index[i];
      std::cout << ") value " << v.value << '\n';
    }
  }
  return all_valid ? 0 : 1;
}

void flag_if_loose(double bound, int m, double kappa) {
  if (bound > kBoundFlagThreshold)
    std::cerr << "warning: truncation bound " << bound << " exceeds " << kBoundFlagThreshold
              << " at m=" << m << ", kappa=" << kappa << '\n';
}

int cmd_var_tvar(const CliState& state) {
  const auto config = load_config(state);
  const auto mixing = build_mixing(config);
  std::unique_ptr<std::ofstream> holder;
  auto& os = open_output(config, holder);
  os << "m,kappa,var,tvar,truncation_bound";
  if (state.mc_check) os << ",mc_var,mc_var_stderr,mc_tvar,mc_tvar_stderr";
  os << '\n';
  os.precision(10);
  for (int m : config.m_list) {
    const auto gamma = mbc::gamma_coeffs(build_grid(config, m));
    const auto model = mbc::AggregateModel::build(gamma, mixing, config.eps_tail);
    const auto weights = mbc::tvar_weights(model.counts());
    for (double kappa : config.kappa_list) {
      const double v = model.var(kappa);
      const double t = mbc::tvar(model, weights, kappa);
      const double bound = model.truncation_bound(v);
      flag_if_loose(bound, m, kappa);
      os << m << ',' << kappa << ',' << v << ',' << t << ',' << bound;
      if (state.mc_check) {
        const auto batch = mbc::sample_batch(gamma, mixing, config.paths, config.seed,
                                             resolve_threads(state));
        const auto emp = mbc::empirical_measures(batch, kappa);
        os << ',' << emp.report.var << ',' << emp.var_stderr << ',' << emp.report.tvar << ','
           << emp.tvar_stderr;
      }
      os << '\n';
    }
  }
  return 0;
}

int cmd_allocate(const CliState& state) {
  const auto config = load_config(state);
  const auto mixing = build_mixing(config);
  std::unique_ptr<std::ofstream> holder;
  auto& os = open_output(config, holder);
  os << "m,kappa,var,tvar";
  for (int i = 1; i <= config.n; ++i) os << ",contrib_" << i;
  os << ",truncation_bound";
  if (state.mc_check) {
    os << ",mc_tvar,mc_tvar_stderr";
    for (int i = 1; i <= config.n; ++i) os << ",mc_contrib_" << i << ",mc_contrib_" << i << "_stderr";
  }
  os << '\n';
  os.precision(10);
  for (int m : config.m_list) {
    const auto gamma = mbc::gamma_coeffs(build_grid(config, m));
    const auto model = mbc::AggregateModel::build(gamma, mixing, config.eps_tail);
    for (double kappa : config.kappa_list) {
      const auto report = mbc::risk_report(model, gamma, kappa, config.eps_tail);
      double total = 0.0;
      for (double c : report.contributions) total += c;
      if (std::abs(total - report.tvar) > 1e-8 * std::abs(report.tvar))
        throw std::runtime_error("allocation additivity check failed");
      flag_if_loose(report.truncation_bound, m, kappa);
      os << m << ',' << kappa << ',' << report.var << ',' << report.tvar;
      for (double c : report.contributions) os << ',' << c;
      os << ',' << report.truncation_bound;
      if (state.mc_check) {
        const auto batch = mbc::sample_batch(gamma, mixing, config.paths, config.seed,
                                             resolve_threads(state));
        const auto emp = mbc::empirical_measures(batch, kappa);
        os << ',' << emp.report.tvar << ',' << emp.tvar_stderr;
        for (std::size_t i = 0; i < emp.report.contributions.size(); ++i)
          os << ',' << emp.report.contributions[i] << ',' << emp.contribution_stderr[i];
      }
      os << '\n';
    }
  }
  return 0;
}

int cmd_rho_curve(const CliState& state) {
  const auto config = load_config(state);
  std::unique_ptr<std::ofstream> holder;
  auto& os = open_output(config, holder);
  os << "m,a,rho_lower,rho_upper\n";
  os.precision(10);
  for (int m = 1; m <= 15; ++m) {
    const auto lower_beta = mbc::beta_coeffs(
        mbc::make_alpha(mbc::AlphaFamily::counter_comonotonic, {}, m, 2));
    const auto upper_beta =
        mbc::beta_coeffs(mbc::make_alpha(mbc::AlphaFamily::comonotonic, {}, m, 2));
    for (double a : {1.0, 5.0, 10.0}) {
      const auto mixing = mbc::MixingFamily::gamma_mixing(a, 100.0);
      os << m << ',' << a << ',' << mbc::spearman_rho(lower_beta, mixing) << ','
         << mbc::spearman_rho(upper_beta, mixing) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk aggregation for losses joined by a Bernstein copula over a "
               "shared mixing variable"};
  app.require_subcommand(1);

  CliState state;
  auto* validate = app.add_subcommand("validate-alpha", "Check the lattice copula conditions");
  add_common_options(validate, state);
  auto* var_tvar = app.add_subcommand("var-tvar", "VaR and TVaR of the aggregate loss");
  add_common_options(var_tvar, state);
  var_tvar->add_flag("--mc-check", state.mc_check, "Append Monte Carlo columns");
  auto* allocate = app.add_subcommand("allocate", "TVaR decomposition across risks");
  add_common_options(allocate, state);
  allocate->add_flag("--mc-check", state.mc_check, "Append Monte Carlo columns");
  auto* rho = app.add_subcommand("rho-curve", "Spearman rho bounds as a function of m");
  add_common_options(rho, state);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate_alpha(state);
    if (var_tvar->parsed()) return cmd_var_tvar(state);
    if (allocate->parsed()) return cmd_allocate(state);
    if (rho->parsed()) return cmd_rho_curve(state);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
