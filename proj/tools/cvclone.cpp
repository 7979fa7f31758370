// cvclone: command-line front end for the telecloning / local-cloning study.
//
// Exit codes: 0 success, 2 domain error (bad arguments included),
// 3 numerical failure, 4 acceptance-suite failure.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cvclone/acceptance.hpp"
#include "cvclone/cvclone.hpp"

namespace {

using namespace cvclone;

constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct Options {
  int m = 2;
  double tau = 1.0;
  std::optional<double> tau0;
  double mu = 0.0;
  double omega = 0.0;
  std::optional<double> n;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "csv";

  // sweep
  std::string var = "tau_tot";
  double start = 0.0;
  double stop = 3.0;
  int steps = 31;
  std::string strategies = "tele,lcdt";

  std::string figure;

  std::complex<double> alpha() const { return {alpha_re, alpha_im}; }
};

void emit(const ReportTable& table, const Options& opt) {
  if (opt.out.empty()) {
    table.write_csv(std::cout);
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + opt.out + "'");
  table.write_csv(file);
}

void add_inputs(ReportTable& table, const Options& opt) {
  table.add_provenance("seed", std::to_string(opt.seed));
}

int run_compare(const Options& opt) {
  auto table = comparison_table(compare(opt.m, opt.tau, opt.mu, opt.omega));
  emit(table, opt);
  return 0;
}

int run_teleclone(const Options& opt) {
  detail::require(opt.m >= 1, "m must be at least 1");
  const double n = opt.n.value_or(1.0);
  const double tau0 = opt.tau0.value_or(opt.tau);
  detail::require(tau0 >= 0.0 && tau0 <= opt.tau, "tau0 must lie in [0, tau]");
  const TelecloningConfig config{SymmetricSum1{opt.m, n}.params(), tau0, opt.tau - tau0, opt.mu};
  const auto clones = telecloning_pipeline(config, opt.alpha());
  const bool sampled = opt.samples > 0;
  std::optional<MonteCarloResult> mc;
  if (sampled) mc = monte_carlo_protocol(config, opt.alpha(), opt.samples, opt.seed);

  std::vector<std::string> header{"m", "tau_tot", "tau0", "mu", "n", "clone", "f_closed", "f_pipeline",
                                  "cov_qq", "mean_q", "mean_p"};
  if (sampled) {
    for (const char* c : {"mc_mean_q", "mc_mean_q_se", "mc_mean_p", "mc_mean_p_se", "mc_cov_qq", "mc_cov_qq_se"}) {
      header.emplace_back(c);
    }
  }
  ReportTable table(header);
  add_standard_provenance(table, "teleclone-fidelity");
  add_inputs(table, opt);
  if (sampled) table.add_provenance("samples", std::to_string(opt.samples));
  for (int h = 1; h <= opt.m; ++h) {
    const auto& clone = clones[static_cast<std::size_t>(h - 1)];
    std::vector<ReportTable::Cell> row{static_cast<double>(opt.m), opt.tau, tau0, opt.mu, n,
                                       static_cast<double>(h), clone_fidelity_closed(config, h), clone.fidelity,
                                       clone.clone_cov(0, 0), clone.clone_mean(0), clone.clone_mean(1)};
    if (sampled) {
      const auto& e = mc->clones[static_cast<std::size_t>(h - 1)];
      for (double v : {e.mean(0), e.mean_stderr(0), e.mean(1), e.mean_stderr(1), e.cov(0, 0), e.cov_stderr(0, 0)}) {
        row.emplace_back(v);
      }
    }
    table.add_row(std::move(row));
  }
  emit(table, opt);
  return 0;
}

int run_lcdt(const Options& opt) {
  const double tau0 = opt.tau0.value_or(0.0);
  detail::require(tau0 >= 0.0 && tau0 <= opt.tau, "tau0 must lie in [0, tau]");
  const LcdtConfig config{opt.m, tau0, opt.tau - tau0, opt.mu};
  const double f = lcdt_fidelity(config, opt.alpha());
  const double averaged = averaged_fidelity(opt.m, opt.tau, opt.mu, GaussianAlphabet{opt.omega * opt.omega});

  std::vector<std::string> header{"m", "tau_tot", "tau0", "mu", "alpha_re", "alpha_im", "omega", "f_lcdt",
                                  "f_averaged", "admissibility", "tau_c_opt", "f_at_opt", "interior"};
  ReportTable table(header);
  add_standard_provenance(table, "lcdt-fidelity");
  std::vector<ReportTable::Cell> row{static_cast<double>(opt.m), opt.tau, tau0, opt.mu, opt.alpha_re, opt.alpha_im,
                                     opt.omega, f, averaged};
  if (opt.tau > 0.0) {
    const auto placed = optimize_cloner_location(opt.m, opt.tau, opt.mu, opt.alpha());
    row.emplace_back(admissibility_threshold(opt.m, opt.tau, opt.mu));
    row.emplace_back(placed.tau_c_opt);
    row.emplace_back(placed.f_at_opt);
    row.emplace_back(std::string(placed.interior ? "yes" : "no"));
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    row.emplace_back(inf);
    row.emplace_back(0.0);
    row.emplace_back(f);
    row.emplace_back(std::string("no"));
  }
  table.add_row(std::move(row));
  emit(table, opt);
  return 0;
}

int run_optimize(const Options& opt) {
  const auto closed = optimal_symmetric(opt.m, opt.tau, opt.mu);
  const auto numeric = numeric_optimal(opt.m, opt.tau, opt.mu);
  ReportTable table({"m", "tau_tot", "mu", "regime", "n_opt", "tau0_opt", "f_max", "n_opt_numeric",
                     "tau0_opt_numeric", "f_max_numeric"});
  add_standard_provenance(table, "optimize");
  table.add_row({static_cast<double>(opt.m), opt.tau, opt.mu, std::string(to_string(closed.regime)), closed.n_opt,
                 closed.tau0_opt, closed.f_max, numeric.n_opt, numeric.tau0_opt, numeric.f_max});
  emit(table, opt);
  return 0;
}

int run_thresholds(const Options& opt) {
  const auto times = useful_time_thresholds(opt.m, opt.mu);
  ReportTable table({"m", "mu", "tau_a_th", "tau_c_th", "tau_tot", "regime", "omega_a_th", "omega_c_th"});
  add_standard_provenance(table, "thresholds");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double omega_a = nan;
  double omega_c = nan;
  std::string regime = "-";
  if (opt.tau > 0.0) {
    const auto th = omega_thresholds(opt.m, opt.tau, opt.mu);
    omega_a = th.omega_a();
    omega_c = th.omega_c().value_or(nan);
    regime = to_string(classify_regime(opt.m, opt.tau, opt.mu));
  }
  table.add_row({static_cast<double>(opt.m), opt.mu, times.tau_a_th, times.tau_c_th, opt.tau, regime, omega_a, omega_c});
  emit(table, opt);
  return 0;
}

int run_sweep_command(const Options& opt) {
  SweepSpec spec;
  const auto variable = parse_sweep_variable(opt.var);
  if (!variable) throw DomainError("unknown sweep variable '" + opt.var + "' (tau_tot, mu, omega, m)");
  spec.variable = *variable;
  spec.start = opt.start;
  spec.stop = opt.stop;
  spec.steps = opt.steps;
  spec.fixed = {{"m", static_cast<double>(opt.m)}, {"tau_tot", opt.tau}, {"mu", opt.mu}, {"omega", opt.omega}};
  spec.telecloning = opt.strategies.find("tele") != std::string::npos;
  spec.lcdt = opt.strategies.find("lcdt") != std::string::npos;
  auto table = run_sweep(spec);
  table.add_provenance("sweep", opt.var + " " + format_number(opt.start) + ".." + format_number(opt.stop) + " x" +
                                    std::to_string(opt.steps));
  emit(table, opt);
  return 0;
}

int run_reproduce(const Options& opt) {
  if (opt.figure == "table1") {
    emit(reproduce_table1(), opt);
    return 0;
  }
  const auto which = parse_figure(opt.figure);
  if (!which) throw DomainError("unknown dataset '" + opt.figure + "'");
  emit(reproduce_figure(*which), opt);
  return 0;
}

int run_selftest() {
  const auto report = acceptance::run_acceptance(&std::cout);
  std::size_t passed = 0;
  for (const auto& r : report.results) passed += r.passed ? 1 : 0;
  std::cout << passed << "/" << report.results.size() << " acceptance criteria passed\n";
  return report.all_passed() ? 0 : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Telecloning versus local cloning over lossy thermal channels"};
  app.set_version_flag("--version", std::string(cvclone::kVersion));
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--m", opt.m, "number of clones")->capture_default_str();
  app.add_option("--tau", opt.tau, "total effective propagation time")->capture_default_str();
  app.add_option("--tau0", opt.tau0, "propagation time before the cloner / on the sender's mode");
  app.add_option("--mu", opt.mu, "thermal photons of the channels")->capture_default_str();
  app.add_option("--omega", opt.omega, "alphabet width Omega")->capture_default_str();
  app.add_option("--n", opt.n, "photons per receiver mode of the shared resource (default 1)");
  app.add_option("--alpha-re", opt.alpha_re, "input amplitude, real part")->capture_default_str();
  app.add_option("--alpha-im", opt.alpha_im, "input amplitude, imaginary part")->capture_default_str();
  app.add_option("--samples", opt.samples, "Monte Carlo samples (0 disables sampling)")->capture_default_str();
  app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
  app.add_option("--out", opt.out, "write output to this file instead of stdout");
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv"}))->capture_default_str();

  auto* compare_cmd = app.add_subcommand("compare", "optimized telecloning vs averaged local cloning");
  auto* tele_cmd = app.add_subcommand("teleclone-fidelity", "clone fidelities for a symmetric resource");
  auto* lcdt_cmd = app.add_subcommand("lcdt-fidelity", "local cloning + direct transmission fidelity");
  auto* optimize_cmd = app.add_subcommand("optimize", "optimal resource and source placement");
  auto* thresholds_cmd = app.add_subcommand("thresholds", "useful-time and alphabet-width thresholds");
  auto* sweep_cmd = app.add_subcommand("sweep", "one-parameter sweep of the comparison");
  sweep_cmd->add_option("--var", opt.var, "swept parameter: tau_tot, mu, omega or m")->capture_default_str();
  sweep_cmd->add_option("--start", opt.start)->capture_default_str();
  sweep_cmd->add_option("--stop", opt.stop)->capture_default_str();
  sweep_cmd->add_option("--steps", opt.steps)->capture_default_str();
  sweep_cmd->add_option("--strategies", opt.strategies, "comma list of tele, lcdt")->capture_default_str();
  auto* reproduce_cmd = app.add_subcommand("reproduce", "regenerate a tabulated dataset");
  reproduce_cmd->add_option("dataset", opt.figure, "table1, fig2a, fig2b, fig3a, fig3b, fig4a or fig4b")
      ->required()
      ->check(CLI::IsMember({"table1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b"}));
  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitDomain;
  }

  try {
    if (compare_cmd->parsed()) return run_compare(opt);
    if (tele_cmd->parsed()) return run_teleclone(opt);
    if (lcdt_cmd->parsed()) return run_lcdt(opt);
    if (optimize_cmd->parsed()) return run_optimize(opt);
    if (thresholds_cmd->parsed()) return run_thresholds(opt);
    if (sweep_cmd->parsed()) return run_sweep_command(opt);
    if (reproduce_cmd->parsed()) return run_reproduce(opt);
    if (selftest_cmd->parsed()) return run_selftest();
  } catch (const cvclone::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const cvclone::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitDomain;
}
