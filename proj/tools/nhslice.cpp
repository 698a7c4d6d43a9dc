#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>

#include "nhslice/checks.hpp"
#include "nhslice/config.hpp"
#include "nhslice/driver.hpp"
#include "nhslice/errors.hpp"

namespace {

// Every run-config key becomes a --key flag on the subcommands that take a
// configuration. Precedence: defaults, --config file, environment, flags.
struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value configuration file")->check(CLI::ExistingFile);
    for (const auto& k : nhs::config_keys())
      options[k.key] = app->add_option("--" + k.key, values[k.key], k.help);
  }

  nhs::RunConfig resolve() const {
    nhs::RunConfig c;
    if (!file.empty()) c = nhs::load_config(file, c);
    nhs::apply_environment(c);
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) nhs::set_config_value(c, key, values.at(key));
    c.validate();
    return c;
  }
};

int cmd_run(const nhs::RunConfig& c) {
  std::cout << "running " << c.test_case << " (" << nhs::to_string(c.mode) << "), output in "
            << c.output_dir << "\n";
  const auto r = nhs::run(c);
  const auto& a = r.audit;
  if (r.spinup.failed || a.failed) {
    const auto& f = r.spinup.failed ? r.spinup : a;
    std::cerr << "run failed at step " << f.failed_step << ", column " << f.failed_column << ": "
              << f.failure << "\n";
    return 2;
  }
  std::cout << std::setprecision(6) << "steps " << a.steps_taken << "  E " << a.first.E()
            << " -> " << a.last.E() << "  max|R_P| " << a.max_abs_R_P << "  max|R_I| "
            << a.max_abs_R_I << "  max|R_K| " << a.max_abs_R_K << "  newton " << a.max_newton_iterations
            << "\n";
  return 0;
}

int cmd_sweep(const nhs::RunConfig& c, const std::vector<double>& dts) {
  const auto r = nhs::convergence_sweep(c, dts);
  nhs::write_sweep(std::cout, r);
  if (!c.output_dir.empty()) {
    std::filesystem::create_directories(c.output_dir);
    std::ofstream f(std::filesystem::path(c.output_dir) / "sweep.csv");
    nhs::write_sweep(f, r);
  }
  for (const auto& row : r.rows)
    if (!row.stable) std::cerr << "dt " << row.dt << " unstable, excluded: " << row.note << "\n";
  return 0;
}

int cmd_validate(int trials, std::uint64_t seed, double tol) {
  auto checks = nhs::vertical_identity_suite(trials, seed);
  checks.push_back(nhs::horizontal_ibp_check(trials, seed + 1));
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.pass(tol);
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(40) << c.name
              << " trials " << c.trials << "  max rel err " << std::scientific
              << std::setprecision(3) << c.max_rel_error << std::defaultfloat << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonhydrostatic vertical slice model with discrete energy budgets"};
  app.require_subcommand(1);

  ConfigFlags run_flags, sweep_flags, print_flags;
  auto* run = app.add_subcommand("run", "spin up, then run the adiabatic audit window");
  run_flags.attach(run);

  auto* sweep = app.add_subcommand("sweep", "energy and residual convergence over a dt list");
  sweep_flags.attach(sweep);
  std::vector<double> dts;
  sweep->add_option("--dts", dts, "audit time steps, s")->required()->expected(2, -1);

  auto* validate = app.add_subcommand("validate-operators", "discrete identity suite");
  int trials = 1000;
  std::uint64_t seed = 12345;
  double tol = 1e-13;
  validate->add_option("--trials", trials, "random trials per identity")->capture_default_str();
  validate->add_option("--seed", seed)->capture_default_str();
  validate->add_option("--tol", tol, "relative tolerance")->capture_default_str();

  auto* print = app.add_subcommand("print-config", "print the resolved configuration");
  print_flags.attach(print);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags.resolve());
    if (*sweep) return cmd_sweep(sweep_flags.resolve(), dts);
    if (*validate) return cmd_validate(trials, seed, tol);
    if (*print) {
      nhs::print_config(std::cout, print_flags.resolve());
      return 0;
    }
  } catch (const nhs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
