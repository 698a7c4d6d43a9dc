#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhslice/config.hpp"
#include "nhslice/energy.hpp"
#include "nhslice/model.hpp"
#include "nhslice/remap.hpp"
#include "nhslice/timeint.hpp"

namespace nhs {

Model make_model(const RunConfig& c, bool with_dissipation);

struct IntegrationOptions {
  double dt = 0.0;
  int steps = 0;
  double t0 = 0.0;
  int diag_interval = 1;
  int remap_interval = 3;  ///< used in Lagrangian mode
  RemapOptions remap;
  NewtonOptions newton;
  /// Check S1 = -T1, S2 = T2, S3 = T3 on every step rather than only on
  /// recorded rows.
  bool audit_every_step = false;
};

struct IntegrationResult {
  std::vector<EnergyBudget> budget;  ///< rows at t0 and every diag_interval steps
  PrognosticState final_state;
  double final_time = 0.0;
  int steps_taken = 0;
  Energies first;
  Energies last;
  /// Largest per-step relative change of global mass and Theta.
  double max_mass_change = 0.0;
  double max_theta_change = 0.0;
  double max_transfer_error = 0.0;
  int max_newton_iterations = 0;
  double max_abs_R_P = 0.0;
  double max_abs_R_I = 0.0;
  double max_abs_R_K = 0.0;
  /// Roundoff level of R_K, from the magnitudes entering it.
  double R_K_floor = 0.0;
  double total_dE_remap = 0.0;
  bool failed = false;
  std::string failure;
  int failed_step = -1;
  int failed_column = -1;
};

/// Steps `s` forward, recording budgets. Stops (failed = true) on a solver
/// or state error instead of throwing.
IntegrationResult integrate(const Model& m, const PrognosticState& s, const ImexTableau& t,
                            const IntegrationOptions& opt, std::ostream* budget_csv = nullptr);

struct RunResult {
  IntegrationResult spinup;
  IntegrationResult audit;
  std::string output_dir;
};

/// Initial state, optional spin-up with dissipation, then the audit window
/// with nu = 0. Writes budget.csv, final.snapshot and manifest.json when
/// output_dir is non-empty.
RunResult run(const RunConfig& c);

struct SweepRow {
  double dt = 0.0;
  double dE_rel = 0.0;
  double max_R_P = 0.0;
  double max_R_I = 0.0;
  double max_R_K = 0.0;
  double R_K_floor = 0.0;
  int max_newton_iterations = 0;
  double max_mass_change = 0.0;
  double max_theta_change = 0.0;
  double max_transfer_error = 0.0;
  bool stable = true;
  std::string note;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Least-squares slopes of log|quantity| against log dt over stable rows.
  double order_dE = 0.0;
  double order_R_P = 0.0;
  double order_R_I = 0.0;
  double order_R_K = 0.0;
};

/// Spins up once with c.dt, then runs the audit window from that snapshot
/// for each dt.
SweepResult convergence_sweep(const RunConfig& c, const std::vector<double>& dts);
void write_sweep(std::ostream& os, const SweepResult& r);

/// Slope of the least-squares line through (log x, log y).
double fit_order(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nhs
