#pragma once

#include <vector>

#include "nhslice/model.hpp"

namespace nhs {

// All integrals are (1/g)·hint(vint(...)) divided by the domain length, so
// energies come out in J/m² and rates in W/m².

struct Energies {
  double K = 0.0;
  double I = 0.0;
  double P = 0.0;
  /// The p_top·phi_top boundary piece already included in I.
  double p_hat_term = 0.0;
  double E() const { return K + I + P; }
};

struct Transfers {
  double T1 = 0.0, T2 = 0.0, T3 = 0.0;
  double S1 = 0.0, S2 = 0.0, S3 = 0.0;
  /// Same sums taken over absolute values of the summands; used as the
  /// scale for relative comparisons.
  double T1_abs = 0.0, T2_abs = 0.0, T3_abs = 0.0;
  double S1_abs = 0.0, S2_abs = 0.0, S3_abs = 0.0;
};

struct Residuals {
  double R_P = 0.0;
  double R_I = 0.0;
  double R_K = 0.0;
};

/// One row of the budget file.
struct EnergyBudget {
  double time = 0.0;
  Energies energies;
  Transfers transfers;
  Residuals residuals;
  double dE_remap = 0.0;
};

Energies compute_energies(const Model& m, const PrognosticState& s, const DiagnosticState& d);
Transfers compute_transfers(const Model& m, const PrognosticState& s, const DiagnosticState& d);

/// R_P = dP/dt - S2, R_I = dI/dt + S1 - S3, R_K = dK/dt + T1 + T2 + T3 with
/// the transfers taken at the start of the step.
Residuals compute_residuals(const Energies& e0, const Energies& e1, const Transfers& tr, double dt);
/// Centered variant: transfers averaged between the two ends of the step.
Residuals compute_residuals(const Energies& e0, const Energies& e1, const Transfers& tr0,
                            const Transfers& tr1, double dt);

/// Largest relative mismatch among S1 = -T1, S2 = T2, S3 = T3.
double transfer_identity_error(const Transfers& tr);

/// dE/dt along the direction `t`, i.e. the contraction of the discrete
/// functional derivatives of K + I + P with a tendency. Exact for the
/// discrete energies (no truncation), so it matches finite differences of
/// compute_energies.
double energy_rate(const Model& m, const PrognosticState& s, const DiagnosticState& d,
                   const Tendency& t);

/// Per-level absolute contributions summed, the scale for energy_rate.
double energy_rate_magnitude(const Model& m, const PrognosticState& s, const DiagnosticState& d,
                             const Tendency& t);

struct RelabelingResult {
  std::vector<double> residual;   ///< per column, energy rate of the vertical transport
  std::vector<double> magnitude;  ///< per column, sum of absolute term contributions
  double max_relative() const;
};

/// Energy rate produced by vertical transport with mass flux `Sdot` (ncol x
/// n+1, zero at both ends of every column), using the tendency stencils of
/// the model. With `naive_theta` the interface theta_v is avg_m2i(theta_v)
/// instead of the tilde average.
RelabelingResult relabeling_residual(const Model& m, const PrognosticState& s,
                                     const DiagnosticState& d, const ColumnField& Sdot,
                                     bool naive_theta = false);

}  // namespace nhs
