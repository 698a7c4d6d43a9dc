#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nhslice/model.hpp"

namespace nhs {

/// Additive (IMEX) Runge-Kutta tableau. A_exp is strictly lower triangular,
/// A_imp lower triangular (diagonally implicit). The explicit and implicit
/// parts carry their own weights; most tableaus use b_exp == b_imp.
struct ImexTableau {
  std::string name;
  int stages = 0;
  std::vector<std::vector<double>> A_exp;
  std::vector<std::vector<double>> A_imp;
  std::vector<double> b_exp;
  std::vector<double> b_imp;
  std::vector<double> c_exp;
  std::vector<double> c_imp;

  /// Throws ContractError on inconsistent dimensions or a non-triangular
  /// stage matrix.
  void check_shape() const;
};

struct TableauOrderReport {
  int explicit_order = 0;
  int implicit_order = 0;
  /// Order of the combined method, coupling conditions included.
  int coupled_order = 0;
  /// Largest violation among the conditions of each order (index 1..3).
  double violation[4] = {0, 0, 0, 0};
  /// Given abscissae agree with the row sums of the stage matrices.
  bool abscissae_consistent = true;
};

TableauOrderReport validate_tableau(const ImexTableau& t, double tol = 1e-12);

ImexTableau imex_euler_tableau();
/// ARS(2,2,2): gamma = 1 - 1/sqrt(2), delta = 1 - 1/(2 gamma).
ImexTableau ars222_tableau();
/// ARS(2,3,2): same implicit part, shared weights, delta = -2 sqrt(2)/3.
ImexTableau ars232_tableau();
/// Three-stage SSP Runge-Kutta written as an IMEX tableau with a zero
/// implicit part.
ImexTableau ssprk3_tableau();
/// Built-in by name: imex-euler, ars222, ars232, ssprk3.
ImexTableau builtin_tableau(const std::string& name);
std::vector<std::string> builtin_tableau_names();

// Tableau file: '#' comments, then
//   stages S
//   A_exp            (followed by S rows of S numbers)
//   A_imp            (S rows)
//   b_exp  <S numbers>
//   b_imp  <S numbers>
//   c_exp  <S numbers>
//   c_imp  <S numbers>
//   checksum <16 hex digits>
// The checksum is FNV-1a 64 over every byte before the checksum line.
void write_tableau(std::ostream& os, const ImexTableau& t);
ImexTableau read_tableau(std::istream& is, const std::string& name = "file");
ImexTableau load_tableau(const std::string& path);
/// Built-in name or, failing that, a tableau file path.
ImexTableau resolve_tableau(const std::string& id);

struct ColumnSolveReport {
  std::vector<int> iterations;     ///< per column, worst over the stages of a step
  std::vector<double> residual;    ///< per column, final scaled residual (worst stage)
  bool converged = true;
  int worst_column = -1;

  void reset(int ncol);
  int max_iterations() const;
  /// Folds one column result in (max over repeated solves).
  void record(int col, int iters, double res, bool ok);
};

struct NewtonOptions {
  double tolerance = 1e-11;
  int max_iterations = 10;
  int max_halvings = 20;
};

/// Column residual of the implicit acoustic system at interfaces 0..n-1,
///   G_k = w_k - w*_k - gamma g (mu_k(phi) - 1),  phi = phi* + gamma g w,
/// with w_n and phi_n held at their starred values.
void column_residual(const Model& m, std::span<const double> Theta, std::span<const double> dpids,
                     std::span<const double> w_star, std::span<const double> phi_star, double gamma,
                     std::span<const double> w, std::span<double> G);

/// Analytic dG/dw, tridiagonal: lower[k] = dG_k/dw_{k-1}, diag[k],
/// upper[k] = dG_k/dw_{k+1}. Each has n entries (unused corners are zero).
void column_jacobian(const Model& m, std::span<const double> Theta, std::span<const double> dpids,
                     std::span<const double> phi_star, double gamma, std::span<const double> w,
                     std::span<double> lower, std::span<double> diag, std::span<double> upper);

struct ColumnSolveResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  /// Scaled residual after each iteration, starting with the initial guess.
  std::vector<double> history;
};

/// Solves for w, phi in one column (sizes n+1; entries n are set to the
/// starred values). The initial guess is w = w*.
ColumnSolveResult newton_column_solve(const Model& m, std::span<const double> Theta,
                                      std::span<const double> dpids,
                                      std::span<const double> w_star,
                                      std::span<const double> phi_star, double gamma,
                                      std::span<double> w, std::span<double> phi,
                                      const NewtonOptions& opt = {});

/// Adapts a Model to the stepping templates below.
class ModelSystem {
 public:
  using State = PrognosticState;

  explicit ModelSystem(const Model& m, NewtonOptions opt = {}) : m_(m), opt_(opt) {}

  const Model& model() const { return m_; }
  void split(const State& y, State& fe, State& fi) const;
  State tendency(const State& y) const { return m_.tendency(y); }
  /// y = rhs + gamma * F_imp(y), column by column.
  void solve_implicit(const State& rhs, double gamma, State& y, ColumnSolveReport& rep) const;
  void start_step(ColumnSolveReport& rep) const { rep.reset(m_.ncol()); }

 private:
  const Model& m_;
  NewtonOptions opt_;
};

/// One additive Runge-Kutta step. `System` provides split(y, fe, fi),
/// solve_implicit(rhs, gamma, y, report), start_step(report); State has
/// axpy(a, x).
template <class System, class Report>
typename System::State ark_step(const System& sys, const typename System::State& y0, double dt,
                                const ImexTableau& t, Report& report) {
  using State = typename System::State;
  t.check_shape();
  if (!(dt > 0)) throw ContractError("ark_step: dt must be positive");
  const int S = t.stages;
  sys.start_step(report);
  std::vector<State> fe(S), fi(S);
  for (int k = 0; k < S; ++k) {
    State rhs = y0;
    for (int j = 0; j < k; ++j) {
      if (t.A_exp[k][j] != 0.0) rhs.axpy(dt * t.A_exp[k][j], fe[j]);
      if (t.A_imp[k][j] != 0.0) rhs.axpy(dt * t.A_imp[k][j], fi[j]);
    }
    State yk = rhs;
    if (t.A_imp[k][k] != 0.0) sys.solve_implicit(rhs, dt * t.A_imp[k][k], yk, report);
    fe[k] = yk;
    fi[k] = yk;
    sys.split(yk, fe[k], fi[k]);
  }
  State y1 = y0;
  for (int k = 0; k < S; ++k) {
    if (t.b_exp[k] != 0.0) y1.axpy(dt * t.b_exp[k], fe[k]);
    if (t.b_imp[k] != 0.0) y1.axpy(dt * t.b_imp[k], fi[k]);
  }
  return y1;
}

/// Three-stage strong-stability-preserving RK on the full tendency.
template <class System>
typename System::State explicit_rk_step(const System& sys, const typename System::State& y0,
                                        double dt) {
  using State = typename System::State;
  State y1 = y0;
  y1.axpy(dt, sys.tendency(y0));
  State a = y1;
  a.axpy(dt, sys.tendency(y1));
  // y2 = 3/4 y0 + 1/4 a
  State y2 = y0;
  y2.axpy(0.25, a);
  y2.axpy(-0.25, y0);
  State b = y2;
  b.axpy(dt, sys.tendency(y2));
  // y3 = 1/3 y0 + 2/3 b
  State y3 = y0;
  y3.axpy(2.0 / 3.0, b);
  y3.axpy(-2.0 / 3.0, y0);
  return y3;
}

PrognosticState ark_step(const Model& m, const PrognosticState& y0, double dt,
                         const ImexTableau& t, ColumnSolveReport& report,
                         const NewtonOptions& opt = {});
PrognosticState explicit_rk_step(const Model& m, const PrognosticState& y0, double dt);

}  // namespace nhs
