#include "nhslice/timeint.hpp"

#include "nhslice/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nhs {

// ---- tableaus ----------------------------------------------------------------

void ImexTableau::check_shape() const {
  const auto S = static_cast<std::size_t>(stages);
  if (stages < 1) throw ContractError("tableau '" + name + "': needs at least one stage");
  auto square = [&](const std::vector<std::vector<double>>& A, const char* what) {
    if (A.size() != S) throw ContractError("tableau '" + name + "': " + what + " has wrong row count");
    for (const auto& row : A)
      if (row.size() != S) throw ContractError("tableau '" + name + "': " + what + " is not square");
  };
  square(A_exp, "A_exp");
  square(A_imp, "A_imp");
  for (const auto* v : {&b_exp, &b_imp, &c_exp, &c_imp})
    if (v->size() != S) throw ContractError("tableau '" + name + "': weight vector has wrong length");
  for (std::size_t k = 0; k < S; ++k) {
    for (std::size_t j = k; j < S; ++j)
      if (A_exp[k][j] != 0.0) throw ContractError("tableau '" + name + "': A_exp not strictly lower triangular");
    for (std::size_t j = k + 1; j < S; ++j)
      if (A_imp[k][j] != 0.0) throw ContractError("tableau '" + name + "': A_imp not lower triangular");
  }
}

TableauOrderReport validate_tableau(const ImexTableau& t, double tol) {
  t.check_shape();
  const int S = t.stages;
  const std::vector<std::vector<double>>* A[2] = {&t.A_exp, &t.A_imp};
  const std::vector<double>* b[2] = {&t.b_exp, &t.b_imp};
  std::vector<double> c[2];
  TableauOrderReport rep;
  for (int p = 0; p < 2; ++p) {
    c[p].assign(S, 0.0);
    for (int k = 0; k < S; ++k)
      for (int j = 0; j < S; ++j) c[p][k] += (*A[p])[k][j];
    const auto& given = p == 0 ? t.c_exp : t.c_imp;
    for (int k = 0; k < S; ++k)
      if (std::abs(given[k] - c[p][k]) > tol) rep.abscissae_consistent = false;
  }
  auto dot = [S](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (int k = 0; k < S; ++k) s += x[k] * y[k];
    return s;
  };
  auto matvec = [S](const std::vector<std::vector<double>>& M, const std::vector<double>& x) {
    std::vector<double> y(S, 0.0);
    for (int k = 0; k < S; ++k)
      for (int j = 0; j < S; ++j) y[k] += M[k][j] * x[j];
    return y;
  };

  // viol[order][mask]: mask 0 = explicit only, 1 = implicit only, 2 = any coupling.
  double viol[4][3] = {};
  auto note = [&](int order, bool all_e, bool all_i, double v) {
    const int slot = all_e ? 0 : all_i ? 1 : 2;
    viol[order][slot] = std::max(viol[order][slot], std::abs(v));
  };
  const std::vector<double> ones(S, 1.0);
  for (int s = 0; s < 2; ++s) {
    note(1, s == 0, s == 1, dot(*b[s], ones) - 1.0);
    for (int v = 0; v < 2; ++v) {
      note(2, s == 0 && v == 0, s == 1 && v == 1, dot(*b[s], c[v]) - 0.5);
      for (int u = 0; u < 2; ++u) {
        std::vector<double> cc(S);
        for (int k = 0; k < S; ++k) cc[k] = c[v][k] * c[u][k];
        const bool e = s == 0 && v == 0 && u == 0, i = s == 1 && v == 1 && u == 1;
        note(3, e, i, dot(*b[s], cc) - 1.0 / 3.0);
        note(3, e, i, dot(*b[s], matvec(*A[v], c[u])) - 1.0 / 6.0);
      }
    }
  }
  auto order_of = [&](auto&& worst) {
    int order = 0;
    for (int p = 1; p <= 3 && worst(p) <= tol; ++p) order = p;
    return order;
  };
  rep.explicit_order = order_of([&](int p) { return viol[p][0]; });
  rep.implicit_order = order_of([&](int p) { return viol[p][1]; });
  rep.coupled_order =
      order_of([&](int p) { return std::max({viol[p][0], viol[p][1], viol[p][2]}); });
  for (int p = 1; p <= 3; ++p) rep.violation[p] = std::max({viol[p][0], viol[p][1], viol[p][2]});
  return rep;
}

namespace {

ImexTableau make_tableau(std::string name, std::vector<std::vector<double>> Ae,
                         std::vector<std::vector<double>> Ai, std::vector<double> be,
                         std::vector<double> bi) {
  ImexTableau t;
  t.name = std::move(name);
  t.stages = static_cast<int>(Ae.size());
  t.A_exp = std::move(Ae);
  t.A_imp = std::move(Ai);
  t.b_exp = std::move(be);
  t.b_imp = std::move(bi);
  for (const auto* A : {&t.A_exp, &t.A_imp}) {
    auto& c = A == &t.A_exp ? t.c_exp : t.c_imp;
    c.assign(t.stages, 0.0);
    for (int k = 0; k < t.stages; ++k)
      for (double a : (*A)[k]) c[k] += a;
  }
  return t;
}

}  // namespace

ImexTableau imex_euler_tableau() { return make_tableau("imex-euler", {{0.0}}, {{1.0}}, {1.0}, {1.0}); }

ImexTableau ars222_tableau() {
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  const double d = 1.0 - 1.0 / (2.0 * g);
  return make_tableau("ars222", {{0, 0, 0}, {g, 0, 0}, {d, 1 - d, 0}},
                      {{0, 0, 0}, {0, g, 0}, {0, 1 - g, g}}, {d, 1 - d, 0}, {0, 1 - g, g});
}

ImexTableau ars232_tableau() {
  const double g = 1.0 - 1.0 / std::sqrt(2.0);
  const double d = -2.0 * std::sqrt(2.0) / 3.0;
  return make_tableau("ars232", {{0, 0, 0}, {g, 0, 0}, {d, 1 - d, 0}},
                      {{0, 0, 0}, {0, g, 0}, {0, 1 - g, g}}, {0, 1 - g, g}, {0, 1 - g, g});
}

ImexTableau ssprk3_tableau() {
  std::vector<std::vector<double>> A = {{0, 0, 0}, {1, 0, 0}, {0.25, 0.25, 0}};
  std::vector<double> b = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
  return make_tableau("ssprk3", A, A, b, b);
}

std::vector<std::string> builtin_tableau_names() { return {"imex-euler", "ars222", "ars232", "ssprk3"}; }

ImexTableau builtin_tableau(const std::string& name) {
  if (name == "imex-euler") return imex_euler_tableau();
  if (name == "ars222") return ars222_tableau();
  if (name == "ars232") return ars232_tableau();
  if (name == "ssprk3") return ssprk3_tableau();
  throw ConfigError("unknown tableau '" + name + "'");
}

void write_tableau(std::ostream& os, const ImexTableau& t) {
  t.check_shape();
  std::ostringstream body;
  body << std::setprecision(17);
  body << "# IMEX tableau " << t.name << "\n";
  body << "stages " << t.stages << "\n";
  auto matrix = [&](const char* tag, const std::vector<std::vector<double>>& A) {
    body << tag << "\n";
    for (const auto& row : A) {
      for (std::size_t j = 0; j < row.size(); ++j) body << (j ? " " : "") << row[j];
      body << "\n";
    }
  };
  auto vec = [&](const char* tag, const std::vector<double>& v) {
    body << tag;
    for (double x : v) body << " " << x;
    body << "\n";
  };
  matrix("A_exp", t.A_exp);
  matrix("A_imp", t.A_imp);
  vec("b_exp", t.b_exp);
  vec("b_imp", t.b_imp);
  vec("c_exp", t.c_exp);
  vec("c_imp", t.c_imp);
  const std::string text = body.str();
  os << text << "checksum " << hex64(fnv1a64(text)) << "\n";
}

ImexTableau read_tableau(std::istream& is, const std::string& name) {
  std::string text, line, checksum;
  bool have_checksum = false;
  while (std::getline(is, line)) {
    if (line.rfind("checksum", 0) == 0) {
      std::istringstream ls(line);
      std::string tag;
      ls >> tag >> checksum;
      have_checksum = true;
      break;
    }
    text += line + "\n";
  }
  if (!have_checksum) throw ConfigError("tableau '" + name + "': missing checksum line");
  if (checksum != hex64(fnv1a64(text)))
    throw ConfigError("tableau '" + name + "': checksum mismatch (file edited or truncated)");

  std::istringstream body;
  {
    std::string stripped;
    std::istringstream ts(text);
    while (std::getline(ts, line))
      if (line.empty() || line[0] != '#') stripped += line + "\n";
    body.str(stripped);
  }
  ImexTableau t;
  t.name = name;
  auto expect = [&](const std::string& tag) {
    std::string got;
    if (!(body >> got) || got != tag)
      throw ConfigError("tableau '" + name + "': expected '" + tag + "', got '" + got + "'");
  };
  auto number = [&]() {
    double x;
    if (!(body >> x)) throw ConfigError("tableau '" + name + "': malformed number");
    return x;
  };
  expect("stages");
  t.stages = static_cast<int>(number());
  if (t.stages < 1 || t.stages > 64) throw ConfigError("tableau '" + name + "': bad stage count");
  const auto S = static_cast<std::size_t>(t.stages);
  auto matrix = [&](const std::string& tag, std::vector<std::vector<double>>& A) {
    expect(tag);
    A.assign(S, std::vector<double>(S));
    for (auto& row : A)
      for (double& x : row) x = number();
  };
  auto vec = [&](const std::string& tag, std::vector<double>& v) {
    expect(tag);
    v.assign(S, 0.0);
    for (double& x : v) x = number();
  };
  matrix("A_exp", t.A_exp);
  matrix("A_imp", t.A_imp);
  vec("b_exp", t.b_exp);
  vec("b_imp", t.b_imp);
  vec("c_exp", t.c_exp);
  vec("c_imp", t.c_imp);
  t.check_shape();
  return t;
}

ImexTableau load_tableau(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tableau file '" + path + "'");
  return read_tableau(in, path);
}

ImexTableau resolve_tableau(const std::string& id) {
  const auto names = builtin_tableau_names();
  if (std::find(names.begin(), names.end(), id) != names.end()) return builtin_tableau(id);
  return load_tableau(id);
}

// ---- column solver -----------------------------------------------------------

void ColumnSolveReport::reset(int ncol) {
  iterations.assign(ncol, 0);
  residual.assign(ncol, 0.0);
  converged = true;
  worst_column = -1;
}

int ColumnSolveReport::max_iterations() const {
  return iterations.empty() ? 0 : *std::max_element(iterations.begin(), iterations.end());
}

void ColumnSolveReport::record(int col, int iters, double res, bool ok) {
  iterations[col] = std::max(iterations[col], iters);
  residual[col] = std::max(residual[col], res);
  if (!ok) converged = false;
  if (worst_column < 0 || residual[col] > residual[worst_column]) worst_column = col;
}

namespace {

void trial_phi(double gamma, double grav, std::span<const double> phi_star,
               std::span<const double> w, std::span<double> phi) {
  const std::size_t n = phi_star.size() - 1;
  for (std::size_t k = 0; k < n; ++k) phi[k] = phi_star[k] + gamma * grav * w[k];
  phi[n] = phi_star[n];
}

bool monotone(std::span<const double> phi) {
  for (std::size_t k = 0; k + 1 < phi.size(); ++k)
    if (!(phi[k] > phi[k + 1])) return false;
  return true;
}

double scaled_norm(std::span<const double> G, double scale) {
  double r = 0.0;
  for (double x : G) r = std::max(r, std::abs(x));
  return r / scale;
}

}  // namespace

void column_residual(const Model& m, std::span<const double> Theta, std::span<const double> dpids,
                     std::span<const double> w_star, std::span<const double> phi_star, double gamma,
                     std::span<const double> w, std::span<double> G) {
  const int n = m.n();
  const double grav = m.constants().g;
  std::vector<double> phi(n + 1), mu(n + 1);
  trial_phi(gamma, grav, phi_star, w, phi);
  m.column_mu(Theta, dpids, phi, mu);
  for (int k = 0; k < n; ++k) G[k] = w[k] - w_star[k] - gamma * grav * (mu[k] - 1.0);
}

void column_jacobian(const Model& m, std::span<const double> Theta, std::span<const double> dpids,
                     std::span<const double> phi_star, double gamma, std::span<const double> w,
                     std::span<double> lower, std::span<double> diag, std::span<double> upper) {
  const int n = m.n();
  const auto& c = m.constants();
  const auto ds = m.vgrid().ds_mid();
  const auto dsi = m.vgrid().ds_int();
  std::vector<double> phi(n + 1), a(n);
  trial_phi(gamma, c.g, phi_star, w, phi);
  const double ratio = c.cp / c.cv();
  for (int k = 0; k < n; ++k) {
    // a_k = dp_k / dphi_{k+1} = -dp_k / dphi_k
    const double D = (phi[k + 1] - phi[k]) / ds[k];
    const double p = eos_pressure(c, Theta[k], D);
    a[k] = -ratio * p / (D * ds[k]);
  }
  const double gg = gamma * gamma * c.g * c.g;
  for (int k = 0; k < n; ++k) {
    const double denom =
        k == 0 ? 0.5 * ds[0] * dpids[0]
               : dsi[k] * (dpids[k] * ds[k] + dpids[k - 1] * ds[k - 1]) / (2.0 * dsi[k]);
    const double a_below = k > 0 ? a[k - 1] : 0.0;
    diag[k] = 1.0 + gg * (a[k] + a_below) / denom;
    lower[k] = k > 0 ? -gg * a_below / denom : 0.0;
    upper[k] = k < n - 1 ? -gg * a[k] / denom : 0.0;
  }
}

ColumnSolveResult newton_column_solve(const Model& m, std::span<const double> Theta,
                                      std::span<const double> dpids,
                                      std::span<const double> w_star,
                                      std::span<const double> phi_star, double gamma,
                                      std::span<double> w, std::span<double> phi,
                                      const NewtonOptions& opt) {
  const int n = m.n();
  const double grav = m.constants().g;
  double wmax = 1.0;
  for (int k = 0; k <= n; ++k) wmax = std::max(wmax, std::abs(w_star[k]));
  const double scale = wmax + gamma * grav;

  std::copy(w_star.begin(), w_star.end(), w.begin());
  trial_phi(gamma, grav, phi_star, w, phi);
  std::vector<double> G(n), lo(n), di(n), up(n), cp(n), dx(n), wtry(n + 1), phitry(n + 1);

  ColumnSolveResult res;
  column_residual(m, Theta, dpids, w_star, phi_star, gamma, w, G);
  res.residual = scaled_norm(G, scale);
  res.history.push_back(res.residual);
  while (res.residual > opt.tolerance) {
    if (res.iterations >= opt.max_iterations) return res;
    column_jacobian(m, Theta, dpids, phi_star, gamma, w, lo, di, up);
    // Tridiagonal elimination; the matrix is diagonally dominant.
    cp[0] = up[0] / di[0];
    dx[0] = G[0] / di[0];
    for (int k = 1; k < n; ++k) {
      const double piv = di[k] - lo[k] * cp[k - 1];
      cp[k] = up[k] / piv;
      dx[k] = (G[k] - lo[k] * dx[k - 1]) / piv;
    }
    for (int k = n - 2; k >= 0; --k) dx[k] -= cp[k] * dx[k + 1];

    double lambda = 1.0;
    bool ok = false;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      for (int k = 0; k < n; ++k) wtry[k] = w[k] - lambda * dx[k];
      wtry[n] = w_star[n];
      trial_phi(gamma, grav, phi_star, wtry, phitry);
      if (monotone(phitry)) {
        ok = true;
        break;
      }
    }
    if (!ok) return res;
    std::copy(wtry.begin(), wtry.end(), w.begin());
    std::copy(phitry.begin(), phitry.end(), phi.begin());
    ++res.iterations;
    column_residual(m, Theta, dpids, w_star, phi_star, gamma, w, G);
    res.residual = scaled_norm(G, scale);
    res.history.push_back(res.residual);
  }
  res.converged = true;
  return res;
}

// ---- model adapter -----------------------------------------------------------

void ModelSystem::split(const State& y, State& fe, State& fi) const {
  auto parts = m_.hevi_split(y);
  fe = std::move(parts.first);
  fi = std::move(parts.second);
}

void ModelSystem::solve_implicit(const State& rhs, double gamma, State& y,
                                 ColumnSolveReport& rep) const {
  y = rhs;
  if (!m_.config().implicit_acoustics) return;
  for (int c = 0; c < m_.ncol(); ++c) {
    const auto r = newton_column_solve(m_, rhs.Theta.column(c), rhs.dpids.column(c),
                                       rhs.w.column(c), rhs.phi.column(c), gamma, y.w.column(c),
                                       y.phi.column(c), opt_);
    rep.record(c, r.iterations, r.residual, r.converged);
  }
  if (!rep.converged) {
    std::ostringstream msg;
    msg << "implicit column solve did not converge; worst column " << rep.worst_column
        << " (scaled residual " << rep.residual[rep.worst_column] << ")";
    throw SolverError(msg.str(), rep.worst_column);
  }
}

PrognosticState ark_step(const Model& m, const PrognosticState& y0, double dt,
                         const ImexTableau& t, ColumnSolveReport& report, const NewtonOptions& opt) {
  ModelSystem sys(m, opt);
  return ark_step(sys, y0, dt, t, report);
}

PrognosticState explicit_rk_step(const Model& m, const PrognosticState& y0, double dt) {
  ModelSystem sys(m);
  return explicit_rk_step(sys, y0, dt);
}

}  // namespace nhs
