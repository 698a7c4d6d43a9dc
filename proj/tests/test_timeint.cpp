#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "nhslice/timeint.hpp"
#include "support.hpp"

using namespace nhs;
using namespace nhs::test;
using doctest::Approx;

namespace {

// y' = lE y + lI y, with the lI part taken implicitly.
struct ScalarState {
  std::complex<double> y;
  void axpy(double a, const ScalarState& x) { y += a * x.y; }
};

struct ScalarSystem {
  using State = ScalarState;
  std::complex<double> lE, lI;
  void split(const State& y, State& fe, State& fi) const {
    fe.y = lE * y.y;
    fi.y = lI * y.y;
  }
  void solve_implicit(const State& rhs, double gamma, State& y, int&) const {
    y.y = rhs.y / (1.0 - gamma * lI);
  }
  State tendency(const State& y) const { return {(lE + lI) * y.y}; }
  void start_step(int&) const {}
};

// Stability function of an additive tableau by forward substitution of
// Y = 1 + zE A_exp Y + zI A_imp Y.
std::complex<double> stability(const ImexTableau& t, std::complex<double> zE, std::complex<double> zI) {
  std::vector<std::complex<double>> Y(t.stages);
  for (int i = 0; i < t.stages; ++i) {
    std::complex<double> acc = 1.0;
    for (int j = 0; j < i; ++j) acc += (zE * t.A_exp[i][j] + zI * t.A_imp[i][j]) * Y[j];
    Y[i] = acc / (1.0 - zI * t.A_imp[i][i]);
  }
  std::complex<double> R = 1.0;
  for (int i = 0; i < t.stages; ++i) R += (zE * t.b_exp[i] + zI * t.b_imp[i]) * Y[i];
  return R;
}

}  // namespace

TEST_CASE("built-in tableau orders") {
  const auto euler = validate_tableau(imex_euler_tableau());
  CHECK(euler.explicit_order == 1);
  CHECK(euler.implicit_order == 1);
  CHECK(euler.coupled_order == 1);

  for (const char* name : {"ars222", "ars232"}) {
    INFO(name);
    const auto t = builtin_tableau(name);
    const auto r = validate_tableau(t);
    CHECK(r.coupled_order == 2);
    CHECK(r.explicit_order >= 2);
    CHECK(r.implicit_order >= 2);
    CHECK(r.violation[1] < 1e-14);
    CHECK(r.violation[2] < 1e-14);
    CHECK(r.abscissae_consistent);
    double sb = 0.0, bc = 0.0;
    for (int i = 0; i < t.stages; ++i) {
      sb += t.b_exp[i];
      bc += t.b_exp[i] * t.c_exp[i];
    }
    CHECK(sb == Approx(1.0));
    CHECK(bc == Approx(0.5));
  }
  CHECK(ars222_tableau().A_imp[1][1] == Approx(1.0 - 1.0 / std::sqrt(2.0)));
  CHECK(validate_tableau(ssprk3_tableau()).explicit_order == 3);
  CHECK(builtin_tableau_names().size() == 4);
  CHECK_THROWS_AS(builtin_tableau("rk4"), ConfigError);
}

TEST_CASE("perturbed coefficient is caught") {
  auto t = ars232_tableau();
  t.A_exp[2][1] += 1e-3;
  const auto r = validate_tableau(t);
  CHECK(r.coupled_order < 2);
  CHECK(r.violation[2] > 1e-4);
}

TEST_CASE("malformed tableaus") {
  auto t = ars222_tableau();
  t.A_exp[0][0] = 0.5;
  CHECK_THROWS_AS(t.check_shape(), ContractError);
  auto u = ars222_tableau();
  u.A_imp[0][1] = 0.5;
  CHECK_THROWS_AS(u.check_shape(), ContractError);
  auto v = ars222_tableau();
  v.b_imp.pop_back();
  CHECK_THROWS_AS(v.check_shape(), ContractError);
}

TEST_CASE("tableau file round trip and checksum") {
  const auto t = ars232_tableau();
  std::stringstream ss;
  write_tableau(ss, t);
  const std::string text = ss.str();
  std::istringstream in(text);
  const auto back = read_tableau(in, "x");
  CHECK(back.stages == t.stages);
  CHECK(back.A_exp == t.A_exp);
  CHECK(back.A_imp == t.A_imp);
  CHECK(back.b_exp == t.b_exp);
  CHECK(back.b_imp == t.b_imp);
  CHECK(back.c_exp == t.c_exp);

  std::string edited = text;
  const auto pos = edited.find("b_exp");
  REQUIRE(pos != std::string::npos);
  edited[edited.find_first_of("0123456789", pos)] ^= 1;  // flip one digit
  std::istringstream bad(edited);
  CHECK_THROWS_AS(read_tableau(bad, "x"), ConfigError);

  std::istringstream truncated(text.substr(0, text.find("checksum")));
  CHECK_THROWS_AS(read_tableau(truncated, "x"), ConfigError);
  CHECK_THROWS_AS(load_tableau("/nonexistent/tableau.txt"), ConfigError);
  CHECK(resolve_tableau("ars222").name == "ars222");
}

TEST_CASE("scalar test equation matches the stability function") {
  int rep = 0;
  for (const auto& name : builtin_tableau_names()) {
    INFO(name);
    const auto t = builtin_tableau(name);
    for (auto [lE, lI] : {std::pair<std::complex<double>, std::complex<double>>{{-0.3, 0.7}, {-0.1, 2.0}},
                          {{0.0, 0.4}, {0.0, -5.0}},
                          {{-1.0, 0.0}, {-3.0, 0.0}}}) {
      ScalarSystem sys{lE, name == "ssprk3" ? std::complex<double>(0.0) : lI};
      const double dt = 0.37;
      const ScalarState y1 = ark_step(sys, ScalarState{1.0}, dt, t, rep);
      const auto R = stability(t, sys.lE * dt, sys.lI * dt);
      CHECK(std::abs(y1.y - R) < 1e-14);
    }
  }
}

TEST_CASE("second-order convergence on a stiff-ish scalar problem") {
  int rep = 0;
  const auto t = ars232_tableau();
  ScalarSystem sys{{0.0, 1.0}, {0.0, 3.0}};
  double prev = 0.0;
  for (int steps : {20, 40, 80, 160}) {
    ScalarState y{1.0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) y = ark_step(sys, y, dt, t, rep);
    const double err = std::abs(y.y - std::exp(std::complex<double>(0.0, 4.0)));
    if (prev > 0) CHECK(std::log2(prev / err) == Approx(2.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("explicit SSP-RK3 is third order") {
  ScalarSystem sys{{-0.5, 2.0}, {0.0, 0.0}};
  double prev = 0.0;
  for (int steps : {20, 40, 80}) {
    ScalarState y{1.0};
    const double dt = 1.0 / steps;
    for (int i = 0; i < steps; ++i) y = explicit_rk_step(sys, y, dt);
    const double err = std::abs(y.y - std::exp(std::complex<double>(-0.5, 2.0)));
    if (prev > 0) CHECK(std::log2(prev / err) == Approx(3.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("ARK with a zero implicit part reproduces the explicit RK") {
  RunConfig c = small_config();
  ModelConfig mc = c.model_config(false);
  mc.implicit_acoustics = false;
  const Model base = make_model(c, false);
  const Model m(base.vgrid(), base.hybrid(), base.hgrid(), mc);
  std::mt19937_64 rng(3);
  const auto s = random_state(m, rng, 0.3);
  ColumnSolveReport rep;
  const auto a = ark_step(m, s, 0.5, ssprk3_tableau(), rep);
  const auto b = explicit_rk_step(m, s, 0.5);
  CHECK(max_abs_diff(a.u, b.u) <= 1e-13 * max_abs(b.u));
  CHECK(max_abs_diff(a.w, b.w) <= 1e-13 * std::max(1.0, max_abs(b.w)));
  CHECK(max_abs_diff(a.phi, b.phi) <= 1e-13 * max_abs(b.phi));
  CHECK(max_abs_diff(a.Theta, b.Theta) <= 1e-13 * max_abs(b.Theta));
  CHECK(max_abs_diff(a.dpids, b.dpids) <= 1e-13 * max_abs(b.dpids));
}

TEST_CASE("rest state is a fixed point of every stepper") {
  const Model m = small_model();
  const auto s = init_hydrostatic_rest(m, 250.0, 1e5);
  for (double dt : {1.0, 30.0, 300.0}) {
    for (const auto& name : {"imex-euler", "ars222", "ars232"}) {
      ColumnSolveReport rep;
      const auto y = ark_step(m, s, dt, builtin_tableau(name), rep);
      CHECK(rep.converged);
      CHECK(max_abs_diff(y.phi, s.phi) <= 1e-12 * max_abs(s.phi));
      CHECK(max_abs(y.w) < 1e-10);
      CHECK(max_abs_diff(y.Theta, s.Theta) <= 1e-12 * max_abs(s.Theta));
    }
  }
  CHECK_THROWS_AS(
      [&] {
        ColumnSolveReport rep;
        ark_step(m, s, 0.0, ars232_tableau(), rep);
      }(),
      ContractError);
}

TEST_CASE("Newton column solver") {
  const Model m = small_model(VerticalMode::eulerian, 4, 16);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto s = random_state(m, rng);
  const int n = m.n();
  const int col = 5;
  std::vector<double> w(n + 1), phi(n + 1);

  SUBCASE("gamma = 0 returns the starred state") {
    const auto r = newton_column_solve(m, s.Theta.column(col), s.dpids.column(col), s.w.column(col),
                                       s.phi.column(col), 0.0, w, phi);
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
    for (int k = 0; k <= n; ++k) {
      CHECK(w[k] == s.w(col, k));
      CHECK(phi[k] == s.phi(col, k));
    }
  }
  SUBCASE("analytic Jacobian matches central differences") {
    const double gamma = 20.0;
    std::vector<double> wt(n + 1), lo(n), di(n), up(n), Gp(n), Gm(n);
    for (int k = 0; k < n; ++k) wt[k] = s.w(col, k) + 0.2 * U(rng);
    wt[n] = s.w(col, n);
    column_jacobian(m, s.Theta.column(col), s.dpids.column(col), s.phi.column(col), gamma, wt, lo, di, up);
    double err = 0.0, mag = 0.0;
    for (int j = 0; j < n; ++j) {
      auto wp = wt, wm = wt;
      const double h = 1e-5;
      wp[j] += h;
      wm[j] -= h;
      column_residual(m, s.Theta.column(col), s.dpids.column(col), s.w.column(col), s.phi.column(col), gamma, wp, Gp);
      column_residual(m, s.Theta.column(col), s.dpids.column(col), s.w.column(col), s.phi.column(col), gamma, wm, Gm);
      for (int k = 0; k < n; ++k) {
        const double fd = (Gp[k] - Gm[k]) / (2 * h);
        const double an = k == j ? di[k] : k == j + 1 ? lo[k] : k == j - 1 ? up[k] : 0.0;
        err = std::max(err, std::abs(fd - an));
        mag = std::max(mag, std::abs(an));
      }
    }
    CHECK(err / mag < 1e-6);
  }
  SUBCASE("quadratic convergence") {
    std::vector<double> wstar(s.w.column(col).begin(), s.w.column(col).end());
    for (int k = 0; k < n; ++k) wstar[k] += 3.0 * U(rng);
    const auto r = newton_column_solve(m, s.Theta.column(col), s.dpids.column(col), wstar,
                                       s.phi.column(col), 15.0, w, phi, NewtonOptions{1e-12, 10, 20});
    CHECK(r.converged);
    CHECK(r.iterations <= 5);
    REQUIRE(r.history.size() >= 3);
    // e_{k+1} / e_k^2 stays bounded while the error is well above roundoff
    for (std::size_t i = 1; i + 1 < r.history.size(); ++i)
      if (r.history[i + 1] > 1e-13) CHECK(r.history[i + 1] < 10.0 * r.history[i] * r.history[i] + 1e-14);
    std::vector<double> G(n);
    column_residual(m, s.Theta.column(col), s.dpids.column(col), wstar, s.phi.column(col), 15.0, w, G);
    for (int k = 0; k < n; ++k) CHECK(std::abs(G[k]) < 1e-10);
  }
  SUBCASE("small perturbation of a rest column converges at once") {
    const auto rest = init_hydrostatic_rest(m, 250.0, 1e5);
    std::vector<double> wstar(n + 1, 0.0);
    for (int k = 0; k < n; ++k) wstar[k] = 1e-6 * std::sin(3.0 * k);
    const auto r = newton_column_solve(m, rest.Theta.column(0), rest.dpids.column(0), wstar,
                                       rest.phi.column(0), 10.0, w, phi);
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
  }
}

TEST_CASE("solver failure names a column") {
  const Model m = small_model();
  std::mt19937_64 rng(19);
  const auto s = random_state(m, rng);
  const ModelSystem sys(m, NewtonOptions{1e-11, 0, 20});
  ColumnSolveReport rep;
  auto y = s;
  try {
    sys.start_step(rep);
    sys.solve_implicit(s, 50.0, y, rep);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.column() >= 0);
    CHECK(e.column() < m.ncol());
  }
}
