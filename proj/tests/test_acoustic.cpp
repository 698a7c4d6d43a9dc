#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "support.hpp"

using namespace nhs;
using namespace nhs::test;

namespace {

// Lowest roots of tan(m L) = -2 m: vertical acoustic modes of an
// isothermal layer in log-pressure x = ln(pi), rigid bottom, constant
// pressure top. w = exp(-x/2) sin(m (x - x_s)),
// omega^2 = (g^2 gamma / (R T)) (m^2 + 1/4).
std::vector<double> analytic_modes(double L, int count) {
  std::vector<double> roots;
  auto f = [L](double m) { return m * std::cos(m * L) + 0.5 * std::sin(m * L); };
  double a = 1e-6;
  const double step = 1e-3;
  while (static_cast<int>(roots.size()) < count) {
    const double b = a + step;
    if (f(a) * f(b) < 0) {
      double lo = a, hi = b;
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    a = b;
  }
  return roots;
}

}  // namespace

TEST_CASE("implicit operator reproduces the vertical acoustic modes") {
  const Model m = small_model(VerticalMode::eulerian, 2, 80);
  const double T0 = 250.0;
  const auto rest = init_hydrostatic_rest(m, T0, 1e5);
  const int n = m.n();
  const int N = 2 * n;  // w_0..w_{n-1}, phi_0..phi_{n-1}

  // Linearize the implicit tendency of column 0 by central differences.
  Eigen::MatrixXd J(N, N);
  const double hw = 1e-4, hphi = 1e-3;
  for (int j = 0; j < N; ++j) {
    auto sp = rest, sm = rest;
    const double h = j < n ? hw : hphi;
    if (j < n) {
      sp.w(0, j) += h;
      sm.w(0, j) -= h;
    } else {
      sp.phi(0, j - n) += h;
      sm.phi(0, j - n) -= h;
    }
    const auto tp = m.implicit_tendency(sp), tm = m.implicit_tendency(sm);
    for (int i = 0; i < n; ++i) {
      J(i, j) = (tp.w(0, i) - tm.w(0, i)) / (2 * h);
      J(n + i, j) = (tp.phi(0, i) - tm.phi(0, i)) / (2 * h);
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  std::vector<double> freq;
  double max_real = 0.0, max_imag = 0.0;
  for (const auto& ev : es.eigenvalues()) {
    max_real = std::max(max_real, std::abs(ev.real()));
    max_imag = std::max(max_imag, std::abs(ev.imag()));
    if (ev.imag() > 0) freq.push_back(ev.imag());
  }
  std::sort(freq.begin(), freq.end());
  // neutral oscillations: no growth or decay beyond FD noise
  CHECK(max_real < 1e-5 * max_imag);

  const auto& c = m.constants();
  const double L = std::log(1e5 / m.p_top());
  const auto roots = analytic_modes(L, 3);
  const double scale = c.g * c.g * (c.cp / c.cv()) / (c.R * T0);
  REQUIRE(freq.size() >= 3);
  for (int i = 0; i < 3; ++i) {
    const double omega = std::sqrt(scale * (roots[i] * roots[i] + 0.25));
    INFO("mode " << i << " discrete " << freq[i] << " analytic " << omega);
    CHECK(std::abs(freq[i] - omega) <= 0.02 * omega);
  }
}
