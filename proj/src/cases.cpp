#include "nhslice/cases.hpp"

#include <cmath>
#include <numbers>

namespace nhs {

namespace {

// Fills dpids from the hybrid levels and Theta, phi from a potential
// temperature per (column, level) so that p = avg_i2m(pi) at midpoints.
template <class ThetaFn>
PrognosticState balanced_state(const Model& m, double ps, ThetaFn&& theta_of) {
  const auto& c = m.constants();
  const int n = m.n();
  const auto ds = m.vgrid().ds_mid();
  const auto pi = pi_interfaces(m.hybrid(), ps);
  PrognosticState s = m.make_state();
  for (int col = 0; col < m.ncol(); ++col) {
    s.phi(col, n) = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      const double dpids = (pi[k + 1] - pi[k]) / ds[k];
      const double p = 0.5 * (pi[k] + pi[k + 1]);
      const double Pi = std::pow(p / c.p0, c.kappa());
      const double Theta = dpids * theta_of(col, k, Pi);
      s.dpids(col, k) = dpids;
      s.Theta(col, k) = Theta;
      const double dphids = -c.R * Theta * Pi / p;
      s.phi(col, k) = s.phi(col, k + 1) - dphids * ds[k];
    }
  }
  return s;
}

}  // namespace

PrognosticState init_hydrostatic_rest(const Model& m, double T0, double ps) {
  return balanced_state(m, ps, [T0](int, int, double Pi) { return T0 / Pi; });
}

PrognosticState init_gravity_wave(const Model& m, double T0, double ps, double amplitude,
                                  double half_width, double mean_wind) {
  const auto& hg = m.hgrid();
  const auto x = hg.x();
  const double xc = 0.5 * hg.length();
  std::vector<double> shape(m.ncol());
  for (int j = 0; j < m.ncol(); ++j) {
    const double r = (x[j] - xc) / half_width;
    shape[j] = 1.0 / (1.0 + r * r);
  }
  const double mean = hops::hint(hg, shape) / hg.length();
  for (double& v : shape) v -= mean;

  const auto& vg = m.vgrid();
  const auto s_mid = vg.s_mid();
  std::vector<double> vert(m.n());
  for (int k = 0; k < m.n(); ++k)
    vert[k] = std::sin(std::numbers::pi * (s_mid[k] - vg.s_top()) / vg.length());

  PrognosticState s = balanced_state(m, ps, [&](int col, int k, double Pi) {
    return T0 / Pi + amplitude * vert[k] * shape[col];
  });
  s.u.fill(mean_wind);
  return s;
}

PrognosticState initial_state(const Model& m, const RunConfig& c) {
  if (c.test_case == "rest") {
    PrognosticState s = init_hydrostatic_rest(m, c.T0, c.p0);
    return s;
  }
  if (c.test_case == "gravity_wave")
    return init_gravity_wave(m, c.T0, c.p0, c.amplitude, c.half_width, c.mean_wind);
  throw ConfigError("unknown test case '" + c.test_case + "'");
}

}  // namespace nhs
