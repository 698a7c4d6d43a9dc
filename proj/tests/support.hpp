#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "nhslice/cases.hpp"
#include "nhslice/config.hpp"
#include "nhslice/driver.hpp"
#include "nhslice/model.hpp"

namespace nhs::test {

inline RunConfig small_config(int ne = 4, int n = 10) {
  RunConfig c;
  c.ne = ne;
  c.n = n;
  c.output_dir = "";
  return c;
}

inline Model small_model(VerticalMode mode = VerticalMode::eulerian, int ne = 4, int n = 10,
                         double nu = 0.0) {
  RunConfig c = small_config(ne, n);
  c.mode = mode;
  c.nu = nu;
  return make_model(c, nu > 0);
}

inline double max_abs(const ColumnField& f) {
  double m = 0.0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const ColumnField& a, const ColumnField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

/// Gravity-wave base with random winds and small random changes to mass,
/// Theta and geopotential. Stays a valid state (monotone phi, positive
/// dpids) for `strength` up to about 1.
inline PrognosticState random_state(const Model& m, std::mt19937_64& rng, double strength = 1.0) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  PrognosticState s = init_gravity_wave(m, 250.0, 1e5, 3.0 * strength, m.hgrid().length() / 10,
                                        10.0 * strength);
  for (double& x : s.u.data()) x += 5.0 * strength * U(rng);
  for (double& x : s.v.data()) x += 2.0 * strength * U(rng);
  for (int c = 0; c < m.ncol(); ++c)
    for (int k = 0; k < m.n(); ++k) {
      s.w(c, k) += 0.5 * strength * U(rng);
      s.phi(c, k) *= 1.0 + 0.002 * strength * U(rng);
    }
  for (double& x : s.dpids.data()) x *= 1.0 + 0.02 * strength * U(rng);
  for (double& x : s.Theta.data()) x *= 1.0 + 0.02 * strength * U(rng);
  return s;
}

}  // namespace nhs::test
