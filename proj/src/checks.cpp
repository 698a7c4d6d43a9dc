#include "nhslice/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nhslice/hops.hpp"
#include "nhslice/vops.hpp"

namespace nhs {

namespace {

using vops::IntField;
using vops::MidBoundary;
using vops::MidField;

// Interfaces with thicknesses drawn in [1, 5] relative units, so any two
// neighbours differ by at most a factor of 5.
LevelGrid random_grid(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> thick(1.0, 5.0);
  std::vector<double> s(n + 1, 0.0);
  for (int k = 0; k < n; ++k) s[k + 1] = s[k] + thick(rng);
  for (double& x : s) x /= s[n];
  s[n] = 1.0;
  return LevelGrid(s);
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(size);
  for (double& x : v) x = u(rng);
  return v;
}

// |a - b| / scale with a floor so exact zeros do not divide by zero.
double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

struct Tracker {
  IdentityCheck check;
  void add(double e) {
    check.max_rel_error = std::max(check.max_rel_error, e);
  }
};

}  // namespace

std::vector<IdentityCheck> vertical_identity_suite(int trials, std::uint64_t seed, int nmin,
                                                   int nmax) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(nmin, nmax);
  Tracker avg_parts{{"averaging by parts"}}, int_parts{{"integration by parts"}},
      commute{{"commuting identity"}}, prod_int{{"product rule (interface fields)"}},
      prod_mid{{"product rule (midpoint fields)"}}, sb_mid{{"SB81 midpoint form equivalence"}},
      sb_int{{"SB81 interface form equivalence"}};

  for (int t = 0; t < trials; ++t) {
    const int n = pick_n(rng);
    const LevelGrid g = random_grid(rng, n);
    const auto ds = g.ds_mid();
    const auto dsi = g.ds_int();
    const MidField p(random_values(rng, n)), q(random_values(rng, n));
    const IntField phi(random_values(rng, n + 1)), psi(random_values(rng, n + 1));
    IntField Sdot(random_values(rng, n + 1));
    Sdot[0] = Sdot[n] = 0.0;
    std::vector<double> dp_pos(n);
    std::uniform_real_distribution<double> pos(0.5, 2.0);
    for (double& x : dp_pos) x = pos(rng);
    const MidField dpids(dp_pos);
    const auto r = random_values(rng, 2);
    const MidBoundary bc{r[0], r[1]};

    // sum p avg(phi) ds = sum' phi avg(p) ds_int
    {
      const MidField a = vops::avg_i2m(g, phi);
      const IntField b = vops::avg_m2i(g, p);
      double lhs = 0, rhs = 0, scale = 0;
      for (int k = 0; k < n; ++k) {
        lhs += p[k] * a[k] * ds[k];
        scale += std::abs(p[k] * a[k] * ds[k]);
      }
      IntField prod(n + 1, 0.0);
      for (int k = 0; k <= n; ++k) prod[k] = phi[k] * b[k];
      rhs = vops::vint_int(g, prod);
      avg_parts.add(rel(lhs, rhs, scale));
    }
    // sum p ddn(phi) ds + sum' phi ddn(p) ds_int = phi_n p_surf - phi_0 p_top
    {
      const MidField a = vops::ddn_i2m(g, phi);
      const IntField b = vops::ddn_m2i(g, p, bc);
      double lhs = 0, scale = 0;
      for (int k = 0; k < n; ++k) {
        lhs += p[k] * a[k] * ds[k];
        scale += std::abs(p[k] * a[k] * ds[k]);
      }
      IntField prod(n + 1, 0.0);
      for (int k = 0; k <= n; ++k) {
        prod[k] = phi[k] * b[k];
        scale += std::abs(prod[k]) * dsi[k];
      }
      lhs += vops::vint_int(g, prod);
      const double rhs = phi[n] * bc.surf - phi[0] * bc.top;
      int_parts.add(rel(lhs, rhs, scale));
    }
    // ddn_m2i(avg_i2m(phi), end values) = avg_m2i(ddn_i2m(phi))
    {
      const IntField a = vops::ddn_m2i(g, vops::avg_i2m(g, phi), MidBoundary{phi[0], phi[n]});
      const IntField b = vops::avg_m2i(g, vops::ddn_i2m(g, phi));
      // scale: the |phi| / ds summands of the stencil, since the result itself
      // can cancel to near zero
      for (int k = 0; k <= n; ++k) {
        double scale = 0.0;
        for (int j = std::max(k - 1, 0); j <= std::min(k, n - 1); ++j)
          scale += (std::abs(phi[j]) + std::abs(phi[j + 1])) / ds[j];
        commute.add(rel(a[k], b[k], scale));
      }
    }
    // ddn_i2m(phi psi) = avg(phi) ddn(psi) + avg(psi) ddn(phi)
    {
      IntField prod(n + 1, 0.0);
      for (int k = 0; k <= n; ++k) prod[k] = phi[k] * psi[k];
      const MidField lhs = vops::ddn_i2m(g, prod);
      const MidField a1 = vops::avg_i2m(g, phi), d1 = vops::ddn_i2m(g, psi);
      const MidField a2 = vops::avg_i2m(g, psi), d2 = vops::ddn_i2m(g, phi);
      for (int k = 0; k < n; ++k) {
        const double t1 = a1[k] * d1[k], t2 = a2[k] * d2[k];
        prod_int.add(rel(lhs[k], t1 + t2, std::abs(t1) + std::abs(t2)));
      }
    }
    // interior interfaces: ddn_m2i(p q) = avg(q/ds) ds_int ddn(p) + avg(p/ds) ds_int ddn(q)
    {
      MidField pq(n, 0.0), p_ds(n, 0.0), q_ds(n, 0.0);
      for (int k = 0; k < n; ++k) {
        pq[k] = p[k] * q[k];
        p_ds[k] = p[k] / ds[k];
        q_ds[k] = q[k] / ds[k];
      }
      const IntField lhs = vops::ddn_m2i(g, pq, MidBoundary{0, 0});
      const IntField dp = vops::ddn_m2i(g, p, MidBoundary{0, 0});
      const IntField dq = vops::ddn_m2i(g, q, MidBoundary{0, 0});
      const IntField aq = vops::avg_m2i(g, q_ds), ap = vops::avg_m2i(g, p_ds);
      for (int k = 1; k < n; ++k) {
        const double t1 = aq[k] * dsi[k] * dp[k], t2 = ap[k] * dsi[k] * dq[k];
        prod_mid.add(rel(lhs[k], t1 + t2, std::abs(t1) + std::abs(t2)));
      }
    }
    // SB81 at midpoints: kernel, flux form and averaged form agree
    {
      const MidField ker = vops::sb81_adv_mid(g, Sdot, p, dpids);
      const MidField flux = vops::sb81_mid_flux_form(g, Sdot, p);
      const MidField ave = vops::sb81_mid_average_form(g, Sdot, p);
      for (int k = 0; k < n; ++k) {
        const double scale = std::abs(flux[k]) + std::abs(ave[k]) +
                             std::abs(Sdot[k] * p[k]) / ds[k] +
                             std::abs(Sdot[k + 1] * p[k]) / ds[k];
        sb_mid.add(rel(ker[k] * dpids[k], flux[k], scale));
        sb_mid.add(rel(ave[k], flux[k], scale));
      }
    }
    // SB81 at interfaces
    {
      const IntField ker = vops::sb81_adv_int(g, Sdot, psi, dpids);
      const IntField flux = vops::sb81_int_flux_form(g, Sdot, psi);
      const IntField ave = vops::sb81_int_average_form(g, Sdot, psi);
      const IntField dbar = vops::avg_m2i(g, dpids);
      const MidField Sbar = vops::avg_i2m(g, Sdot), wbar = vops::avg_i2m(g, psi);
      for (int k = 0; k <= n; ++k) {
        double scale = std::abs(flux[k]) + std::abs(ave[k]);
        for (int m = std::max(k - 1, 0); m <= std::min(k, n - 1); ++m)
          scale += std::abs(Sbar[m]) * (std::abs(wbar[m]) + std::abs(psi[k])) / ds[m];
        sb_int.add(rel(ker[k] * dbar[k], flux[k], scale));
        sb_int.add(rel(ave[k], flux[k], scale));
      }
    }
  }
  std::vector<IdentityCheck> out;
  for (auto* tr : {&avg_parts, &int_parts, &commute, &prod_int, &prod_mid, &sb_mid, &sb_int}) {
    tr->check.trials = trials;
    out.push_back(tr->check);
  }
  return out;
}

IdentityCheck horizontal_ibp_check(int trials, std::uint64_t seed, int nemin, int nemax) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_ne(nemin, nemax);
  std::uniform_real_distribution<double> pick_len(1e3, 1e7);
  IdentityCheck check{"horizontal summation by parts", trials, 0.0};
  for (int t = 0; t < trials; ++t) {
    const SEGrid1D grid(pick_ne(rng), pick_len(rng));
    const auto p = random_values(rng, grid.ncol());
    const auto u = random_values(rng, grid.ncol());
    const auto du = hops::grad_x(grid, u);
    const auto dp = hops::grad_x(grid, p);
    std::vector<double> a(grid.ncol()), b(grid.ncol()), abs_a(grid.ncol()), abs_b(grid.ncol());
    for (int j = 0; j < grid.ncol(); ++j) {
      a[j] = p[j] * du[j];
      b[j] = u[j] * dp[j];
      abs_a[j] = std::abs(a[j]);
      abs_b[j] = std::abs(b[j]);
    }
    const double sum = hops::hint(grid, a) + hops::hint(grid, b);
    const double scale = hops::hint(grid, abs_a) + hops::hint(grid, abs_b);
    check.max_rel_error = std::max(check.max_rel_error, std::abs(sum) / scale);
  }
  return check;
}

}  // namespace nhs
