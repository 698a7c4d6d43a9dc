#include "nhslice/vops.hpp"

#include <sstream>

namespace nhs::vops {

namespace {

void expect_mid(const LevelGrid& g, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(g.n())) {
    std::ostringstream msg;
    msg << what << ": midpoint field has " << size << " values, grid has " << g.n() << " levels";
    throw GridError(msg.str());
  }
}

void expect_int(const LevelGrid& g, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(g.n() + 1)) {
    std::ostringstream msg;
    msg << what << ": interface field has " << size << " values, grid has " << g.n() + 1
        << " interfaces";
    throw GridError(msg.str());
  }
}

void expect_closed(std::span<const double> Sdot, const char* what) {
  if (Sdot.front() != 0.0 || Sdot.back() != 0.0)
    throw ContractError(std::string(what) + ": Sdot must vanish at the top and surface interfaces");
}

}  // namespace

MidField mid_field(const LevelGrid& grid, double fill) { return MidField(grid.n(), fill); }
IntField int_field(const LevelGrid& grid, double fill) { return IntField(grid.n() + 1, fill); }

void avg_i2m(const LevelGrid& g, std::span<const double> phi, std::span<double> out) {
  expect_int(g, phi.size(), "avg_i2m");
  expect_mid(g, out.size(), "avg_i2m");
  for (int k = 0; k < g.n(); ++k) out[k] = 0.5 * (phi[k] + phi[k + 1]);
}

void avg_m2i(const LevelGrid& g, std::span<const double> p, std::span<double> out) {
  expect_mid(g, p.size(), "avg_m2i");
  expect_int(g, out.size(), "avg_m2i");
  const int n = g.n();
  const auto ds = g.ds_mid();
  const auto dsi = g.ds_int();
  out[0] = p[0];
  for (int k = 1; k < n; ++k) out[k] = (p[k] * ds[k] + p[k - 1] * ds[k - 1]) / (2.0 * dsi[k]);
  out[n] = p[n - 1];
}

void ddn_i2m(const LevelGrid& g, std::span<const double> phi, std::span<double> out) {
  expect_int(g, phi.size(), "ddn_i2m");
  expect_mid(g, out.size(), "ddn_i2m");
  const auto ds = g.ds_mid();
  for (int k = 0; k < g.n(); ++k) out[k] = (phi[k + 1] - phi[k]) / ds[k];
}

void ddn_m2i(const LevelGrid& g, std::span<const double> p, MidBoundary bc, std::span<double> out) {
  expect_mid(g, p.size(), "ddn_m2i");
  expect_int(g, out.size(), "ddn_m2i");
  const int n = g.n();
  const auto ds = g.ds_mid();
  const auto dsi = g.ds_int();
  out[0] = (p[0] - bc.top) / (0.5 * ds[0]);
  for (int k = 1; k < n; ++k) out[k] = (p[k] - p[k - 1]) / dsi[k];
  out[n] = (bc.surf - p[n - 1]) / (0.5 * ds[n - 1]);
}

double vint_mid(const LevelGrid& g, std::span<const double> p) {
  expect_mid(g, p.size(), "vint_mid");
  const auto ds = g.ds_mid();
  double sum = 0.0;
  for (int k = 0; k < g.n(); ++k) sum += p[k] * ds[k];
  return sum;
}

double vint_int(const LevelGrid& g, std::span<const double> phi) {
  expect_int(g, phi.size(), "vint_int");
  const int n = g.n();
  const auto dsi = g.ds_int();
  double sum = 0.5 * phi[0] * dsi[0];
  for (int k = 1; k < n; ++k) sum += phi[k] * dsi[k];
  sum += 0.5 * phi[n] * dsi[n];
  return sum;
}

void sb81_adv_mid(const LevelGrid& g, std::span<const double> Sdot, std::span<const double> p,
                  std::span<const double> dpids, std::span<double> out) {
  expect_int(g, Sdot.size(), "sb81_adv_mid");
  expect_mid(g, p.size(), "sb81_adv_mid");
  expect_mid(g, dpids.size(), "sb81_adv_mid");
  expect_mid(g, out.size(), "sb81_adv_mid");
  expect_closed(Sdot, "sb81_adv_mid");
  const int n = g.n();
  const auto ds = g.ds_mid();
  for (int k = 0; k < n; ++k) {
    // Sdot * (dp/ds) * ds_int collapses to Sdot * (p difference) at interior interfaces.
    const double upper = k > 0 ? Sdot[k] * (p[k] - p[k - 1]) : 0.0;
    const double lower = k < n - 1 ? Sdot[k + 1] * (p[k + 1] - p[k]) : 0.0;
    out[k] = 0.5 * (upper + lower) / (ds[k] * dpids[k]);
  }
}

void sb81_adv_int(const LevelGrid& g, std::span<const double> Sdot, std::span<const double> w,
                  std::span<const double> dpids, std::span<double> out) {
  expect_int(g, Sdot.size(), "sb81_adv_int");
  expect_int(g, w.size(), "sb81_adv_int");
  expect_mid(g, dpids.size(), "sb81_adv_int");
  expect_int(g, out.size(), "sb81_adv_int");
  expect_closed(Sdot, "sb81_adv_int");
  const int n = g.n();
  const auto ds = g.ds_mid();
  const auto dsi = g.ds_int();
  // Sbar_m = avg_i2m(Sdot)_m; flux_m = Sbar_m (w_{m+1} - w_m)
  auto flux = [&](int m) { return 0.5 * (Sdot[m] + Sdot[m + 1]) * (w[m + 1] - w[m]); };
  out[0] = flux(0) / (ds[0] * dpids[0]);
  for (int k = 1; k < n; ++k) {
    const double dpids_i = (dpids[k] * ds[k] + dpids[k - 1] * ds[k - 1]) / (2.0 * dsi[k]);
    out[k] = (flux(k) + flux(k - 1)) / (2.0 * dsi[k] * dpids_i);
  }
  out[n] = flux(n - 1) / (ds[n - 1] * dpids[n - 1]);
}

MidField avg_i2m(const LevelGrid& g, const IntField& phi) {
  MidField out = mid_field(g);
  avg_i2m(g, phi, out);
  return out;
}

IntField avg_m2i(const LevelGrid& g, const MidField& p) {
  IntField out = int_field(g);
  avg_m2i(g, p, out);
  return out;
}

MidField ddn_i2m(const LevelGrid& g, const IntField& phi) {
  MidField out = mid_field(g);
  ddn_i2m(g, phi, out);
  return out;
}

IntField ddn_m2i(const LevelGrid& g, const MidField& p, MidBoundary bc) {
  IntField out = int_field(g);
  ddn_m2i(g, p, bc, out);
  return out;
}

double vint_mid(const LevelGrid& g, const MidField& p) {
  return vint_mid(g, std::span<const double>(p.values));
}

double vint_int(const LevelGrid& g, const IntField& phi) {
  return vint_int(g, std::span<const double>(phi.values));
}

MidField sb81_adv_mid(const LevelGrid& g, const IntField& Sdot, const MidField& p,
                      const MidField& dpids) {
  MidField out = mid_field(g);
  sb81_adv_mid(g, Sdot, p, dpids, out);
  return out;
}

IntField sb81_adv_int(const LevelGrid& g, const IntField& Sdot, const IntField& w,
                      const MidField& dpids) {
  IntField out = int_field(g);
  sb81_adv_int(g, Sdot, w, dpids, out);
  return out;
}

MidField sb81_mid_average_form(const LevelGrid& g, const IntField& Sdot, const MidField& p) {
  expect_closed(Sdot.values, "sb81_mid_average_form");
  const int n = g.n();
  // Boundary values of dp/ds are multiplied by Sdot = 0; any closure works.
  IntField dpds = ddn_m2i(g, p, MidBoundary{p[0], p[n - 1]});
  IntField flux = int_field(g);
  for (int k = 0; k <= n; ++k) flux[k] = Sdot[k] * dpds[k] * g.ds_int()[k];
  MidField out = avg_i2m(g, flux);
  for (int k = 0; k < n; ++k) out[k] /= g.ds_mid()[k];
  return out;
}

MidField sb81_mid_flux_form(const LevelGrid& g, const IntField& Sdot, const MidField& p) {
  expect_closed(Sdot.values, "sb81_mid_flux_form");
  const int n = g.n();
  MidField p_over_ds = mid_field(g);
  for (int k = 0; k < n; ++k) p_over_ds[k] = p[k] / g.ds_mid()[k];
  IntField pbar = avg_m2i(g, p_over_ds);
  IntField flux = int_field(g);
  for (int k = 0; k <= n; ++k) flux[k] = Sdot[k] * pbar[k] * g.ds_int()[k];
  MidField out = ddn_i2m(g, flux);
  MidField dS = ddn_i2m(g, Sdot);
  for (int k = 0; k < n; ++k) out[k] -= p[k] * dS[k];
  return out;
}

IntField sb81_int_average_form(const LevelGrid& g, const IntField& Sdot, const IntField& w) {
  expect_closed(Sdot.values, "sb81_int_average_form");
  MidField Sbar = avg_i2m(g, Sdot);
  MidField dw = ddn_i2m(g, w);
  for (int k = 0; k < g.n(); ++k) dw[k] *= Sbar[k];
  return avg_m2i(g, dw);
}

IntField sb81_int_flux_form(const LevelGrid& g, const IntField& Sdot, const IntField& w) {
  expect_closed(Sdot.values, "sb81_int_flux_form");
  MidField Sbar = avg_i2m(g, Sdot);
  MidField wbar = avg_i2m(g, w);
  MidField prod = mid_field(g);
  for (int k = 0; k < g.n(); ++k) prod[k] = Sbar[k] * wbar[k];
  IntField out = ddn_m2i(g, prod, MidBoundary{0.0, 0.0});
  IntField dS = ddn_m2i(g, Sbar, MidBoundary{0.0, 0.0});
  for (int k = 0; k <= g.n(); ++k) out[k] -= w[k] * dS[k];
  return out;
}

}  // namespace nhs::vops
