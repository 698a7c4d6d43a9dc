#include "nhslice/model.hpp"

#include <cmath>
#include <sstream>

namespace nhs {

using vops::MidBoundary;

std::string to_string(VerticalMode mode) {
  return mode == VerticalMode::eulerian ? "eulerian" : "lagrangian";
}

VerticalMode vertical_mode_from_string(const std::string& s) {
  if (s == "eulerian") return VerticalMode::eulerian;
  if (s == "lagrangian") return VerticalMode::lagrangian;
  throw ConfigError("unknown vertical mode '" + s + "' (expected eulerian or lagrangian)");
}

void ModelConfig::validate() const {
  constants.validate();
  if (nu < 0) throw ConfigError("hyperviscosity nu must be nonnegative");
  if (mode == VerticalMode::lagrangian && remap_interval < 1)
    throw ConfigError("remap_interval must be >= 1 in Lagrangian mode");
}

double eos_pressure(const PhysicalConstants& c, double Theta, double dphids) {
  return c.p0 * std::pow(c.R * Theta / (-c.p0 * dphids), c.cp / c.cv());
}

Model::Model(LevelGrid vgrid, HybridCoefficients hybrid, SEGrid1D hgrid, ModelConfig config)
    : vgrid_(std::move(vgrid)),
      hybrid_(std::move(hybrid)),
      hgrid_(std::move(hgrid)),
      config_(config) {
  config_.validate();
  if (hybrid_.n() != vgrid_.n()) throw GridError("Model: hybrid coefficients do not match the level grid");
}

void Model::validate_state(const PrognosticState& s) const {
  if (s.ncol() != ncol() || s.n() != n()) throw StateError("state shape does not match the model grid");
  for (int c = 0; c < ncol(); ++c) {
    for (int k = 0; k < n(); ++k) {
      if (!(s.dpids(c, k) > 0) || !(s.Theta(c, k) > 0) || !(s.phi(c, k) > s.phi(c, k + 1))) {
        std::ostringstream msg;
        msg << "nonphysical state at column " << c << ", level " << k << ": dpids=" << s.dpids(c, k)
            << " Theta=" << s.Theta(c, k) << " phi=" << s.phi(c, k) << ".." << s.phi(c, k + 1);
        throw StateError(msg.str());
      }
    }
  }
}

void Model::diagnose_eos(const PrognosticState& s, DiagnosticState& d) const {
  const auto& c = constants();
  const auto ds = vgrid_.ds_mid();
  const double kappa = c.kappa();
  d.p_top = p_top();
  for (int col = 0; col < ncol(); ++col) {
    d.pi_int(col, 0) = d.p_top;
    for (int k = 0; k < n(); ++k) {
      const double dphids = (s.phi(col, k + 1) - s.phi(col, k)) / ds[k];
      const double Theta = s.Theta(col, k);
      const double dpids = s.dpids(col, k);
      if (!(dphids < 0) || !(Theta > 0) || !(dpids > 0)) {
        std::ostringstream msg;
        msg << "diagnose_eos: nonphysical state at column " << col << ", level " << k
            << " (dphi/ds=" << dphids << ", Theta=" << Theta << ", dpi/ds=" << dpids << ")";
        throw StateError(msg.str());
      }
      const double p = eos_pressure(c, Theta, dphids);
      d.dphids(col, k) = dphids;
      d.p(col, k) = p;
      d.Pi(col, k) = std::pow(p / c.p0, kappa);
      d.theta_v(col, k) = Theta / dpids;
      d.rho(col, k) = -dpids / dphids;
      d.pi_int(col, k + 1) = d.pi_int(col, k) + dpids * ds[k];
    }
  }
}

void Model::diagnose_horizontal(const PrognosticState& s, DiagnosticState& d) const {
  auto grad = [this](std::span<const double> a, std::span<double> b) { hops::grad_x(hgrid_, a, b); };
  for_each_level(d.Pi, d.dPi_dx, grad);
  for_each_level(s.phi, d.dphi_dx, grad);
  for_each_level(s.w, d.dw_dx, grad);
  for_each_level(s.v, d.dv_dx, grad);

  ColumnField flux(ncol(), n());
  for (int col = 0; col < ncol(); ++col)
    for (int k = 0; k < n(); ++k) flux(col, k) = s.Theta(col, k) * s.u(col, k);
  for_each_level(flux, d.div_Theta_u, grad);
  for (int col = 0; col < ncol(); ++col)
    for (int k = 0; k < n(); ++k) flux(col, k) = s.dpids(col, k) * s.u(col, k);
  for_each_level(flux, d.div_mass, grad);
}

void Model::diagnose_sdot(const PrognosticState& s, DiagnosticState& d) const {
  d.Sdot.fill(0.0);
  d.sdot.fill(0.0);
  if (config_.mode == VerticalMode::lagrangian) return;
  const auto ds = vgrid_.ds_mid();
  const auto& B = hybrid_.B_int;
  std::vector<double> dpids_int(n() + 1);
  for (int col = 0; col < ncol(); ++col) {
    double total = 0.0;
    for (int k = 0; k < n(); ++k) total += d.div_mass(col, k) * ds[k];
    double partial = 0.0;
    for (int k = 1; k < n(); ++k) {
      partial += d.div_mass(col, k - 1) * ds[k - 1];
      d.Sdot(col, k) = B[k] * total - partial;
    }
    vops::avg_m2i(vgrid_, s.dpids.column(col), dpids_int);
    for (int k = 1; k < n(); ++k) d.sdot(col, k) = d.Sdot(col, k) / dpids_int[k];
  }
}

void Model::diagnose_u_tilde(const PrognosticState& s, DiagnosticState& d) const {
  std::vector<double> mass_u(n()), num(n() + 1), den(n() + 1);
  for (int col = 0; col < ncol(); ++col) {
    for (int k = 0; k < n(); ++k) mass_u[k] = s.dpids(col, k) * s.u(col, k);
    vops::avg_m2i(vgrid_, mass_u, num);
    vops::avg_m2i(vgrid_, s.dpids.column(col), den);
    for (int k = 0; k <= n(); ++k) d.u_tilde(col, k) = num[k] / den[k];
  }
}

void Model::diagnose_pressure_bcs(const PrognosticState& s, DiagnosticState& d) const {
  const int nn = n();
  const double surf_phi = s.phi(0, nn);
  for (int col = 1; col < ncol(); ++col) {
    if (s.phi(col, nn) != surf_phi)
      throw UnsupportedFeature(
          "diagnose_pressure_bcs: surface geopotential varies horizontally; only flat bottoms are "
          "supported");
  }
  const double g = constants().g;
  const auto ds = vgrid_.ds_mid();
  std::vector<double> adv(nn + 1), dpids_int(nn + 1);
  d.p_top = p_top();
  for (int col = 0; col < ncol(); ++col) {
    auto dpids = s.dpids.column(col);
    double vert_adv_surf = 0.0;
    if (config_.mode == VerticalMode::eulerian) {
      vops::sb81_adv_int(vgrid_, d.Sdot.column(col), s.w.column(col), dpids, adv);
      vert_adv_surf = adv[nn];
    }
    const double mu_surf = 1.0 + (d.u_tilde(col, nn) * d.dw_dx(col, nn) + vert_adv_surf) / g;
    d.p_surf[col] = d.p(col, nn - 1) + 0.5 * ds[nn - 1] * mu_surf * dpids[nn - 1];
    vops::ddn_m2i(vgrid_, d.p.column(col), MidBoundary{d.p_top, d.p_surf[col]}, d.dpds.column(col));
    vops::avg_m2i(vgrid_, dpids, dpids_int);
    for (int k = 0; k <= nn; ++k) d.mu(col, k) = d.dpds(col, k) / dpids_int[k];
  }
}

void Model::diagnose_theta_tilde(const PrognosticState& s, DiagnosticState& d) const {
  (void)s;
  const int nn = n();
  const double cp = constants().cp;
  std::vector<double> dPi(nn + 1), dphi_bar(nn + 1);
  for (int col = 0; col < ncol(); ++col) {
    auto Pi = d.Pi.column(col);
    vops::ddn_m2i(vgrid_, Pi, MidBoundary{Pi[0], Pi[nn - 1]}, dPi);
    vops::avg_m2i(vgrid_, d.dphids.column(col), dphi_bar);
    d.theta_v_tilde(col, 0) = d.theta_v(col, 0);
    d.theta_v_tilde(col, nn) = d.theta_v(col, nn - 1);
    for (int k = 1; k < nn; ++k) {
      if (dPi[k] == 0.0) {
        std::ostringstream msg;
        msg << "diagnose_theta_tilde: dPi/ds vanishes at column " << col << ", interface " << k;
        throw StateError(msg.str());
      }
      d.theta_v_tilde(col, k) = -(d.mu(col, k) / cp) * dphi_bar[k] / dPi[k];
    }
  }
}

void Model::diagnose(const PrognosticState& s, DiagnosticState& d) const {
  diagnose_eos(s, d);
  diagnose_horizontal(s, d);
  diagnose_sdot(s, d);
  diagnose_u_tilde(s, d);
  diagnose_pressure_bcs(s, d);
  if (config_.mode == VerticalMode::eulerian) diagnose_theta_tilde(s, d);
}

DiagnosticState Model::diagnose(const PrognosticState& s) const {
  DiagnosticState d = make_diagnostics();
  diagnose(s, d);
  return d;
}

void Model::explicit_part(const PrognosticState& s, const DiagnosticState& d, Tendency& t) const {
  const int nn = n();
  const auto& c = constants();
  const bool eulerian = config_.mode == VerticalMode::eulerian;
  auto grad = [this](std::span<const double> a, std::span<double> b) { hops::grad_x(hgrid_, a, b); };

  // Horizontal gradient of the full kinetic energy at midpoints.
  ColumnField ke(ncol(), nn), dke_dx(ncol(), nn);
  std::vector<double> w2(nn + 1), w2bar(nn);
  for (int col = 0; col < ncol(); ++col) {
    for (int k = 0; k <= nn; ++k) w2[k] = s.w(col, k) * s.w(col, k);
    vops::avg_i2m(vgrid_, w2, w2bar);
    for (int k = 0; k < nn; ++k)
      ke(col, k) = 0.5 * (s.u(col, k) * s.u(col, k) + s.v(col, k) * s.v(col, k)) + 0.5 * w2bar[k];
  }
  for_each_level(ke, dke_dx, grad);

  ColumnField hv_u, hv_v, hv_w, hv_Theta;
  const bool hv = config_.nu > 0;
  if (hv) {
    auto hyper = [this](std::span<const double> a, std::span<double> b) {
      hops::hyperviscosity(hgrid_, a, config_.nu, b);
    };
    hv_u = ColumnField(ncol(), nn);
    hv_v = ColumnField(ncol(), nn);
    hv_w = ColumnField(ncol(), nn + 1);
    hv_Theta = ColumnField(ncol(), nn);
    for_each_level(s.u, hv_u, hyper);
    for_each_level(s.v, hv_v, hyper);
    for_each_level(s.w, hv_w, hyper);
    for_each_level(s.Theta, hv_Theta, hyper);
  }

  std::vector<double> wgw(nn + 1), wgw_bar(nn), mgp(nn + 1), mgp_bar(nn);
  std::vector<double> adv_u(nn), adv_v(nn), adv_w(nn + 1);
  std::vector<double> phibar(nn), dphibar(nn + 1), flux(nn + 1), dflux(nn), dS(nn);
  for (int col = 0; col < ncol(); ++col) {
    auto Sdot = d.Sdot.column(col);
    auto dpids = s.dpids.column(col);
    for (int k = 0; k <= nn; ++k) {
      wgw[k] = s.w(col, k) * d.dw_dx(col, k);
      mgp[k] = d.mu(col, k) * d.dphi_dx(col, k);
    }
    vops::avg_i2m(vgrid_, wgw, wgw_bar);
    vops::avg_i2m(vgrid_, mgp, mgp_bar);
    if (eulerian) {
      vops::sb81_adv_mid(vgrid_, Sdot, s.u.column(col), dpids, adv_u);
      vops::sb81_adv_mid(vgrid_, Sdot, s.v.column(col), dpids, adv_v);
      vops::sb81_adv_int(vgrid_, Sdot, s.w.column(col), dpids, adv_w);
    } else {
      std::fill(adv_u.begin(), adv_u.end(), 0.0);
      std::fill(adv_v.begin(), adv_v.end(), 0.0);
      std::fill(adv_w.begin(), adv_w.end(), 0.0);
    }

    for (int k = 0; k < nn; ++k) {
      const double abs_vort = d.dv_dx(col, k) + c.f;
      t.u(col, k) = abs_vort * s.v(col, k) - dke_dx(col, k) + wgw_bar[k] - adv_u[k] -
                    c.cp * d.theta_v(col, k) * d.dPi_dx(col, k) - mgp_bar[k];
      t.v(col, k) = -abs_vort * s.u(col, k) - adv_v[k];
    }

    // w and phi: the surface interface is held fixed (w = 0, flat bottom).
    if (eulerian) {
      auto phi = s.phi.column(col);
      vops::avg_i2m(vgrid_, phi, phibar);
      vops::ddn_m2i(vgrid_, phibar, MidBoundary{phi[0], phi[nn]}, dphibar);
    }
    for (int k = 0; k < nn; ++k) {
      t.w(col, k) = -d.u_tilde(col, k) * d.dw_dx(col, k) - adv_w[k];
      t.phi(col, k) = -d.u_tilde(col, k) * d.dphi_dx(col, k);
      if (eulerian) t.phi(col, k) -= d.sdot(col, k) * dphibar[k];
    }
    t.w(col, nn) = 0.0;
    t.phi(col, nn) = 0.0;

    for (int k = 0; k < nn; ++k) {
      t.Theta(col, k) = -d.div_Theta_u(col, k);
      t.dpids(col, k) = -d.div_mass(col, k);
    }
    if (eulerian) {
      for (int k = 0; k <= nn; ++k) flux[k] = d.theta_v_tilde(col, k) * Sdot[k];
      vops::ddn_i2m(vgrid_, flux, dflux);
      vops::ddn_i2m(vgrid_, Sdot, dS);
      for (int k = 0; k < nn; ++k) {
        t.Theta(col, k) -= dflux[k];
        t.dpids(col, k) -= dS[k];
      }
    }

    if (hv) {
      for (int k = 0; k < nn; ++k) {
        t.u(col, k) += hv_u(col, k);
        t.v(col, k) += hv_v(col, k);
        t.Theta(col, k) += hv_Theta(col, k);
        t.w(col, k) += hv_w(col, k);
      }
    }
  }
}

void Model::implicit_part(const PrognosticState& s, const DiagnosticState& d, Tendency& t) const {
  const double g = constants().g;
  for (int col = 0; col < ncol(); ++col) {
    for (int k = 0; k < n(); ++k) {
      t.w(col, k) += -g * (1.0 - d.mu(col, k));
      t.phi(col, k) += g * s.w(col, k);
    }
  }
}

Tendency Model::tendency(const PrognosticState& s, const DiagnosticState& d) const {
  Tendency t = make_state();
  explicit_part(s, d, t);
  implicit_part(s, d, t);
  return t;
}

Tendency Model::tendency(const PrognosticState& s) const { return tendency(s, diagnose(s)); }

std::pair<Tendency, Tendency> Model::hevi_split(const PrognosticState& s) const {
  const DiagnosticState d = diagnose(s);
  Tendency ex = make_state();
  Tendency im = make_state();
  explicit_part(s, d, ex);
  if (config_.implicit_acoustics)
    implicit_part(s, d, im);
  else
    implicit_part(s, d, ex);
  return {std::move(ex), std::move(im)};
}

Tendency Model::explicit_tendency(const PrognosticState& s) const {
  const DiagnosticState d = diagnose(s);
  Tendency ex = make_state();
  explicit_part(s, d, ex);
  if (!config_.implicit_acoustics) implicit_part(s, d, ex);
  return ex;
}

Tendency Model::implicit_tendency(const PrognosticState& s) const {
  Tendency im = make_state();
  if (!config_.implicit_acoustics) return im;
  const double g = constants().g;
  std::vector<double> mu(n() + 1);
  for (int col = 0; col < ncol(); ++col) {
    column_mu(s.Theta.column(col), s.dpids.column(col), s.phi.column(col), mu);
    for (int k = 0; k < n(); ++k) {
      im.w(col, k) = -g * (1.0 - mu[k]);
      im.phi(col, k) = g * s.w(col, k);
    }
  }
  return im;
}

void Model::column_mu(std::span<const double> Theta, std::span<const double> dpids,
                      std::span<const double> phi, std::span<double> mu) const {
  const int nn = n();
  const auto ds = vgrid_.ds_mid();
  const auto dsi = vgrid_.ds_int();
  const auto& c = constants();
  double p_prev = 0.0;
  for (int k = 0; k < nn; ++k) {
    const double dphids = (phi[k + 1] - phi[k]) / ds[k];
    if (!(dphids < 0)) {
      std::ostringstream msg;
      msg << "column_mu: geopotential not decreasing at level " << k;
      throw StateError(msg.str());
    }
    const double p = eos_pressure(c, Theta[k], dphids);
    if (k == 0) {
      mu[0] = (p - p_top()) / (0.5 * ds[0]) / dpids[0];
    } else {
      const double dpids_i = (dpids[k] * ds[k] + dpids[k - 1] * ds[k - 1]) / (2.0 * dsi[k]);
      mu[k] = (p - p_prev) / dsi[k] / dpids_i;
    }
    p_prev = p;
  }
}

double Model::total_mass(const PrognosticState& s) const {
  std::vector<double> col_mass(ncol());
  for (int c = 0; c < ncol(); ++c) col_mass[c] = vops::vint_mid(vgrid_, s.dpids.column(c));
  return hops::hint(hgrid_, col_mass);
}

double Model::total_theta(const PrognosticState& s) const {
  std::vector<double> col(ncol());
  for (int c = 0; c < ncol(); ++c) col[c] = vops::vint_mid(vgrid_, s.Theta.column(c));
  return hops::hint(hgrid_, col);
}

}  // namespace nhs
